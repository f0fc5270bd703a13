#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <string>
#include <vector>

#include "ratmix/io.hpp"

using namespace ratmix;

TEST_CASE("index sets survive the json round trip") {
    const auto K = sets::IndexSet::from_intervals({{2, 5}, {9, 9}});
    const auto back = io::indexset_from_json(io::indexset_to_json(K, 100));
    for (i64 k = 0; k <= 100; ++k) CHECK(back.contains(k) == K.contains(k));

    const auto gen = sets::IndexSet::multiples(3);
    const auto gback = io::indexset_from_json(io::indexset_to_json(gen, 50));
    CHECK(gback.generator_backed());
    CHECK(gback.generator_param() == 3);
    CHECK(gback.contains(300000));

    const auto blocks = io::indexset_from_json(io::indexset_to_json(sets::IndexSet::blocks(), 50));
    CHECK(blocks.generator_name() == "blocks");
    CHECK(blocks.contains(100000));
}

TEST_CASE("lifetimes survive the json round trip") {
    const auto f = renewal::LifetimeDist::from_probs({{2, Rat(1, 3)}, {7, Rat(2, 3)}});
    const auto back = io::lifetime_from_json(io::lifetime_to_json(f));
    CHECK(back.prob_exact(2) == Rat(1, 3));
    CHECK(back.prob_exact(7) == Rat(2, 3));
    CHECK(back.support_max() == 7);

    const auto g = io::lifetime_from_json(io::lifetime_to_json(renewal::LifetimeDist::geometric(Rat(1, 4))));
    CHECK(g.kind() == renewal::LifetimeKind::geometric);
    CHECK(g.prob_exact(1) == Rat(1, 4));

    const auto p = io::lifetime_from_json(io::lifetime_to_json(renewal::LifetimeDist::pareto(0.75)));
    CHECK(p.kind() == renewal::LifetimeKind::pareto);
    CHECK(p.gamma() == 0.75);

    const auto s = io::lifetime_from_json(io::lifetime_to_json(renewal::LifetimeDist::st_petersburg()));
    CHECK(s.prob_exact(4) == Rat(1, 8));
}

TEST_CASE("chains survive the json round trip") {
    const auto c = markov::Chain::renewal_shift(renewal::LifetimeDist::geometric(Rat(1, 2)));
    const auto back = io::chain_from_json(io::chain_to_json(c));
    CHECK(back.kind() == markov::ChainKind::renewal_shift);
    CHECK(back.p_exact(1, 3) == c.p_exact(1, 3));

    const auto h = io::chain_from_json(io::chain_to_json(markov::Chain::reflecting()));
    CHECK(h.kind() == markov::ChainKind::reflecting);
}

TEST_CASE("shorthand specs parse families chains and cylinders") {
    CHECK(io::lifetime_from_spec("geom(0.5)").prob_exact(1) == Rat(1, 2));
    CHECK(io::lifetime_from_spec("stpete").prob_exact(2) == Rat(1, 4));
    CHECK(io::lifetime_from_spec("dirac(3)").dirac_point() == 3);
    CHECK(io::lifetime_from_spec("pareto(0.75)").gamma() == 0.75);
    CHECK_THROWS_AS(io::lifetime_from_spec("cauchy(1)"), ConfigError);
    CHECK_THROWS_AS(io::lifetime_from_spec("geom(0.5"), ConfigError);
    CHECK_THROWS_AS(io::lifetime_from_spec("geom(x)"), ConfigError);

    CHECK(io::chain_from_spec("hopf").kind() == markov::ChainKind::reflecting);
    const auto c = io::chain_from_spec("renewal-shift:stpete");
    CHECK(c.p_exact(1, 4) == Rat(1, 8));
    CHECK_THROWS_AS(io::chain_from_spec("lorenz"), ConfigError);

    const auto cyl = io::cylinder_from_spec("[1,2,1]@3");
    CHECK(cyl.base == 3);
    CHECK(cyl.symbols == std::vector<i64>{1, 2, 1});
    const auto plain = io::cylinder_from_spec("[2]");
    CHECK(plain.base == 0);
    CHECK(plain.symbols == std::vector<i64>{2});
    CHECK_THROWS_AS(io::cylinder_from_spec("1,2"), ConfigError);
    CHECK_THROWS_AS(io::cylinder_from_spec("[]@2"), ConfigError);
}

TEST_CASE("grid specs produce clipped grids") {
    const auto d = io::grid_from_spec("dyadic", 100);
    CHECK(d.front() >= 1);
    CHECK(d.back() == 100);
    const auto l = io::grid_from_spec("linear:25", 100);
    CHECK(l == Grid{25, 50, 75, 100});
    CHECK_THROWS_AS(io::grid_from_spec("log", 100), ConfigError);
    CHECK_THROWS_AS(io::grid_from_spec("linear:0", 100), ConfigError);
    CHECK_THROWS_AS(io::grid_from_spec("linear:x", 100), ConfigError);
}

TEST_CASE("weight csv keeps every bit of every double") {
    const std::vector<double> u = {1.0, 0.1, 0.3333333333333333, 6.02e23, 5e-324};
    const auto back = io::weights_from_csv(io::weights_csv(u));
    REQUIRE(back.size() == u.size());
    for (size_t n = 0; n < u.size(); ++n) CHECK(back[n] == u[n]);
    CHECK_THROWS_AS(io::weights_from_csv("n,u\n1,0.5\n"), ConfigError);
    CHECK_THROWS_AS(io::weights_from_csv("n,u\n0,1\n2,0.5\n"), ConfigError);
}

TEST_CASE("profile and correlation csv render deterministic rows") {
    const Profile p = {{1, 0.5}, {8, 0.25}};
    CHECK(io::profile_csv(p, "sigma") == "n,sigma\n1,0.5\n8,0.25\n");
    const std::vector<double> corr = {0.5, 0.125};
    const std::vector<double> u = {1.0, 0.0};
    const auto csv = io::correlation_csv(corr, u, 0.5);
    CHECK(csv == "n,value,ratio\n0,0.5,1\n1,0.125,0\n");
}

TEST_CASE("reports render deterministically with a trailing hash") {
    io::Report rep;
    rep.tool = "weights";
    rep.horizon = 64;
    rep.params.emplace_back("weight", "constant(1)");
    rep.blocks.emplace_back("u", "n,u\n0,1\n");
    rep.checks.push_back({"admissible", true, 64.0, 0.0});
    const auto a = rep.render();
    const auto b = rep.render();
    CHECK(a == b);
    CHECK(a.find("\"spec_hash\"") != std::string::npos);
    CHECK(a.back() == '\n');
    CHECK(rep.all_pass());

    rep.checks.push_back({"bounded", false, 2.0, 1.0});
    CHECK(!rep.all_pass());
    const auto c = rep.render();
    CHECK(c != a);
}

TEST_CASE("run specs extract the stored argv") {
    const auto spec = io::run_spec_from_json(
        "{\"tool\": \"renewal\", \"args\": [\"--lifetime\", \"geom(0.5)\", \"--N\", 128]}");
    CHECK(spec.tool == "renewal");
    REQUIRE(spec.args.size() == 4);
    CHECK(spec.args[0] == "--lifetime");
    CHECK(spec.args[3] == "128");
    CHECK_THROWS_AS(io::run_spec_from_json("{}"), ConfigError);
    CHECK_THROWS_AS(io::run_spec_from_json("{\"tool\": 3}"), ConfigError);
    CHECK_THROWS_AS(io::run_spec_from_json("not json"), ConfigError);
}

TEST_CASE("file helpers round trip bytes and flag missing paths") {
    const std::string path = "io_test_scratch.txt";
    io::write_file(path, "alpha\nbeta");
    CHECK(io::read_file(path) == "alpha\nbeta");
    std::remove(path.c_str());
    CHECK_THROWS_AS(io::read_file("definitely/not/here.txt"), ConfigError);
}
