#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "ratmix/weights.hpp"

using namespace ratmix;
using weights::WeightSeq;

namespace {

// Reference sum: plain rational accumulation, no compensation tricks.
Rat oracle_sum(const std::vector<double>& u, i64 n) {
    Rat acc = 0;
    for (i64 k = 0; k < n; ++k) acc += rat_from_double(u[static_cast<size_t>(k)]);
    return acc;
}

std::vector<double> random_weights(std::mt19937_64& rng, size_t len) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> u(len);
    for (auto& x : u) x = dist(rng);
    return u;
}

}  // namespace

TEST_CASE("partial sums include the index-zero term") {
    // Alternating 1,0,1,0,...: a_u(2n) counts exactly the even indices below 2n.
    std::vector<double> alt;
    for (int k = 0; k < 10; ++k) alt.push_back(k % 2 == 0 ? 1.0 : 0.0);
    WeightSeq u{alt};
    CHECK(weights::partial_sum(u, 2) == 1.0);
    CHECK(weights::partial_sum(u, 6) == 3.0);
    CHECK(weights::partial_sum(u, 10) == 5.0);

    WeightSeq ones = weights::family("constant", {1.0});
    CHECK(weights::partial_sum(ones, 5) == 5.0);
    CHECK(weights::partial_sum_exact(ones, 5) == 5);
}

TEST_CASE("compensated sum matches the rational oracle") {
    std::mt19937_64 rng(20260817);
    for (int rep = 0; rep < 5; ++rep) {
        const auto vals = random_weights(rng, 4096);
        WeightSeq u{vals};
        const double got = weights::partial_sum(u, 4096);
        const double want = to_double(oracle_sum(vals, 4096));
        CHECK(got == doctest::Approx(want).epsilon(1e-15));
        CHECK(weights::partial_sum_exact(u, 4096) == oracle_sum(vals, 4096));
    }
}

TEST_CASE("smoothness of the alternating weight is exactly two") {
    std::vector<double> alt;
    for (int k = 0; k <= 20; ++k) alt.push_back(k % 2 == 0 ? 1.0 : 0.0);
    WeightSeq u{alt};
    // All 2n consecutive jumps have size one while a_u(2n) = n.
    CHECK(weights::smoothness(u, 4) == 2.0);
    CHECK(weights::smoothness(u, 10) == 2.0);
    CHECK(weights::smoothness(u, 20) == 2.0);
}

TEST_CASE("smoothness of a constant weight vanishes") {
    WeightSeq u = weights::family("constant", {3.0});
    CHECK(weights::smoothness(u, 100) == 0.0);
}

TEST_CASE("kaluza-log weight is smooth at large horizons") {
    WeightSeq u = weights::family("kaluza-log");
    const double sigma = weights::smoothness(u, 100000);
    CHECK(sigma == doctest::Approx(1.065e-4).epsilon(0.01));
    CHECK(sigma < 5e-4);
    // The profile decreases along a dyadic grid.
    const auto prof = weights::smoothness_profile(u, dyadic_grid(16, 1 << 16));
    for (size_t i = 1; i < prof.size(); ++i) CHECK(prof[i].value <= prof[i - 1].value);
}

TEST_CASE("materialized weights refuse out-of-range and negative input") {
    CHECK_THROWS_AS(WeightSeq(std::vector<double>{1.0, -0.5}), DegenerateWeightError);
    WeightSeq u{std::vector<double>{1.0, 0.5}};
    CHECK(u.at(1) == 0.5);
    CHECK_THROWS_AS(u.at(2), HorizonError);
    CHECK_THROWS_AS(u.at(-1), HorizonError);
    CHECK(u.horizon() == 2);

    WeightSeq ruled = weights::family("power", {-0.5});
    CHECK(ruled.horizon() == kUnbounded);
    CHECK(ruled.at(3) == doctest::Approx(0.5));
}

TEST_CASE("family registry rejects unknown names and bad parameters") {
    CHECK_THROWS_AS(weights::family("zeta"), ConfigError);
    CHECK_THROWS_AS(weights::family("constant", {-1.0}), ConfigError);
    CHECK_THROWS_AS(weights::family("multiples", {0.0}), ConfigError);
    WeightSeq m = weights::family("multiples", {3.0});
    CHECK(m.at(0) == 1.0);
    CHECK(m.at(3) == 1.0);
    CHECK(m.at(4) == 0.0);
}

TEST_CASE("subsample picks every p-th term starting at zero") {
    std::vector<double> vals;
    for (int k = 0; k < 30; ++k) vals.push_back(static_cast<double>(k * k + 1));
    WeightSeq u{vals};
    const auto sub = weights::subsample(u, 3, 10);
    for (i64 n = 0; n < 10; ++n) CHECK(sub.at(n) == u.at(3 * n));
}

TEST_CASE("subsampling inequality holds on random weights") {
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 20; ++rep) {
        const auto vals = random_weights(rng, 512);
        WeightSeq u{vals};
        for (i64 p : {2, 3, 5}) {
            const auto chk = weights::subsample_check(u, p, 64);
            CHECK(chk.holds);
            CHECK(chk.lhs <= chk.rhs + 1e-9);
        }
    }
}

TEST_CASE("product weight multiplies terms along dilated indices") {
    std::vector<double> vals;
    for (int k = 0; k < 40; ++k) vals.push_back(1.0 / (1.0 + k));
    WeightSeq u{vals};
    const auto v = weights::product_weight(u, {1, 2}, 12);
    for (i64 n = 0; n < 12; ++n) {
        CHECK(v.at(n) == doctest::Approx(u.at(n) * u.at(2 * n)).epsilon(1e-15));
    }
}

TEST_CASE("asymptotic distance separates constants and vanishes on equality") {
    WeightSeq a = weights::family("constant", {1.0});
    WeightSeq b = weights::family("constant", {0.5});
    CHECK(weights::asym_distance(a, a, 1000) == 0.0);
    CHECK(weights::asym_distance(a, b, 1000) == doctest::Approx(0.5));
}

TEST_CASE("regular variation fit recovers the power exponent") {
    // u_n = n^s scales exactly at every grid point, so the fit is noise free.
    std::vector<double> vals(1 << 16);
    vals[0] = 1.0;
    for (size_t n = 1; n < vals.size(); ++n) vals[n] = std::pow(static_cast<double>(n), -0.5);
    WeightSeq u{vals};
    const auto fit = weights::rv_index_estimate(u, dyadic_grid(4, (1 << 16) - 1));
    CHECK(fit.index == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(fit.residual < 1e-9);
    CHECK(fit.points > 0);

    WeightSeq shifted = weights::family("power", {-0.5});
    const auto sf = weights::rv_index_estimate(shifted, dyadic_grid(1 << 10, 1 << 16));
    CHECK(std::fabs(sf.index + 0.5) < 1e-3);

    WeightSeq c = weights::family("constant", {2.0});
    const auto flat = weights::rv_index_estimate(c, dyadic_grid(4, 1 << 12));
    CHECK(flat.index == doctest::Approx(0.0).epsilon(1e-12));

    WeightSeq h = weights::family("hopf");
    const auto hf = weights::rv_index_estimate(h, dyadic_grid(4, 1 << 16));
    CHECK(hf.index == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("subsampled partial sums track the full sum for smooth weights") {
    WeightSeq u = weights::family("kaluza-log");
    const i64 p = 4, n = 2048;
    const auto sub = weights::subsample(u, p, n + 1);
    const double lhs = std::fabs(static_cast<double>(p) * weights::partial_sum(sub, n) -
                                 weights::partial_sum(u, p * n));
    double jumps = 0.0;
    for (i64 k = 0; k < p * n; ++k) jumps += std::fabs(u.at(k) - u.at(k + 1));
    CHECK(lhs <= static_cast<double>(p) * static_cast<double>(p) * jumps + 1e-9);
}
