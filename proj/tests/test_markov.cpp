#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "ratmix/markov.hpp"
#include "ratmix/renewal.hpp"

using namespace ratmix;
using markov::Chain;
using markov::Cylinder;
using renewal::LifetimeDist;

namespace {

// P(S_n = j) for the simple symmetric walk, exact binomial arithmetic.
Rat walk_prob(i64 n, i64 j) {
    if (j < -n || j > n || ((n + j) % 2 + 2) % 2 != 0) return 0;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>((n + j) / 2));
    Rat q(b, mpz_class(1) << static_cast<unsigned long>(n));
    q.canonicalize();
    return q;
}

// Folding the walk at one half sends x to max(x, 1-x) and realizes the
// reflecting chain, so its n-step entries are two walk point masses.
Rat reflect_entry(i64 n, i64 s, i64 t) {
    return walk_prob(n, t - s) + walk_prob(n, -(t + s - 1));
}

LifetimeDist random_lifetime(std::mt19937_64& rng) {
    std::uniform_int_distribution<i64> point(1, 9);
    std::uniform_int_distribution<i64> num(1, 15);
    std::vector<std::pair<i64, Rat>> raw;
    Rat total = 0;
    for (int j = 0; j < 4; ++j) {
        const i64 n = point(rng);
        bool dup = false;
        for (auto& [k, q] : raw) {
            if (k == n) dup = true;
        }
        if (dup) continue;
        const Rat q(num(rng), 15);
        raw.emplace_back(n, q);
        total += q;
    }
    for (auto& [n, q] : raw) q /= total;
    return LifetimeDist::from_probs(std::move(raw));
}

}  // namespace

TEST_CASE("renewal shift rows and invariant measure follow the lifetime") {
    const auto c = Chain::renewal_shift(LifetimeDist::st_petersburg());
    CHECK(c.p_exact(1, 1) == Rat(1, 2));
    CHECK(c.p_exact(1, 2) == Rat(1, 4));
    CHECK(c.p_exact(1, 3) == 0);
    CHECK(c.p_exact(1, 4) == Rat(1, 8));
    CHECK(c.p_exact(5, 4) == 1);
    CHECK(c.p_exact(5, 3) == 0);
    CHECK(c.p_exact(2, 5) == 0);
    CHECK(c.pi_exact(1) == 1);
    CHECK(c.pi_exact(2) == Rat(1, 2));
    CHECK(c.pi_exact(5) == Rat(1, 8));
    CHECK(c.row_targets(1, 10) == std::vector<i64>{1, 2, 4, 8});
    CHECK(c.row_targets(3, 10) == std::vector<i64>{2});
}

TEST_CASE("reflecting chain is the folded walk with a self loop") {
    const auto c = Chain::reflecting();
    CHECK(c.p_exact(1, 1) == Rat(1, 2));
    CHECK(c.p_exact(1, 2) == Rat(1, 2));
    CHECK(c.p_exact(3, 2) == Rat(1, 2));
    CHECK(c.p_exact(3, 4) == Rat(1, 2));
    CHECK(c.p_exact(3, 3) == 0);
    CHECK(c.pi_exact(7) == 1);
    CHECK(c.row_targets(3, 10) == std::vector<i64>{2, 4});
    CHECK(c.row_targets(1, 10) == std::vector<i64>{1, 2});
    CHECK_THROWS_AS(c.lifetime(), DomainError);
}

TEST_CASE("two and three step reflecting rows match hand enumeration") {
    const auto c = Chain::reflecting();
    const auto r2 = markov::nstep_row_exact(c, 1, 2, 4);
    CHECK(r2[1] == Rat(1, 2));
    CHECK(r2[2] == Rat(1, 4));
    CHECK(r2[3] == Rat(1, 4));
    CHECK(r2[4] == 0);
    const auto r3 = markov::nstep_row_exact(c, 1, 3, 4);
    CHECK(r3[1] == Rat(3, 8));
    CHECK(r3[2] == Rat(3, 8));
    CHECK(r3[3] == Rat(1, 8));
    CHECK(r3[4] == Rat(1, 8));
}

TEST_CASE("reflecting rows match the folded-walk closed form") {
    const auto c = Chain::reflecting();
    for (i64 n : {1, 2, 3, 5, 8, 13, 21, 34}) {
        for (i64 s = 1; s <= 4; ++s) {
            const auto row = markov::nstep_row_exact(c, s, n, 8);
            for (i64 t = 1; t <= 8; ++t) {
                CHECK(row[static_cast<size_t>(t)] == reflect_entry(n, s, t));
            }
        }
    }
}

TEST_CASE("float evolution tracks the closed form at large steps") {
    const auto c = Chain::reflecting();
    const auto tr = markov::evolve_track(c, 1, {1, 2}, 1000);
    const double want = to_double(reflect_entry(1000, 1, 1));
    CHECK(tr.track[0][1000] == doctest::Approx(want).epsilon(1e-10));
    CHECK(tr.track[1][999] == doctest::Approx(to_double(reflect_entry(999, 1, 2))).epsilon(1e-10));
    const auto row = markov::nstep_row(c, 1, 1000, 2);
    CHECK(tr.track[0][1000] == row[1]);
    CHECK(tr.track[1][1000] == row[2]);
}

TEST_CASE("occupation of the renewal shift is the renewal sequence") {
    std::mt19937_64 rng(1729);
    for (int rep = 0; rep < 6; ++rep) {
        const auto f = random_lifetime(rng);
        const auto c = Chain::renewal_shift(f);
        const auto u = renewal::renewal_sequence_exact(f, 65);
        for (i64 n = 0; n <= 64; n += (n < 8 ? 1 : 7)) {
            const auto row = markov::nstep_row_exact(c, 1, n, 1);
            CHECK(row[1] == u[static_cast<size_t>(n)]);
        }
    }
}

TEST_CASE("exact truncation bound covers every reachable contributor") {
    CHECK(markov::evolve_bound(1, 10, 5) == 15);
    CHECK(markov::evolve_bound(20, 3, 5) == 20);
    CHECK(markov::evolve_bound(2, 0, 7) == 7);
}

TEST_CASE("taboo rows of a renewal shift are shifted lifetime masses") {
    const auto f = LifetimeDist::st_petersburg();
    const auto c = Chain::renewal_shift(f);
    const auto taboo = markov::taboo_rows_exact(c, 1, 64, 8);
    // Avoiding state one forces the deterministic descent from the first jump.
    for (i64 k = 1; k <= 64; ++k) {
        for (i64 t = 1; t <= 8; ++t) {
            CHECK(taboo[static_cast<size_t>(k)][static_cast<size_t>(t)] ==
                  f.prob_exact(t + k - 1));
        }
    }
}

TEST_CASE("taboo sums telescope into the invariant measure minus a tail") {
    for (const auto& f :
         {LifetimeDist::st_petersburg(), LifetimeDist::geometric(Rat(1, 3))}) {
        const auto c = Chain::renewal_shift(f);
        const i64 N = 64;
        const auto taboo = markov::taboo_rows_exact(c, 1, N, 4);
        for (i64 t = 1; t <= 4; ++t) {
            Rat acc = 0;
            for (i64 k = 1; k <= N; ++k) acc += taboo[static_cast<size_t>(k)][static_cast<size_t>(t)];
            CHECK(acc == c.pi_exact(t) - f.tail_exact(t + N));
        }
    }
}

TEST_CASE("first taboo row equals the one-step row") {
    const auto c = Chain::reflecting();
    const auto taboo = markov::taboo_rows_exact(c, 2, 1, 4);
    for (i64 t = 1; t <= 4; ++t) {
        CHECK(taboo[1][static_cast<size_t>(t)] == c.p_exact(2, t));
    }
}

TEST_CASE("last-exit decomposition reassembles n-step rows exactly") {
    const auto geo = Chain::renewal_shift(LifetimeDist::geometric(Rat(1, 2)));
    const auto ref = Chain::reflecting();
    struct Probe {
        const Chain* c;
        i64 s;
        i64 t;
    };
    const Chain* chains[2] = {&geo, &ref};
    const Probe probes[] = {{chains[0], 1, 2}, {chains[0], 2, 1}, {chains[1], 1, 3}, {chains[1], 2, 2}};
    for (const auto& pr : probes) {
        const i64 M = 48;
        const auto taboo = markov::taboo_rows_exact(*pr.c, pr.s, M, pr.t);
        std::vector<Rat> occ(static_cast<size_t>(M) + 1);
        for (i64 j = 0; j <= M; ++j) {
            occ[static_cast<size_t>(j)] = markov::nstep_row_exact(*pr.c, pr.s, j, pr.s)[static_cast<size_t>(pr.s)];
        }
        for (i64 m = 1; m <= M; ++m) {
            Rat acc = 0;
            for (i64 k = 1; k <= m; ++k) {
                acc += occ[static_cast<size_t>(m - k)] * taboo[static_cast<size_t>(k)][static_cast<size_t>(pr.t)];
            }
            CHECK(acc == markov::nstep_row_exact(*pr.c, pr.s, m, pr.t)[static_cast<size_t>(pr.t)]);
        }
    }
}

TEST_CASE("memoryless shift rows repeat the lifetime after one step") {
    const auto f = LifetimeDist::geometric(Rat(1, 2));
    const auto c = Chain::renewal_shift(f);
    for (i64 n : {1, 2, 3, 8, 33}) {
        const auto row = markov::nstep_row_exact(c, 1, n, 6);
        for (i64 t = 1; t <= 6; ++t) {
            CHECK(row[static_cast<size_t>(t)] == f.prob_exact(t));
        }
    }
}

TEST_CASE("ratio limit sequence of the memoryless shift is exactly one") {
    const auto c = Chain::renewal_shift(LifetimeDist::geometric(Rat(1, 2)));
    const auto s = markov::ratio_limit_sequence(c, 1, 2, 0, 64);
    CHECK(s[0] == 0.0);
    for (size_t m = 1; m < s.size(); ++m) CHECK(s[m] == 1.0);
}

TEST_CASE("cylinder measures multiply transition masses along the word") {
    const auto c = Chain::renewal_shift(LifetimeDist::st_petersburg());
    CHECK(markov::cyl_measure_exact(c, {0, {4, 3, 2, 1}}) == Rat(1, 4));
    CHECK(markov::cyl_measure_exact(c, {0, {1, 2}}) == Rat(1, 4));
    CHECK(markov::cyl_measure_exact(c, {7, {1, 2}}) == Rat(1, 4));
    CHECK(markov::cyl_measure_exact(c, {0, {1, 3}}) == 0);
    CHECK(markov::cyl_measure_exact(c, {0, {5}}) == Rat(1, 8));
    const auto r = Chain::reflecting();
    CHECK(markov::cyl_measure_exact(r, {5, {2, 3}}) == Rat(1, 2));
    CHECK_THROWS_AS(markov::cyl_measure(c, {0, {0}}), ConfigError);
    CHECK_THROWS_AS(markov::cyl_measure(c, {-1, {1}}), ConfigError);
    CHECK_THROWS_AS(markov::cyl_measure(c, {0, {}}), ConfigError);
}

TEST_CASE("correlations in the gap regime factor through n-step entries") {
    const auto c = Chain::renewal_shift(LifetimeDist::st_petersburg());
    const Cylinder A{0, {1, 2}};
    const Cylinder B{0, {2}};
    // Pinned coordinates 0, 1 and n; the bridge runs from symbol 2 at time 1.
    for (i64 n = 2; n <= 24; ++n) {
        const Rat bridge = markov::nstep_row_exact(c, 2, n - 1, 2)[2];
        CHECK(markov::correlation_exact(c, A, B, n) == Rat(1, 4) * bridge);
    }
}

TEST_CASE("single-symbol correlations are weighted n-step entries") {
    const auto c = Chain::reflecting();
    const Cylinder A{0, {2}};
    const Cylinder B{0, {3}};
    for (i64 n = 1; n <= 20; ++n) {
        const Rat want = c.pi_exact(2) * markov::nstep_row_exact(c, 2, n, 3)[3];
        CHECK(markov::correlation_exact(c, A, B, n) == want);
    }
}

TEST_CASE("overlapping cylinders intersect coordinatewise") {
    const auto c = Chain::renewal_shift(LifetimeDist::st_petersburg());
    const Cylinder A{0, {1, 2}};
    const Cylinder agree{1, {2}};
    const Cylinder clash{1, {1}};
    CHECK(markov::correlation_exact(c, A, agree, 0) == markov::cyl_measure_exact(c, A));
    CHECK(markov::correlation_exact(c, A, clash, 0) == 0);
    // Lag one pins coordinates 0, 1, 2 to the word 1, 2, 1.
    CHECK(markov::correlation_exact(c, A, clash, 1) ==
          markov::cyl_measure_exact(c, {0, {1, 2, 1}}));
}

TEST_CASE("correlation sequence agrees with pointwise correlations") {
    const auto c = Chain::renewal_shift(LifetimeDist::st_petersburg());
    const Cylinder A{0, {1, 2}};
    const Cylinder B{1, {2, 1}};
    const auto seq = markov::correlation_sequence(c, A, B, 48);
    REQUIRE(seq.size() == 48);
    for (i64 n = 0; n < 48; ++n) {
        CHECK(seq[static_cast<size_t>(n)] ==
              doctest::Approx(markov::correlation(c, A, B, n)).epsilon(1e-12));
    }
    const auto r = Chain::reflecting();
    const Cylinder C{0, {2, 3}};
    const Cylinder D{0, {1}};
    const auto seq2 = markov::correlation_sequence(r, C, D, 40);
    for (i64 n = 0; n < 40; ++n) {
        CHECK(seq2[static_cast<size_t>(n)] ==
              doctest::Approx(markov::correlation(r, C, D, n)).epsilon(1e-12));
    }
}
