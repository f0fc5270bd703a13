#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ratmix/common.hpp"
#include "ratmix/renewal.hpp"

namespace ratmix::markov {

enum class ChainKind { renewal_shift, reflecting };

/**
 * Countable-state chain with a sigma-finite invariant measure, states 1-based.
 *
 * renewal_shift: p_{1,n} = f_n for a lifetime law f, p_{n+1,n} = 1, and
 * pi_n = f([n, inf)). reflecting: p_{1,1} = p_{1,2} = 1/2,
 * p_{n,n-1} = p_{n,n+1} = 1/2 for n >= 2, and pi = 1.
 */
class Chain {
public:
    static Chain renewal_shift(renewal::LifetimeDist f);
    static Chain reflecting();

    ChainKind kind() const { return kind_; }
    bool exact_capable() const;
    const renewal::LifetimeDist& lifetime() const;

    double p(i64 s, i64 t) const;
    Rat p_exact(i64 s, i64 t) const;
    double pi(i64 s) const;
    Rat pi_exact(i64 s) const;
    // States t <= max_t with p_{s,t} > 0, ascending.
    std::vector<i64> row_targets(i64 s, i64 max_t) const;
    std::string describe() const;

private:
    ChainKind kind_ = ChainKind::reflecting;
    renewal::LifetimeDist f_ = renewal::LifetimeDist::dirac(1);
};

/**
 * Exact truncation bound: a path that sits at or below max_state after n
 * further steps can never have climbed above this height, so evolutions kept
 * up to the bound produce rows that carry no truncation error at all.
 */
i64 evolve_bound(i64 s, i64 n, i64 max_state);

/** track[i][m] = p^{(m)}_{s, targets[i]} for m = 0..N. */
struct TrackResult {
    std::vector<std::vector<double>> track;
    i64 bound = 0;
};
TrackResult evolve_track(const Chain& c, i64 s, const std::vector<i64>& targets, i64 N);

/** Row p^{(n)}_{s,t} for t = 0..max_state (index 0 unused). */
std::vector<double> nstep_row(const Chain& c, i64 s, i64 n, i64 max_state);
std::vector<Rat> nstep_row_exact(const Chain& c, i64 s, i64 n, i64 max_state);

/**
 * Taboo rows: out[m][t] = probability of moving s -> t in m steps without
 * revisiting s at times 1..m-1, for m = 1..N and t <= max_state (out[0] is
 * empty, index 0 of each row unused).
 */
std::vector<std::vector<double>> taboo_rows(const Chain& c, i64 s, i64 N, i64 max_state);
std::vector<std::vector<Rat>> taboo_rows_exact(const Chain& c, i64 s, i64 N, i64 max_state);

/**
 * s_m = p^{(m+offset)}_{r,t} / (p^{(m)}_{1,1} pi_t) for m = 0..N-1; entries
 * where the occupation probability vanishes are reported as zero and carry
 * zero weight in the diagnostics built on top.
 */
std::vector<double> ratio_limit_sequence(const Chain& c, i64 r, i64 t, i64 offset, i64 N);

/** Cylinder [s_1 .. s_I]_k: coordinate k+j-1 is pinned to s_j. */
struct Cylinder {
    i64 base = 0;
    std::vector<i64> symbols;
};

double cyl_measure(const Chain& c, const Cylinder& A);
Rat cyl_measure_exact(const Chain& c, const Cylinder& A);

/** m(A cap T^{-n} B), exact finite-horizon overlap handling included. */
double correlation(const Chain& c, const Cylinder& A, const Cylinder& B, i64 n);
Rat correlation_exact(const Chain& c, const Cylinder& A, const Cylinder& B, i64 n);
/** Values for n = 0..N-1, sharing one evolution run across the gap regime. */
std::vector<double> correlation_sequence(const Chain& c, const Cylinder& A, const Cylinder& B,
                                         i64 N);

}  // namespace ratmix::markov
