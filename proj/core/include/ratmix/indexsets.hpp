#pragma once

#include <string>
#include <vector>

#include "ratmix/common.hpp"
#include "ratmix/weights.hpp"

namespace ratmix::sets {

// Closed integer interval, 0 <= lo <= hi.
struct Interval {
    i64 lo;
    i64 hi;
};

enum class GenKind {
    none,
    blocks,    // k-th interval [2^{k^2}, k * 2^{k^2}], k = 1, 2, ...
    squares,   // {j^2 : j >= 1}
    multiples, // {0, p, 2p, ...}
};

/**
 * Set of nonnegative integers stored as sorted disjoint intervals, optionally
 * backed by a generator so membership can be decided far past what is stored.
 *
 * Generator-backed sets materialize lazily; sets produced by boolean
 * operations are decided only on [0, bound] and throw HorizonError beyond it.
 */
class IndexSet {
public:
    IndexSet() : covered_(kUnbounded) {}  // empty set, decided everywhere

    static IndexSet from_intervals(std::vector<Interval> iv);
    static IndexSet from_points(std::vector<i64> pts);
    // Explicit set whose membership is only decided on [0, covered].
    static IndexSet decided_on(std::vector<Interval> iv, i64 covered);
    static IndexSet blocks();
    static IndexSet squares();
    static IndexSet multiples(i64 p);
    static IndexSet from_generator_name(const std::string& name, i64 param = 0);

    bool contains(i64 n) const;
    // |K cap [lo, hi]| by interval arithmetic; exact integer count.
    i64 count_range(i64 lo, i64 hi) const;
    // Intervals covering K cap [0, upto]; materializes a generator as needed.
    const std::vector<Interval>& intervals(i64 upto) const;
    std::string generator_name() const;
    bool generator_backed() const { return gen_ != GenKind::none; }
    i64 generator_param() const { return p_; }
    // Largest index up to which membership is decided.
    i64 decided_to() const { return covered_; }

    IndexSet complement_within(i64 hi) const;
    static IndexSet union_of(const IndexSet& a, const IndexSet& b, i64 upto);
    static IndexSet intersect(const IndexSet& a, const IndexSet& b, i64 upto);
    bool subset_of(const IndexSet& other, i64 upto) const;

private:
    mutable std::vector<Interval> iv_;
    mutable i64 covered_ = -1;  // [0, covered_] is decided by iv_
    mutable i64 next_k_ = 1;    // next generator block index
    GenKind gen_ = GenKind::none;
    i64 p_ = 0;

    void ensure(i64 upto) const;
};

/** a_u(K, n) = sum of u_k over k in K cap [0, n), compensated ascending. */
double weighted_mass(const weights::WeightSeq& u, const IndexSet& K, i64 n);
Rat weighted_mass_exact(const weights::WeightSeq& u, const IndexSet& K, i64 n);

// a_u(K, n) / a_u(n) over the grid; the set is u-small when this tends to 0.
Profile smallness_profile(const weights::WeightSeq& u, const IndexSet& K, const Grid& grid);

// |K cap [1, n]| / n over the grid; counts are exact integers.
Profile density_profile(const IndexSet& K, const Grid& grid);

// {k < s.size() : |s_k - L| > eps}; decided exactly on [0, s.size()).
IndexSet exceptional_set(const std::vector<double>& s, double L, double eps);

// E_n = (1/a_u(n)) sum_{k=0}^{n-1} u_k |s_k - L| over the grid.
Profile strong_cesaro_error(const weights::WeightSeq& u, const std::vector<double>& s, double L,
                            const Grid& grid);

/**
 * Merges an increasing chain K_1 subset K_2 subset ... into one set that is
 * still u-small: N_j is the first index from which a_u(K_j, n)/a_u(n) stays
 * below thresholds[j-1] for every n <= horizon, and the merged set collects
 * K_j cap (N_j, N_{j+1}] with N_{last+1} = horizon.
 *
 * Throws NestingError when the chain is not increasing on [0, horizon] and
 * HorizonError when some threshold is never met from any index on.
 */
struct MergeResult {
    IndexSet merged;
    std::vector<i64> switch_points;  // N_1, ..., N_J
};
MergeResult diagonal_merge(const std::vector<IndexSet>& chain, const weights::WeightSeq& u,
                           const std::vector<double>& thresholds, i64 horizon);

}  // namespace ratmix::sets
