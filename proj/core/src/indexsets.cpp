#include "ratmix/indexsets.hpp"

#include <algorithm>
#include <cmath>

namespace ratmix::sets {

namespace {

std::vector<Interval> normalize(std::vector<Interval> iv) {
    for (const auto& I : iv) {
        if (I.lo < 0 || I.hi < I.lo) {
            throw DegenerateSetError("invalid interval [" + std::to_string(I.lo) + ", " +
                                     std::to_string(I.hi) + "]");
        }
    }
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const auto& I : iv) {
        if (!out.empty() && I.lo <= out.back().hi + 1) {
            out.back().hi = std::max(out.back().hi, I.hi);
        } else {
            out.push_back(I);
        }
    }
    return out;
}

Grid sorted_grid(Grid g) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    if (g.empty() || g.front() < 1) throw ConfigError("grid points must be >= 1");
    return g;
}

}  // namespace

IndexSet IndexSet::from_intervals(std::vector<Interval> iv) {
    IndexSet s;
    s.iv_ = normalize(std::move(iv));
    s.covered_ = kUnbounded;
    return s;
}

IndexSet IndexSet::from_points(std::vector<i64> pts) {
    std::vector<Interval> iv;
    iv.reserve(pts.size());
    for (i64 p : pts) iv.push_back({p, p});
    return from_intervals(std::move(iv));
}

IndexSet IndexSet::decided_on(std::vector<Interval> iv, i64 covered) {
    IndexSet s;
    s.iv_ = normalize(std::move(iv));
    s.covered_ = covered;
    if (!s.iv_.empty() && s.iv_.back().hi > covered) {
        throw DegenerateSetError("interval extends past the decided range");
    }
    return s;
}

IndexSet IndexSet::blocks() {
    IndexSet s;
    s.gen_ = GenKind::blocks;
    s.covered_ = 1;  // first block starts at 2
    return s;
}

IndexSet IndexSet::squares() {
    IndexSet s;
    s.gen_ = GenKind::squares;
    s.covered_ = 0;
    return s;
}

IndexSet IndexSet::multiples(i64 p) {
    if (p < 1) throw DegenerateSetError("multiples step must be >= 1");
    IndexSet s;
    s.gen_ = GenKind::multiples;
    s.p_ = p;
    s.next_k_ = 0;
    s.covered_ = -1;
    return s;
}

IndexSet IndexSet::from_generator_name(const std::string& name, i64 param) {
    if (name == "blocks") return blocks();
    if (name == "squares") return squares();
    if (name == "multiples") return multiples(param);
    throw ConfigError("unknown set generator: " + name);
}

std::string IndexSet::generator_name() const {
    switch (gen_) {
        case GenKind::none: return "";
        case GenKind::blocks: return "blocks";
        case GenKind::squares: return "squares";
        case GenKind::multiples: return "multiples";
    }
    return "";
}

void IndexSet::ensure(i64 upto) const {
    if (upto <= covered_) return;
    switch (gen_) {
        case GenKind::none:
            throw HorizonError("index set is only decided up to " + std::to_string(covered_));
        case GenKind::blocks:
            while (true) {
                if (next_k_ * next_k_ > 61) {
                    covered_ = kUnbounded;
                    return;
                }
                const i64 lo = i64{1} << (next_k_ * next_k_);
                if (lo > upto) {
                    covered_ = lo - 1;
                    return;
                }
                iv_.push_back({lo, next_k_ * lo});
                ++next_k_;
            }
        case GenKind::squares:
            while (next_k_ * next_k_ <= upto) {
                iv_.push_back({next_k_ * next_k_, next_k_ * next_k_});
                check_budget(static_cast<i64>(iv_.capacity()) * static_cast<i64>(sizeof(Interval)),
                             "index set materialization");
                ++next_k_;
            }
            covered_ = next_k_ * next_k_ - 1;
            return;
        case GenKind::multiples:
            if (p_ == 1) {
                iv_.assign(1, {0, upto});
                covered_ = upto;
                return;
            }
            while (next_k_ * p_ <= upto) {
                iv_.push_back({next_k_ * p_, next_k_ * p_});
                check_budget(static_cast<i64>(iv_.capacity()) * static_cast<i64>(sizeof(Interval)),
                             "index set materialization");
                ++next_k_;
            }
            covered_ = next_k_ * p_ - 1;
            return;
    }
}

bool IndexSet::contains(i64 n) const {
    if (n < 0) return false;
    ensure(n);
    auto it = std::partition_point(iv_.begin(), iv_.end(),
                                   [n](const Interval& I) { return I.hi < n; });
    return it != iv_.end() && it->lo <= n;
}

i64 IndexSet::count_range(i64 lo, i64 hi) const {
    lo = std::max<i64>(lo, 0);
    if (hi < lo) return 0;
    ensure(hi);
    auto it = std::partition_point(iv_.begin(), iv_.end(),
                                   [lo](const Interval& I) { return I.hi < lo; });
    i64 count = 0;
    for (; it != iv_.end() && it->lo <= hi; ++it) {
        count += std::min(hi, it->hi) - std::max(lo, it->lo) + 1;
    }
    return count;
}

const std::vector<Interval>& IndexSet::intervals(i64 upto) const {
    ensure(upto);
    return iv_;
}

IndexSet IndexSet::complement_within(i64 hi) const {
    if (hi < 0) throw DegenerateSetError("complement bound must be >= 0");
    ensure(hi);
    std::vector<Interval> gaps;
    i64 prev = 0;
    for (const auto& I : iv_) {
        if (I.lo > hi) break;
        if (prev < I.lo) gaps.push_back({prev, I.lo - 1});
        prev = std::max(prev, I.hi + 1);
    }
    if (prev <= hi) gaps.push_back({prev, hi});
    return decided_on(std::move(gaps), hi);
}

IndexSet IndexSet::union_of(const IndexSet& a, const IndexSet& b, i64 upto) {
    std::vector<Interval> merged;
    for (const auto& I : a.intervals(upto)) {
        if (I.lo > upto) break;
        merged.push_back({I.lo, std::min(I.hi, upto)});
    }
    for (const auto& I : b.intervals(upto)) {
        if (I.lo > upto) break;
        merged.push_back({I.lo, std::min(I.hi, upto)});
    }
    return decided_on(std::move(merged), upto);
}

IndexSet IndexSet::intersect(const IndexSet& a, const IndexSet& b, i64 upto) {
    const auto& av = a.intervals(upto);
    const auto& bv = b.intervals(upto);
    std::vector<Interval> out;
    size_t i = 0, j = 0;
    while (i < av.size() && j < bv.size()) {
        const i64 lo = std::max(av[i].lo, bv[j].lo);
        const i64 hi = std::min({av[i].hi, bv[j].hi, upto});
        if (lo > upto) break;
        if (lo <= hi) out.push_back({lo, hi});
        if (av[i].hi < bv[j].hi) {
            ++i;
        } else {
            ++j;
        }
    }
    return decided_on(std::move(out), upto);
}

bool IndexSet::subset_of(const IndexSet& other, i64 upto) const {
    const auto& av = intervals(upto);
    const auto& bv = other.intervals(upto);
    size_t j = 0;
    for (const auto& A : av) {
        if (A.lo > upto) break;
        const i64 lo = A.lo;
        const i64 hi = std::min(A.hi, upto);
        while (j < bv.size() && bv[j].hi < lo) ++j;
        if (j == bv.size() || bv[j].lo > lo || bv[j].hi < hi) return false;
    }
    return true;
}

double weighted_mass(const weights::WeightSeq& u, const IndexSet& K, i64 n) {
    if (n <= 0) return 0.0;
    NeumaierSum acc;
    for (const auto& I : K.intervals(n - 1)) {
        if (I.lo > n - 1) break;
        const i64 hi = std::min(I.hi, n - 1);
        for (i64 k = I.lo; k <= hi; ++k) acc.add(u.at(k));
    }
    return acc.value();
}

Rat weighted_mass_exact(const weights::WeightSeq& u, const IndexSet& K, i64 n) {
    Rat acc = 0;
    if (n <= 0) return acc;
    for (const auto& I : K.intervals(n - 1)) {
        if (I.lo > n - 1) break;
        const i64 hi = std::min(I.hi, n - 1);
        for (i64 k = I.lo; k <= hi; ++k) acc += rat_from_double(u.at(k));
    }
    return acc;
}

Profile smallness_profile(const weights::WeightSeq& u, const IndexSet& K, const Grid& grid) {
    const Grid g = sorted_grid(grid);
    const Profile au = weights::partial_sum_profile(u, g);
    Profile out;
    out.reserve(g.size());
    NeumaierSum mass;
    i64 prev = 0;
    for (size_t gi = 0; gi < g.size(); ++gi) {
        const i64 n = g[gi];
        for (const auto& I : K.intervals(n - 1)) {
            const i64 lo = std::max(I.lo, prev);
            const i64 hi = std::min(I.hi, n - 1);
            if (lo > n - 1) break;
            for (i64 k = lo; k <= hi; ++k) mass.add(u.at(k));
        }
        prev = n;
        if (au[gi].value <= 0.0) throw DegenerateWeightError("weight has no mass on [0, n)");
        out.push_back({n, mass.value() / au[gi].value});
    }
    return out;
}

Profile density_profile(const IndexSet& K, const Grid& grid) {
    const Grid g = sorted_grid(grid);
    Profile out;
    out.reserve(g.size());
    for (i64 n : g) {
        out.push_back({n, static_cast<double>(K.count_range(1, n)) / static_cast<double>(n)});
    }
    return out;
}

IndexSet exceptional_set(const std::vector<double>& s, double L, double eps) {
    if (eps <= 0.0 || !std::isfinite(eps) || !std::isfinite(L)) {
        throw ConfigError("exceptional set needs finite L and eps > 0");
    }
    std::vector<Interval> iv;
    i64 start = -1;
    for (size_t k = 0; k < s.size(); ++k) {
        if (!std::isfinite(s[k])) throw DomainError("non-finite sequence value at index " + std::to_string(k));
        const bool exceptional = std::fabs(s[k] - L) > eps;
        if (exceptional && start < 0) start = static_cast<i64>(k);
        if (!exceptional && start >= 0) {
            iv.push_back({start, static_cast<i64>(k) - 1});
            start = -1;
        }
    }
    if (start >= 0) iv.push_back({start, static_cast<i64>(s.size()) - 1});
    return IndexSet::decided_on(std::move(iv), static_cast<i64>(s.size()) - 1);
}

Profile strong_cesaro_error(const weights::WeightSeq& u, const std::vector<double>& s, double L,
                            const Grid& grid) {
    if (!std::isfinite(L)) throw ConfigError("strong Cesaro error needs finite L");
    const Grid g = sorted_grid(grid);
    if (g.back() > static_cast<i64>(s.size())) {
        throw HorizonError("sequence shorter than requested grid");
    }
    Profile out;
    out.reserve(g.size());
    NeumaierSum num;
    NeumaierSum den;
    i64 k = 0;
    for (i64 n : g) {
        for (; k < n; ++k) {
            if (!std::isfinite(s[static_cast<size_t>(k)])) {
                throw DomainError("non-finite sequence value at index " + std::to_string(k));
            }
            const double uk = u.at(k);
            num.add(uk * std::fabs(s[static_cast<size_t>(k)] - L));
            den.add(uk);
        }
        if (den.value() <= 0.0) throw DegenerateWeightError("weight has no mass on [0, n)");
        out.push_back({n, num.value() / den.value()});
    }
    return out;
}

MergeResult diagonal_merge(const std::vector<IndexSet>& chain, const weights::WeightSeq& u,
                           const std::vector<double>& thresholds, i64 horizon) {
    if (chain.empty()) throw ConfigError("diagonal merge needs a nonempty chain");
    if (chain.size() != thresholds.size()) {
        throw ConfigError("diagonal merge needs one threshold per set");
    }
    for (double t : thresholds) {
        if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("thresholds must be positive");
    }
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
    const size_t J = chain.size();
    for (size_t j = 0; j + 1 < J; ++j) {
        if (!chain[j].subset_of(chain[j + 1], horizon)) {
            throw NestingError("chain member " + std::to_string(j + 1) +
                               " is not contained in its successor");
        }
    }

    check_budget((horizon + 1) * static_cast<i64>(sizeof(double)) * 2, "diagonal merge");
    std::vector<double> au(static_cast<size_t>(horizon) + 1, 0.0);
    {
        NeumaierSum acc;
        for (i64 n = 1; n <= horizon; ++n) {
            acc.add(u.at(n - 1));
            au[static_cast<size_t>(n)] = acc.value();
        }
    }

    std::vector<i64> switch_points(J, 0);
    std::vector<double> ratio(static_cast<size_t>(horizon) + 1, 0.0);
    for (size_t j = 0; j < J; ++j) {
        NeumaierSum mass;
        for (i64 n = 1; n <= horizon; ++n) {
            if (chain[j].contains(n - 1)) mass.add(u.at(n - 1));
            const double a = au[static_cast<size_t>(n)];
            ratio[static_cast<size_t>(n)] =
                a > 0.0 ? mass.value() / a : std::numeric_limits<double>::infinity();
        }
        // Suffix maxima locate the first index from which the ratio stays small.
        double sufmax = -1.0;
        i64 found = -1;
        for (i64 n = horizon; n >= 1; --n) {
            sufmax = std::max(sufmax, ratio[static_cast<size_t>(n)]);
            if (sufmax < thresholds[j]) found = n;
        }
        if (found < 0) {
            throw HorizonError("threshold " + fmt_double(thresholds[j]) +
                               " is never met within the horizon");
        }
        switch_points[j] = j == 0 ? found : std::max(found, switch_points[j - 1]);
    }

    std::vector<Interval> pieces;
    for (size_t j = 0; j < J; ++j) {
        const i64 lo_excl = switch_points[j];
        const i64 hi_incl = j + 1 < J ? switch_points[j + 1] : horizon;
        for (const auto& I : chain[j].intervals(hi_incl)) {
            const i64 lo = std::max(I.lo, lo_excl + 1);
            const i64 hi = std::min(I.hi, hi_incl);
            if (lo > hi_incl) break;
            if (lo <= hi) pieces.push_back({lo, hi});
        }
    }
    return MergeResult{IndexSet::decided_on(std::move(pieces), horizon), std::move(switch_points)};
}

}  // namespace ratmix::sets
