#pragma once

#include <string>
#include <vector>

#include "ratmix/common.hpp"

namespace ratmix::weights {

// Closed-form rules let a weight extend past its materialized prefix without
// storing every term (needed once horizons reach 2^25).
enum class RuleKind {
    none,
    constant,   // u_n = a
    power,      // u_n = (n+1)^a
    hopf,       // u_0 = 0, u_n = sqrt(2/(pi n))
    kaluza_log, // u_n = 1/log(n+e)
    multiples,  // u_n = 1 if p divides n else 0
};

struct Rule {
    RuleKind kind = RuleKind::none;
    double a = 0.0; // real parameter (constant value, power exponent)
    i64 p = 0;      // integer parameter (multiples)

    bool empty() const { return kind == RuleKind::none; }
    double eval(i64 n) const;
    std::string name() const;
};

/**
 * Bounded nonnegative weight sequence u_0, u_1, ...
 *
 * Either fully materialized, or a materialized prefix plus a closed-form rule
 * for every later index. at(n) never extrapolates silently: past the horizon
 * it throws HorizonError.
 */
class WeightSeq {
public:
    WeightSeq() = default;
    explicit WeightSeq(std::vector<double> values);
    WeightSeq(std::vector<double> values, Rule rule);
    static WeightSeq from_rule(Rule rule) { return WeightSeq({}, rule); }

    double at(i64 n) const {
        if (n < 0) throw HorizonError("WeightSeq::at: negative index");
        if (n < static_cast<i64>(values_.size())) return values_[static_cast<size_t>(n)];
        if (!rule_.empty()) return rule_.eval(n);
        throw HorizonError("WeightSeq::at: index " + std::to_string(n) +
                           " beyond horizon " + std::to_string(values_.size()));
    }
    // One past the last valid index; kUnbounded when a rule extends the tail.
    i64 horizon() const { return rule_.empty() ? static_cast<i64>(values_.size()) : kUnbounded; }
    bool rule_backed() const { return !rule_.empty(); }
    const Rule& rule() const { return rule_; }
    const std::vector<double>& values() const { return values_; }
    std::string describe() const;

private:
    std::vector<double> values_;
    Rule rule_;
};

// Registered weight families: constant [c], power [s], kaluza-log, hopf,
// multiples [p]. Throws ConfigError on unknown names or bad parameters.
WeightSeq family(const std::string& name, const std::vector<double>& params = {});

/** a_u(n) = sum_{k=0}^{n-1} u_k, compensated summation in ascending order. */
double partial_sum(const WeightSeq& u, i64 n);

// Exact sum of the same terms; each double is a dyadic rational, so this is
// the reference value the compensated sum is checked against.
Rat partial_sum_exact(const WeightSeq& u, i64 n);

Profile partial_sum_profile(const WeightSeq& u, const Grid& grid);

// d_n(u, w) = (1/a_u(n)) sum_{k=0}^{n-1} |u_k - w_k|
double asym_distance(const WeightSeq& u, const WeightSeq& w, i64 n);
Profile asym_distance_profile(const WeightSeq& u, const WeightSeq& w, const Grid& grid);

// sigma_u(n) = (1/a_u(n)) sum_{k=0}^{n-1} |u_k - u_{k+1}|; needs u valid up to index n.
double smoothness(const WeightSeq& u, i64 n);
Profile smoothness_profile(const WeightSeq& u, const Grid& grid);

/** Subsampled weight u^{(p)}_n = u_{p n}, materialized for n < len. */
WeightSeq subsample(const WeightSeq& u, i64 p, i64 len);

// Two sides of |p * a_{u^(p)}(n) - a_u(pn)| <= p^2 * sum_{k=0}^{pn-1} |u_k - u_{k+1}|.
struct SubsampleCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};
SubsampleCheck subsample_check(const WeightSeq& u, i64 p, i64 n);

/** Product weight v_n = prod_j u_{kappa_j * n}, materialized for n < len. */
WeightSeq product_weight(const WeightSeq& u, const std::vector<i64>& kappa, i64 len);

// Least-squares slope of log u_n against log n over the grid. The slope is
// the regular-variation index estimate; residual is the RMS fit error.
struct RvFit {
    double index = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
    size_t points = 0;
};
RvFit rv_index_estimate(const WeightSeq& u, const Grid& grid);

}  // namespace ratmix::weights
