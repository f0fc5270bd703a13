#include "ratmix/weights.hpp"

#include <algorithm>
#include <cmath>

namespace ratmix::weights {

namespace {

const double kEuler = std::exp(1.0);

void validate_values(const std::vector<double>& v) {
    for (size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i]) || v[i] < 0.0)
            throw DegenerateWeightError("WeightSeq: entry " + std::to_string(i) +
                                        " is negative or non-finite");
    }
}

double denom(const WeightSeq& u, i64 n, const char* op) {
    double a = partial_sum(u, n);
    if (!(a > 0.0))
        throw DegenerateWeightError(std::string(op) + ": a_u(" + std::to_string(n) +
                                    ") vanishes, weight is degenerate here");
    return a;
}

}  // namespace

double Rule::eval(i64 n) const {
    switch (kind) {
        case RuleKind::constant: return a;
        case RuleKind::power: return std::pow(static_cast<double>(n) + 1.0, a);
        case RuleKind::hopf: return n == 0 ? 0.0 : std::sqrt(2.0 / (M_PI * static_cast<double>(n)));
        case RuleKind::kaluza_log: return 1.0 / std::log(static_cast<double>(n) + kEuler);
        case RuleKind::multiples: return n % p == 0 ? 1.0 : 0.0;
        case RuleKind::none: break;
    }
    throw HorizonError("Rule::eval: empty rule");
}

std::string Rule::name() const {
    switch (kind) {
        case RuleKind::constant: return "constant(" + fmt_double(a) + ")";
        case RuleKind::power: return "power(" + fmt_double(a) + ")";
        case RuleKind::hopf: return "hopf";
        case RuleKind::kaluza_log: return "kaluza-log";
        case RuleKind::multiples: return "multiples(" + std::to_string(p) + ")";
        case RuleKind::none: return "none";
    }
    return "none";
}

WeightSeq::WeightSeq(std::vector<double> values) : values_(std::move(values)) {
    validate_values(values_);
}

WeightSeq::WeightSeq(std::vector<double> values, Rule rule)
    : values_(std::move(values)), rule_(rule) {
    validate_values(values_);
    if (!rule_.empty() && rule_.kind == RuleKind::multiples && rule_.p < 1)
        throw ConfigError("WeightSeq: multiples rule needs p >= 1");
}

std::string WeightSeq::describe() const {
    if (rule_backed()) return rule_.name();
    return "materialized(" + std::to_string(values_.size()) + ")";
}

WeightSeq family(const std::string& name, const std::vector<double>& params) {
    auto want = [&](size_t n) {
        if (params.size() != n)
            throw ConfigError("weights::family: '" + name + "' takes " + std::to_string(n) +
                              " parameter(s), got " + std::to_string(params.size()));
    };
    if (name == "constant") {
        double c = params.empty() ? 1.0 : params[0];
        if (params.size() > 1) want(1);
        if (c < 0) throw ConfigError("weights::family: constant value must be >= 0");
        return WeightSeq::from_rule({RuleKind::constant, c, 0});
    }
    if (name == "power") {
        want(1);
        return WeightSeq::from_rule({RuleKind::power, params[0], 0});
    }
    if (name == "kaluza-log") {
        want(0);
        return WeightSeq::from_rule({RuleKind::kaluza_log, 0.0, 0});
    }
    if (name == "hopf") {
        want(0);
        return WeightSeq::from_rule({RuleKind::hopf, 0.0, 0});
    }
    if (name == "multiples") {
        want(1);
        i64 p = static_cast<i64>(params[0]);
        if (p < 1 || static_cast<double>(p) != params[0])
            throw ConfigError("weights::family: multiples needs a positive integer p");
        return WeightSeq::from_rule({RuleKind::multiples, 0.0, p});
    }
    throw ConfigError("weights::family: unknown family '" + name + "'");
}

double partial_sum(const WeightSeq& u, i64 n) {
    if (n < 0) throw HorizonError("partial_sum: negative n");
    if (n > u.horizon()) throw HorizonError("partial_sum: n beyond horizon");
    NeumaierSum acc;
    for (i64 k = 0; k < n; ++k) acc.add(u.at(k));
    return acc.value();
}

Rat partial_sum_exact(const WeightSeq& u, i64 n) {
    if (n < 0 || n > u.horizon()) throw HorizonError("partial_sum_exact: n out of range");
    Rat acc(0);
    for (i64 k = 0; k < n; ++k) acc += rat_from_double(u.at(k));
    return acc;
}

Profile partial_sum_profile(const WeightSeq& u, const Grid& grid) {
    Grid g = grid;
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    Profile out;
    out.reserve(g.size());
    NeumaierSum acc;
    i64 k = 0;
    for (i64 n : g) {
        if (n < 0 || n > u.horizon()) throw HorizonError("partial_sum_profile: grid point out of range");
        for (; k < n; ++k) acc.add(u.at(k));
        out.push_back({n, acc.value()});
    }
    return out;
}

double asym_distance(const WeightSeq& u, const WeightSeq& w, i64 n) {
    double a = denom(u, n, "asym_distance");
    NeumaierSum acc;
    for (i64 k = 0; k < n; ++k) acc.add(std::fabs(u.at(k) - w.at(k)));
    return acc.value() / a;
}

Profile asym_distance_profile(const WeightSeq& u, const WeightSeq& w, const Grid& grid) {
    Grid g = grid;
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    Profile out;
    NeumaierSum num, den;
    i64 k = 0;
    for (i64 n : g) {
        for (; k < n; ++k) {
            num.add(std::fabs(u.at(k) - w.at(k)));
            den.add(u.at(k));
        }
        if (!(den.value() > 0.0)) throw DegenerateWeightError("asym_distance_profile: a_u vanishes");
        out.push_back({n, num.value() / den.value()});
    }
    return out;
}

double smoothness(const WeightSeq& u, i64 n) {
    double a = denom(u, n, "smoothness");
    NeumaierSum acc;
    for (i64 k = 0; k < n; ++k) acc.add(std::fabs(u.at(k) - u.at(k + 1)));
    return acc.value() / a;
}

Profile smoothness_profile(const WeightSeq& u, const Grid& grid) {
    Grid g = grid;
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    Profile out;
    NeumaierSum num, den;
    i64 k = 0;
    for (i64 n : g) {
        for (; k < n; ++k) {
            num.add(std::fabs(u.at(k) - u.at(k + 1)));
            den.add(u.at(k));
        }
        if (!(den.value() > 0.0)) throw DegenerateWeightError("smoothness_profile: a_u vanishes");
        out.push_back({n, num.value() / den.value()});
    }
    return out;
}

WeightSeq subsample(const WeightSeq& u, i64 p, i64 len) {
    if (p < 1) throw ConfigError("subsample: p must be >= 1");
    std::vector<double> v;
    v.reserve(static_cast<size_t>(len));
    for (i64 n = 0; n < len; ++n) v.push_back(u.at(p * n));
    return WeightSeq(std::move(v));
}

SubsampleCheck subsample_check(const WeightSeq& u, i64 p, i64 n) {
    if (p < 1 || n < 1) throw ConfigError("subsample_check: need p >= 1, n >= 1");
    NeumaierSum sub, full, tv;
    for (i64 k = 0; k < n; ++k) sub.add(u.at(p * k));
    for (i64 k = 0; k < p * n; ++k) {
        full.add(u.at(k));
        tv.add(std::fabs(u.at(k) - u.at(k + 1)));
    }
    SubsampleCheck c;
    c.lhs = std::fabs(static_cast<double>(p) * sub.value() - full.value());
    c.rhs = static_cast<double>(p) * static_cast<double>(p) * tv.value();
    // tiny relative slack so float rounding cannot flip a true inequality
    c.holds = c.lhs <= c.rhs * (1.0 + 1e-12) + 1e-300;
    return c;
}

WeightSeq product_weight(const WeightSeq& u, const std::vector<i64>& kappa, i64 len) {
    if (kappa.empty()) throw ConfigError("product_weight: kappa must be nonempty");
    for (i64 k : kappa)
        if (k < 1) throw ConfigError("product_weight: kappa entries must be >= 1");
    std::vector<double> v;
    v.reserve(static_cast<size_t>(len));
    for (i64 n = 0; n < len; ++n) {
        double prod = 1.0;
        for (i64 k : kappa) prod *= u.at(k * n);
        v.push_back(prod);
    }
    return WeightSeq(std::move(v));
}

RvFit rv_index_estimate(const WeightSeq& u, const Grid& grid) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t m = 0;
    std::vector<std::pair<double, double>> pts;
    for (i64 n : grid) {
        if (n < 1) continue;
        double un = u.at(n);
        if (un <= 0.0) continue;
        double x = std::log(static_cast<double>(n)), y = std::log(un);
        pts.emplace_back(x, y);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
    }
    if (m < 2)
        throw DegenerateWeightError("rv_index_estimate: fewer than two positive samples on grid");
    double det = static_cast<double>(m) * sxx - sx * sx;
    if (det == 0.0)
        throw DegenerateWeightError("rv_index_estimate: grid points coincide");
    RvFit fit;
    fit.index = (static_cast<double>(m) * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.index * sx) / static_cast<double>(m);
    double rss = 0;
    for (auto& [x, y] : pts) {
        double e = y - (fit.intercept + fit.index * x);
        rss += e * e;
    }
    fit.residual = std::sqrt(rss / static_cast<double>(m));
    fit.points = m;
    return fit;
}

}  // namespace ratmix::weights
