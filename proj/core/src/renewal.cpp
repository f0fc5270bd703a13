#include "ratmix/renewal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numeric>

namespace ratmix::renewal {

namespace {

Rat rat_pow(Rat base, i64 exp) {
    Rat out = 1;
    while (exp > 0) {
        if (exp & 1) out *= base;
        base *= base;
        exp >>= 1;
    }
    return out;
}

Rat pow2_inv(i64 e) {
    // 2^{-e} as an exact rational.
    return Rat(mpz_class(1), mpz_class(1) << static_cast<unsigned>(e));
}

Grid sorted_grid(Grid g) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    if (g.empty() || g.front() < 1) throw ConfigError("grid points must be >= 1");
    return g;
}

}  // namespace

LifetimeDist LifetimeDist::from_probs(std::vector<std::pair<i64, Rat>> probs) {
    // Caller fractions may arrive unreduced; every stored atom is canonical.
    for (auto& [n, p] : probs) p.canonicalize();
    std::erase_if(probs, [](const auto& a) { return a.second == 0; });
    if (probs.empty()) throw InvalidDistribution("lifetime needs at least one atom");
    std::sort(probs.begin(), probs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Rat total = 0;
    i64 prev = 0;
    for (const auto& [n, p] : probs) {
        if (n < 1) throw InvalidDistribution("lifetime atoms live on {1, 2, ...}");
        if (n == prev) throw InvalidDistribution("duplicate atom at " + std::to_string(n));
        if (p < 0) throw InvalidDistribution("negative mass at " + std::to_string(n));
        prev = n;
        total += p;
    }
    if (total != 1) throw InvalidDistribution("atom masses must sum to 1, got " + rat_str(total));
    LifetimeDist d;
    d.kind_ = LifetimeKind::explicit_probs;
    d.probs_ = std::move(probs);
    return d;
}

LifetimeDist LifetimeDist::geometric(const Rat& p) {
    if (p <= 0 || p > 1) throw InvalidDistribution("geometric needs 0 < p <= 1");
    LifetimeDist d;
    d.kind_ = LifetimeKind::geometric;
    d.p_ = p;
    return d;
}

LifetimeDist LifetimeDist::pareto(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw InvalidDistribution("pareto needs gamma > 0");
    }
    LifetimeDist d;
    d.kind_ = LifetimeKind::pareto;
    d.gamma_ = gamma;
    return d;
}

LifetimeDist LifetimeDist::dirac(i64 k) {
    if (k < 1) throw InvalidDistribution("dirac point must be >= 1");
    LifetimeDist d;
    d.kind_ = LifetimeKind::dirac;
    d.point_ = k;
    return d;
}

LifetimeDist LifetimeDist::st_petersburg() {
    LifetimeDist d;
    d.kind_ = LifetimeKind::st_petersburg;
    return d;
}

LifetimeDist LifetimeDist::family(const std::string& name, const std::vector<double>& params) {
    auto want = [&](size_t n) {
        if (params.size() != n) {
            throw ConfigError("family " + name + " takes " + std::to_string(n) + " parameter(s)");
        }
    };
    if (name == "geometric" || name == "geom") {
        want(1);
        return geometric(rat_from_double(params[0]));
    }
    if (name == "pareto") {
        want(1);
        return pareto(params[0]);
    }
    if (name == "dirac") {
        want(1);
        const double k = params[0];
        if (k < 1 || k != std::floor(k)) throw ConfigError("dirac takes an integer point >= 1");
        return dirac(static_cast<i64>(k));
    }
    if (name == "st-petersburg" || name == "stpetersburg" || name == "stpete") {
        want(0);
        return st_petersburg();
    }
    throw ConfigError("unknown lifetime family: " + name);
}

double LifetimeDist::prob(i64 n) const {
    if (n < 1) return 0.0;
    switch (kind_) {
        case LifetimeKind::explicit_probs: {
            auto it = std::partition_point(probs_.begin(), probs_.end(),
                                           [n](const auto& a) { return a.first < n; });
            return it != probs_.end() && it->first == n ? to_double(it->second) : 0.0;
        }
        case LifetimeKind::geometric:
            return to_double(p_) * std::pow(1.0 - to_double(p_), static_cast<double>(n - 1));
        case LifetimeKind::pareto:
            return std::pow(static_cast<double>(n), -gamma_) -
                   std::pow(static_cast<double>(n + 1), -gamma_);
        case LifetimeKind::dirac:
            return n == point_ ? 1.0 : 0.0;
        case LifetimeKind::st_petersburg: {
            const auto un = static_cast<unsigned long long>(n);
            if ((un & (un - 1)) != 0) return 0.0;
            return std::ldexp(1.0, -static_cast<int>(std::bit_width(un)));
        }
    }
    return 0.0;
}

Rat LifetimeDist::prob_exact(i64 n) const {
    if (n < 1) return 0;
    switch (kind_) {
        case LifetimeKind::explicit_probs: {
            auto it = std::partition_point(probs_.begin(), probs_.end(),
                                           [n](const auto& a) { return a.first < n; });
            return it != probs_.end() && it->first == n ? it->second : Rat(0);
        }
        case LifetimeKind::geometric:
            return p_ * rat_pow(1 - p_, n - 1);
        case LifetimeKind::pareto:
            throw DomainError("pareto lifetimes have no exact rational form");
        case LifetimeKind::dirac:
            return n == point_ ? 1 : 0;
        case LifetimeKind::st_petersburg: {
            const auto un = static_cast<unsigned long long>(n);
            if ((un & (un - 1)) != 0) return 0;
            return pow2_inv(static_cast<i64>(std::bit_width(un)));
        }
    }
    return 0;
}

double LifetimeDist::tail(i64 k) const {
    if (k <= 1) return 1.0;
    switch (kind_) {
        case LifetimeKind::explicit_probs: {
            Rat head = 0;
            for (const auto& [n, p] : probs_) {
                if (n >= k) break;
                head += p;
            }
            return to_double(Rat(1) - head);
        }
        case LifetimeKind::geometric:
            return std::pow(1.0 - to_double(p_), static_cast<double>(k - 1));
        case LifetimeKind::pareto:
            return std::pow(static_cast<double>(k), -gamma_);
        case LifetimeKind::dirac:
            return k <= point_ ? 1.0 : 0.0;
        case LifetimeKind::st_petersburg:
            return std::ldexp(1.0, -static_cast<int>(std::bit_width(
                                        static_cast<unsigned long long>(k - 1))));
    }
    return 0.0;
}

Rat LifetimeDist::tail_exact(i64 k) const {
    if (k <= 1) return 1;
    switch (kind_) {
        case LifetimeKind::explicit_probs: {
            Rat head = 0;
            for (const auto& [n, p] : probs_) {
                if (n >= k) break;
                head += p;
            }
            return Rat(1) - head;
        }
        case LifetimeKind::geometric:
            return rat_pow(1 - p_, k - 1);
        case LifetimeKind::pareto:
            throw DomainError("pareto lifetimes have no exact rational form");
        case LifetimeKind::dirac:
            return k <= point_ ? 1 : 0;
        case LifetimeKind::st_petersburg:
            return pow2_inv(std::bit_width(static_cast<unsigned long long>(k - 1)));
    }
    return 0;
}

bool LifetimeDist::finite_support() const {
    return kind_ == LifetimeKind::explicit_probs || kind_ == LifetimeKind::dirac ||
           (kind_ == LifetimeKind::geometric && p_ == 1);
}

i64 LifetimeDist::support_max() const {
    switch (kind_) {
        case LifetimeKind::explicit_probs: return probs_.back().first;
        case LifetimeKind::dirac: return point_;
        case LifetimeKind::geometric: return p_ == 1 ? 1 : kUnbounded;
        default: return kUnbounded;
    }
}

i64 LifetimeDist::period() const {
    switch (kind_) {
        case LifetimeKind::explicit_probs: {
            i64 g = 0;
            for (const auto& [n, p] : probs_) g = std::gcd(g, n);
            return g;
        }
        case LifetimeKind::dirac: return point_;
        case LifetimeKind::geometric:
        case LifetimeKind::pareto:
        case LifetimeKind::st_petersburg: return 1;
    }
    return 1;
}

std::string LifetimeDist::describe() const {
    switch (kind_) {
        case LifetimeKind::explicit_probs:
            return "explicit(" + std::to_string(probs_.size()) + " atoms)";
        case LifetimeKind::geometric: return "geometric(" + rat_str(p_) + ")";
        case LifetimeKind::pareto: return "pareto(" + fmt_double(gamma_) + ")";
        case LifetimeKind::dirac: return "dirac(" + std::to_string(point_) + ")";
        case LifetimeKind::st_petersburg: return "st-petersburg";
    }
    return "";
}

namespace {

// Support atoms of f below len as (position, mass) pairs, for sparse laws.
std::vector<std::pair<i64, double>> sparse_support(const LifetimeDist& f, i64 len) {
    std::vector<std::pair<i64, double>> supp;
    switch (f.kind()) {
        case LifetimeKind::explicit_probs:
            for (const auto& [n, p] : f.probs()) {
                if (n >= len) break;
                supp.emplace_back(n, to_double(p));
            }
            break;
        case LifetimeKind::dirac:
            if (f.dirac_point() < len) supp.emplace_back(f.dirac_point(), 1.0);
            break;
        case LifetimeKind::st_petersburg:
            for (i64 m = 1; m < len; m *= 2) supp.emplace_back(m, f.prob(m));
            break;
        default:
            throw DomainError("dense lifetime in sparse renewal path");
    }
    return supp;
}

}  // namespace

std::vector<double> renewal_sequence(const LifetimeDist& f, i64 len) {
    if (len < 1) throw ConfigError("renewal sequence length must be >= 1");
    check_budget(len * static_cast<i64>(sizeof(double)) * 2, "renewal sequence");
    std::vector<double> u(static_cast<size_t>(len), 0.0);
    u[0] = 1.0;
    switch (f.kind()) {
        case LifetimeKind::geometric: {
            // s_n = sum_{k=1}^{n} (1-p)^{k-1} u_{n-k} satisfies s_{n+1} = (1-p) s_n + u_n.
            const double p = to_double(f.geom_p());
            double s = 0.0;
            for (i64 n = 1; n < len; ++n) {
                s = (1.0 - p) * s + u[static_cast<size_t>(n - 1)];
                u[static_cast<size_t>(n)] = p * s;
            }
            return u;
        }
        case LifetimeKind::pareto: {
            std::vector<double> fv(static_cast<size_t>(len), 0.0);
            for (i64 n = 1; n < len; ++n) fv[static_cast<size_t>(n)] = f.prob(n);
            for (i64 n = 1; n < len; ++n) {
                double acc = 0.0;
                const double* fp = fv.data();
                const double* up = u.data();
                for (i64 k = 1; k <= n; ++k) acc += fp[k] * up[n - k];
                u[static_cast<size_t>(n)] = acc;
            }
            return u;
        }
        default: {
            const auto supp = sparse_support(f, len);
            for (i64 n = 1; n < len; ++n) {
                double acc = 0.0;
                for (const auto& [m, p] : supp) {
                    if (m > n) break;
                    acc += p * u[static_cast<size_t>(n - m)];
                }
                u[static_cast<size_t>(n)] = acc;
            }
            return u;
        }
    }
}

std::vector<Rat> renewal_sequence_exact(const LifetimeDist& f, i64 len) {
    if (len < 1) throw ConfigError("renewal sequence length must be >= 1");
    if (!f.exact_capable()) throw DomainError("lifetime has no exact rational form");
    std::vector<Rat> u(static_cast<size_t>(len), Rat(0));
    u[0] = 1;
    if (f.kind() == LifetimeKind::geometric) {
        const Rat q = 1 - f.geom_p();
        Rat s = 0;
        for (i64 n = 1; n < len; ++n) {
            s = q * s + u[static_cast<size_t>(n - 1)];
            u[static_cast<size_t>(n)] = f.geom_p() * s;
        }
        return u;
    }
    std::vector<std::pair<i64, Rat>> supp;
    if (f.kind() == LifetimeKind::st_petersburg) {
        for (i64 m = 1; m < len; m *= 2) supp.emplace_back(m, f.prob_exact(m));
    } else {
        for (const auto& [n, p] : f.probs()) {
            if (n < len) supp.emplace_back(n, p);
        }
        if (f.kind() == LifetimeKind::dirac && f.dirac_point() < len) {
            supp.emplace_back(f.dirac_point(), 1);
        }
    }
    for (i64 n = 1; n < len; ++n) {
        Rat acc = 0;
        for (const auto& [m, p] : supp) {
            if (m > n) break;
            acc += p * u[static_cast<size_t>(n - m)];
        }
        u[static_cast<size_t>(n)] = acc;
    }
    return u;
}

std::vector<double> lifetime_from_renewal(const std::vector<double>& u, double tol) {
    if (u.empty() || std::fabs(u[0] - 1.0) > tol) {
        throw NotRenewal("a renewal sequence starts with u_0 = 1");
    }
    const auto len = static_cast<i64>(u.size());
    std::vector<double> fv(u.size(), 0.0);
    double mass = 0.0;
    for (i64 n = 1; n < len; ++n) {
        double acc = u[static_cast<size_t>(n)];
        for (i64 k = 1; k < n; ++k) acc -= fv[static_cast<size_t>(k)] * u[static_cast<size_t>(n - k)];
        if (acc < -tol) {
            throw NotRenewal("recovered f_" + std::to_string(n) + " = " + fmt_double(acc) +
                             " is negative");
        }
        fv[static_cast<size_t>(n)] = acc;
        mass += acc;
        if (mass > 1.0 + tol) {
            throw NotRenewal("recovered lifetime mass exceeds 1 by step " + std::to_string(n));
        }
    }
    return fv;
}

std::vector<Rat> lifetime_from_renewal_exact(const std::vector<Rat>& u) {
    if (u.empty() || u[0] != 1) throw NotRenewal("a renewal sequence starts with u_0 = 1");
    const auto len = static_cast<i64>(u.size());
    std::vector<Rat> fv(u.size(), Rat(0));
    Rat mass = 0;
    for (i64 n = 1; n < len; ++n) {
        Rat acc = u[static_cast<size_t>(n)];
        for (i64 k = 1; k < n; ++k) acc -= fv[static_cast<size_t>(k)] * u[static_cast<size_t>(n - k)];
        if (acc < 0) throw NotRenewal("recovered f_" + std::to_string(n) + " is negative");
        fv[static_cast<size_t>(n)] = acc;
        mass += acc;
        if (mass > 1) throw NotRenewal("recovered lifetime mass exceeds 1 by step " + std::to_string(n));
    }
    return fv;
}

bool is_renewal(const std::vector<double>& u, double tol) {
    try {
        lifetime_from_renewal(u, tol);
        return true;
    } catch (const NotRenewal&) {
        return false;
    }
}

i64 aperiodicity_gcd(const std::vector<double>& f, double tol) {
    i64 g = 0;
    for (i64 n = 1; n < static_cast<i64>(f.size()); ++n) {
        if (f[static_cast<size_t>(n)] > tol) g = std::gcd(g, n);
    }
    if (g == 0) throw Inconclusive("no visible lifetime support below the horizon");
    return g;
}

double truncated_mean(const LifetimeDist& f, i64 n) {
    NeumaierSum acc;
    for (i64 k = 1; k <= n; ++k) acc.add(f.tail(k));
    return acc.value();
}

double truncated_second_moment(const LifetimeDist& f, i64 t) {
    NeumaierSum acc;
    for (i64 n = 1; n <= t; ++n) {
        const double p = f.prob(n);
        if (p > 0.0) acc.add(static_cast<double>(n) * static_cast<double>(n) * p);
    }
    return acc.value();
}

Profile met_transform(const std::vector<double>& u, double theta, const Grid& grid) {
    if (!std::isfinite(theta)) throw ConfigError("theta must be finite");
    const Grid g = sorted_grid(grid);
    if (g.back() > static_cast<i64>(u.size())) throw HorizonError("sequence shorter than grid");
    const std::complex<double> rot = std::polar(1.0, 2.0 * M_PI * theta);
    std::complex<double> z = 1.0;
    NeumaierSum re;
    NeumaierSum im;
    NeumaierSum au;
    Profile out;
    out.reserve(g.size());
    i64 k = 0;
    for (i64 n : g) {
        for (; k < n; ++k) {
            const double uk = u[static_cast<size_t>(k)];
            re.add(uk * z.real());
            im.add(uk * z.imag());
            au.add(uk);
            z *= rot;
            if ((k & 1023) == 1023) z /= std::abs(z);
        }
        if (au.value() <= 0.0) throw DegenerateWeightError("weight has no mass on [0, n)");
        out.push_back({n, std::hypot(re.value(), im.value()) / au.value()});
    }
    return out;
}

Surrogate srlp_surrogate(const std::vector<double>& u) {
    Surrogate s;
    s.v.reserve(u.size());
    for (i64 n = 0; n < static_cast<i64>(u.size()); ++n) {
        const double un = u[static_cast<size_t>(n)];
        if (un < 0.0 || !std::isfinite(un)) {
            throw DegenerateWeightError("surrogate input must be nonnegative and finite");
        }
        if (un > 0.0) {
            s.v.push_back(un);
        } else {
            // Exponent floor keeps the stand-in normal for very late zeros.
            s.v.push_back(std::ldexp(1.0, -static_cast<int>(std::min<i64>(n, 1022))));
            s.substituted = true;
        }
    }
    return s;
}

KaluzaReport kaluza_check(const std::vector<double>& u, double tol) {
    KaluzaReport rep;
    if (u.size() < 3) return rep;
    for (const double x : u) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw DegenerateWeightError("ratio check needs strictly positive entries");
        }
    }
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (i64 k = 1; k + 1 < static_cast<i64>(u.size()); ++k) {
        const double mid = u[static_cast<size_t>(k)];
        const double margin = u[static_cast<size_t>(k + 1)] * u[static_cast<size_t>(k - 1)] - mid * mid;
        rep.min_margin = std::min(rep.min_margin, margin);
        if (margin < -tol * mid * mid && rep.holds) {
            rep.holds = false;
            rep.first_violation = k;
        }
    }
    return rep;
}

DysonResult dyson_construct(const LifetimeDist& f, double eps, double k, i64 max_search) {
    if (!(eps > 0.0) || eps >= 1.0) throw ConfigError("eps must lie in (0, 1)");
    if (!(k >= 1.0) || !std::isfinite(k)) throw ConfigError("ratio factor k must be >= 1");

    DysonResult res;
    res.perturbed = f.finite_support();
    const bool exact = f.exact_capable();
    const Rat delta = rat_from_double(eps) / 4;
    const Rat f1 = exact ? f.prob_exact(1) : rat_from_double(f.prob(1));

    // Mass of the perturbed law h at n, and of its tail [n, inf).
    auto h_at = [&](i64 n) -> Rat {
        if (!res.perturbed) return exact ? f.prob_exact(n) : rat_from_double(f.prob(n));
        if (f1 == 1) return n == 1 ? Rat(1 - delta) : Rat(delta * pow2_inv(n - 1));
        if (n == 1) return f1;
        return (1 - delta) * f.prob_exact(n) + delta * (1 - f1) * pow2_inv(n - 1);
    };
    auto h_tail = [&](i64 n) -> double {
        if (!res.perturbed) return f.tail(n);
        if (f1 == 1) return n <= 1 ? 1.0 : to_double(delta * pow2_inv(n - 2));
        return to_double((1 - delta) * f.tail_exact(n) + delta * (1 - f1) * pow2_inv(n - 2));
    };

    i64 ell = std::max<i64>(1, static_cast<i64>(std::floor(k)) + 1);
    while (!(h_tail(ell + 1) < eps)) {
        if (++ell > max_search) throw HorizonError("no truncation point within the search bound");
    }
    res.ell = ell;

    std::vector<Rat> head(static_cast<size_t>(ell) + 1, Rat(0));
    Rat H = 0;
    for (i64 n = 1; n <= ell; ++n) {
        head[static_cast<size_t>(n)] = h_at(n);
        H += head[static_cast<size_t>(n)];
    }
    res.head_mass = H;
    res.gap = 1 - H;
    if (res.gap <= 0) throw HorizonError("truncated law already carries full mass");
    const double gap = to_double(res.gap);

    std::vector<double> hd(static_cast<size_t>(ell) + 1, 0.0);
    for (i64 n = 1; n <= ell; ++n) hd[static_cast<size_t>(n)] = to_double(head[static_cast<size_t>(n)]);
    std::vector<double>& v = res.v;
    v.assign(1, 1.0);
    const double thresh = gap / k;
    i64 L = -1;
    for (i64 n = 1; n <= max_search; ++n) {
        double acc = 0.0;
        for (i64 j = 1; j <= std::min(n, ell); ++j) {
            acc += hd[static_cast<size_t>(j)] * v[static_cast<size_t>(n - j)];
        }
        v.push_back(acc);
        check_budget(static_cast<i64>(v.capacity()) * static_cast<i64>(sizeof(double)),
                     "defective renewal search");
        if (n > ell && v[static_cast<size_t>(n - 1)] < thresh) {
            L = n;
            break;
        }
    }
    if (L < 0) throw HorizonError("no atom position within the search bound");
    res.L = L;
    v.resize(static_cast<size_t>(L));
    res.v_at_switch = v[static_cast<size_t>(L - 1)];
    res.ratio_bound = gap / res.v_at_switch;

    std::vector<std::pair<i64, Rat>> gp;
    for (i64 n = 1; n <= ell; ++n) {
        if (head[static_cast<size_t>(n)] > 0) gp.emplace_back(n, head[static_cast<size_t>(n)]);
    }
    gp.emplace_back(L, res.gap);
    res.g = LifetimeDist::from_probs(std::move(gp));

    // d(f, g) = |1/f_1 - 1/g_1| + sum_n |f_n - g_n|, tails folded in exactly.
    auto f_at = [&](i64 n) -> Rat { return exact ? f.prob_exact(n) : rat_from_double(f.prob(n)); };
    const Rat g1 = res.g.prob_exact(1);
    if (f1 == 0 || g1 == 0) throw DomainError("distance needs mass at 1");
    Rat dist = abs(Rat(1) / f1 - Rat(1) / g1);
    for (i64 n = 1; n <= ell; ++n) dist += abs(f_at(n) - head[static_cast<size_t>(n)]);
    const Rat f_tail = exact ? f.tail_exact(ell + 1) : rat_from_double(f.tail(ell + 1));
    const Rat fL = L > ell ? f_at(L) : Rat(0);
    dist += f_tail - fL;
    dist += abs(fL - res.gap);
    res.distance = dist;
    return res;
}

}  // namespace ratmix::renewal
