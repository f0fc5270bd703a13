#include "ratmix/markov.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <type_traits>

namespace ratmix::markov {

using renewal::LifetimeDist;
using renewal::LifetimeKind;

Chain Chain::renewal_shift(LifetimeDist f) {
    Chain c;
    c.kind_ = ChainKind::renewal_shift;
    c.f_ = std::move(f);
    return c;
}

Chain Chain::reflecting() {
    Chain c;
    c.kind_ = ChainKind::reflecting;
    return c;
}

bool Chain::exact_capable() const {
    return kind_ == ChainKind::reflecting || f_.exact_capable();
}

const LifetimeDist& Chain::lifetime() const {
    if (kind_ != ChainKind::renewal_shift) throw DomainError("chain has no lifetime law");
    return f_;
}

double Chain::p(i64 s, i64 t) const {
    if (s < 1 || t < 1) return 0.0;
    if (kind_ == ChainKind::renewal_shift) {
        if (s == 1) return f_.prob(t);
        return t == s - 1 ? 1.0 : 0.0;
    }
    if (s == 1) return t <= 2 ? 0.5 : 0.0;
    return (t == s - 1 || t == s + 1) ? 0.5 : 0.0;
}

Rat Chain::p_exact(i64 s, i64 t) const {
    if (s < 1 || t < 1) return 0;
    if (kind_ == ChainKind::renewal_shift) {
        if (s == 1) return f_.prob_exact(t);
        return t == s - 1 ? 1 : 0;
    }
    if (s == 1) return t <= 2 ? Rat(1, 2) : Rat(0);
    return (t == s - 1 || t == s + 1) ? Rat(1, 2) : Rat(0);
}

double Chain::pi(i64 s) const {
    if (s < 1) throw DomainError("states are 1-based");
    return kind_ == ChainKind::renewal_shift ? f_.tail(s) : 1.0;
}

Rat Chain::pi_exact(i64 s) const {
    if (s < 1) throw DomainError("states are 1-based");
    return kind_ == ChainKind::renewal_shift ? f_.tail_exact(s) : Rat(1);
}

std::vector<i64> Chain::row_targets(i64 s, i64 max_t) const {
    std::vector<i64> out;
    if (kind_ == ChainKind::reflecting) {
        if (s == 1) {
            for (i64 t : {i64{1}, i64{2}}) {
                if (t <= max_t) out.push_back(t);
            }
        } else {
            if (s - 1 <= max_t) out.push_back(s - 1);
            if (s + 1 <= max_t) out.push_back(s + 1);
        }
        return out;
    }
    if (s >= 2) {
        if (s - 1 <= max_t) out.push_back(s - 1);
        return out;
    }
    switch (f_.kind()) {
        case LifetimeKind::explicit_probs:
            for (const auto& [n, p] : f_.probs()) {
                if (n <= max_t) out.push_back(n);
            }
            break;
        case LifetimeKind::dirac:
            if (f_.dirac_point() <= max_t) out.push_back(f_.dirac_point());
            break;
        case LifetimeKind::st_petersburg:
            for (i64 m = 1; m <= max_t; m *= 2) out.push_back(m);
            break;
        case LifetimeKind::geometric:
            if (f_.geom_p() == 1) {
                if (max_t >= 1) out.push_back(1);
                break;
            }
            [[fallthrough]];
        case LifetimeKind::pareto:
            for (i64 t = 1; t <= max_t; ++t) out.push_back(t);
            break;
    }
    return out;
}

std::string Chain::describe() const {
    return kind_ == ChainKind::renewal_shift ? "renewal-shift[" + f_.describe() + "]"
                                             : "reflecting";
}

i64 evolve_bound(i64 s, i64 n, i64 max_state) {
    return std::max(s, max_state + n);
}

namespace {

template <typename T>
T coeff(const LifetimeDist& f, i64 k) {
    if constexpr (std::is_same_v<T, double>) {
        return f.prob(k);
    } else {
        return f.prob_exact(k);
    }
}

// Row-vector evolution for the renewal shift. The deterministic descent is an
// origin shift, so a step costs one spread of the state-1 mass.
template <typename T>
class ShiftEvo {
public:
    ShiftEvo(const LifetimeDist& f, i64 s, i64 N, i64 B) : B_(B) {
        check_budget((N + B + 2) * static_cast<i64>(sizeof(T)), "chain evolution");
        buf_.assign(static_cast<size_t>(N + B + 2), T(0));
        if (s <= B) buf_[static_cast<size_t>(s)] = T(1);
        const bool dense = f.kind() == LifetimeKind::geometric || f.kind() == LifetimeKind::pareto;
        if (dense) {
            dense_.assign(static_cast<size_t>(B) + 1, T(0));
            if (f.kind() == LifetimeKind::geometric) {
                const T p = coeff<T>(f, 1);
                T cur = p;
                T q = T(1) - p;
                for (i64 k = 1; k <= B; ++k) {
                    dense_[static_cast<size_t>(k)] = cur;
                    cur = cur * q;
                }
            } else {
                for (i64 k = 1; k <= B; ++k) dense_[static_cast<size_t>(k)] = coeff<T>(f, k);
            }
        } else {
            switch (f.kind()) {
                case LifetimeKind::explicit_probs:
                    for (const auto& [n, p] : f.probs()) {
                        if (n <= B) sparse_.emplace_back(n, coeff<T>(f, n));
                    }
                    break;
                case LifetimeKind::dirac:
                    if (f.dirac_point() <= B) {
                        sparse_.emplace_back(f.dirac_point(), T(1));
                    }
                    break;
                case LifetimeKind::st_petersburg:
                    for (i64 m = 1; m <= B; m *= 2) sparse_.emplace_back(m, coeff<T>(f, m));
                    break;
                default: break;
            }
        }
    }

    void step() {
        T at1 = buf_[static_cast<size_t>(org_ + 1)];
        buf_[static_cast<size_t>(org_ + 1)] = T(0);
        ++org_;
        if (at1 == T(0)) return;
        if (!dense_.empty()) {
            for (i64 k = 1; k <= B_; ++k) {
                buf_[static_cast<size_t>(org_ + k)] += at1 * dense_[static_cast<size_t>(k)];
            }
        } else {
            for (const auto& [m, p] : sparse_) {
                buf_[static_cast<size_t>(org_ + m)] += at1 * p;
            }
        }
    }

    const T& value(i64 t) const { return buf_[static_cast<size_t>(org_ + t)]; }
    void zero_state(i64 t) { buf_[static_cast<size_t>(org_ + t)] = T(0); }

private:
    std::vector<T> buf_;
    std::vector<std::pair<i64, T>> sparse_;
    std::vector<T> dense_;
    i64 org_ = 0;
    i64 B_ = 0;
};

template <typename T>
class ReflectEvo {
public:
    ReflectEvo(i64 s, i64 B) : B_(B), half_(T(1) / T(2)) {
        check_budget(2 * (B + 2) * static_cast<i64>(sizeof(T)), "chain evolution");
        v_.assign(static_cast<size_t>(B) + 2, T(0));
        w_.assign(static_cast<size_t>(B) + 2, T(0));
        if (s <= B) v_[static_cast<size_t>(s)] = T(1);
    }

    void step() {
        w_[1] = (v_[1] + v_[2]) * half_;
        for (i64 t = 2; t <= B_; ++t) {
            w_[static_cast<size_t>(t)] =
                (v_[static_cast<size_t>(t - 1)] + v_[static_cast<size_t>(t + 1)]) * half_;
        }
        std::swap(v_, w_);
    }

    const T& value(i64 t) const { return v_[static_cast<size_t>(t)]; }
    void zero_state(i64 t) { v_[static_cast<size_t>(t)] = T(0); }

private:
    std::vector<T> v_, w_;
    i64 B_ = 0;
    T half_;
};

template <typename T>
class Evo {
public:
    Evo(const Chain& c, i64 s, i64 N, i64 max_state) {
        if (s < 1) throw DomainError("states are 1-based");
        const i64 B = evolve_bound(s, N, max_state);
        if (c.kind() == ChainKind::renewal_shift) {
            shift_ = std::make_unique<ShiftEvo<T>>(c.lifetime(), s, N, B);
        } else {
            refl_ = std::make_unique<ReflectEvo<T>>(s, B);
        }
    }
    void step() { shift_ ? shift_->step() : refl_->step(); }
    const T& value(i64 t) const { return shift_ ? shift_->value(t) : refl_->value(t); }
    void zero_state(i64 t) { shift_ ? shift_->zero_state(t) : refl_->zero_state(t); }

private:
    std::unique_ptr<ShiftEvo<T>> shift_;
    std::unique_ptr<ReflectEvo<T>> refl_;
};

template <typename T>
std::vector<T> nstep_row_impl(const Chain& c, i64 s, i64 n, i64 max_state) {
    if (n < 0 || max_state < 1) throw ConfigError("need n >= 0 and max_state >= 1");
    Evo<T> evo(c, s, n, max_state);
    for (i64 m = 0; m < n; ++m) evo.step();
    std::vector<T> row(static_cast<size_t>(max_state) + 1, T(0));
    for (i64 t = 1; t <= max_state; ++t) row[static_cast<size_t>(t)] = evo.value(t);
    return row;
}

template <typename T>
std::vector<std::vector<T>> taboo_rows_impl(const Chain& c, i64 s, i64 N, i64 max_state) {
    if (N < 1 || max_state < 1) throw ConfigError("need N >= 1 and max_state >= 1");
    check_budget(N * (max_state + 1) * static_cast<i64>(sizeof(T)), "taboo rows");
    Evo<T> evo(c, s, N, std::max(max_state, s));
    std::vector<std::vector<T>> out(static_cast<size_t>(N) + 1);
    for (i64 m = 1; m <= N; ++m) {
        evo.step();
        auto& row = out[static_cast<size_t>(m)];
        row.assign(static_cast<size_t>(max_state) + 1, T(0));
        for (i64 t = 1; t <= max_state; ++t) row[static_cast<size_t>(t)] = evo.value(t);
        evo.zero_state(s);
    }
    return out;
}

// Single n-step value p^{(d)}_{s,t}, used by the overlap branch of correlations.
template <typename T>
T nstep_value(const Chain& c, i64 s, i64 d, i64 t) {
    Evo<T> evo(c, s, d, t);
    for (i64 m = 0; m < d; ++m) evo.step();
    return evo.value(t);
}

template <typename T>
T p_entry(const Chain& c, i64 s, i64 t) {
    if constexpr (std::is_same_v<T, double>) {
        return c.p(s, t);
    } else {
        return c.p_exact(s, t);
    }
}

template <typename T>
T pi_entry(const Chain& c, i64 s) {
    if constexpr (std::is_same_v<T, double>) {
        return c.pi(s);
    } else {
        return c.pi_exact(s);
    }
}

void validate_cylinder(const Cylinder& A) {
    if (A.symbols.empty()) throw ConfigError("cylinder needs at least one symbol");
    if (A.base < 0) throw ConfigError("cylinder base must be >= 0");
    for (i64 s : A.symbols) {
        if (s < 1) throw ConfigError("cylinder symbols are 1-based states");
    }
}

template <typename T>
T cyl_measure_impl(const Chain& c, const Cylinder& A) {
    validate_cylinder(A);
    T m = pi_entry<T>(c, A.symbols[0]);
    for (size_t j = 0; j + 1 < A.symbols.size(); ++j) {
        m = m * p_entry<T>(c, A.symbols[j], A.symbols[j + 1]);
    }
    return m;
}

template <typename T>
T correlation_impl(const Chain& c, const Cylinder& A, const Cylinder& B, i64 n) {
    validate_cylinder(A);
    validate_cylinder(B);
    if (n < 0) throw ConfigError("correlation lag must be >= 0");
    std::map<i64, i64> pinned;
    auto pin = [&](i64 coord, i64 sym) -> bool {
        auto [it, fresh] = pinned.emplace(coord, sym);
        return fresh || it->second == sym;
    };
    for (size_t j = 0; j < A.symbols.size(); ++j) {
        if (!pin(A.base + static_cast<i64>(j), A.symbols[j])) return T(0);
    }
    for (size_t j = 0; j < B.symbols.size(); ++j) {
        if (!pin(n + B.base + static_cast<i64>(j), B.symbols[j])) return T(0);
    }
    auto it = pinned.begin();
    T m = pi_entry<T>(c, it->second);
    for (auto prev = it++; it != pinned.end(); prev = it++) {
        if (m == T(0)) return T(0);
        const i64 d = it->first - prev->first;
        if (d == 1) {
            m = m * p_entry<T>(c, prev->second, it->second);
        } else {
            m = m * nstep_value<T>(c, prev->second, d, it->second);
        }
    }
    return m;
}

}  // namespace

TrackResult evolve_track(const Chain& c, i64 s, const std::vector<i64>& targets, i64 N) {
    if (targets.empty()) throw ConfigError("need at least one target state");
    if (N < 0) throw ConfigError("need N >= 0");
    i64 max_state = 1;
    for (i64 t : targets) {
        if (t < 1) throw DomainError("states are 1-based");
        max_state = std::max(max_state, t);
    }
    check_budget(static_cast<i64>(targets.size()) * (N + 1) * 8, "evolution tracks");
    TrackResult res;
    res.bound = evolve_bound(s, N, max_state);
    res.track.assign(targets.size(), std::vector<double>(static_cast<size_t>(N) + 1, 0.0));
    Evo<double> evo(c, s, N, max_state);
    for (size_t i = 0; i < targets.size(); ++i) res.track[i][0] = targets[i] == s ? 1.0 : 0.0;
    for (i64 m = 1; m <= N; ++m) {
        evo.step();
        for (size_t i = 0; i < targets.size(); ++i) {
            res.track[i][static_cast<size_t>(m)] = evo.value(targets[i]);
        }
    }
    return res;
}

std::vector<double> nstep_row(const Chain& c, i64 s, i64 n, i64 max_state) {
    return nstep_row_impl<double>(c, s, n, max_state);
}

std::vector<Rat> nstep_row_exact(const Chain& c, i64 s, i64 n, i64 max_state) {
    if (!c.exact_capable()) throw DomainError("chain has no exact rational form");
    return nstep_row_impl<Rat>(c, s, n, max_state);
}

std::vector<std::vector<double>> taboo_rows(const Chain& c, i64 s, i64 N, i64 max_state) {
    return taboo_rows_impl<double>(c, s, N, max_state);
}

std::vector<std::vector<Rat>> taboo_rows_exact(const Chain& c, i64 s, i64 N, i64 max_state) {
    if (!c.exact_capable()) throw DomainError("chain has no exact rational form");
    return taboo_rows_impl<Rat>(c, s, N, max_state);
}

std::vector<double> ratio_limit_sequence(const Chain& c, i64 r, i64 t, i64 offset, i64 N) {
    if (N < 1 || offset < 0) throw ConfigError("need N >= 1 and offset >= 0");
    const double pit = c.pi(t);
    if (!(pit > 0.0)) throw DomainError("target state carries no invariant mass");
    const auto occ = evolve_track(c, 1, {1}, N - 1);
    const auto num = evolve_track(c, r, {t}, N - 1 + offset);
    std::vector<double> s(static_cast<size_t>(N), 0.0);
    for (i64 m = 0; m < N; ++m) {
        const double um = occ.track[0][static_cast<size_t>(m)];
        if (um > 0.0) {
            s[static_cast<size_t>(m)] = num.track[0][static_cast<size_t>(m + offset)] / (um * pit);
        }
    }
    return s;
}

double cyl_measure(const Chain& c, const Cylinder& A) {
    return cyl_measure_impl<double>(c, A);
}

Rat cyl_measure_exact(const Chain& c, const Cylinder& A) {
    if (!c.exact_capable()) throw DomainError("chain has no exact rational form");
    return cyl_measure_impl<Rat>(c, A);
}

double correlation(const Chain& c, const Cylinder& A, const Cylinder& B, i64 n) {
    return correlation_impl<double>(c, A, B, n);
}

Rat correlation_exact(const Chain& c, const Cylinder& A, const Cylinder& B, i64 n) {
    if (!c.exact_capable()) throw DomainError("chain has no exact rational form");
    return correlation_impl<Rat>(c, A, B, n);
}

std::vector<double> correlation_sequence(const Chain& c, const Cylinder& A, const Cylinder& B,
                                         i64 N) {
    validate_cylinder(A);
    validate_cylinder(B);
    if (N < 1) throw ConfigError("need N >= 1");
    std::vector<double> out(static_cast<size_t>(N), 0.0);
    const double mA = cyl_measure(c, A);
    if (mA == 0.0) return out;
    double wordB = 1.0;
    for (size_t j = 0; j + 1 < B.symbols.size(); ++j) {
        wordB *= c.p(B.symbols[j], B.symbols[j + 1]);
    }
    // First lag whose pinned coordinates are disjoint with a positive gap.
    const i64 n0 = A.base + static_cast<i64>(A.symbols.size()) - B.base;
    for (i64 n = 0; n < std::min(n0, N); ++n) out[static_cast<size_t>(n)] = correlation(c, A, B, n);
    if (N > std::max<i64>(n0, 0)) {
        const i64 gmax = N - n0;
        const auto tr = evolve_track(c, A.symbols.back(), {B.symbols.front()}, gmax);
        for (i64 n = std::max<i64>(n0, 0); n < N; ++n) {
            out[static_cast<size_t>(n)] = mA * tr.track[0][static_cast<size_t>(n - n0 + 1)] * wordB;
        }
    }
    return out;
}

}  // namespace ratmix::markov
