#include "ratmix/affine.hpp"

#include <algorithm>

namespace ratmix::affine {

AffineModel AffineModel::build(const markov::Chain& c, i64 cutoff) {
    if (cutoff < 2) throw ConfigError("affine model needs cutoff >= 2");
    AffineModel m;
    m.chain_ = c;
    m.cutoff_ = cutoff;
    const bool exact = c.exact_capable();

    m.cumul_.assign(static_cast<size_t>(cutoff) + 1, 0.0);
    if (exact) m.cumul_q_.assign(static_cast<size_t>(cutoff) + 1, Rat(0));
    for (i64 s = 1; s <= cutoff; ++s) {
        const double pis = c.pi(s);
        if (!(pis > 0.0)) {
            throw ConfigError("cutoff exceeds the support of the invariant measure");
        }
        m.cumul_[static_cast<size_t>(s)] = m.cumul_[static_cast<size_t>(s - 1)] + pis;
        if (exact) {
            m.cumul_q_[static_cast<size_t>(s)] =
                m.cumul_q_[static_cast<size_t>(s - 1)] + c.pi_exact(s);
        }
    }

    m.cells_.assign(static_cast<size_t>(cutoff) + 1, {});
    m.fibers_.assign(static_cast<size_t>(cutoff) + 1, {});
    m.dropped_w_.assign(static_cast<size_t>(cutoff) + 1, 0.0);
    m.dropped_f_.assign(static_cast<size_t>(cutoff) + 1, 0.0);
    if (exact) {
        m.cells_q_.assign(static_cast<size_t>(cutoff) + 1, {});
        m.fibers_q_.assign(static_cast<size_t>(cutoff) + 1, {});
        m.dropped_w_q_.assign(static_cast<size_t>(cutoff) + 1, Rat(0));
        m.dropped_f_q_.assign(static_cast<size_t>(cutoff) + 1, Rat(0));
    }

    std::vector<double> fiber_used(static_cast<size_t>(cutoff) + 1, 0.0);
    std::vector<Rat> fiber_used_q(static_cast<size_t>(cutoff) + 1, Rat(0));
    for (i64 s = 1; s <= cutoff; ++s) {
        double x = m.cumul_[static_cast<size_t>(s - 1)];
        Rat xq = exact ? m.cumul_q_[static_cast<size_t>(s - 1)] : Rat(0);
        double used = 0.0;
        Rat used_q = 0;
        for (i64 t : c.row_targets(s, cutoff)) {
            Slot sl;
            sl.source = s;
            sl.target = t;
            sl.x_lo = x;
            sl.width = c.pi(s) * c.p(s, t);
            sl.slope = c.pi(t) / sl.width;
            sl.y_lo = fiber_used[static_cast<size_t>(t)];
            sl.y_width = sl.width / c.pi(t);
            x += sl.width;
            used += sl.width;
            fiber_used[static_cast<size_t>(t)] += sl.y_width;
            m.cells_[static_cast<size_t>(s)].push_back(sl);
            m.fibers_[static_cast<size_t>(t)].push_back(sl);
            if (exact) {
                SlotExact sq;
                sq.source = s;
                sq.target = t;
                sq.x_lo = xq;
                sq.width = c.pi_exact(s) * c.p_exact(s, t);
                sq.slope = c.pi_exact(t) / sq.width;
                sq.y_lo = fiber_used_q[static_cast<size_t>(t)];
                sq.y_width = sq.width / c.pi_exact(t);
                xq += sq.width;
                used_q += sq.width;
                fiber_used_q[static_cast<size_t>(t)] += sq.y_width;
                m.cells_q_[static_cast<size_t>(s)].push_back(sq);
                m.fibers_q_[static_cast<size_t>(t)].push_back(sq);
            }
        }
        m.dropped_w_[static_cast<size_t>(s)] = std::max(0.0, c.pi(s) - used);
        if (exact) m.dropped_w_q_[static_cast<size_t>(s)] = c.pi_exact(s) - used_q;
    }
    for (i64 t = 1; t <= cutoff; ++t) {
        m.dropped_f_[static_cast<size_t>(t)] = std::max(0.0, 1.0 - fiber_used[static_cast<size_t>(t)]);
        if (exact) m.dropped_f_q_[static_cast<size_t>(t)] = Rat(1) - fiber_used_q[static_cast<size_t>(t)];
    }
    return m;
}

void AffineModel::check_state(i64 s) const {
    if (s < 1 || s > cutoff_) throw DomainError("state outside the represented range");
}

double AffineModel::total_mass() const { return cumul_.back(); }
double AffineModel::cell_lo(i64 s) const {
    check_state(s);
    return cumul_[static_cast<size_t>(s - 1)];
}
double AffineModel::cell_len(i64 s) const {
    check_state(s);
    return cumul_[static_cast<size_t>(s)] - cumul_[static_cast<size_t>(s - 1)];
}
Rat AffineModel::cell_lo_exact(i64 s) const {
    check_state(s);
    if (!exact_capable()) throw DomainError("chain has no exact rational form");
    return cumul_q_[static_cast<size_t>(s - 1)];
}
Rat AffineModel::cell_len_exact(i64 s) const {
    check_state(s);
    if (!exact_capable()) throw DomainError("chain has no exact rational form");
    return cumul_q_[static_cast<size_t>(s)] - cumul_q_[static_cast<size_t>(s - 1)];
}

i64 AffineModel::state_of(double x) const {
    if (!(x >= 0.0) || x >= total_mass()) throw DomainError("point outside the model domain");
    const auto it = std::partition_point(cumul_.begin() + 1, cumul_.end(),
                                         [x](double cs) { return cs <= x; });
    return static_cast<i64>(it - cumul_.begin());
}

const std::vector<Slot>& AffineModel::slots_of(i64 s) const {
    check_state(s);
    return cells_[static_cast<size_t>(s)];
}
const std::vector<Slot>& AffineModel::fiber_of(i64 t) const {
    check_state(t);
    return fibers_[static_cast<size_t>(t)];
}
const std::vector<SlotExact>& AffineModel::slots_of_exact(i64 s) const {
    check_state(s);
    if (!exact_capable()) throw DomainError("chain has no exact rational form");
    return cells_q_[static_cast<size_t>(s)];
}
const std::vector<SlotExact>& AffineModel::fiber_of_exact(i64 t) const {
    check_state(t);
    if (!exact_capable()) throw DomainError("chain has no exact rational form");
    return fibers_q_[static_cast<size_t>(t)];
}
double AffineModel::dropped_width(i64 s) const {
    check_state(s);
    return dropped_w_[static_cast<size_t>(s)];
}
double AffineModel::dropped_fiber(i64 t) const {
    check_state(t);
    return dropped_f_[static_cast<size_t>(t)];
}

const Slot& AffineModel::slot_at(double x) const {
    const i64 s = state_of(x);
    const auto& slots = cells_[static_cast<size_t>(s)];
    auto it = std::partition_point(slots.begin(), slots.end(),
                                   [x](const Slot& sl) { return sl.x_lo <= x; });
    if (it == slots.begin()) throw DomainError("point falls in a dropped slot");
    const Slot& sl = *(it - 1);
    if (x >= sl.x_lo + sl.width) throw DomainError("point falls in a dropped slot");
    return sl;
}

double AffineModel::step(double x) const {
    const Slot& sl = slot_at(x);
    return cell_lo(sl.target) + (x - sl.x_lo) * sl.slope;
}

double AffineModel::slope_at(double x) const { return slot_at(x).slope; }

std::pair<double, double> AffineModel::step_xy(double x, double y) const {
    if (!(y >= 0.0) || y >= 1.0) throw DomainError("fiber coordinate outside [0, 1)");
    const Slot& sl = slot_at(x);
    return {cell_lo(sl.target) + (x - sl.x_lo) * sl.slope, sl.y_lo + y * sl.y_width};
}

Rat AffineModel::step_exact(const Rat& x) const {
    return step_xy_exact(x, Rat(0)).first;
}

std::pair<Rat, Rat> AffineModel::step_xy_exact(const Rat& x, const Rat& y) const {
    if (!exact_capable()) throw DomainError("chain has no exact rational form");
    if (x < 0 || x >= cumul_q_.back()) throw DomainError("point outside the model domain");
    if (y < 0 || y >= 1) throw DomainError("fiber coordinate outside [0, 1)");
    i64 s = 1;
    while (cumul_q_[static_cast<size_t>(s)] <= x) ++s;
    const SlotExact* found = nullptr;
    for (const auto& sl : cells_q_[static_cast<size_t>(s)]) {
        if (x >= sl.x_lo && x < sl.x_lo + sl.width) {
            found = &sl;
            break;
        }
    }
    if (found == nullptr) throw DomainError("point falls in a dropped slot");
    const Rat xi = cumul_q_[static_cast<size_t>(found->target - 1)] + (x - found->x_lo) * found->slope;
    return {xi, found->y_lo + y * found->y_width};
}

AffineModel::Orbit AffineModel::orbit(double x, double y, i64 n) const {
    if (n < 0) throw ConfigError("orbit length must be >= 0");
    Orbit orb;
    orb.points.push_back({0, x, y, state_of(x)});
    for (i64 i = 1; i <= n; ++i) {
        try {
            std::tie(x, y) = step_xy(x, y);
        } catch (const DomainError&) {
            orb.escaped = true;
            break;
        }
        orb.points.push_back({i, x, y, state_of(x)});
    }
    return orb;
}

double AffineModel::pullback_measure(double a, double b) const {
    if (!(a < b)) throw ConfigError("need a < b");
    const i64 t = state_of(a);
    if (b > cumul_[static_cast<size_t>(t)]) {
        throw ConfigError("interval must lie inside a single cell");
    }
    double total = 0.0;
    for (const auto& sl : fibers_[static_cast<size_t>(t)]) total += (b - a) * sl.y_width;
    return total;
}

Rat AffineModel::pullback_measure_exact(const Rat& a, const Rat& b) const {
    if (!exact_capable()) throw DomainError("chain has no exact rational form");
    if (!(a < b)) throw ConfigError("need a < b");
    if (a < 0 || b > cumul_q_.back()) throw DomainError("point outside the model domain");
    i64 t = 1;
    while (cumul_q_[static_cast<size_t>(t)] <= a) ++t;
    if (b > cumul_q_[static_cast<size_t>(t)]) {
        throw ConfigError("interval must lie inside a single cell");
    }
    Rat total = 0;
    for (const auto& sl : fibers_q_[static_cast<size_t>(t)]) total += (b - a) * sl.y_width;
    return total;
}

}  // namespace ratmix::affine
