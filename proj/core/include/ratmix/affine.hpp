#pragma once

#include <utility>
#include <vector>

#include "ratmix/common.hpp"
#include "ratmix/markov.hpp"

namespace ratmix::affine {

/**
 * Piecewise-affine realization of a chain on the half-line: state s owns the
 * cell [C_{s-1}, C_s) of length pi_s, the cell splits into slots of width
 * pi_s p_{s,t} listed by ascending target, and the slot (s, t) maps affinely
 * onto the whole cell of t with slope pi_t / (pi_s p_{s,t}). The square
 * extension keeps a fiber coordinate y in [0, 1): the image fiber of target t
 * splits by ascending source into slots of height pi_s p_{s,t} / pi_t, so the
 * two slot slopes multiply to one exactly.
 *
 * States above the cutoff are not represented; x-slots and fiber slots
 * pointing there are dropped and their widths are reported as dropped mass.
 */
struct Slot {
    i64 source = 0;
    i64 target = 0;
    double x_lo = 0;     // absolute coordinate of the slot's left end
    double width = 0;    // pi_s p_{s,t}
    double slope = 0;    // pi_t / (pi_s p_{s,t})
    double y_lo = 0;     // fiber offset of this source inside target's fiber
    double y_width = 0;  // pi_s p_{s,t} / pi_t
};

struct SlotExact {
    i64 source = 0;
    i64 target = 0;
    Rat x_lo = 0;
    Rat width = 0;
    Rat slope = 0;
    Rat y_lo = 0;
    Rat y_width = 0;
};

class AffineModel {
public:
    static AffineModel build(const markov::Chain& c, i64 cutoff);

    i64 cutoff() const { return cutoff_; }
    const markov::Chain& chain() const { return chain_; }
    bool exact_capable() const { return !cells_q_.empty(); }
    double total_mass() const;
    double cell_lo(i64 s) const;
    double cell_len(i64 s) const;
    Rat cell_lo_exact(i64 s) const;
    Rat cell_len_exact(i64 s) const;
    i64 state_of(double x) const;
    const std::vector<Slot>& slots_of(i64 s) const;
    const std::vector<Slot>& fiber_of(i64 t) const;
    const std::vector<SlotExact>& slots_of_exact(i64 s) const;
    const std::vector<SlotExact>& fiber_of_exact(i64 t) const;
    double dropped_width(i64 s) const;
    double dropped_fiber(i64 t) const;

    double step(double x) const;
    std::pair<double, double> step_xy(double x, double y) const;
    Rat step_exact(const Rat& x) const;
    std::pair<Rat, Rat> step_xy_exact(const Rat& x, const Rat& y) const;
    double slope_at(double x) const;

    struct OrbitPoint {
        i64 step = 0;
        double x = 0;
        double y = 0;
        i64 state = 0;
    };
    struct Orbit {
        std::vector<OrbitPoint> points;
        bool escaped = false;  // orbit hit a dropped slot and stopped early
    };
    Orbit orbit(double x, double y, i64 n) const;

    /** lambda(tau^{-1}[a, b)) over kept slots; [a, b) must lie inside one cell. */
    double pullback_measure(double a, double b) const;
    Rat pullback_measure_exact(const Rat& a, const Rat& b) const;

private:
    markov::Chain chain_ = markov::Chain::reflecting();
    i64 cutoff_ = 0;
    std::vector<double> cumul_;                    // cumul_[s] = sum_{r<=s} pi_r
    std::vector<std::vector<Slot>> cells_;         // per state, ascending target
    std::vector<std::vector<Slot>> fibers_;        // per target, ascending source
    std::vector<double> dropped_w_, dropped_f_;
    std::vector<Rat> cumul_q_;
    std::vector<std::vector<SlotExact>> cells_q_;
    std::vector<std::vector<SlotExact>> fibers_q_;
    std::vector<Rat> dropped_w_q_, dropped_f_q_;

    const Slot& slot_at(double x) const;
    void check_state(i64 s) const;
};

}  // namespace ratmix::affine
