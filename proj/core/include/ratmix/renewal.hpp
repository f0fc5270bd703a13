#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ratmix/common.hpp"

namespace ratmix::renewal {

enum class LifetimeKind { explicit_probs, geometric, pareto, dirac, st_petersburg };

/**
 * Proper probability distribution on {1, 2, ...} used as a return-time law.
 *
 * Families keep closed-form point masses and tails; explicit distributions
 * hold rational atoms and must sum to one. Exact queries are available
 * whenever every atom is rational (everything except pareto).
 */
class LifetimeDist {
public:
    static LifetimeDist from_probs(std::vector<std::pair<i64, Rat>> probs);
    static LifetimeDist geometric(const Rat& p);
    static LifetimeDist pareto(double gamma);  // f_n = n^-gamma - (n+1)^-gamma
    static LifetimeDist dirac(i64 k);
    static LifetimeDist st_petersburg();  // f_{2^j} = 2^{-(j+1)}, j >= 0
    static LifetimeDist family(const std::string& name, const std::vector<double>& params);

    double prob(i64 n) const;      // f_n; zero for n < 1
    Rat prob_exact(i64 n) const;   // throws DomainError when no exact form exists
    double tail(i64 k) const;      // f([k, inf)); one for k <= 1
    Rat tail_exact(i64 k) const;
    bool exact_capable() const { return kind_ != LifetimeKind::pareto; }
    bool finite_support() const;
    i64 support_max() const;  // kUnbounded when infinite
    i64 period() const;       // gcd of the support
    LifetimeKind kind() const { return kind_; }
    const std::vector<std::pair<i64, Rat>>& probs() const { return probs_; }
    double gamma() const { return gamma_; }
    const Rat& geom_p() const { return p_; }
    i64 dirac_point() const { return point_; }
    std::string describe() const;

private:
    LifetimeKind kind_ = LifetimeKind::dirac;
    std::vector<std::pair<i64, Rat>> probs_;  // sorted by n, positive, explicit only
    Rat p_ = 0;                               // geometric
    double gamma_ = 0.0;                      // pareto
    i64 point_ = 1;                           // dirac
};

/** u_0 = 1, u_n = sum_{k=1}^{n} f_k u_{n-k}; returns u_0 .. u_{len-1}. */
std::vector<double> renewal_sequence(const LifetimeDist& f, i64 len);
std::vector<Rat> renewal_sequence_exact(const LifetimeDist& f, i64 len);

/**
 * Inverts the recursion: f_n = u_n - sum_{k=1}^{n-1} f_k u_{n-k}.
 * Requires u_0 = 1 and throws NotRenewal when some recovered f_n is negative
 * beyond tolerance; index 0 of the result is unused and set to zero.
 */
std::vector<double> lifetime_from_renewal(const std::vector<double>& u, double tol = 1e-9);
std::vector<Rat> lifetime_from_renewal_exact(const std::vector<Rat>& u);
bool is_renewal(const std::vector<double>& u, double tol = 1e-9);

/**
 * gcd of {n >= 1 : f[n] > tol} for a recovered lifetime vector indexed from 0.
 * Throws Inconclusive when no positive mass is visible.
 */
i64 aperiodicity_gcd(const std::vector<double>& f, double tol = 0.0);

/** L(n) = sum_{k=1}^{n} f([k, inf)). */
double truncated_mean(const LifetimeDist& f, i64 n);
/** V(t) = sum_{n<=t} n^2 f_n. */
double truncated_second_moment(const LifetimeDist& f, i64 t);

/**
 * |T_n| with T_n = (1/a_u(n)) sum_{k<n} u_k e^{2 pi i k theta} over the grid.
 * The rotation is chained and renormalized periodically.
 */
Profile met_transform(const std::vector<double>& u, double theta, const Grid& grid);

/** v_n = u_n where positive, else 2^{-n} (floored to stay normal); flagged. */
struct Surrogate {
    std::vector<double> v;
    bool substituted = false;
};
Surrogate srlp_surrogate(const std::vector<double>& u);

/** Ratio monotonicity check: u_{k+1}/u_k nondecreasing in k. */
struct KaluzaReport {
    bool holds = true;
    i64 first_violation = -1;  // index k with u_k^2 > u_{k+1} u_{k-1}
    double min_margin = 0.0;   // smallest u_{k+1} u_{k-1} - u_k^2 seen
};
KaluzaReport kaluza_check(const std::vector<double>& u, double tol = 0.0);

/**
 * Truncate-and-reseed construction: perturbs f to an infinite-support h when
 * needed, cuts h at the first ell > k with 0 < 1 - H < eps where
 * H = sum_{n<=ell} h_n, runs the defective renewal sequence v of the cut law,
 * and places the missing mass 1 - H at the first L > ell with
 * v_{L-1} < (1 - H) / k. The output law g agrees with h on [1, ell], has an
 * atom at L, and its renewal sequence jumps by the factor ratio_bound there.
 */
struct DysonResult {
    LifetimeDist g;
    i64 ell = 0;
    i64 L = 0;
    Rat head_mass = 0;       // H
    Rat gap = 0;             // 1 - H
    Rat distance = 0;        // |1/f_1 - 1/g_1| + sum |f_n - g_n|
    double v_at_switch = 0;  // v_{L-1}
    double ratio_bound = 0;  // gap / v_{L-1}
    bool perturbed = false;
    std::vector<double> v;   // defective renewal values v_0 .. v_{L-1}
};
DysonResult dyson_construct(const LifetimeDist& f, double eps, double k,
                            i64 max_search = 1 << 22);

}  // namespace ratmix::renewal
