#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace ratmix {

using i64 = std::int64_t;

// Exact rational scalar used by the rational evaluation mode.
using Rat = mpq_class;

enum class Mode { Float, Rational };

inline constexpr i64 kUnbounded = std::numeric_limits<i64>::max() / 4;

// Error taxonomy. One type per failure class so callers can catch precisely;
// every message names the operation that raised it.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct HorizonError : Error { using Error::Error; };          // index beyond materialized range
struct DegenerateWeightError : Error { using Error::Error; }; // negative entry or vanishing partial sum
struct DegenerateSetError : Error { using Error::Error; };    // malformed interval data
struct NestingError : Error { using Error::Error; };          // chain of sets not increasing
struct InvalidDistribution : Error { using Error::Error; };   // lifetime mass > 1 or negative term
struct NotRenewal : Error { using Error::Error; };            // inversion produced an invalid lifetime
struct Inconclusive : Error { using Error::Error; };          // not decidable at this horizon
struct BudgetError : Error { using Error::Error; };           // memory budget exceeded
struct DomainError : Error { using Error::Error; };           // point outside the map's domain
struct ConfigError : Error { using Error::Error; };           // unknown name / bad parameters

inline double to_double(const Rat& q) { return q.get_d(); }

// Exact conversion: every finite double is a dyadic rational.
Rat rat_from_double(double x);

// Parses "p/q" or "p"; throws ConfigError on malformed input.
Rat rat_parse(const std::string& s);
std::string rat_str(const Rat& q);

// Neumaier variant of compensated summation. Terms are fed in ascending index
// order; the result does not depend on thread count because accumulation is
// sequential by construction.
struct NeumaierSum {
    double s = 0.0;
    double c = 0.0;
    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

// Evaluation grids. Dyadic: 1, 2, 4, ... capped at hi (hi appended if not a
// power of two). Linear: lo, lo+step, ..., <= hi.
using Grid = std::vector<i64>;
Grid dyadic_grid(i64 lo, i64 hi);
Grid linear_grid(i64 lo, i64 hi, i64 step);

// A sampled diagnostic sequence: value at each grid index n.
struct ProfilePoint {
    i64 n;
    double value;
};
using Profile = std::vector<ProfilePoint>;

// Memory budget for sparse supports, from RATMIX_BUDGET_MB (default 2048).
i64 budget_bytes();
void check_budget(i64 want_bytes, const char* where);

// FNV-1a, used to stamp reports with a stable hash of their resolved inputs.
std::uint64_t fnv1a(const std::string& s);
std::string hash_hex(std::uint64_t h);

// Shortest-deterministic double formatting shared by all serializers.
std::string fmt_double(double x);

// Runs fn(0..n-1) on up to `jobs` threads in contiguous chunks. Each index
// owns its output slot, so results do not depend on the thread count.
void parallel_for(i64 n, i64 jobs, const std::function<void(i64)>& fn);

}  // namespace ratmix
