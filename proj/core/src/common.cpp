#include "ratmix/common.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <thread>

namespace ratmix {

Rat rat_from_double(double x) {
    if (!std::isfinite(x)) throw DomainError("rat_from_double: non-finite value");
    Rat q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

Rat rat_parse(const std::string& s) {
    Rat q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
        throw ConfigError("rat_parse: malformed rational '" + s + "'");
    q.canonicalize();
    if (sgn(q.get_den()) <= 0) throw ConfigError("rat_parse: zero denominator in '" + s + "'");
    return q;
}

std::string rat_str(const Rat& q) {
    return q.get_str();
}

std::vector<i64> dyadic_grid(i64 lo, i64 hi) {
    if (lo < 1 || hi < lo) throw ConfigError("dyadic_grid: need 1 <= lo <= hi");
    std::vector<i64> g;
    i64 n = 1;
    while (n < lo) n *= 2;
    for (; n <= hi; n *= 2) g.push_back(n);
    if (g.empty() || g.back() != hi) g.push_back(hi);
    return g;
}

std::vector<i64> linear_grid(i64 lo, i64 hi, i64 step) {
    if (lo < 1 || hi < lo || step < 1) throw ConfigError("linear_grid: need 1 <= lo <= hi, step >= 1");
    std::vector<i64> g;
    for (i64 n = lo; n <= hi; n += step) g.push_back(n);
    return g;
}

i64 budget_bytes() {
    static const i64 cached = [] {
        const char* env = std::getenv("RATMIX_BUDGET_MB");
        i64 mb = 2048;
        if (env && *env) {
            char* end = nullptr;
            long long v = std::strtoll(env, &end, 10);
            if (end == env || *end != '\0' || v <= 0)
                throw ConfigError("RATMIX_BUDGET_MB: expected a positive integer");
            mb = static_cast<i64>(v);
        }
        return mb * 1024 * 1024;
    }();
    return cached;
}

void check_budget(i64 want_bytes, const char* where) {
    if (want_bytes > budget_bytes())
        throw BudgetError(std::string(where) + ": needs " + std::to_string(want_bytes) +
                          " bytes, budget is " + std::to_string(budget_bytes()));
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string fmt_double(double x) {
    // %.17g round-trips every double and is byte-stable across runs.
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void parallel_for(i64 n, i64 jobs, const std::function<void(i64)>& fn) {
    if (n <= 0) return;
    jobs = std::max<i64>(1, std::min(jobs, n));
    if (jobs == 1) {
        for (i64 i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(static_cast<size_t>(jobs));
    const i64 chunk = (n + jobs - 1) / jobs;
    for (i64 j = 0; j < jobs; ++j) {
        const i64 lo = j * chunk;
        const i64 hi = std::min(n, lo + chunk);
        pool.emplace_back([&, j, lo, hi] {
            try {
                for (i64 i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errs[static_cast<size_t>(j)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errs) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace ratmix
