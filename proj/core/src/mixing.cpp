#include "ratmix/mixing.hpp"

#include <algorithm>
#include <cmath>

namespace ratmix::mixing {

using markov::Chain;
using markov::Cylinder;

namespace {

Grid sorted_grid(Grid g) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    if (g.empty() || g.front() < 1) throw ConfigError("grid points must be >= 1");
    return g;
}

void require_cover(const std::vector<double>& u, i64 n) {
    if (static_cast<i64>(u.size()) < n) throw HorizonError("weight vector shorter than horizon");
}

}  // namespace

Profile rwm_defect_profile(const Chain& c, const Cylinder& A, const Cylinder& B,
                           const std::vector<double>& u, const Grid& grid) {
    const Grid g = sorted_grid(grid);
    const i64 N = g.back();
    require_cover(u, N);
    const auto corr = markov::correlation_sequence(c, A, B, N);
    const double coef = markov::cyl_measure(c, A) * markov::cyl_measure(c, B);
    Profile out;
    out.reserve(g.size());
    NeumaierSum num;
    NeumaierSum den;
    i64 k = 0;
    for (i64 n : g) {
        for (; k < n; ++k) {
            const double uk = u[static_cast<size_t>(k)];
            num.add(std::fabs(corr[static_cast<size_t>(k)] - coef * uk));
            den.add(uk);
        }
        if (den.value() <= 0.0) throw DegenerateWeightError("weight has no mass on [0, n)");
        out.push_back({n, num.value() / den.value()});
    }
    return out;
}

double rwm_defect(const Chain& c, const Cylinder& A, const Cylinder& B,
                  const std::vector<double>& u, i64 N) {
    return rwm_defect_profile(c, A, B, u, Grid{N}).front().value;
}

Profile krickeberg_profile(const Chain& c, const Cylinder& A, const Cylinder& B,
                           const std::vector<double>& u, const Grid& grid) {
    const Grid g = sorted_grid(grid);
    const i64 N = g.back();
    require_cover(u, N + 1);
    const auto corr = markov::correlation_sequence(c, A, B, N + 1);
    const double coef = markov::cyl_measure(c, A) * markov::cyl_measure(c, B);
    if (coef <= 0.0) throw DomainError("cylinders must have positive measure");
    Profile out;
    out.reserve(g.size());
    for (i64 n : g) {
        const double un = u[static_cast<size_t>(n)];
        out.push_back({n, un > 0.0 ? corr[static_cast<size_t>(n)] / (coef * un) : 0.0});
    }
    return out;
}

Profile return_sequence_profile(const Chain& c, const std::vector<Cylinder>& parts,
                                const Grid& grid) {
    if (parts.empty()) throw ConfigError("return sequence needs at least one cylinder");
    for (size_t i = 0; i < parts.size(); ++i) {
        for (size_t j = i + 1; j < parts.size(); ++j) {
            if (markov::correlation(c, parts[i], parts[j], 0) != 0.0) {
                throw DomainError("cylinders overlap; the union is not a disjoint partition");
            }
        }
    }
    const Grid g = sorted_grid(grid);
    const i64 N = g.back();
    double mF = 0.0;
    for (const auto& part : parts) mF += markov::cyl_measure(c, part);
    if (!(mF > 0.0)) throw DomainError("union carries no mass");

    check_budget(N * static_cast<i64>(sizeof(double)), "return sequence");
    std::vector<double> total(static_cast<size_t>(N), 0.0);
    for (const auto& ci : parts) {
        for (const auto& cj : parts) {
            const auto corr = markov::correlation_sequence(c, ci, cj, N);
            for (i64 k = 0; k < N; ++k) total[static_cast<size_t>(k)] += corr[static_cast<size_t>(k)];
        }
    }
    Profile out;
    out.reserve(g.size());
    NeumaierSum acc;
    i64 k = 0;
    for (i64 n : g) {
        for (; k < n; ++k) acc.add(total[static_cast<size_t>(k)]);
        out.push_back({n, acc.value() / (mF * mF)});
    }
    return out;
}

Profile gl_ratio_profile(const weights::WeightSeq& u, const Grid& grid) {
    const Grid g = sorted_grid(grid);
    const Profile au = weights::partial_sum_profile(u, g);
    Profile out;
    out.reserve(g.size());
    for (size_t i = 0; i < g.size(); ++i) {
        if (au[i].value <= 0.0) throw DegenerateWeightError("weight has no mass on [0, n)");
        out.push_back({g[i], static_cast<double>(g[i]) * u.at(g[i]) / au[i].value});
    }
    return out;
}

}  // namespace ratmix::mixing
