#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ratmix/affine.hpp"
#include "ratmix/common.hpp"
#include "ratmix/indexsets.hpp"
#include "ratmix/markov.hpp"
#include "ratmix/renewal.hpp"

namespace ratmix::io {

std::string indexset_to_json(const sets::IndexSet& K, i64 upto);
sets::IndexSet indexset_from_json(const std::string& text);
std::string lifetime_to_json(const renewal::LifetimeDist& f);
renewal::LifetimeDist lifetime_from_json(const std::string& text);
std::string chain_to_json(const markov::Chain& c);
markov::Chain chain_from_json(const std::string& text);

/** "name(a,b)" shorthand, e.g. geom(0.5), pareto(0.75), stpete; or a .json path. */
renewal::LifetimeDist lifetime_from_spec(const std::string& spec);
/** "hopf", "renewal-shift:<lifetime shorthand>", or a .json path. */
markov::Chain chain_from_spec(const std::string& spec);
/** "[1,2,1]@3": symbols in brackets, optional @base (default 0). */
markov::Cylinder cylinder_from_spec(const std::string& spec);
/** "dyadic" or "linear:<step>", clipped to [1, N]. */
Grid grid_from_spec(const std::string& spec, i64 N);

/** Stored invocation: {"tool": "mixing", "args": ["--N", "1000", ...]}. */
struct RunSpec {
    std::string tool;
    std::vector<std::string> args;
};
RunSpec run_spec_from_json(const std::string& text);

std::string weights_csv(const std::vector<double>& u);
std::vector<double> weights_from_csv(const std::string& text);
std::string profile_csv(const Profile& p, const std::string& value_name);
/** Rows n,value,ratio with ratio = value / (coef * u_n), 0 where u_n = 0. */
std::string correlation_csv(const std::vector<double>& corr, const std::vector<double>& u,
                            double coef);
std::string orbit_csv(const affine::AffineModel::Orbit& orb);

struct Check {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double tol = 0.0;
};

/**
 * Deterministic JSON report: parameters and CSV blocks keep insertion order,
 * every float goes through one formatter, and spec_hash is the FNV-1a digest
 * of the document rendered without the hash field.
 */
struct Report {
    std::string tool;
    std::string mode = "float";
    i64 horizon = 0;
    double truncation = 0.0;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::pair<std::string, std::string>> blocks;
    std::vector<Check> checks;

    std::string render() const;
    bool all_pass() const;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace ratmix::io
