// ratmix: diagnostics for weighted averages, renewal sequences, countable
// Markov shifts, and their affine interval models.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ratmix/affine.hpp"
#include "ratmix/common.hpp"
#include "ratmix/indexsets.hpp"
#include "ratmix/io.hpp"
#include "ratmix/markov.hpp"
#include "ratmix/mixing.hpp"
#include "ratmix/renewal.hpp"
#include "ratmix/weights.hpp"

namespace {

using namespace ratmix;

struct CommonOpts {
    i64 N = 1024;
    std::string grid = "dyadic";
    double tol = 1e-9;
    std::string mode = "float";
    std::string emit = "report";
    i64 jobs = 1;
    std::string out;
};

void add_common(CLI::App* sub, CommonOpts& c) {
    sub->add_option("--N", c.N, "horizon");
    sub->add_option("--grid", c.grid, "dyadic or linear:<step>");
    sub->add_option("--tol", c.tol, "numeric tolerance for invariant checks");
    sub->add_option("--mode", c.mode, "float or rational")
        ->check(CLI::IsMember({"float", "rational"}));
    sub->add_option("--emit", c.emit, "report or plot-data")
        ->check(CLI::IsMember({"report", "plot-data"}));
    sub->add_option("--jobs", c.jobs, "worker threads for independent slices");
    sub->add_option("--out", c.out, "output path (stdout when omitted)");
}

int emit_report(const CommonOpts& c, io::Report& rep) {
    rep.mode = c.mode;
    std::string text;
    if (c.emit == "report") {
        text = rep.render();
    } else {
        for (const auto& [name, csv] : rep.blocks) {
            text += "# block: " + name + "\n";
            text += csv;
        }
    }
    if (c.out.empty()) {
        std::cout << text;
    } else {
        io::write_file(c.out, text);
    }
    return rep.all_pass() ? 0 : 2;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::string tok;
    std::stringstream ss(s);
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    return out;
}

std::vector<i64> parse_ints(const std::string& s) {
    std::vector<i64> out;
    std::string tok;
    std::stringstream ss(s);
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoll(tok));
    }
    return out;
}

std::string track_csv(const std::vector<double>& seq) {
    std::string out = "n,p\n";
    for (size_t n = 0; n < seq.size(); ++n) {
        out += std::to_string(n) + "," + fmt_double(seq[n]) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------- weights --

int tool_weights(const CommonOpts& c, const std::string& family, const std::string& params,
                 const std::string& input) {
    weights::WeightSeq u = input.empty()
                               ? weights::family(family, parse_doubles(params))
                               : weights::WeightSeq(io::weights_from_csv(io::read_file(input)));
    const Grid grid = io::grid_from_spec(c.grid, c.N);
    std::vector<double> vals;
    vals.reserve(static_cast<size_t>(c.N) + 1);
    for (i64 n = 0; n <= c.N; ++n) vals.push_back(u.at(n));

    io::Report rep;
    rep.tool = "weights";
    rep.horizon = c.N;
    rep.params.emplace_back("weight", u.describe());
    const auto fit = weights::rv_index_estimate(u, grid);
    rep.params.emplace_back("rv_index", fmt_double(fit.index));
    rep.params.emplace_back("rv_residual", fmt_double(fit.residual));
    rep.blocks.emplace_back("u", io::weights_csv(vals));
    rep.blocks.emplace_back("partial_sums",
                            io::profile_csv(weights::partial_sum_profile(u, grid), "a_u"));
    rep.blocks.emplace_back("smoothness",
                            io::profile_csv(weights::smoothness_profile(u, grid), "sigma"));
    const double au = weights::partial_sum(u, c.N);
    rep.checks.push_back({"admissible", au > 0.0, au, 0.0});
    return emit_report(c, rep);
}

// ------------------------------------------------------------------- sets --

sets::IndexSet set_from_spec(const std::string& spec) {
    if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") {
        return io::indexset_from_json(io::read_file(spec));
    }
    const auto colon = spec.find(':');
    if (colon == std::string::npos) return sets::IndexSet::from_generator_name(spec);
    return sets::IndexSet::from_generator_name(spec.substr(0, colon),
                                               std::stoll(spec.substr(colon + 1)));
}

int tool_sets(const CommonOpts& c, const std::string& set_spec, const std::string& family,
              const std::string& params) {
    const sets::IndexSet K = set_from_spec(set_spec);
    const weights::WeightSeq u = weights::family(family, parse_doubles(params));
    const Grid grid = io::grid_from_spec(c.grid, c.N);

    io::Report rep;
    rep.tool = "sets";
    rep.horizon = c.N;
    rep.params.emplace_back("set", set_spec);
    rep.params.emplace_back("weight", u.describe());
    rep.blocks.emplace_back("density", io::profile_csv(sets::density_profile(K, grid), "density"));
    rep.blocks.emplace_back("smallness",
                            io::profile_csv(sets::smallness_profile(u, K, grid), "ratio"));

    const double mass = sets::weighted_mass(u, K, c.N);
    const double comass = sets::weighted_mass(u, K.complement_within(c.N - 1), c.N);
    const double au = weights::partial_sum(u, c.N);
    const double gap = std::fabs(mass + comass - au);
    rep.checks.push_back({"mass-additivity", gap <= c.tol * std::max(1.0, au), gap, c.tol});
    return emit_report(c, rep);
}

// ---------------------------------------------------------------- renewal --

int tool_renewal(const CommonOpts& c, const std::string& lifetime, double theta, bool has_theta) {
    const auto f = io::lifetime_from_spec(lifetime);
    const Grid grid = io::grid_from_spec(c.grid, c.N);
    const auto u = renewal::renewal_sequence(f, c.N + 1);

    io::Report rep;
    rep.tool = "renewal";
    rep.horizon = c.N;
    rep.params.emplace_back("lifetime", f.describe());
    rep.params.emplace_back("period", std::to_string(f.period()));

    const i64 cap = std::min<i64>(c.N, 2048);
    std::vector<double> head(u.begin(), u.begin() + cap + 1);
    double roundtrip = 0.0;
    bool renewal_ok = true;
    try {
        const auto fr = renewal::lifetime_from_renewal(head, c.tol);
        for (i64 n = 1; n <= cap; ++n) {
            roundtrip = std::max(roundtrip, std::fabs(fr[static_cast<size_t>(n)] - f.prob(n)));
        }
    } catch (const NotRenewal&) {
        renewal_ok = false;
    }
    double domination = 0.0;
    for (i64 n = 1; n <= cap; ++n) {
        domination = std::min(domination, u[static_cast<size_t>(n)] - f.prob(n));
    }
    rep.blocks.emplace_back("u", io::weights_csv(u));
    {
        Profile lt;
        for (i64 n : grid) lt.push_back({n, renewal::truncated_mean(f, n)});
        rep.blocks.emplace_back("truncated_mean", io::profile_csv(lt, "L"));
    }
    if (has_theta) {
        rep.blocks.emplace_back("met",
                                io::profile_csv(renewal::met_transform(u, theta, grid), "abs_T"));
    }
    const double rt_tol = std::max(c.tol, 1e-9);
    rep.checks.push_back({"lifetime-roundtrip", renewal_ok && roundtrip <= rt_tol, roundtrip, rt_tol});
    rep.checks.push_back(
        {"renewal-dominates-lifetime", domination >= -rt_tol, domination, rt_tol});

    if (c.mode == "rational") {
        if (!f.exact_capable()) throw ConfigError("this lifetime has no exact rational form");
        if (c.N > 4096) throw ConfigError("rational mode is limited to N <= 4096");
        const auto uq = renewal::renewal_sequence_exact(f, c.N + 1);
        double drift = 0.0;
        for (i64 n = 0; n <= c.N; ++n) {
            drift = std::max(drift,
                             std::fabs(u[static_cast<size_t>(n)] - to_double(uq[static_cast<size_t>(n)])));
        }
        const auto frq = renewal::lifetime_from_renewal_exact(uq);
        bool exact_rt = true;
        for (i64 n = 1; n <= c.N; ++n) {
            if (frq[static_cast<size_t>(n)] != f.prob_exact(n)) {
                exact_rt = false;
                break;
            }
        }
        rep.checks.push_back({"float-agrees-exact", drift <= 1e-12, drift, 1e-12});
        rep.checks.push_back({"exact-roundtrip", exact_rt, exact_rt ? 0.0 : 1.0, 0.0});
    }
    return emit_report(c, rep);
}

// ------------------------------------------------------------------ chain --

int tool_chain(const CommonOpts& c, const std::string& chain_spec, i64 s,
               const std::string& targets_str) {
    const auto chain = io::chain_from_spec(chain_spec);
    const auto targets = parse_ints(targets_str);
    if (targets.empty()) throw ConfigError("need at least one target state");
    const i64 max_state = *std::max_element(targets.begin(), targets.end());

    io::Report rep;
    rep.tool = "chain";
    rep.horizon = c.N;
    rep.params.emplace_back("chain", chain.describe());
    rep.params.emplace_back("source", std::to_string(s));

    const auto tr = markov::evolve_track(chain, s, targets, c.N);
    for (size_t i = 0; i < targets.size(); ++i) {
        rep.blocks.emplace_back("track_" + std::to_string(targets[i]), track_csv(tr.track[i]));
    }
    const auto row = markov::nstep_row(chain, s, c.N, max_state);
    {
        std::string csv = "t,p\n";
        for (i64 t = 1; t <= max_state; ++t) {
            csv += std::to_string(t) + "," + fmt_double(row[static_cast<size_t>(t)]) + "\n";
        }
        rep.blocks.emplace_back("row", csv);
    }
    double mass = 0.0;
    for (i64 t = 1; t <= max_state; ++t) mass += row[static_cast<size_t>(t)];
    rep.checks.push_back({"row-mass-bounded", mass <= 1.0 + c.tol, mass, c.tol});

    if (c.mode == "rational") {
        if (!chain.exact_capable()) throw ConfigError("this chain has no exact rational form");
        if (c.N > 512) throw ConfigError("rational mode is limited to N <= 512");
        const auto rowq = markov::nstep_row_exact(chain, s, c.N, max_state);
        double drift = 0.0;
        for (i64 t = 1; t <= max_state; ++t) {
            drift = std::max(drift, std::fabs(row[static_cast<size_t>(t)] -
                                              to_double(rowq[static_cast<size_t>(t)])));
        }
        rep.checks.push_back({"float-agrees-exact", drift <= 1e-12, drift, 1e-12});
    }
    return emit_report(c, rep);
}

// ----------------------------------------------------------------- mixing --

int tool_mixing(const CommonOpts& c, const std::string& chain_spec, const std::string& a_spec,
                const std::string& b_spec, const std::string& parts_spec, double defect_tol) {
    const auto chain = io::chain_from_spec(chain_spec);
    const auto A = io::cylinder_from_spec(a_spec);
    const auto B = io::cylinder_from_spec(b_spec);
    const Grid grid = io::grid_from_spec(c.grid, c.N);

    io::Report rep;
    rep.tool = "mixing";
    rep.horizon = c.N;
    rep.params.emplace_back("chain", chain.describe());
    rep.params.emplace_back("A", a_spec);
    rep.params.emplace_back("B", b_spec);

    const auto occ = markov::evolve_track(chain, 1, {1}, c.N);
    const auto& u = occ.track[0];
    const auto corr = markov::correlation_sequence(chain, A, B, c.N + 1);
    const double coef = markov::cyl_measure(chain, A) * markov::cyl_measure(chain, B);
    rep.params.emplace_back("mA_mB", fmt_double(coef));
    rep.blocks.emplace_back("correlation", io::correlation_csv(corr, u, coef));
    rep.blocks.emplace_back("defect",
                            io::profile_csv(mixing::rwm_defect_profile(chain, A, B, u, grid), "defect"));
    {
        const weights::WeightSeq uw{std::vector<double>(u)};
        Grid inner;
        for (i64 n : grid) {
            if (n < c.N) inner.push_back(n);
        }
        if (!inner.empty()) {
            rep.blocks.emplace_back("gl_ratio",
                                    io::profile_csv(mixing::gl_ratio_profile(uw, inner), "ratio"));
        }
    }
    if (!parts_spec.empty()) {
        std::vector<markov::Cylinder> parts;
        std::stringstream ss(parts_spec);
        std::string tok;
        while (std::getline(ss, tok, ';')) {
            if (!tok.empty()) parts.push_back(io::cylinder_from_spec(tok));
        }
        rep.blocks.emplace_back(
            "return_sequence",
            io::profile_csv(mixing::return_sequence_profile(chain, parts, grid), "a_N"));
    }
    const double defect = mixing::rwm_defect(chain, A, B, u, c.N);
    rep.checks.push_back({"defect-at-horizon", defect <= defect_tol, defect, defect_tol});
    return emit_report(c, rep);
}

// ----------------------------------------------------------------- affine --

int tool_affine(const CommonOpts& c, const std::string& chain_spec, i64 cutoff, double x, double y,
                bool has_xy, i64 steps) {
    const auto chain = io::chain_from_spec(chain_spec);
    const auto model = affine::AffineModel::build(chain, cutoff);

    io::Report rep;
    rep.tool = "affine";
    rep.horizon = cutoff;
    rep.params.emplace_back("chain", chain.describe());
    rep.params.emplace_back("cutoff", std::to_string(cutoff));
    rep.params.emplace_back("total_mass", fmt_double(model.total_mass()));

    {
        std::string csv = "source,target,x_lo,width,slope,y_lo,y_width\n";
        for (i64 s = 1; s <= cutoff; ++s) {
            for (const auto& sl : model.slots_of(s)) {
                csv += std::to_string(sl.source) + "," + std::to_string(sl.target) + "," +
                       fmt_double(sl.x_lo) + "," + fmt_double(sl.width) + "," +
                       fmt_double(sl.slope) + "," + fmt_double(sl.y_lo) + "," +
                       fmt_double(sl.y_width) + "\n";
            }
        }
        rep.blocks.emplace_back("slots", csv);
    }
    if (steps > 0) {
        if (!has_xy) {
            x = model.cell_lo(1) + model.cell_len(1) * (7.0 / 16.0);
            y = 0.375;
        }
        rep.blocks.emplace_back("orbit", io::orbit_csv(model.orbit(x, y, steps)));
    }

    double trunc = 0.0;
    for (i64 s = 1; s <= cutoff; ++s) {
        trunc = std::max({trunc, model.dropped_width(s), model.dropped_fiber(s)});
    }
    rep.truncation = trunc;

    std::vector<double> part_err(static_cast<size_t>(cutoff) + 1, 0.0);
    std::vector<double> slope_err(static_cast<size_t>(cutoff) + 1, 0.0);
    std::vector<double> pull_err(static_cast<size_t>(cutoff) + 1, 0.0);
    parallel_for(cutoff, c.jobs, [&](i64 i) {
        const i64 s = i + 1;
        double used = 0.0;
        for (const auto& sl : model.slots_of(s)) {
            used += sl.width;
            slope_err[static_cast<size_t>(s)] =
                std::max(slope_err[static_cast<size_t>(s)], std::fabs(sl.slope * sl.y_width - 1.0));
        }
        part_err[static_cast<size_t>(s)] =
            std::fabs(used + model.dropped_width(s) - model.cell_len(s));
        if (model.dropped_fiber(s) == 0.0) {
            const double a = model.cell_lo(s) + model.cell_len(s) * 0.25;
            const double b = model.cell_lo(s) + model.cell_len(s) * 0.75;
            pull_err[static_cast<size_t>(s)] = std::fabs(model.pullback_measure(a, b) - (b - a));
        }
    });
    const double worst_part = *std::max_element(part_err.begin(), part_err.end());
    const double worst_slope = *std::max_element(slope_err.begin(), slope_err.end());
    const double worst_pull = *std::max_element(pull_err.begin(), pull_err.end());
    rep.checks.push_back({"slot-partition", worst_part <= c.tol, worst_part, c.tol});
    rep.checks.push_back({"slope-product", worst_slope <= c.tol, worst_slope, c.tol});
    rep.checks.push_back({"pullback-preserved", worst_pull <= c.tol, worst_pull, c.tol});

    if (c.mode == "rational") {
        if (!chain.exact_capable()) throw ConfigError("this chain has no exact rational form");
        bool exact_ok = true;
        for (i64 s = 1; s <= cutoff && exact_ok; ++s) {
            for (const auto& sl : model.slots_of_exact(s)) {
                if (sl.slope * sl.y_width != 1) {
                    exact_ok = false;
                    break;
                }
            }
        }
        rep.checks.push_back({"slope-product-exact", exact_ok, exact_ok ? 0.0 : 1.0, 0.0});
    }
    return emit_report(c, rep);
}

// -------------------------------------------------------------------- run --

int run_argv(const std::vector<std::string>& args, int depth);

int tool_run(const std::string& spec_path, int depth) {
    if (depth > 0) throw ConfigError("run specs cannot invoke run");
    const io::RunSpec spec = io::run_spec_from_json(io::read_file(spec_path));
    std::vector<std::string> args;
    args.push_back(spec.tool);
    args.insert(args.end(), spec.args.begin(), spec.args.end());
    return run_argv(args, depth + 1);
}

int run_argv(const std::vector<std::string>& args, int depth) {
    CLI::App app{"numerical laboratory for weighted mixing diagnostics"};
    app.require_subcommand(1);

    CommonOpts c;

    auto* w = app.add_subcommand("weights", "weight sequence diagnostics");
    std::string w_family = "constant", w_params, w_input;
    w->add_option("--family", w_family, "constant|power|kaluza-log|hopf|multiples");
    w->add_option("--params", w_params, "comma separated family parameters");
    w->add_option("--input", w_input, "CSV file with n,u rows");
    add_common(w, c);

    auto* se = app.add_subcommand("sets", "index set density and weighted smallness");
    std::string se_set = "squares", se_family = "constant", se_params;
    se->add_option("--set", se_set, "blocks|squares|multiples:<p> or a .json path");
    se->add_option("--family", se_family, "weight family");
    se->add_option("--params", se_params, "weight family parameters");
    add_common(se, c);

    auto* rn = app.add_subcommand("renewal", "renewal sequence of a lifetime law");
    std::string rn_lifetime = "geom(0.5)";
    double rn_theta = 0.0;
    rn->add_option("--lifetime", rn_lifetime, "family shorthand or .json path");
    auto* rn_theta_opt = rn->add_option("--theta", rn_theta, "frequency for the transform block");
    add_common(rn, c);

    auto* ch = app.add_subcommand("chain", "n-step evolution of a chain");
    std::string ch_chain = "hopf", ch_targets = "1";
    i64 ch_s = 1;
    ch->add_option("--chain", ch_chain, "hopf | renewal-shift:<lifetime> | .json path");
    ch->add_option("--s", ch_s, "source state");
    ch->add_option("--targets", ch_targets, "comma separated tracked states");
    add_common(ch, c);

    auto* mx = app.add_subcommand("mixing", "correlation sequences and mixing defect");
    std::string mx_chain = "hopf", mx_a = "[1]@0", mx_b = "[1]@0", mx_parts;
    double mx_defect_tol = 1e-2;
    mx->add_option("--chain", mx_chain, "hopf | renewal-shift:<lifetime> | .json path");
    mx->add_option("--A", mx_a, "first cylinder, e.g. [1,2]@0");
    mx->add_option("--B", mx_b, "second cylinder");
    mx->add_option("--parts", mx_parts, "semicolon separated cylinders for the return sequence");
    mx->add_option("--defect-tol", mx_defect_tol, "pass bound for the defect check");
    add_common(mx, c);

    auto* af = app.add_subcommand("affine", "piecewise affine model of a chain");
    std::string af_chain = "hopf";
    i64 af_cutoff = 16, af_steps = 0;
    double af_x = 0.0, af_y = 0.0;
    af->add_option("--chain", af_chain, "hopf | renewal-shift:<lifetime> | .json path");
    af->add_option("--cutoff", af_cutoff, "largest represented state");
    auto* af_x_opt = af->add_option("--x", af_x, "orbit start");
    af->add_option("--y", af_y, "orbit fiber start");
    af->add_option("--steps", af_steps, "orbit length");
    add_common(af, c);

    auto* ru = app.add_subcommand("run", "execute a JSON run spec");
    std::string ru_spec;
    ru->add_option("--spec", ru_spec, "path to {\"tool\":..., \"args\":[...]} JSON")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (w->parsed()) return tool_weights(c, w_family, w_params, w_input);
    if (se->parsed()) return tool_sets(c, se_set, se_family, se_params);
    if (rn->parsed()) return tool_renewal(c, rn_lifetime, rn_theta, rn_theta_opt->count() > 0);
    if (ch->parsed()) return tool_chain(c, ch_chain, ch_s, ch_targets);
    if (mx->parsed()) return tool_mixing(c, mx_chain, mx_a, mx_b, mx_parts, mx_defect_tol);
    if (af->parsed()) return tool_affine(c, af_chain, af_cutoff, af_x, af_y, af_x_opt->count() > 0,
                                         af_steps);
    if (ru->parsed()) return tool_run(ru_spec, depth);
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return run_argv(args, 0);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
