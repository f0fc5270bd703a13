#include "ratmix/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ratmix::io {

using nlohmann::ordered_json;

namespace {

ordered_json parse_json(const std::string& text, const char* what) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError(std::string(what) + ": malformed JSON");
    return j;
}

std::vector<double> number_list(const ordered_json& j) {
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError("expected a list of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

bool looks_like_path(const std::string& s) {
    return s.size() > 5 && s.substr(s.size() - 5) == ".json";
}

std::string trimmed(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::string indexset_to_json(const sets::IndexSet& K, i64 upto) {
    ordered_json j;
    j["intervals"] = ordered_json::array();
    for (const auto& I : K.intervals(upto)) {
        if (I.lo > upto) break;
        j["intervals"].push_back({I.lo, std::min(I.hi, upto)});
    }
    if (K.generator_backed()) {
        j["generator"] = K.generator_name();
        if (K.generator_name() == "multiples") j["param"] = K.generator_param();
    } else {
        j["generator"] = nullptr;
    }
    return j.dump();
}

sets::IndexSet indexset_from_json(const std::string& text) {
    const ordered_json j = parse_json(text, "index set");
    if (j.contains("generator") && !j["generator"].is_null()) {
        const std::string name = j["generator"].get<std::string>();
        const i64 param = j.value("param", i64{0});
        return sets::IndexSet::from_generator_name(name, param);
    }
    if (!j.contains("intervals") || !j["intervals"].is_array()) {
        throw ConfigError("index set: missing intervals");
    }
    std::vector<sets::Interval> iv;
    for (const auto& pair : j["intervals"]) {
        if (!pair.is_array() || pair.size() != 2) {
            throw ConfigError("index set: intervals are [lo, hi] pairs");
        }
        iv.push_back({pair[0].get<i64>(), pair[1].get<i64>()});
    }
    return sets::IndexSet::from_intervals(std::move(iv));
}

std::string lifetime_to_json(const renewal::LifetimeDist& f) {
    ordered_json j;
    using renewal::LifetimeKind;
    switch (f.kind()) {
        case LifetimeKind::explicit_probs: {
            j["kind"] = "explicit";
            auto& probs = j["probs"] = ordered_json::array();
            for (const auto& [n, p] : f.probs()) probs.push_back({n, rat_str(p)});
            break;
        }
        case LifetimeKind::geometric:
            j["kind"] = "family";
            j["name"] = "geometric";
            j["params"] = {to_double(f.geom_p())};
            break;
        case LifetimeKind::pareto:
            j["kind"] = "family";
            j["name"] = "pareto";
            j["params"] = {f.gamma()};
            break;
        case LifetimeKind::dirac:
            j["kind"] = "family";
            j["name"] = "dirac";
            j["params"] = {f.dirac_point()};
            break;
        case LifetimeKind::st_petersburg:
            j["kind"] = "family";
            j["name"] = "st-petersburg";
            j["params"] = ordered_json::array();
            break;
    }
    return j.dump();
}

renewal::LifetimeDist lifetime_from_json(const std::string& text) {
    const ordered_json j = parse_json(text, "lifetime");
    const std::string kind = j.value("kind", "");
    if (kind == "explicit") {
        if (!j.contains("probs") || !j["probs"].is_array()) {
            throw ConfigError("lifetime: explicit kind needs a probs list");
        }
        std::vector<std::pair<i64, Rat>> probs;
        for (const auto& pair : j["probs"]) {
            if (!pair.is_array() || pair.size() != 2) {
                throw ConfigError("lifetime: probs entries are [n, \"p/q\"] pairs");
            }
            const i64 n = pair[0].get<i64>();
            Rat p = pair[1].is_string() ? rat_parse(pair[1].get<std::string>())
                                        : rat_from_double(pair[1].get<double>());
            probs.emplace_back(n, std::move(p));
        }
        return renewal::LifetimeDist::from_probs(std::move(probs));
    }
    if (kind == "family") {
        return renewal::LifetimeDist::family(j.value("name", ""), number_list(j["params"]));
    }
    throw ConfigError("lifetime: kind must be 'explicit' or 'family'");
}

std::string chain_to_json(const markov::Chain& c) {
    ordered_json j;
    if (c.kind() == markov::ChainKind::reflecting) {
        j["kind"] = "hopf";
    } else {
        j["kind"] = "renewal-shift";
        j["lifetime"] = ordered_json::parse(lifetime_to_json(c.lifetime()));
    }
    return j.dump();
}

markov::Chain chain_from_json(const std::string& text) {
    const ordered_json j = parse_json(text, "chain");
    const std::string kind = j.value("kind", "");
    if (kind == "hopf") return markov::Chain::reflecting();
    if (kind == "renewal-shift") {
        if (!j.contains("lifetime")) throw ConfigError("chain: renewal-shift needs a lifetime");
        return markov::Chain::renewal_shift(lifetime_from_json(j["lifetime"].dump()));
    }
    throw ConfigError("chain: kind must be 'hopf' or 'renewal-shift'");
}

renewal::LifetimeDist lifetime_from_spec(const std::string& raw) {
    const std::string spec = trimmed(raw);
    if (spec.empty()) throw ConfigError("empty lifetime spec");
    if (looks_like_path(spec)) return lifetime_from_json(read_file(spec));
    const auto open = spec.find('(');
    std::string name = spec.substr(0, open);
    std::vector<double> params;
    if (open != std::string::npos) {
        if (spec.back() != ')') throw ConfigError("lifetime spec: missing ')' in " + spec);
        std::string args = spec.substr(open + 1, spec.size() - open - 2);
        std::stringstream ss(args);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trimmed(tok);
            if (tok.empty()) continue;
            try {
                size_t used = 0;
                params.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ConfigError("lifetime spec: bad parameter '" + tok + "'");
            }
        }
    }
    return renewal::LifetimeDist::family(trimmed(name), params);
}

markov::Chain chain_from_spec(const std::string& raw) {
    const std::string spec = trimmed(raw);
    if (spec == "hopf") return markov::Chain::reflecting();
    constexpr const char* prefix = "renewal-shift:";
    if (spec.rfind(prefix, 0) == 0) {
        return markov::Chain::renewal_shift(lifetime_from_spec(spec.substr(std::strlen(prefix))));
    }
    if (looks_like_path(spec)) return chain_from_json(read_file(spec));
    throw ConfigError("chain spec must be 'hopf', 'renewal-shift:<lifetime>', or a .json path");
}

markov::Cylinder cylinder_from_spec(const std::string& raw) {
    const std::string spec = trimmed(raw);
    const auto open = spec.find('[');
    const auto close = spec.find(']');
    if (open == std::string::npos || close == std::string::npos || close < open) {
        throw ConfigError("cylinder spec looks like [1,2,1]@base");
    }
    markov::Cylinder cyl;
    std::stringstream ss(spec.substr(open + 1, close - open - 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trimmed(tok);
        if (tok.empty()) continue;
        try {
            cyl.symbols.push_back(std::stoll(tok));
        } catch (const std::exception&) {
            throw ConfigError("cylinder spec: bad symbol '" + tok + "'");
        }
    }
    const auto at = spec.find('@', close);
    if (at != std::string::npos) {
        try {
            cyl.base = std::stoll(spec.substr(at + 1));
        } catch (const std::exception&) {
            throw ConfigError("cylinder spec: bad base in '" + spec + "'");
        }
    }
    if (cyl.symbols.empty()) throw ConfigError("cylinder spec: no symbols in '" + spec + "'");
    return cyl;
}

Grid grid_from_spec(const std::string& raw, i64 N) {
    const std::string spec = trimmed(raw);
    if (spec == "dyadic") return dyadic_grid(1, N);
    constexpr const char* prefix = "linear:";
    if (spec.rfind(prefix, 0) == 0) {
        i64 step = 0;
        try {
            step = std::stoll(spec.substr(std::strlen(prefix)));
        } catch (const std::exception&) {
            throw ConfigError("grid spec: bad step in '" + spec + "'");
        }
        if (step < 1 || step > N) throw ConfigError("grid spec: step must lie in [1, N]");
        return linear_grid(step, N, step);
    }
    throw ConfigError("grid spec must be 'dyadic' or 'linear:<step>'");
}

RunSpec run_spec_from_json(const std::string& text) {
    const ordered_json j = parse_json(text, "run spec");
    if (!j.contains("tool") || !j["tool"].is_string()) {
        throw ConfigError("run spec needs a 'tool' string");
    }
    RunSpec spec;
    spec.tool = j["tool"].get<std::string>();
    if (j.contains("args")) {
        if (!j["args"].is_array()) throw ConfigError("run spec: 'args' must be a list");
        for (const auto& a : j["args"]) {
            spec.args.push_back(a.is_string() ? a.get<std::string>() : a.dump());
        }
    }
    return spec;
}

std::string weights_csv(const std::vector<double>& u) {
    std::string out = "n,u\n";
    for (size_t n = 0; n < u.size(); ++n) {
        out += std::to_string(n);
        out += ',';
        out += fmt_double(u[n]);
        out += '\n';
    }
    return out;
}

std::vector<double> weights_from_csv(const std::string& text) {
    std::vector<double> u;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        line = trimmed(line);
        if (line.empty() || line == "n,u") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ConfigError("weights csv: missing comma in '" + line + "'");
        i64 n = 0;
        try {
            n = std::stoll(line.substr(0, comma));
        } catch (const std::exception&) {
            throw ConfigError("weights csv: bad row '" + line + "'");
        }
        // strtod instead of stod: subnormal values parse with an ERANGE
        // underflow, which is still a faithful double and must round-trip.
        const std::string body = line.substr(comma + 1);
        errno = 0;
        char* end = nullptr;
        const double v = std::strtod(body.c_str(), &end);
        if (end == body.c_str() || (errno == ERANGE && std::fabs(v) == HUGE_VAL)) {
            throw ConfigError("weights csv: bad row '" + line + "'");
        }
        if (n != static_cast<i64>(u.size())) {
            throw ConfigError("weights csv: rows must be consecutive from 0");
        }
        u.push_back(v);
    }
    if (u.empty()) throw ConfigError("weights csv: no rows");
    return u;
}

std::string profile_csv(const Profile& p, const std::string& value_name) {
    std::string out = "n," + value_name + "\n";
    for (const auto& pt : p) {
        out += std::to_string(pt.n);
        out += ',';
        out += fmt_double(pt.value);
        out += '\n';
    }
    return out;
}

std::string correlation_csv(const std::vector<double>& corr, const std::vector<double>& u,
                            double coef) {
    if (u.size() < corr.size()) throw HorizonError("weight vector shorter than correlations");
    std::string out = "n,value,ratio\n";
    for (size_t n = 0; n < corr.size(); ++n) {
        const double denom = coef * u[n];
        out += std::to_string(n);
        out += ',';
        out += fmt_double(corr[n]);
        out += ',';
        out += fmt_double(denom > 0.0 ? corr[n] / denom : 0.0);
        out += '\n';
    }
    return out;
}

std::string orbit_csv(const affine::AffineModel::Orbit& orb) {
    std::string out = "step,x,y,state\n";
    for (const auto& pt : orb.points) {
        out += std::to_string(pt.step);
        out += ',';
        out += fmt_double(pt.x);
        out += ',';
        out += fmt_double(pt.y);
        out += ',';
        out += std::to_string(pt.state);
        out += '\n';
    }
    return out;
}

bool Report::all_pass() const {
    for (const auto& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

std::string Report::render() const {
    ordered_json j;
    j["tool"] = tool;
    j["mode"] = mode;
    j["horizon"] = horizon;
    j["truncation"] = truncation;
    auto& jp = j["params"] = ordered_json::object();
    for (const auto& [k, v] : params) jp[k] = v;
    auto& jb = j["blocks"] = ordered_json::object();
    for (const auto& [k, v] : blocks) jb[k] = v;
    auto& jc = j["checks"] = ordered_json::array();
    for (const auto& c : checks) {
        jc.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"value", fmt_double(c.value)},
                      {"tol", fmt_double(c.tol)}});
    }
    const std::string body = j.dump(2);
    j["spec_hash"] = hash_hex(fnv1a(body));
    return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
    if (!out.good()) throw ConfigError("short write to " + path);
}

}  // namespace ratmix::io
