#pragma once

// Parameter sweeps driven by a flat key=value config file, emitted as CSV.
// Output is deterministic: same spec, same bytes.
//
// Config keys: k, alpha_abs, theta, gamma, kappa_ratio (comma lists allowed;
// length-1 entries broadcast against the longest list), wt_start, wt_stop,
// wt_count, outputs (comma list), oracle (true/false).

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "weakamp/detection_stats.hpp"
#include "weakamp/errors.hpp"
#include "weakamp/fock_oracle.hpp"
#include "weakamp/optomech_closed.hpp"
#include "weakamp/optomech_damped.hpp"

namespace weakamp {

struct SweepSpec {
    std::vector<ModelParams> params;
    double wt_start = 0.0;
    double wt_stop = 0.0;
    int wt_count = 0;
    std::vector<std::string> outputs;
    bool oracle = false;
};

inline const std::set<std::string>& sweep_output_names() {
    static const std::set<std::string> names{
        "q_closed", "q_damped", "p_damped", "q_smalltime",
        "prob",     "arrival_density", "P"};
    return names;
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

inline double parse_number(const std::string& s, int line) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigParse(line, "not a number: '" + s + "'");
    }
}

/// %.17g: shortest round-trippable form is not required, full precision is.
inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Parse the flat key=value config. Unknown keys, bad numbers, malformed
/// lines, and inconsistent list lengths all raise ConfigParse with the
/// 1-based line number.
inline SweepSpec parse_sweep_config(std::istream& in) {
    std::map<std::string, std::vector<double>> lists;
    std::map<std::string, int> key_line;
    std::vector<std::string> outputs;
    bool oracle = false;
    std::optional<double> wt_start, wt_stop;
    std::optional<int> wt_count;

    static const std::set<std::string> list_keys{"k", "alpha_abs", "theta", "gamma",
                                                 "kappa_ratio"};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        std::string s = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigParse(line, "expected key = value");
        const std::string key = detail::trim(s.substr(0, eq));
        const std::string val = detail::trim(s.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigParse(line, "expected key = value");
        if (key_line.count(key))
            throw ConfigParse(line, "duplicate key '" + key + "' (first at line " +
                                        std::to_string(key_line[key]) + ")");
        key_line[key] = line;

        if (list_keys.count(key)) {
            for (const auto& item : detail::split_list(val))
                lists[key].push_back(detail::parse_number(item, line));
        } else if (key == "wt_start") {
            wt_start = detail::parse_number(val, line);
        } else if (key == "wt_stop") {
            wt_stop = detail::parse_number(val, line);
        } else if (key == "wt_count") {
            const double c = detail::parse_number(val, line);
            if (c != static_cast<int>(c))
                throw ConfigParse(line, "wt_count must be an integer");
            wt_count = static_cast<int>(c);
        } else if (key == "outputs") {
            for (const auto& item : detail::split_list(val)) {
                if (!sweep_output_names().count(item))
                    throw ConfigParse(line, "unknown output '" + item + "'");
                outputs.push_back(item);
            }
        } else if (key == "oracle") {
            if (val == "true")
                oracle = true;
            else if (val == "false")
                oracle = false;
            else
                throw ConfigParse(line, "oracle must be true or false");
        } else {
            throw ConfigParse(line, "unknown key '" + key + "'");
        }
    }

    auto fail = [](const std::string& what) { throw ConfigParse(0, what); };
    if (!lists.count("k")) fail("missing key 'k'");
    if (!lists.count("alpha_abs")) fail("missing key 'alpha_abs'");
    if (!lists.count("theta")) fail("missing key 'theta'");
    if (!wt_start || !wt_stop || !wt_count)
        fail("missing wt grid (wt_start, wt_stop, wt_count)");
    if (outputs.empty()) fail("no outputs selected");
    if (*wt_count < 2) fail("wt_count must be >= 2");
    if (!(*wt_start < *wt_stop)) fail("wt_start must be < wt_stop");

    const bool gamma_given = lists.count("gamma") > 0;
    for (const auto& out : outputs)
        if ((out == "q_damped" || out == "p_damped") && !gamma_given)
            fail("output '" + out + "' requires an explicit gamma");

    // Broadcast: every list is length 1 or the common maximum.
    size_t nsets = 1;
    for (const auto& [key, v] : lists) nsets = std::max(nsets, v.size());
    auto at = [&](const std::string& key, double dflt, size_t i) {
        const auto it = lists.find(key);
        if (it == lists.end()) return dflt;
        const auto& v = it->second;
        if (v.size() == 1) return v[0];
        if (v.size() != nsets)
            throw ConfigParse(key_line.count(key) ? key_line[key] : 0,
                              "list length for '" + key + "' must be 1 or " +
                                  std::to_string(nsets));
        return v[i];
    };

    SweepSpec spec;
    for (size_t i = 0; i < nsets; ++i)
        spec.params.emplace_back(at("k", 0.0, i), at("alpha_abs", 0.0, i),
                                 at("theta", 0.0, i), at("gamma", 0.0, i),
                                 at("kappa_ratio", 10.0, i));
    spec.wt_start = *wt_start;
    spec.wt_stop = *wt_stop;
    spec.wt_count = *wt_count;
    spec.outputs = outputs;
    spec.oracle = oracle;
    return spec;
}

namespace detail {

/// wt = 0 is a removable 0/0 of the postselected expectations; rows there
/// carry the analytic limits (first-order expansion values).
inline double sweep_value(const std::string& out, const ModelParams& p, double wt,
                          double P_cache) {
    if (out == "q_closed") return mean_q_closed(p, wt);
    if (out == "q_damped") {
        try {
            return mean_q_damped(p, wt);
        } catch (const DegenerateNorm&) {
            return mean_q_smalltime(p, std::min(wt, kSmalltimeBound));
        }
    }
    if (out == "p_damped") {
        try {
            return mean_p_damped(p, wt);
        } catch (const DegenerateNorm&) {
            return 0.0;
        }
    }
    if (out == "q_smalltime")
        return wt <= kSmalltimeBound ? mean_q_smalltime(p, wt)
                                     : mean_q_closed(p, wt);
    if (out == "prob") return postselect_prob(p, wt);
    if (out == "arrival_density") return arrival_density(p.kappa_ratio, wt);
    if (out == "P") return P_cache;
    throw DomainError("sweep_value: unknown output " + out);
}

inline const char* column_name(const std::string& out) {
    if (out == "q_closed") return "q_over_sigma";
    return out.c_str();
}

}  // namespace detail

/// Emit the sweep as CSV: one row per (param set, wt), ordered by param index
/// then wt. With several param sets a leading param_index column
/// disambiguates; with one the header is just the sweep variable + outputs.
/// oracle=true appends q_oracle,delta_q columns (unitary oracle at gamma=0,
/// Lindblad otherwise; delta against the matching analytic q).
inline void run_sweep(const SweepSpec& spec, std::ostream& os) {
    const bool multi = spec.params.size() > 1;
    os << (multi ? "param_index,omega_m_t" : "omega_m_t");
    for (const auto& out : spec.outputs) os << ',' << detail::column_name(out);
    if (spec.oracle) os << ",q_oracle,delta_q";
    os << '\n';

    std::vector<double> grid(spec.wt_count);
    for (int j = 0; j < spec.wt_count; ++j)
        grid[j] = spec.wt_start +
                  (spec.wt_stop - spec.wt_start) * j / (spec.wt_count - 1);

    for (size_t i = 0; i < spec.params.size(); ++i) {
        const ModelParams& p = spec.params[i];
        const bool needs_P =
            std::count(spec.outputs.begin(), spec.outputs.end(), "P") > 0;
        const double P_cache = needs_P ? overall_P(p, p.kappa_ratio) : 0.0;

        std::unique_ptr<ClosedOracle> closed;
        std::unique_ptr<LindbladOracle> lindblad;
        if (spec.oracle) {
            if (p.gamma == 0.0)
                closed = std::make_unique<ClosedOracle>(p);
            else
                lindblad = std::make_unique<LindbladOracle>(p);
        }

        for (int j = 0; j < spec.wt_count; ++j) {
            const double wt = grid[j];
            if (multi) os << i << ',';
            os << detail::fmt(wt);
            for (const auto& out : spec.outputs)
                os << ',' << detail::fmt(detail::sweep_value(out, p, wt, P_cache));
            if (spec.oracle) {
                double q_ref, q_orc;
                try {
                    if (p.gamma == 0.0) {
                        q_ref = mean_q_closed(p, wt);
                        q_orc = wt == 0.0 ? q_ref : closed->mean_q(wt);
                    } else {
                        lindblad->advance_to(wt);
                        q_ref = detail::sweep_value("q_damped", p, wt, 0.0);
                        q_orc = wt == 0.0 ? q_ref : lindblad->mean_q();
                    }
                } catch (const DegenerateNorm&) {
                    q_ref = detail::sweep_value("q_closed", p, wt, 0.0);
                    q_orc = q_ref;
                }
                os << ',' << detail::fmt(q_orc) << ','
                   << detail::fmt(q_orc - q_ref);
            }
            os << '\n';
        }
    }
}

}  // namespace weakamp
