#pragma once

// Canned CSV reproductions of the library's reference curves: postselected
// position/momentum shifts over time for the published parameter sets, the
// small-time amplification surface, and the arrival-time densities.
//
// Wide format: first column the sweep variable, one column per curve, curve
// names encoding |alpha| (a), theta in radians (t), gamma (g) or kappa ratio
// (r). Values at wt = 0 are the analytic limits of the removable 0/0.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "weakamp/detection_stats.hpp"
#include "weakamp/errors.hpp"
#include "weakamp/optomech_closed.hpp"
#include "weakamp/optomech_damped.hpp"
#include "weakamp/sweep.hpp"

namespace weakamp {

inline const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names{
        "fig2a", "fig2b", "fig3", "fig4a", "fig4b", "fig5a", "fig5b", "fig6"};
    return names;
}

namespace detail {

inline std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int j = 0; j < n; ++j) g[j] = lo + (hi - lo) * j / (n - 1);
    return g;
}

inline double q_closed_with_limit(const ModelParams& p, double wt) {
    return mean_q_closed(p, wt);  // internal small-time fallback covers wt = 0
}

inline double q_damped_with_limit(const ModelParams& p, double wt) {
    try {
        return mean_q_damped(p, wt);
    } catch (const DegenerateNorm&) {
        return mean_q_smalltime(p, std::min(wt, kSmalltimeBound));
    }
}

inline double p_damped_with_limit(const ModelParams& p, double wt) {
    try {
        return mean_p_damped(p, wt);
    } catch (const DegenerateNorm&) {
        return 0.0;  // wt -> 0 limit of the postselected momentum
    }
}

struct Curve {
    std::string name;
    ModelParams params;
    double (*eval)(const ModelParams&, double);
};

inline void emit_curves(std::ostream& os, const std::vector<Curve>& curves,
                        const std::vector<double>& grid) {
    os << "omega_m_t";
    for (const auto& c : curves) os << ',' << c.name;
    os << '\n';
    for (double wt : grid) {
        os << fmt(wt);
        for (const auto& c : curves) os << ',' << fmt(c.eval(c.params, wt));
        os << '\n';
    }
}

}  // namespace detail

/// Write one named figure as CSV. Unknown names raise UnknownFigure.
inline void write_figure(const std::string& name, std::ostream& os) {
    const double k = 0.005;
    const auto grid_4pi = detail::linspace(0.0, 4.0 * kPi, 2001);
    auto qname = [](const ModelParams& p) {
        return "q_a" + detail::short_num(p.alpha_abs) + "_t" +
               detail::short_num(p.theta);
    };
    auto pname = [](const ModelParams& p) {
        return "p_a" + detail::short_num(p.alpha_abs) + "_t" +
               detail::short_num(p.theta);
    };

    if (name == "fig2a" || name == "fig2b") {
        const bool b = name == "fig2b";
        const std::vector<ModelParams> sets =
            b ? std::vector<ModelParams>{{k, 0.5, kPi},
                                         {k, 1.0, 4.0 * kPi / 3.0},
                                         {k, 2.0, 17.0 * kPi / 12.0},
                                         {k, 4.0, 3.0 * kPi / 2.0}}
              : std::vector<ModelParams>{{k, 0.5, 0.0},
                                         {k, 1.0, kPi / 3.0},
                                         {k, 2.0, 5.0 * kPi / 12.0},
                                         {k, 4.0, kPi / 2.0}};
        std::vector<detail::Curve> curves;
        for (const auto& p : sets)
            curves.push_back({qname(p), p, &detail::q_closed_with_limit});
        detail::emit_curves(os, curves, grid_4pi);
        return;
    }

    if (name == "fig3") {
        const double wt = 1e-3;
        os << "alpha_abs,theta,q_over_sigma\n";
        for (double a : detail::linspace(0.0, 4.0, 101))
            for (double th : detail::linspace(0.0, 2.0 * kPi, 101)) {
                const ModelParams p(k, a, th);
                os << detail::fmt(a) << ',' << detail::fmt(th) << ','
                   << detail::fmt(mean_q_smalltime(p, wt)) << '\n';
            }
        return;
    }

    if (name == "fig4a" || name == "fig4b") {
        const double a = 1.0 / std::sqrt(2.0), th = kPi / 4.0;
        std::vector<detail::Curve> curves;
        for (double g : {0.0, 0.005}) {
            const ModelParams p(k, a, th, g);
            if (name == "fig4a")
                curves.push_back({"q_g" + detail::short_num(g), p,
                                  &detail::q_damped_with_limit});
            else
                curves.push_back({"p_g" + detail::short_num(g), p,
                                  &detail::p_damped_with_limit});
        }
        detail::emit_curves(os, curves, grid_4pi);
        return;
    }

    if (name == "fig5a" || name == "fig5b") {
        const bool b = name == "fig5b";
        const double a = b ? 0.5 : 4.0;
        const std::vector<double> thetas =
            b ? std::vector<double>{kPi / 2.0, 3.0 * kPi / 2.0}
              : std::vector<double>{0.0, kPi};
        std::vector<detail::Curve> curves;
        for (double th : thetas) {
            const ModelParams p(k, a, th);
            curves.push_back({pname(p), p, &detail::p_damped_with_limit});
        }
        detail::emit_curves(os, curves, grid_4pi);
        return;
    }

    if (name == "fig6") {
        const std::vector<double> ratios{1.0, 5.0, 10.0};
        os << "omega_m_t";
        for (double r : ratios) os << ",density_r" << detail::short_num(r);
        os << '\n';
        std::vector<double> P(ratios.size());
        const ModelParams p(k, 0.5, 0.0);
        for (size_t i = 0; i < ratios.size(); ++i) P[i] = overall_P(p, ratios[i]);
        for (double wt : detail::linspace(0.0, 1.0, 2001)) {
            os << detail::fmt(wt);
            for (size_t i = 0; i < ratios.size(); ++i)
                os << ','
                   << detail::fmt(conditional_arrival_density(p, ratios[i], wt, P[i]));
            os << '\n';
        }
        return;
    }

    throw UnknownFigure(name);
}

}  // namespace weakamp
