#pragma once

// Photon-arrival statistics for a decaying cavity and the arrival-weighted
// displacement: when the cavity leaks with rate kappa, the dark-port click
// time is exponentially distributed and every time-local quantity gets
// averaged over that distribution.
//
// All rates enter as the dimensionless ratio r = kappa/omega_m, all times as
// wt = omega_m t.

#include <cmath>
#include <functional>
#include <string>

#include "weakamp/errors.hpp"
#include "weakamp/optomech_closed.hpp"
#include "weakamp/optomech_damped.hpp"

namespace weakamp {

// ---------------------------------------------------------------------------
// Quadrature. The integrands are smooth functions times e^{-r wt}, so an
// adaptive Simpson rule on [0, cutoff/r] with the tail bound e^{-cutoff}
// < 1e-13 suffices.

struct QuadratureSpec {
    std::string rule = "adaptive_simpson";
    int panels = 32;                  // initial uniform subdivision
    double cutoff_over_kappa = 30.0;  // upper limit in units 1/kappa
    double tol = 1e-10;

    QuadratureSpec() = default;
    QuadratureSpec(std::string rule_, int panels_, double cutoff_, double tol_)
        : rule(std::move(rule_)), panels(panels_), cutoff_over_kappa(cutoff_),
          tol(tol_) {
        if (rule != "adaptive_simpson")
            throw DomainError("QuadratureSpec: unknown rule " + rule);
        if (panels < 1) throw DomainError("QuadratureSpec: panels must be >= 1");
        if (cutoff_over_kappa < 30.0)
            throw DomainError("QuadratureSpec: cutoff below 30/kappa leaves tail mass > 1e-13");
        if (tol <= 0.0) throw DomainError("QuadratureSpec: tol must be > 0");
    }
};

struct ArrivalSpec {
    double kappa_ratio = 10.0;  // kappa/omega_m
    QuadratureSpec quadrature;
};

namespace detail {

inline double simpson(double a, double fa, double fm, double b, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const std::function<double(double)>& f, double a, double fa,
                    double b, double fb, double m, double fm, double whole,
                    double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, flm, m, fm);
    const double right = simpson(m, fm, frm, b, fb);
    const double err = left + right - whole;
    if (depth <= 0 || std::abs(err) <= 15.0 * tol)
        return left + right + err / 15.0;
    return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson integral of f over [a, b] to absolute tolerance spec.tol.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSpec& spec = QuadratureSpec()) {
    if (!(b > a)) return 0.0;
    const double h = (b - a) / spec.panels;
    double total = 0.0;
    for (int i = 0; i < spec.panels; ++i) {
        const double x0 = a + i * h, x1 = x0 + h, xm = 0.5 * (x0 + x1);
        const double f0 = f(x0), f1 = f(x1), fm = f(xm);
        const double whole = detail::simpson(x0, f0, fm, x1, f1);
        total += detail::adapt(f, x0, f0, x1, f1, xm, fm, whole,
                               spec.tol / spec.panels, 48);
    }
    return total;
}

/// Release-time density of the cavity photon, r e^{-r wt}; integrates to 1.
inline double arrival_density(double kappa_ratio, double wt) {
    if (wt < 0.0) throw DomainError("arrival_density: wt must be >= 0");
    return kappa_ratio * std::exp(-kappa_ratio * wt);
}

/// Exact dark-port success probability at release time wt:
///   (1 - e^{-|xi|^2/2} cos[phi(t)+phi(alpha,t)]) / 2.
/// Identical to branch_norm(postselected_mirror_state).
inline double postselect_prob(const ModelParams& p, double wt) {
    const double damp = std::exp(-0.5 * std::norm(xi(p.k, wt)));
    const double total = kerr_phase(p.k, wt) + phi_alpha(p.k, p.alpha(), wt);
    return 0.5 * (1.0 - damp * std::cos(total));
}

/// Leading small-k form of the success probability, (|xi|^2 + phi(alpha,t)^2)/4;
/// error is O(k^4).
inline double postselect_prob_smallk(const ModelParams& p, double wt) {
    const double pa = phi_alpha(p.k, p.alpha(), wt);
    return 0.25 * (std::norm(xi(p.k, wt)) + pa * pa);
}

/// Overall dark-port click probability, the arrival average of the small-k
/// success probability: integral of r e^{-r wt} (|xi|^2 + phi_alpha^2)/4.
/// At (|alpha|, theta) = (1/2, 0) the integral has the closed form
///   (k^2/2)(2r^2 + 5) / ((r^2 + 1)(r^2 + 4)),
/// used directly there; other parameters are integrated numerically.
inline double overall_P_quadrature(const ModelParams& p, double kappa_ratio,
                                   const QuadratureSpec& quad = QuadratureSpec()) {
    const double upper = quad.cutoff_over_kappa / kappa_ratio;
    return integrate(
        [&](double wt) {
            return arrival_density(kappa_ratio, wt) * postselect_prob_smallk(p, wt);
        },
        0.0, upper, quad);
}

inline double overall_P(const ModelParams& p, double kappa_ratio,
                        const QuadratureSpec& quad = QuadratureSpec()) {
    if (p.alpha_abs == 0.5 && p.theta == 0.0) {
        const double r2 = kappa_ratio * kappa_ratio;
        return 0.5 * p.k * p.k * (2.0 * r2 + 5.0) / ((r2 + 1.0) * (r2 + 4.0));
    }
    return overall_P_quadrature(p, kappa_ratio, quad);
}

/// Arrival-time density conditioned on a dark-port click:
///   (r / 4P) e^{-r wt} (|xi|^2 + phi_alpha^2);
/// normalized over [0, inf) by construction of P. The overload taking P avoids
/// recomputing the normalization inside grid loops.
inline double conditional_arrival_density(const ModelParams& p, double kappa_ratio,
                                          double wt, double P) {
    if (P <= 0.0)
        throw ZeroProbability("conditional_arrival_density: overall probability is 0");
    return arrival_density(kappa_ratio, wt) * postselect_prob_smallk(p, wt) / P;
}

inline double conditional_arrival_density(const ModelParams& p, double kappa_ratio,
                                          double wt) {
    return conditional_arrival_density(p, kappa_ratio, wt, overall_P(p, kappa_ratio));
}

/// Click-weighted mean displacement,
///   (r / 4P) integral e^{-r wt} (|xi|^2 + phi_alpha^2) <q(wt)> dwt.
/// <q(wt)> is the undamped postselected shift unless gamma > 0 is requested,
/// in which case the damped value is substituted (weight unchanged: the
/// arrival physics is cavity decay, not mirror damping).
inline double averaged_q(const ModelParams& p, double kappa_ratio,
                         const QuadratureSpec& quad = QuadratureSpec()) {
    const double P = overall_P(p, kappa_ratio, quad);
    if (P <= 0.0) throw ZeroProbability("averaged_q: overall probability is 0");
    const double upper = quad.cutoff_over_kappa / kappa_ratio;
    const auto q_of = [&](double wt) {
        return p.gamma > 0.0 ? mean_q_damped(p, wt) : mean_q_closed(p, wt);
    };
    const double weighted = integrate(
        [&](double wt) {
            const double w =
                arrival_density(kappa_ratio, wt) * postselect_prob_smallk(p, wt);
            return w == 0.0 ? 0.0 : w * q_of(wt);
        },
        0.0, upper, quad);
    return weighted / P;
}

/// Smallest usable coupling for a detector with the given dark count rate:
/// the click rate ~ 0.01 k^2 kappa must beat the dark rate, so
///   k_min = sqrt(dark_rate / (0.01 kappa)),  kappa = kappa_ratio * 2 pi f_m.
inline double dark_count_threshold(double f_m, double kappa_ratio, double dark_rate) {
    if (f_m <= 0.0 || kappa_ratio <= 0.0)
        throw DomainError("dark_count_threshold: f_m and kappa_ratio must be > 0");
    if (dark_rate < 0.0)
        throw DomainError("dark_count_threshold: dark_rate must be >= 0");
    const double kappa = kappa_ratio * 2.0 * kPi * f_m;
    return std::sqrt(dark_rate / (0.01 * kappa));
}

/// Same threshold if the decay rate is referenced to the plain frequency f_m
/// instead of omega_m = 2 pi f_m. Kept alongside the primary convention so the
/// feasibility report can show both; the finesse of the reference device
/// (pi c / L kappa = 3.33e2 at L = 0.1 m) singles out the 2 pi convention.
inline double dark_count_threshold_hz_convention(double f_m, double kappa_ratio,
                                                 double dark_rate) {
    if (f_m <= 0.0 || kappa_ratio <= 0.0)
        throw DomainError("dark_count_threshold: f_m and kappa_ratio must be > 0");
    if (dark_rate < 0.0)
        throw DomainError("dark_count_threshold: dark_rate must be >= 0");
    return std::sqrt(dark_rate / (0.01 * kappa_ratio * f_m));
}

/// Cavity finesse pi c / (L kappa) for a cavity of length L decaying at kappa.
inline double cavity_finesse(double length_m, double kappa) {
    if (length_m <= 0.0 || kappa <= 0.0)
        throw DomainError("cavity_finesse: length and kappa must be > 0");
    constexpr double c = 299792458.0;
    return kPi * c / (length_m * kappa);
}

}  // namespace weakamp
