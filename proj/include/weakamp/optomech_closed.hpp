#pragma once

// Closed (undamped) optomechanical weak measurement in a Mach-Zehnder
// interferometer: single photon in arm A drives the movable mirror, the dark
// output port postselects orthogonally, and the mirror picks up a position
// shift far above the one-photon bound 4k sigma.
//
// All times are dimensionless, wt = omega_m t. Position is in units of the
// zero-point width sigma, momentum in units hbar/(2 sigma).

#include <cmath>
#include <complex>

#include "weakamp/errors.hpp"
#include "weakamp/pointer_algebra.hpp"
#include "weakamp/weak_core.hpp"

namespace weakamp {

// Expansions about wt = 0 and wt = pi are trusted only this far out; keeps
// the truncation error below the 1% comparison tolerance at k <= 0.01.
inline constexpr double kSmalltimeBound = 0.1;

struct ModelParams {
    double k = 0.0;           // scaled coupling g/omega_m
    double alpha_abs = 0.0;   // |alpha| of the mirror's initial coherent state
    double theta = 0.0;       // arg(alpha), radians
    double gamma = 0.0;       // mechanical damping gamma_m/omega_m
    double kappa_ratio = 10.0;  // cavity decay kappa/omega_m

    ModelParams(double k_, double alpha_abs_, double theta_, double gamma_ = 0.0,
                double kappa_ratio_ = 10.0)
        : k(k_), alpha_abs(alpha_abs_), theta(theta_), gamma(gamma_),
          kappa_ratio(kappa_ratio_) {
        if (!(std::isfinite(k) && std::isfinite(alpha_abs) && std::isfinite(theta) &&
              std::isfinite(gamma) && std::isfinite(kappa_ratio)))
            throw DomainError("ModelParams: fields must be finite");
        if (k < 0.0) throw DomainError("ModelParams: k must be >= 0");
        if (alpha_abs < 0.0) throw DomainError("ModelParams: alpha_abs must be >= 0");
        if (gamma < 0.0) throw DomainError("ModelParams: gamma must be >= 0");
        if (kappa_ratio <= 0.0) throw DomainError("ModelParams: kappa_ratio must be > 0");
        detail::warn_if_strong(k, "ModelParams");
    }

    Complex alpha() const { return std::polar(alpha_abs, theta); }
};

/// Physical cavity/mirror quantities from which the dimensionless model
/// derives: sigma = sqrt(hbar/2 m omega_m), g = (omega0/L) sigma, k = g/omega_m.
struct DeviceParams {
    double omega0 = 0.0;   // cavity angular frequency, rad/s
    double length = 0.0;   // cavity length L, m
    double mass = 0.0;     // mirror mass, kg
    double omega_m = 0.0;  // mechanical angular frequency, rad/s

    static constexpr double kHbar = 1.054571817e-34;

    double sigma() const { return std::sqrt(kHbar / (2.0 * mass * omega_m)); }
    double coupling_g() const { return omega0 / length * sigma(); }
    double k() const { return coupling_g() / omega_m; }
};

/// Kerr-like self phase phi(t) = k^2 (wt - sin wt); >= 0 and nondecreasing.
inline double kerr_phase(double k, double wt) {
    return k * k * (wt - std::sin(wt));
}

/// Branch displacement xi(t) = k(1 - e^{-i wt}); |xi| <= 2k, xi(0) = 0.
inline Complex xi(double k, double wt) {
    return k * (1.0 - std::polar(1.0, -wt));
}

/// Free coherent rotation of the mirror label, alpha e^{-i wt}.
inline Complex rotated_alpha(Complex alpha, double wt) {
    return alpha * std::polar(1.0, -wt);
}

/// Noncommutativity phase between the displaced and undisplaced branches:
/// phi(alpha,t) = -i[xi p* - xi* p] = 2 Im[xi conj(p)], p = alpha e^{-i wt}.
inline double phi_alpha(double k, Complex alpha, double wt) {
    return 2.0 * std::imag(xi(k, wt) * std::conj(rotated_alpha(alpha, wt)));
}

/// Dark-port mirror state, recentred on the freely evolving label alpha e^{-iwt}:
///   (1/2)(e^{i[phi(t)+phi(alpha,t)]} |xi(t)> - |0>).
/// branch_norm of the result is the postselection success probability.
inline TwoBranchState postselected_mirror_state(const ModelParams& p, double wt) {
    const double total = kerr_phase(p.k, wt) + phi_alpha(p.k, p.alpha(), wt);
    return {0.5 * std::polar(1.0, total), xi(p.k, wt),
            Complex(-0.5, 0.0), Complex(0.0, 0.0)};
}

/// Mirror shift of the one-photon branch alone, 2k(1 - cos wt); peaks at 4k.
/// This is the ceiling any unamplified scheme obeys.
inline double mean_q_unpostselected(double k, double wt) {
    return 2.0 * k * (1.0 - std::cos(wt));
}

/// Small-time expansion of the postselected shift (wt, k << 1):
///   4 k^2 |a| (wt^2 cos th + wt^3/2 sin th)
///   ------------------------------------------------
///   k^2 wt^2 + 4 k^2 |a|^2 (wt cos th + wt^2/2 sin th)^2
inline double mean_q_smalltime(const ModelParams& p, double wt) {
    if (wt > kSmalltimeBound)
        throw DomainError("mean_q_smalltime: wt outside expansion window");
    if (wt == 0.0) {
        // Analytic wt->0 limit of the rational form.
        const double u = p.alpha_abs * std::cos(p.theta);
        return 4.0 * u / (1.0 + 4.0 * u * u);
    }
    // The printed rational form carries a common k^2 in numerator and
    // denominator; canceling it keeps the k -> 0 limit finite.
    const double c = std::cos(p.theta), s = std::sin(p.theta);
    const double a = p.alpha_abs;
    const double num = 4.0 * a * (wt * wt * c + 0.5 * wt * wt * wt * s);
    const double lin = wt * c + 0.5 * wt * wt * s;
    const double den = wt * wt + 4.0 * a * a * lin * lin;
    return num / den;
}

///// Postselected mirror shift, all orders:
///   [Re xi - e^{-|xi|^2/2} Re(xi e^{i Phi})] / [1 - e^{-|xi|^2/2} cos Phi],
/// Phi = phi(t) + phi(alpha,t). Where the postselection probability
/// underflows the norm floor (dark port truly dark, e.g. wt = 0) the
/// small-time limit is returned instead of a 0/0.
inline double mean_q_closed(const ModelParams& p, double wt) {
    const Complex x = xi(p.k, wt);
    const double total = kerr_phase(p.k, wt) + phi_alpha(p.k, p.alpha(), wt);
    const double damp = std::exp(-0.5 * std::norm(x));
    const double den = 1.0 - damp * std::cos(total);
    if (den <= kNormFloor) return mean_q_smalltime(p, std::min(wt, kSmalltimeBound));
    const double num = x.real() - damp * std::real(x * std::polar(1.0, total));
    return num / den;
}

// ---------------------------------------------------------------------------
// Extremal-amplification times near wt = 0.

/// Result of solve_max_amp_time. plateau=true means the extremal condition
/// holds identically over the whole small-time window (reported wt = 0); the
/// amplification sits on a broad plateau instead of a single instant.
struct MaxAmpTime {
    bool plateau = false;
    double wt = 0.0;
};

/// Smallest positive wt at which the first-order shift reaches sign*1 sigma,
/// from  k wt = sign * 2k|a|(wt^2/2 sin th + wt cos th).  Dividing by k wt
/// leaves a linear condition; the root is
///   wt* = (sign - 2|a| cos th) / (|a| sin th).
/// Throws NoRoot when no solution lies in (0, kSmalltimeBound].
inline MaxAmpTime solve_max_amp_time(const ModelParams& p, int sign) {
    if (sign != 1 && sign != -1)
        throw DomainError("solve_max_amp_time: sign must be +1 or -1");
    if (p.alpha_abs == 0.0)
        throw NoRoot("solve_max_amp_time: alpha = 0 has no amplification");
    const double c = std::cos(p.theta), s = std::sin(p.theta);
    const double num = static_cast<double>(sign) - 2.0 * p.alpha_abs * c;
    // num = 0 means the target is met already in the wt -> 0 limit: the shift
    // plateaus there (theta = 0 or pi with matching sign). Detect it on the
    // numerator, not on sin(theta): at theta = pi the rounded sine is ~1e-16
    // while the cosine is exactly -1.
    if (num == 0.0) return {true, 0.0};
    if (s == 0.0)
        throw NoRoot("solve_max_amp_time: condition unsatisfiable at sin(theta) = 0");
    const double root = num / (p.alpha_abs * s);
    if (root > 0.0 && root <= kSmalltimeBound) return {false, root};
    throw NoRoot("solve_max_amp_time: no root in (0, smalltime bound]");
}

// ---------------------------------------------------------------------------
// First-order Fock-pair states (expansions of the postselected state).

/// Two-level truncation u|0> + v|1> of a postselected state near an expansion
/// point; unnormalized, expectation helpers divide by the norm.
struct FockPair {
    Complex amp0, amp1;

    double norm() const { return std::norm(amp0) + std::norm(amp1); }

    double q() const {
        const double n = norm();
        if (n <= 0.0) throw DegenerateNorm("FockPair::q: zero-norm state");
        return 2.0 * std::real(std::conj(amp0) * amp1) / n;
    }
    double p() const {
        const double n = norm();
        if (n <= 0.0) throw DegenerateNorm("FockPair::p: zero-norm state");
        return 2.0 * std::imag(std::conj(amp0) * amp1) / n;
    }
};

/// Expansion of the postselected state about wt = 0 (second order in wt):
///   (1/2)[ i k wt |1> + i 2k|a|(wt^2/2 sin th + wt cos th) |0> ].
inline FockPair smalltime_state(const ModelParams& p, double wt) {
    if (wt > kSmalltimeBound)
        throw DomainError("smalltime_state: wt outside expansion window");
    const Complex i(0.0, 1.0);
    const double lin = 0.5 * wt * wt * std::sin(p.theta) + wt * std::cos(p.theta);
    return {i * p.k * p.alpha_abs * lin, 0.5 * i * p.k * wt};
}

/// Expansion of the postselected state about wt = pi (first order in wt-pi):
///   (1/2)[ 2k |1> + i 2k|a|(2 sin th - (wt-pi) cos th) |0> ].
inline FockPair pi_expansion_state(const ModelParams& p, double wt) {
    const double delta = wt - kPi;
    if (std::abs(delta) > kSmalltimeBound)
        throw DomainError("pi_expansion_state: wt outside expansion window");
    const Complex i(0.0, 1.0);
    const double coeff = 2.0 * std::sin(p.theta) - delta * std::cos(p.theta);
    return {i * p.k * p.alpha_abs * coeff, Complex(p.k, 0.0)};
}

/// Signed residual of the wt ~ pi extremal condition
///   sign * 2k = 2k|a|(2 sin th - (wt-pi) cos th);
/// zero iff the |0> and |1> amplitudes match in magnitude, pinning <p> at an
/// extremum of magnitude 1.
inline double pi_extremum_residual(const ModelParams& p, double wt, int sign) {
    if (sign != 1 && sign != -1)
        throw DomainError("pi_extremum_residual: sign must be +1 or -1");
    const double delta = wt - kPi;
    const double coeff = 2.0 * std::sin(p.theta) - delta * std::cos(p.theta);
    return 2.0 * p.k * p.alpha_abs * coeff - static_cast<double>(sign) * 2.0 * p.k;
}

inline bool pi_extremum_holds(const ModelParams& p, double wt, int sign) {
    const double scale = 2.0 * p.k * std::max(1.0, p.alpha_abs);
    return std::abs(pi_extremum_residual(p, wt, sign)) <= 1e-12 * std::max(scale, 1e-300);
}

}  // namespace weakamp
