#pragma once

// Damped mirror dynamics under the zero-temperature Lindblad master equation:
// each interferometer branch stays coherent with a drifting label
// phi_n(gamma, t), and the cross term decays by e^{-D(gamma,t)} on top of the
// label overlap.
//
// Expectation values are computed from the branch density operator through
// the pointer algebra, in the frame displaced by -phi_0 so that the reference
// baseline cancels exactly (no large-|alpha| cancellation).
//
// Known limitation, kept deliberately: the cross-term phase below is the
// gamma = 0 expression phi(t) + phi(alpha,t)/2 (plus the label-overlap tau).
// The exact master-equation solution replaces it with
//   Theta(t) = integral_0^t [ k Re phi_1 + gamma Im(phi_1 conj(phi_0)) ] ds,
// which reduces to the same thing at gamma = 0 but picks up O(gamma k t^2)
// corrections otherwise. The labels phi_n and the damping D are exact. The
// phase error is invisible at small wt and is amplified near wt = 2 pi, where
// the postselection probability is dominated by the residual phase; the
// Lindblad oracle comparison reports the discrepancy honestly rather than
// papering over it.

#include <cmath>
#include <complex>

#include "weakamp/errors.hpp"
#include "weakamp/optomech_closed.hpp"
#include "weakamp/pointer_algebra.hpp"

namespace weakamp {

/// Branch label phi_n(gamma,t) = alpha e^{-(i+g/2)wt} + (ikn/(i+g/2))(1 - e^{-(i+g/2)wt}).
/// n = 0: photon in the static arm; n = 1: photon driving the mirror.
/// At gamma = 0 this is alpha e^{-i wt} + n xi(wt).
inline Complex phi_n(const ModelParams& p, double wt, int n) {
    if (n != 0 && n != 1) throw DomainError("phi_n: n must be 0 or 1");
    const Complex u(0.5 * p.gamma, 1.0);              // i + gamma/2
    const Complex decay = std::exp(-u * wt);
    return p.alpha() * decay +
           Complex(0.0, static_cast<double>(n) * p.k) / u * (1.0 - decay);
}

/// Complex-valued bracket of the decoherence exponent before the prefactor:
///   wt + (1 - e^{-g wt})/g - z - conj(z),  z = (e^{(i-g/2)wt} - 1)/(i - g/2).
/// The two oscillating terms are conjugates, so the imaginary residue is pure
/// rounding; callers assert it below 1e-12.
inline Complex decoherence_bracket(const ModelParams& p, double wt) {
    const double g = p.gamma;
    // expm1 keeps (1 - e^{-g wt})/g accurate as g -> 0.
    const double relax = -std::expm1(-g * wt) / g;
    const Complex w(-0.5 * g, 1.0);                   // i - gamma/2
    const Complex z = (std::exp(w * wt) - 1.0) / w;
    const Complex zc = (std::exp(std::conj(w) * wt) - 1.0) / std::conj(w);
    return Complex(wt + relax, 0.0) - z - zc;
}

/// Decoherence exponent D(gamma,t) >= 0; equals
/// [k^2 g / (2(1+g^2/4))] * integral_0^wt (1 + e^{-g s} - 2 e^{-g s/2} cos s) ds.
/// gamma = 0 returns the continuity limit 0 (the prefactor carries the gamma).
inline double decoherence_D(const ModelParams& p, double wt) {
    if (p.gamma == 0.0) return 0.0;
    const double pref = p.k * p.k * p.gamma / (2.0 * (1.0 + 0.25 * p.gamma * p.gamma));
    return pref * decoherence_bracket(p, wt).real();
}

/// Everything the damped density operator is built from.
struct DampedBranchData {
    Complex phi0, phi1;     // branch labels
    double D;               // decoherence exponent, >= 0
    double kerr;            // phi(t) = k^2 (wt - sin wt)
    double phi_alpha_half;  // phi(alpha,t)/2, the displacement-swap phase
    double tau;             // Im(conj(phi0) phi1), overlap phase of the labels
};

inline DampedBranchData damped_branch_data(const ModelParams& p, double wt) {
    DampedBranchData d;
    d.phi0 = phi_n(p, wt, 0);
    d.phi1 = phi_n(p, wt, 1);
    d.D = decoherence_D(p, wt);
    d.kerr = kerr_phase(p.k, wt);
    d.phi_alpha_half = 0.5 * phi_alpha(p.k, p.alpha(), wt);
    d.tau = std::imag(std::conj(d.phi0) * d.phi1);
    return d;
}

/// Postselected damped mirror state, displaced by -phi_0:
///   branch 1: (1/2) e^{i(phi(t) + phi(alpha,t)/2 + tau)} |phi_1 - phi_0>
///   branch 0: -(1/2) |0>
/// with cross damping e^{-D}. The displacement adds e^{i tau} to branch 1 and
/// nothing to branch 0; expectation_q/p of this state already equal the
/// baseline-subtracted lab-frame values because the common offset cancels.
inline TwoBranchState mirror_state_damped(const ModelParams& p, double wt) {
    const DampedBranchData d = damped_branch_data(p, wt);
    const double phase = d.kerr + d.phi_alpha_half + d.tau;
    TwoBranchState s{Complex(-0.5, 0.0), Complex(0.0, 0.0),
                     0.5 * std::polar(1.0, phase), d.phi1 - d.phi0,
                     d.D};
    return s;
}

/// Mirror shift under damping, units sigma, relative to the freely damped
/// reference |phi_0>. Reduces to mean_q_closed at gamma = 0. Throws
/// DegenerateNorm where the postselection probability underflows (wt = 0).
inline double mean_q_damped(const ModelParams& p, double wt) {
    return expectation_q(mirror_state_damped(p, wt));
}

/// Momentum analogue, units hbar/(2 sigma).
inline double mean_p_damped(const ModelParams& p, double wt) {
    return expectation_p(mirror_state_damped(p, wt));
}

/// Closed-system <p> via the same displaced-frame route at gamma = 0;
/// companion to mean_q_closed for the momentum figures.
inline double mean_p_closed(const ModelParams& p, double wt) {
    ModelParams q = p;
    q.gamma = 0.0;
    return mean_p_damped(q, wt);
}

}  // namespace weakamp
