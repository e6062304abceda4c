#pragma once

// Generic two-level weak measurement with a coherent pointer.
//
// The system starts in (|0> + |1>)/sqrt(2), couples through
// exp[-eta sigma_z (c - c^dag)], and is postselected either onto the
// orthogonal state (|0> - |1>)/sqrt(2) or onto the epsilon-tilted state
// ((1+eps)|0> - (1-eps)|1>)/sqrt(2). All pointer states are reported in the
// frame recentred by D^dag(alpha).

#include <atomic>
#include <cmath>
#include <complex>
#include <iostream>

#include "weakamp/errors.hpp"
#include "weakamp/pointer_algebra.hpp"

namespace weakamp {

// Coupling strengths above this are outside the weak regime; operations keep
// working but emit a one-time stderr warning.
inline constexpr double kWeakCouplingBound = 0.25;

namespace detail {

inline void warn_if_strong(double coupling, const char* who) {
    static std::atomic<bool> warned{false};
    if (coupling > kWeakCouplingBound && !warned.exchange(true))
        std::cerr << who << ": coupling " << coupling
                  << " exceeds weak regime bound " << kWeakCouplingBound
                  << " (results kept, accuracy of first-order forms degrades)\n";
}

}  // namespace detail

struct GenericWeakParams {
    double eta = 0.0;   // dimensionless coupling, >= 0
    Complex alpha;      // initial pointer label

    GenericWeakParams(double eta_, Complex alpha_) : eta(eta_), alpha(alpha_) {
        if (eta < 0.0) throw DomainError("GenericWeakParams: eta must be >= 0");
        detail::warn_if_strong(eta, "GenericWeakParams");
    }
};

/// Noncommutativity phase phi = -i eta (alpha - alpha*) = 2 eta Im(alpha).
inline double noncommute_phase(const GenericWeakParams& p) {
    return 2.0 * p.eta * p.alpha.imag();
}

/// The two pointer branches D(+-eta) D(alpha)|0> before postselection, each
/// riding on one system basis state. phase comes from composing the two
/// displacements: D(eta)D(alpha) = e^{-i phi/2} D(alpha + eta).
struct PointerBranches {
    Complex phase0, label0;  // system |0>: e^{-i phi/2}, alpha + eta
    Complex phase1, label1;  // system |1>: e^{+i phi/2}, alpha - eta
};

inline PointerBranches evolve_coherent_pointer(const GenericWeakParams& p) {
    const double half = 0.5 * noncommute_phase(p);
    return {std::polar(1.0, -half), p.alpha + p.eta,
            std::polar(1.0, +half), p.alpha - p.eta};
}

/// Project onto (|0> - |1>)/sqrt(2) and recentre by D^dag(alpha):
///   (1/2)(e^{-i phi}|eta> - e^{i phi}|-eta>).
/// Its branch_norm is the postselection success probability.
inline TwoBranchState postselect_orthogonal(const GenericWeakParams& p) {
    const double phi = noncommute_phase(p);
    return {0.5 * std::polar(1.0, -phi), Complex(p.eta, 0.0),
            -0.5 * std::polar(1.0, +phi), Complex(-p.eta, 0.0)};
}

/// <q>/sigma of the orthogonally postselected pointer. Vanishes identically
/// (the cross term has zero position weight and the branch means cancel); the
/// value is still computed through the branch algebra, not hard-coded.
inline double mean_q_generic(const GenericWeakParams& p) {
    return expectation_q(postselect_orthogonal(p));
}

/// First-order weak value <p> = 2 phi eta / (phi^2 + eta^2), units hbar/2sigma.
/// Extremal values +-1 occur exactly at phi = +-eta.
inline double mean_p_generic(const GenericWeakParams& p) {
    const double phi = noncommute_phase(p);
    const double den = phi * phi + p.eta * p.eta;
    if (den == 0.0)
        throw DegenerateNorm("mean_p_generic: eta = 0 and phi = 0 (dark state)");
    return 2.0 * phi * p.eta / den;
}

/// Exact (all orders) <p> via the branch algebra, for comparison with the
/// first-order form.
inline double mean_p_generic_exact(const GenericWeakParams& p) {
    return expectation_p(postselect_orthogonal(p));
}

// ---------------------------------------------------------------------------
// Ground-pointer variant: pointer starts in |0>, postselection tilted by eps.

struct GroundPointerParams {
    double eta = 0.0;
    double epsilon = 0.0;

    GroundPointerParams(double eta_, double eps_) : eta(eta_), epsilon(eps_) {
        if (eta < 0.0) throw DomainError("GroundPointerParams: eta must be >= 0");
        detail::warn_if_strong(eta, "GroundPointerParams");
    }
};

/// (1/2)[(1+eps)|eta> - (1-eps)|-eta>]; branch_norm is the success probability
/// up to the postselection vector's own normalization 1 + eps^2.
inline TwoBranchState ground_pointer_postselect(const GroundPointerParams& p) {
    return {Complex(0.5 * (1.0 + p.epsilon), 0.0), Complex(p.eta, 0.0),
            Complex(-0.5 * (1.0 - p.epsilon), 0.0), Complex(-p.eta, 0.0)};
}

/// First-order <q> = 2 eps eta / (eps^2 + eta^2) sigma; the same rational form
/// as mean_p_generic with phi -> eps (position/momentum duality of the two
/// postselections). Extremal +-sigma exactly at eps = +-eta.
inline double mean_q_ground(const GroundPointerParams& p) {
    const double den = p.epsilon * p.epsilon + p.eta * p.eta;
    if (den == 0.0)
        throw DegenerateNorm("mean_q_ground: eta = 0 and epsilon = 0 (dark state)");
    return 2.0 * p.epsilon * p.eta / den;
}

/// Exact <q> via the branch algebra: 4 eps eta / [(1+eps^2) - (1-eps^2) e^{-2 eta^2}].
inline double mean_q_ground_exact(const GroundPointerParams& p) {
    return expectation_q(ground_pointer_postselect(p));
}

/// Exactly zero for every (eta, eps): all coefficients and labels are real, so
/// the state has no momentum content. Computed through the algebra.
inline double mean_p_ground(const GroundPointerParams& p) {
    return expectation_p(ground_pointer_postselect(p));
}

}  // namespace weakamp
