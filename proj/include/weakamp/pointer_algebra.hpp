#pragma once

// Exact algebra for superpositions of two coherent branches.
//
// Conventions used across the library:
//   q is reported in units of the ground-state width sigma,
//   p in units of hbar/(2 sigma), so |q| <= 1 means "within the zero-point
//   fluctuation". A coherent label beta has <q> = 2 Re beta, <p> = 2 Im beta.

#include <cmath>
#include <complex>

#include "weakamp/errors.hpp"

namespace weakamp {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Relative floor below which a postselected norm counts as degenerate.
inline constexpr double kNormFloor = 1e-14;

/// <beta|alpha> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(beta)*alpha).
/// First argument is the ket. |result| <= 1 with equality iff alpha == beta.
inline Complex coherent_overlap(Complex alpha, Complex beta) {
    return std::exp(-0.5 * std::norm(alpha) - 0.5 * std::norm(beta) +
                    std::conj(beta) * alpha);
}

/// Phase from swapping two displacements: D(a)D(b) = exp[a b* - a* b] D(b)D(a).
/// The exponent is purely imaginary, so the result has unit modulus.
inline Complex commute_displacements(Complex alpha, Complex beta) {
    return std::exp(alpha * std::conj(beta) - std::conj(alpha) * beta);
}

/// State c0|beta0> + c1|beta1>, optionally with the cross term damped by
/// exp(-cross_damping) (cross_damping = 0 means pure):
///   rho = |c0|^2 |b0><b0| + |c1|^2 |b1><b1|
///       + e^{-D} (c1 c0* |b1><b0| + h.c.)
struct TwoBranchState {
    Complex c0;
    Complex beta0;
    Complex c1;
    Complex beta1;
    double cross_damping = 0.0;
};

namespace detail {

struct BranchSums {
    double w0, w1;   // |c0|^2, |c1|^2
    Complex cross;   // e^{-D} c0* c1 <beta0|beta1>
};

inline BranchSums branch_sums(const TwoBranchState& s) {
    BranchSums r;
    r.w0 = std::norm(s.c0);
    r.w1 = std::norm(s.c1);
    // <beta0|beta1>: ket is beta1, bra is beta0.
    const Complex ov = coherent_overlap(s.beta1, s.beta0);
    r.cross = std::exp(-s.cross_damping) * std::conj(s.c0) * s.c1 * ov;
    return r;
}

inline double checked_norm(const BranchSums& b, const char* who) {
    const double base = b.w0 + b.w1;
    const double tr = base + 2.0 * b.cross.real();
    if (tr <= kNormFloor * base || base == 0.0)
        throw DegenerateNorm(std::string(who) + ": norm below relative floor");
    return tr;
}

}  // namespace detail

/// Trace of the (possibly damped) two-branch density operator. Never negative:
/// trace >= (|c0| - |c1|)^2.
inline double branch_norm(const TwoBranchState& s) {
    const auto b = detail::branch_sums(s);
    return b.w0 + b.w1 + 2.0 * b.cross.real();
}

/// <q>/sigma = Tr(rho (c + c^dag)) / Tr(rho). Throws DegenerateNorm when the
/// trace is below kNormFloor relative to |c0|^2 + |c1|^2.
inline double expectation_q(const TwoBranchState& s) {
    const auto b = detail::branch_sums(s);
    const double tr = detail::checked_norm(b, "expectation_q");
    // <b|(c + c^dag)|a> = (a + conj(b)) <b|a>
    double num = b.w0 * 2.0 * s.beta0.real() + b.w1 * 2.0 * s.beta1.real();
    num += 2.0 * (b.cross * (s.beta1 + std::conj(s.beta0))).real();
    return num / tr;
}

/// <p> in units hbar/(2 sigma): Tr(rho (c - c^dag)/i) / Tr(rho).
inline double expectation_p(const TwoBranchState& s) {
    const auto b = detail::branch_sums(s);
    const double tr = detail::checked_norm(b, "expectation_p");
    double num = b.w0 * 2.0 * s.beta0.imag() + b.w1 * 2.0 * s.beta1.imag();
    const Complex minus_i(0.0, -1.0);
    num += 2.0 * (b.cross * (s.beta1 - std::conj(s.beta0)) * minus_i).real();
    return num / tr;
}

}  // namespace weakamp
