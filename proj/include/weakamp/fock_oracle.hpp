#pragma once

// Brute-force verification engine in a truncated number basis. Nothing here
// reuses the closed forms: states are evolved with dense/banded matrix
// arithmetic from the Hamiltonians themselves, so agreement with the analytic
// modules is evidence, not tautology.
//
// Conventions: mirror levels 0..N-1; a two-branch vector keeps the photon's
// which-arm (or the generic model's two-level system) explicit. Hamiltonians
// are in units hbar*omega_m and time is wt = omega_m t. The coupled branch
// sees M = n - k(c + c^dag), the free branch sees n.

#include <cmath>
#include <complex>
#include <memory>
#include <utility>

#include <Eigen/Dense>

#include "weakamp/errors.hpp"
#include "weakamp/optomech_closed.hpp"
#include "weakamp/pointer_algebra.hpp"

namespace weakamp {

inline constexpr int kDefaultCutoff = 64;
inline constexpr int kMaxCutoff = 1024;
inline constexpr double kTailTol = 1e-10;

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// States.

/// Population in the top 10% of levels; the under-resolution detector.
inline double tail_mass(const VectorXcd& v) {
    const int n = static_cast<int>(v.size());
    const int tail = std::max(1, n / 10);
    return v.tail(tail).squaredNorm();
}

/// Coherent state |alpha> in N levels: a_n = e^{-|a|^2/2} alpha^n / sqrt(n!),
/// built by the stable ratio recurrence. Throws CutoffTooSmall when the top
/// 10% of levels would carry >= kTailTol of the population.
inline VectorXcd coherent_fock(Complex alpha, int N) {
    if (N < 1) throw DomainError("coherent_fock: cutoff must be >= 1");
    VectorXcd v(N);
    v(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < N; ++n) v(n) = v(n - 1) * alpha / std::sqrt(double(n));
    if (tail_mass(v) >= kTailTol)
        throw CutoffTooSmall("coherent_fock: tail population above tolerance");
    return v;
}

/// Two branches of one photon (arms A/B, or system levels 0/1), each carrying
/// a mirror (pointer) vector.
struct FockVector {
    int cutoff = 0;
    VectorXcd branch0;  // coupled arm A / system |0>
    VectorXcd branch1;  // free arm B / system |1>

    double norm2() const { return branch0.squaredNorm() + branch1.squaredNorm(); }
};

/// Density operator; matrix is N x N (mirror alone) or 2N x 2N (joint with
/// the branch qubit).
struct FockDensity {
    int cutoff = 0;
    MatrixXcd m;

    double trace_real() const { return m.trace().real(); }

    /// Hermiticity, unit trace, positive semidefiniteness.
    void validate(double herm_tol = 1e-12, double trace_tol = 1e-9,
                  double psd_floor = -1e-10) const {
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
            throw DomainError("FockDensity: not Hermitian within tolerance");
        if (std::abs(m.trace().real() - 1.0) > trace_tol ||
            std::abs(m.trace().imag()) > trace_tol)
            throw DomainError("FockDensity: trace deviates from 1");
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (m + m.adjoint()),
                                                    Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < psd_floor)
            throw DomainError("FockDensity: negative eigenvalue beyond floor");
    }
};

// ---------------------------------------------------------------------------
// Expectation values: q = c + c^dag (units sigma), p = -i(c - c^dag)
// (units hbar/2sigma). <c> is a subdiagonal sum either way.

namespace detail {

inline Complex expect_c(const VectorXcd& v) {
    Complex s = 0.0;
    for (int n = 0; n + 1 < v.size(); ++n)
        s += std::conj(v(n)) * std::sqrt(double(n + 1)) * v(n + 1);
    return s;
}

inline Complex expect_c(const MatrixXcd& rho) {
    Complex s = 0.0;  // tr(rho c) = sum_n sqrt(n+1) rho_{n+1,n}
    for (int n = 0; n + 1 < rho.rows(); ++n)
        s += std::sqrt(double(n + 1)) * rho(n + 1, n);
    return s;
}

}  // namespace detail

inline double expect_q_fock(const VectorXcd& v) {
    const double n2 = v.squaredNorm();
    if (n2 <= 0.0) throw DegenerateNorm("expect_q_fock: zero state");
    return 2.0 * detail::expect_c(v).real() / n2;
}

inline double expect_p_fock(const VectorXcd& v) {
    const double n2 = v.squaredNorm();
    if (n2 <= 0.0) throw DegenerateNorm("expect_p_fock: zero state");
    return 2.0 * detail::expect_c(v).imag() / n2;
}

inline double expect_q_fock(const FockDensity& rho) {
    const double tr = rho.trace_real();
    if (tr <= 0.0) throw DegenerateNorm("expect_q_fock: zero-trace density");
    return 2.0 * detail::expect_c(rho.m).real() / tr;
}

inline double expect_p_fock(const FockDensity& rho) {
    const double tr = rho.trace_real();
    if (tr <= 0.0) throw DegenerateNorm("expect_p_fock: zero-trace density");
    return 2.0 * detail::expect_c(rho.m).imag() / tr;
}

// ---------------------------------------------------------------------------
// Displacement matrix D(beta) = exp(beta c^dag - beta* c), via the
// eigendecomposition of the Hermitian generator K = -i(beta c^dag - beta* c).
// Approximately unitary while the states it acts on stay off the top levels.

inline MatrixXcd displacement_matrix(Complex beta, int N) {
    MatrixXcd K = MatrixXcd::Zero(N, N);
    const Complex i(0.0, 1.0);
    for (int n = 0; n + 1 < N; ++n) {
        K(n + 1, n) = -i * beta * std::sqrt(double(n + 1));
        K(n, n + 1) = std::conj(K(n + 1, n));
    }
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(K);
    const VectorXcd phases =
        (i * es.eigenvalues().cast<Complex>().array()).exp().matrix();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// ---------------------------------------------------------------------------
// Closed (unitary) evolution. The photon number in each arm is conserved, so
// each branch evolves under its own mirror Hamiltonian: M = n - k(c + c^dag)
// for arm A, n for arm B. An optional cavity term omega0_ratio * wt adds the
// same global phase to both branches (it must drop out of every observable).

namespace detail {

/// Eigendecomposition of the real symmetric tridiagonal M = n - k(c + c^dag).
struct CoupledPropagator {
    VectorXd evals;
    MatrixXd evecs;

    CoupledPropagator(double k, int N) {
        MatrixXd M = MatrixXd::Zero(N, N);
        for (int n = 0; n < N; ++n) M(n, n) = double(n);
        for (int n = 0; n + 1 < N; ++n)
            M(n, n + 1) = M(n + 1, n) = -k * std::sqrt(double(n + 1));
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(M);
        evals = es.eigenvalues();
        evecs = es.eigenvectors();
    }

    VectorXcd apply(const VectorXcd& psi, double wt) const {
        const VectorXcd phases =
            (Complex(0.0, -wt) * evals.cast<Complex>().array()).exp().matrix();
        return evecs.cast<Complex>() *
               (phases.array() * (evecs.transpose().cast<Complex>() * psi).array())
                   .matrix();
    }
};

inline VectorXcd free_rotate(const VectorXcd& psi, double wt) {
    VectorXcd out(psi.size());
    for (int n = 0; n < psi.size(); ++n)
        out(n) = psi(n) * std::polar(1.0, -wt * double(n));
    return out;
}

}  // namespace detail

/// One photon split over both arms with the mirror in |alpha>:
/// (|A> + |B>)/sqrt(2) tensor |alpha>.
inline FockVector interferometer_input(Complex alpha, int N) {
    const VectorXcd coh = coherent_fock(alpha, N);
    return {N, coh / std::sqrt(2.0), coh / std::sqrt(2.0)};
}

/// Unitary evolution of both branches to time wt. Norm is preserved to
/// rounding; the tail check guards against truncation artifacts.
inline FockVector evolve_closed(const FockVector& s, const ModelParams& p, double wt,
                                double omega0_ratio = 0.0) {
    const detail::CoupledPropagator prop(p.k, s.cutoff);
    FockVector out;
    out.cutoff = s.cutoff;
    out.branch0 = prop.apply(s.branch0, wt);
    out.branch1 = detail::free_rotate(s.branch1, wt);
    if (omega0_ratio != 0.0) {
        const Complex global = std::polar(1.0, -omega0_ratio * wt);
        out.branch0 *= global;
        out.branch1 *= global;
    }
    if (tail_mass(out.branch0) + tail_mass(out.branch1) >= kTailTol)
        throw CutoffTooSmall("evolve_closed: tail population above tolerance");
    return out;
}

/// Dark-port projection (<A| - <B|)/sqrt(2): unnormalized mirror vector and
/// the click probability (its squared norm).
struct DarkProjection {
    VectorXcd mirror;
    double prob;
};

inline DarkProjection postselect_dark(const FockVector& s) {
    VectorXcd m = (s.branch0 - s.branch1) / std::sqrt(2.0);
    const double prob = m.squaredNorm();
    return {std::move(m), prob};
}

/// Cached closed-system oracle: one eigendecomposition per (k, cutoff), then
/// O(N^2) per requested time. The cutoff is doubled from the requested start
/// until the initial coherent tail passes (CutoffTooSmall past kMaxCutoff).
class ClosedOracle {
  public:
    explicit ClosedOracle(const ModelParams& p, int cutoff = kDefaultCutoff)
        : p_(p) {
        if (p.gamma != 0.0)
            throw DomainError("ClosedOracle: gamma must be 0 (use LindbladOracle)");
        int N = cutoff;
        for (;;) {
            try {
                input_ = interferometer_input(p.alpha(), N);
                break;
            } catch (const CutoffTooSmall&) {
                N *= 2;
                if (N > kMaxCutoff) throw;
            }
        }
        cutoff_ = N;
        prop_ = std::make_unique<detail::CoupledPropagator>(p.k, N);
    }

    int cutoff() const { return cutoff_; }

    FockVector state_at(double wt, double omega0_ratio = 0.0) const {
        FockVector out;
        out.cutoff = cutoff_;
        out.branch0 = prop_->apply(input_.branch0, wt);
        out.branch1 = detail::free_rotate(input_.branch1, wt);
        if (omega0_ratio != 0.0) {
            const Complex global = std::polar(1.0, -omega0_ratio * wt);
            out.branch0 *= global;
            out.branch1 *= global;
        }
        if (tail_mass(out.branch0) + tail_mass(out.branch1) >= kTailTol)
            throw CutoffTooSmall("ClosedOracle: tail population above tolerance");
        return out;
    }

    double prob(double wt) const { return postselect_dark(state_at(wt)).prob; }

    /// Postselected mirror shift relative to the free branch baseline
    /// alpha e^{-i wt}, units sigma.
    double mean_q(double wt, double omega0_ratio = 0.0) const {
        const DarkProjection d = postselect_dark(state_at(wt, omega0_ratio));
        return expect_q_fock(d.mirror) -
               2.0 * std::real(rotated_alpha(p_.alpha(), wt));
    }

    double mean_p(double wt, double omega0_ratio = 0.0) const {
        const DarkProjection d = postselect_dark(state_at(wt, omega0_ratio));
        return expect_p_fock(d.mirror) -
               2.0 * std::imag(rotated_alpha(p_.alpha(), wt));
    }

  private:
    ModelParams p_;
    int cutoff_ = 0;
    FockVector input_;
    std::unique_ptr<detail::CoupledPropagator> prop_;
};

// ---------------------------------------------------------------------------
// Generic two-level model oracle: branch pointers D(+-eta)|alpha>, dark
// projection onto (|0> - |1>)/sqrt(2).

inline DarkProjection generic_dark_pointer(double eta, Complex alpha, int N) {
    const VectorXcd coh = coherent_fock(alpha, N);
    FockVector s;
    s.cutoff = N;
    s.branch0 = displacement_matrix(Complex(eta, 0.0), N) * coh / std::sqrt(2.0);
    s.branch1 = displacement_matrix(Complex(-eta, 0.0), N) * coh / std::sqrt(2.0);
    return postselect_dark(s);
}

// ---------------------------------------------------------------------------
// Lindblad evolution, zero temperature:
//   d sigma / dwt = -i(H_left sigma - sigma H_right)
//                   + gamma/2 (2 c sigma c^dag - n sigma - sigma n),
// applied blockwise to the joint density: the dissipator and Hamiltonians
// never mix the photon branches, so sigma_AA, sigma_AB, sigma_BB evolve
// independently (sigma_BA = sigma_AB^dag throughout).

namespace detail {

/// Banded O(N^2) applications of the mirror operators.
struct BandedOps {
    int N;
    double k;
    VectorXd nvec;  // 0..N-1
    VectorXd sq;    // sq(m) = sqrt(m+1), m = 0..N-2

    BandedOps(double k_, int N_) : N(N_), k(k_), nvec(N_), sq(N_ - 1) {
        for (int n = 0; n < N; ++n) nvec(n) = double(n);
        for (int n = 0; n + 1 < N; ++n) sq(n) = std::sqrt(double(n + 1));
    }

    // M X with M = n - k(c + c^dag)
    MatrixXcd mulM_left(const MatrixXcd& X) const {
        MatrixXcd out = nvec.asDiagonal() * X;
        out.topRows(N - 1).noalias() -= k * (sq.asDiagonal() * X.bottomRows(N - 1));
        out.bottomRows(N - 1).noalias() -= k * (sq.asDiagonal() * X.topRows(N - 1));
        return out;
    }

    MatrixXcd mulM_right(const MatrixXcd& X) const {
        MatrixXcd out = X * nvec.asDiagonal();
        out.leftCols(N - 1).noalias() -= k * (X.rightCols(N - 1) * sq.asDiagonal());
        out.rightCols(N - 1).noalias() -= k * (X.leftCols(N - 1) * sq.asDiagonal());
        return out;
    }

    MatrixXcd muln_left(const MatrixXcd& X) const { return nvec.asDiagonal() * X; }
    MatrixXcd muln_right(const MatrixXcd& X) const { return X * nvec.asDiagonal(); }

    // gamma/2 (2 c X c^dag - n X - X n)
    MatrixXcd dissipator(const MatrixXcd& X, double gamma) const {
        MatrixXcd out = MatrixXcd::Zero(N, N);
        out.topLeftCorner(N - 1, N - 1) =
            sq.asDiagonal() * X.bottomRightCorner(N - 1, N - 1) * sq.asDiagonal();
        out = 2.0 * out - muln_left(X) - muln_right(X);
        return 0.5 * gamma * out;
    }
};

/// RK4 integrator for one block with fixed (left, right) Hamiltonian choice.
struct BlockEvolver {
    const BandedOps* ops;
    double gamma;
    bool leftA, rightA;

    MatrixXcd rhs(const MatrixXcd& X) const {
        const Complex i(0.0, 1.0);
        MatrixXcd out = -i * ((leftA ? ops->mulM_left(X) : ops->muln_left(X)) -
                              (rightA ? ops->mulM_right(X) : ops->muln_right(X)));
        if (gamma != 0.0) out += ops->dissipator(X, gamma);
        return out;
    }

    void rk4_step(MatrixXcd& X, double h) const {
        const MatrixXcd k1 = rhs(X);
        const MatrixXcd k2 = rhs(X + 0.5 * h * k1);
        const MatrixXcd k3 = rhs(X + 0.5 * h * k2);
        const MatrixXcd k4 = rhs(X + h * k3);
        X += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
};

}  // namespace detail

/// Joint-density Lindblad integrator with dark-port readout. Blocks start at
/// (1/2)|alpha><alpha| each (the interferometer input) and advance with fixed
/// RK4 steps; diagonal blocks are rehermitized every step.
class LindbladOracle {
  public:
    explicit LindbladOracle(const ModelParams& p, int cutoff = 32,
                            double step = 1e-4)
        : p_(p), step_(step), ops_(p.k, cutoff) {
        if (step <= 0.0) throw DomainError("LindbladOracle: step must be > 0");
        int N = cutoff;
        VectorXcd coh;
        for (;;) {
            try {
                coh = coherent_fock(p.alpha(), N);
                break;
            } catch (const CutoffTooSmall&) {
                N *= 2;
                if (N > kMaxCutoff) throw;
            }
        }
        if (N != cutoff) ops_ = detail::BandedOps(p.k, N);
        cutoff_ = N;
        const MatrixXcd half = 0.5 * (coh * coh.adjoint());
        AA_ = half;
        AB_ = half;
        BB_ = half;
    }

    int cutoff() const { return cutoff_; }
    double wt() const { return wt_; }

    /// Integrate forward to the requested time (monotone within one instance).
    void advance_to(double wt_target) {
        if (wt_target < wt_ - 1e-12)
            throw DomainError("LindbladOracle: cannot integrate backwards");
        const detail::BlockEvolver evAA{&ops_, p_.gamma, true, true};
        const detail::BlockEvolver evAB{&ops_, p_.gamma, true, false};
        const detail::BlockEvolver evBB{&ops_, p_.gamma, false, false};
        while (wt_ < wt_target - 1e-15) {
            const double h = std::min(step_, wt_target - wt_);
            evAA.rk4_step(AA_, h);
            evAB.rk4_step(AB_, h);
            evBB.rk4_step(BB_, h);
            AA_ = 0.5 * (AA_ + AA_.adjoint()).eval();
            BB_ = 0.5 * (BB_ + BB_.adjoint()).eval();
            wt_ += h;
        }
        const double drift = std::abs(AA_.trace().real() + BB_.trace().real() - 1.0);
        if (drift > 1e-9)
            throw StepTooLarge("LindbladOracle: trace drift above 1e-9");
    }

    /// Dark-port density (1/2)(AA - AB - AB^dag + BB) and its probability.
    std::pair<FockDensity, double> dark() const {
        FockDensity rho;
        rho.cutoff = cutoff_;
        rho.m = 0.5 * (AA_ - AB_ - AB_.adjoint() + BB_);
        return {rho, rho.m.trace().real()};
    }

    double prob() const { return dark().second; }

    /// Baseline: the freely damping mirror of the uncoupled branch.
    double baseline_q() const {
        FockDensity bb{cutoff_, BB_ / BB_.trace().real()};
        return expect_q_fock(bb);
    }
    double baseline_p() const {
        FockDensity bb{cutoff_, BB_ / BB_.trace().real()};
        return expect_p_fock(bb);
    }

    double mean_q() const { return expect_q_fock(dark().first) - baseline_q(); }
    double mean_p() const { return expect_p_fock(dark().first) - baseline_p(); }

    /// Joint 2N x 2N density (branch qubit tensor mirror), for contract-level
    /// checks against FockDensity invariants.
    FockDensity joint() const {
        const int N = cutoff_;
        FockDensity rho;
        rho.cutoff = N;
        rho.m = MatrixXcd::Zero(2 * N, 2 * N);
        rho.m.topLeftCorner(N, N) = AA_;
        rho.m.topRightCorner(N, N) = AB_;
        rho.m.bottomLeftCorner(N, N) = AB_.adjoint();
        rho.m.bottomRightCorner(N, N) = BB_;
        return rho;
    }

  private:
    ModelParams p_;
    double step_;
    detail::BandedOps ops_;
    int cutoff_ = 0;
    double wt_ = 0.0;
    MatrixXcd AA_, AB_, BB_;
};

/// Free-function form over the joint 2N x 2N density, for states other than
/// the standard interferometer input (e.g. decay of |1><1|).
inline FockDensity evolve_lindblad(const FockDensity& joint, const ModelParams& p,
                                   double wt, double step = 1e-4) {
    const int N = joint.cutoff;
    if (joint.m.rows() != 2 * N || joint.m.cols() != 2 * N)
        throw DomainError("evolve_lindblad: matrix must be 2*cutoff square");
    const detail::BandedOps ops(p.k, N);
    const detail::BlockEvolver evAA{&ops, p.gamma, true, true};
    const detail::BlockEvolver evAB{&ops, p.gamma, true, false};
    const detail::BlockEvolver evBB{&ops, p.gamma, false, false};
    MatrixXcd AA = joint.m.topLeftCorner(N, N);
    MatrixXcd AB = joint.m.topRightCorner(N, N);
    MatrixXcd BB = joint.m.bottomRightCorner(N, N);
    const double tr0 = AA.trace().real() + BB.trace().real();
    double t = 0.0;
    while (t < wt - 1e-15) {
        const double h = std::min(step, wt - t);
        evAA.rk4_step(AA, h);
        evAB.rk4_step(AB, h);
        evBB.rk4_step(BB, h);
        AA = 0.5 * (AA + AA.adjoint()).eval();
        BB = 0.5 * (BB + BB.adjoint()).eval();
        t += h;
    }
    if (std::abs(AA.trace().real() + BB.trace().real() - tr0) > 1e-9)
        throw StepTooLarge("evolve_lindblad: trace drift above 1e-9");
    FockDensity out;
    out.cutoff = N;
    out.m = MatrixXcd::Zero(2 * N, 2 * N);
    out.m.topLeftCorner(N, N) = AA;
    out.m.topRightCorner(N, N) = AB;
    out.m.bottomLeftCorner(N, N) = AB.adjoint();
    out.m.bottomRightCorner(N, N) = BB;
    return out;
}

/// Dark projection of a joint 2N x 2N density.
inline std::pair<FockDensity, double> postselect_dark(const FockDensity& joint) {
    const int N = joint.cutoff;
    if (joint.m.rows() != 2 * N)
        throw DomainError("postselect_dark: matrix must be 2*cutoff square");
    FockDensity rho;
    rho.cutoff = N;
    rho.m = 0.5 * (joint.m.topLeftCorner(N, N) - joint.m.topRightCorner(N, N) -
                   joint.m.bottomLeftCorner(N, N) + joint.m.bottomRightCorner(N, N));
    return {rho, rho.m.trace().real()};
}

}  // namespace weakamp
