#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "weakamp/fock_oracle.hpp"
#include "weakamp/pointer_algebra.hpp"

using weakamp::Complex;
using weakamp::TwoBranchState;
using Catch::Approx;

namespace {

std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);

Complex random_amp(double radius) {
    std::uniform_real_distribution<double> u(-radius, radius);
    return {u(rng), u(rng)};
}

// Direct Fock-series inner product <beta|alpha>, the ground truth the closed
// form must match.
Complex overlap_series(Complex alpha, Complex beta, int terms = 80) {
    Complex sum = 0.0, term = 1.0;
    for (int n = 0; n < terms; ++n) {
        sum += term;
        term *= std::conj(beta) * alpha / double(n + 1);
    }
    return std::exp(-0.5 * (std::norm(alpha) + std::norm(beta))) * sum;
}

}  // namespace

TEST_CASE("coherent overlap closed form matches the Fock series", "[pointer]") {
    REQUIRE(weakamp::coherent_overlap(0.0, 0.0) == Complex(1.0, 0.0));

    for (int trial = 0; trial < 200; ++trial) {
        const Complex a = random_amp(2.0), b = random_amp(2.0);
        const Complex got = weakamp::coherent_overlap(a, b);
        const Complex want = overlap_series(a, b);
        REQUIRE(std::abs(got - want) < 1e-13);
    }
}

TEST_CASE("coherent overlap basic identities", "[pointer]") {
    const Complex a(0.3, -1.1), b(-0.7, 0.4);

    SECTION("self overlap is 1") {
        REQUIRE(std::abs(weakamp::coherent_overlap(a, a) - 1.0) < 1e-15);
    }
    SECTION("modulus is exp(-|a-b|^2/2)") {
        const double want = std::exp(-0.5 * std::norm(a - b));
        REQUIRE(std::abs(weakamp::coherent_overlap(a, b)) == Approx(want).epsilon(1e-14));
    }
    SECTION("swap conjugates") {
        const Complex fwd = weakamp::coherent_overlap(a, b);
        const Complex bwd = weakamp::coherent_overlap(b, a);
        REQUIRE(std::abs(fwd - std::conj(bwd)) < 1e-16);
    }
}

TEST_CASE("displacement reordering phase", "[pointer]") {
    SECTION("unit modulus and inverse under swap") {
        for (int trial = 0; trial < 50; ++trial) {
            const Complex a = random_amp(2.0), b = random_amp(2.0);
            const Complex ph = weakamp::commute_displacements(a, b);
            REQUIRE(std::abs(std::abs(ph) - 1.0) < 1e-12);
            REQUIRE(std::abs(ph * weakamp::commute_displacements(b, a) - 1.0) < 1e-12);
        }
    }
    SECTION("collinear displacements commute") {
        const Complex a(0.4, 0.9);
        REQUIRE(std::abs(weakamp::commute_displacements(a, 2.5 * a) - 1.0) < 1e-15);
    }
    SECTION("matrix representation agrees") {
        // D(a) D(b) = exp(a b* - a* b) D(b) D(a) as truncated matrices.
        const Complex a(0.3, 0.2), b(-0.1, 0.4);
        const int N = 48;
        const auto Da = weakamp::displacement_matrix(a, N);
        const auto Db = weakamp::displacement_matrix(b, N);
        const auto lhs = (Da * Db).topLeftCorner(N / 2, N / 2).eval();
        const auto rhs = (weakamp::commute_displacements(a, b) * Db * Da)
                             .topLeftCorner(N / 2, N / 2)
                             .eval();
        REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
    }
}

namespace {

// Oracle for TwoBranchState expectations: assemble the density operator in a
// truncated Fock basis and take traces.
struct FockCheck {
    double norm, q, p;
};

FockCheck fock_reference(const TwoBranchState& s, int N = 64) {
    const auto v0 = weakamp::coherent_fock(s.beta0, N);
    const auto v1 = weakamp::coherent_fock(s.beta1, N);
    const double damp = std::exp(-s.cross_damping);
    weakamp::MatrixXcd rho = std::norm(s.c0) * (v0 * v0.adjoint()) +
                             std::norm(s.c1) * (v1 * v1.adjoint()) +
                             damp * (s.c0 * std::conj(s.c1)) * (v0 * v1.adjoint()) +
                             damp * (s.c1 * std::conj(s.c0)) * (v1 * v0.adjoint());
    const double tr = rho.trace().real();
    Complex c_exp = 0.0;
    for (int n = 0; n + 1 < N; ++n)
        c_exp += std::sqrt(double(n + 1)) * rho(n + 1, n);
    return {tr, 2.0 * c_exp.real() / tr, 2.0 * c_exp.imag() / tr};
}

}  // namespace

TEST_CASE("two-branch expectations match the Fock oracle", "[pointer]") {
    std::uniform_real_distribution<double> mag(0.2, 1.0);
    std::uniform_real_distribution<double> dmp(0.0, 2.0);
    for (int trial = 0; trial < 60; ++trial) {
        TwoBranchState s;
        s.c0 = random_amp(1.0) + Complex(0.3, 0.0);
        s.c1 = random_amp(1.0) + Complex(0.0, 0.3);
        s.beta0 = random_amp(1.5);
        s.beta1 = random_amp(1.5);
        s.cross_damping = (trial % 2) ? dmp(rng) : 0.0;
        const auto ref = fock_reference(s);
        if (ref.norm < 1e-6) continue;
        REQUIRE(weakamp::branch_norm(s) == Approx(ref.norm).epsilon(1e-11));
        REQUIRE(weakamp::expectation_q(s) == Approx(ref.q).margin(1e-10));
        REQUIRE(weakamp::expectation_p(s) == Approx(ref.p).margin(1e-10));
    }
}

TEST_CASE("single-branch coherent state has q = 2 Re, p = 2 Im", "[pointer]") {
    TwoBranchState s;
    s.c0 = 1.0;
    s.beta0 = Complex(0.7, -0.4);
    s.c1 = 0.0;
    s.beta1 = 0.0;
    REQUIRE(weakamp::expectation_q(s) == Approx(1.4).epsilon(1e-14));
    REQUIRE(weakamp::expectation_p(s) == Approx(-0.8).epsilon(1e-14));
    REQUIRE(weakamp::branch_norm(s) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("degenerate norm is rejected", "[pointer]") {
    // Perfectly destructive pair: norm underflows the floor.
    TwoBranchState s;
    s.c0 = 0.5;
    s.beta0 = 0.0;
    s.c1 = -0.5;
    s.beta1 = 0.0;
    REQUIRE(weakamp::branch_norm(s) < weakamp::kNormFloor);
    REQUIRE_THROWS_AS(weakamp::expectation_q(s), weakamp::DegenerateNorm);
    REQUIRE_THROWS_AS(weakamp::expectation_p(s), weakamp::DegenerateNorm);
}

TEST_CASE("cross damping only suppresses the interference term", "[pointer]") {
    TwoBranchState s;
    s.c0 = Complex(0.5, 0.1);
    s.beta0 = Complex(0.2, 0.0);
    s.c1 = Complex(-0.45, 0.05);
    s.beta1 = Complex(-0.2, 0.1);

    TwoBranchState killed = s;
    killed.cross_damping = 700.0;  // e^{-D} underflows to 0

    const double w = std::norm(s.c0) + std::norm(s.c1);
    REQUIRE(weakamp::branch_norm(killed) == Approx(w).epsilon(1e-14));
    const double q_want = (std::norm(s.c0) * 2.0 * s.beta0.real() +
                           std::norm(s.c1) * 2.0 * s.beta1.real()) /
                          w;
    REQUIRE(weakamp::expectation_q(killed) == Approx(q_want).epsilon(1e-13));
}
