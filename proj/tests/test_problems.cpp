// Copyright 2025 The lyapsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "doctest.h"
#include "lyapsim/errors.hpp"
#include "lyapsim/problems.hpp"
#include "lyapsim/sampler.hpp"
#include "test_support.hpp"

using namespace lyapsim;
using namespace lyapsim::testing;

namespace {

ComplexMatrix diag2(double a, double b) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

const ComplexMatrix kEye2 = ComplexMatrix::Identity(2, 2);
const ComplexMatrix kHalf2 = 0.5 * ComplexMatrix::Identity(2, 2);

// Residual of the discrete-time equation A X A† − X + B = 0.
double discrete_residual(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& x) {
    return op_norm(a * x * a.adjoint() - x + b);
}

// Residual of the continuous-time equation A X + X A† + B = 0.
double continuous_residual(const ComplexMatrix& a, const ComplexMatrix& b,
                           const ComplexMatrix& x) {
    return op_norm(a * x + x * a.adjoint() + b);
}

// Independent closed form for the two-dimensional hardness family.
double hardness_closed_form(double lambda, int T) {
    const double mu = lambda * lambda;
    const double nu = (3.0 * lambda * lambda - 1.0) / 2.0;
    const double c = 1.5;
    const double x = std::pow(mu, T + 1);
    const double y = std::pow(nu, T + 1);
    return c * (x - y) / ((c + 1.0) * (c + 1.0 - c * x - y));
}

double min_eigenvalue(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
    return solver.eigenvalues().minCoeff();
}

} // namespace

TEST_SUITE("problems") {

TEST_CASE("discrete_setup horizons") {
    // ‖A‖ = 0.9, ε = 0.01: ⌈ln(100) / (2 ln(10/9))⌉ = ⌈21.853⌉ = 22.
    const ProblemInstance heavy = discrete_setup(diag2(0.9, 0.5), kHalf2, 0.01);
    CHECK(heavy.T == 22);
    CHECK(heavy.kind == ProblemKind::DiscreteLyapunov);
    CHECK(heavy.delta == 0.0);
    REQUIRE(heavy.epsilons.size() == 1);
    CHECK(heavy.epsilons[0] == 0.01);
    CHECK(heavy.schedule.horizon() == 22);
    CHECK(heavy.schedule.r[0] == doctest::Approx(1.0 / 23.0).epsilon(1e-14));
    CHECK(max_abs_diff(heavy.channel.kraus(), diag2(0.9, 0.5)) == 0.0);
    CHECK(max_abs_diff(heavy.a, diag2(0.9, 0.5)) == 0.0);
    CHECK(heavy.generator.size() == 0);

    // ‖A‖ = 0.5, ε = 0.1: ⌈ln(10) / (2 ln 2)⌉ = ⌈1.661⌉ = 2.
    CHECK(discrete_setup(diag2(0.5, 0.1), kHalf2, 0.1).T == 2);

    // A = 0 solves the equation immediately: X = B, horizon 0.
    const ProblemInstance dead = discrete_setup(ComplexMatrix::Zero(2, 2), kHalf2, 0.1);
    CHECK(dead.T == 0);
    CHECK(max_abs_diff(expected_state(dead.channel, dead.rho0, dead.schedule).state.matrix(),
                       kHalf2) == 0.0);
}

TEST_CASE("discrete_setup horizon override") {
    const ComplexMatrix a = diag2(0.5, 0.1);
    CHECK(discrete_setup(a, kHalf2, 0.1, 30).T == 30);
    CHECK(discrete_setup(a, kHalf2, 0.1, 2).T == 2);
    CHECK_THROWS_AS(discrete_setup(a, kHalf2, 0.1, 1), InsufficientHorizonError);
    CHECK_THROWS_AS(discrete_setup(a, kHalf2, 0.1, -1), InsufficientHorizonError);
}

TEST_CASE("discrete_setup input validation") {
    ComplexMatrix shift = ComplexMatrix::Zero(2, 2);
    shift(0, 1) = 1.0;
    CHECK_THROWS_AS(discrete_setup(shift, kHalf2, 0.1), NotNormalError);
    CHECK_THROWS_AS(discrete_setup(kEye2, kHalf2, 0.1), UnstableMatrixError);
    CHECK_THROWS_AS(discrete_setup(diag2(1.3, 0.2), kHalf2, 0.1), UnstableMatrixError);
    CHECK_THROWS_AS(discrete_setup(diag2(0.5, 0.1), diag2(0.8, -0.2), 0.1), InvalidStateError);
    CHECK_THROWS_AS(discrete_setup(diag2(0.5, 0.1), kEye2, 0.1), InvalidStateError);
    CHECK_THROWS_AS(discrete_setup(diag2(0.5, 0.1), kHalf2, 0.0), InvalidInputError);
    CHECK_THROWS_AS(discrete_setup(diag2(0.5, 0.1), kHalf2, 1.0), InvalidInputError);

    // Trace drift within tolerance is renormalized, not rejected.
    const ProblemInstance drift =
        discrete_setup(diag2(0.5, 0.1), kHalf2 * (1.0 + 1e-11), 0.1);
    CHECK(std::abs(drift.rho0.matrix().trace().real() - 1.0) <= 1e-12);
}

TEST_CASE("continuous_setup closed forms") {
    // A = −I: both spectral extremes are −1 and ‖A‖ = 1, so Δ = ε₁ and
    // T = ⌈ln(1/ε₂)/(2ε₁)⌉.
    const ProblemInstance iso = continuous_setup(-kEye2, kHalf2, 0.1, 0.1);
    CHECK(iso.delta == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(iso.T == 12); // ⌈ln(10)/0.2⌉ = ⌈11.513⌉
    CHECK(iso.kind == ProblemKind::ContinuousLyapunov);
    REQUIRE(iso.epsilons.size() == 2);
    CHECK(iso.epsilons[0] == 0.1);
    CHECK(iso.epsilons[1] == 0.1);
    CHECK(max_abs_diff(iso.generator, -kEye2) == 0.0);
    CHECK(max_abs_diff(iso.channel.kraus(), std::exp(-0.1) * kEye2) < 1e-14);

    // diag(−1, −2), ε₁ = ε₂ = 0.05.
    const ProblemInstance skew = continuous_setup(diag2(-1.0, -2.0), kHalf2, 0.05, 0.05);
    CHECK(skew.delta == doctest::Approx(0.0125).epsilon(1e-14));
    CHECK(skew.T == 120);
    CHECK(max_abs_diff(skew.channel.kraus(), expm(0.0125 * diag2(-1.0, -2.0))) < 1e-14);
}

TEST_CASE("continuous_setup Hermitian reduction and step-size scaling") {
    SplitMix64 rng(501);
    for (int i = 0; i < 20; ++i) {
        const Eigen::Index n = 2 + i % 3;
        const ComplexMatrix a = random_hurwitz_hermitian(n, rng);
        const double eps1 = 0.02 + 0.1 * rng.next_double();
        const double eps2 = 0.02 + 0.1 * rng.next_double();
        const ProblemInstance inst = continuous_setup(a, random_density(n, rng), eps1, eps2);

        const double kappa = condition_number_pd(-a);
        const double norm = op_norm(a);
        CHECK(inst.delta == doctest::Approx(eps1 / (kappa * norm)).epsilon(1e-12));
        CHECK(inst.T ==
              static_cast<int>(std::ceil(kappa * kappa / (2.0 * eps1) * std::log(1.0 / eps2))));

        // Δ is linear in ε₁ with everything else held fixed.
        const ProblemInstance doubled = continuous_setup(a, inst.rho0.matrix(), 2.0 * eps1, eps2);
        CHECK(doubled.delta == doctest::Approx(2.0 * inst.delta).epsilon(1e-12));
    }
}

TEST_CASE("continuous_setup input validation") {
    CHECK_THROWS_AS(continuous_setup(diag2(-1.0, 0.5), kHalf2, 0.1, 0.1), NotHurwitzError);
    CHECK_THROWS_AS(continuous_setup(ComplexMatrix::Zero(2, 2), kHalf2, 0.1, 0.1),
                    NotHurwitzError);
    ComplexMatrix shift = ComplexMatrix::Zero(2, 2);
    shift(0, 1) = 1.0;
    CHECK_THROWS_AS(continuous_setup(shift - kEye2, kHalf2, 0.1, 0.1), NotNormalError);
    CHECK_THROWS_AS(continuous_setup(-kEye2, kHalf2, 0.1, 0.0), InvalidInputError);
    CHECK_THROWS_AS(continuous_setup(-kEye2, diag2(0.9, 0.3), 0.1, 0.1), InvalidStateError);
}

TEST_CASE("inversion_I_setup") {
    // κ = 2, ε = 0.01: T = ⌈2 ln(100)⌉ = 10.
    const ProblemInstance two = inversion_I_setup(diag2(1.0, 2.0), 0.01);
    CHECK(two.T == 10);
    CHECK(two.kind == ProblemKind::InversionI);
    CHECK(max_abs_diff(two.rho0.matrix(), kHalf2) == 0.0);
    // kraus = √(I − A/‖A‖) = diag(1/√2, 0); its norm is √(1 − 1/κ).
    CHECK(max_abs_diff(two.channel.kraus(), diag2(1.0 / std::sqrt(2.0), 0.0)) < 1e-14);
    CHECK(two.channel.norm() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

    // κ = 10, ε = 0.01: T = ⌈10 ln(100)⌉ = 47.
    CHECK(inversion_I_setup(diag2(1.0, 10.0), 0.01).T == 47);

    // Perfectly conditioned A = cI degenerates to a dead channel whose
    // only surviving iterate is ρ₀ = I/N = A⁻¹/tr(A⁻¹) exactly.
    const ProblemInstance scalar = inversion_I_setup(3.0 * kEye2, 0.1);
    CHECK(op_norm(scalar.channel.kraus()) <= 1e-12);
    CHECK(max_abs_diff(
              expected_state(scalar.channel, scalar.rho0, scalar.schedule).state.matrix(),
              kHalf2) < 1e-12);

    CHECK_THROWS_AS(inversion_I_setup(diag2(1.0, -1.0), 0.1), InvalidInputError);
    ComplexMatrix shift = ComplexMatrix::Zero(2, 2);
    shift(0, 1) = 1.0;
    CHECK_THROWS_AS(inversion_I_setup(shift, 0.1), InvalidInputError);
}

TEST_CASE("inversion_II_setup delegates to the continuous family") {
    const ComplexMatrix a = diag2(1.0, 2.0);
    const ProblemInstance inst = inversion_II_setup(a, 0.2);
    CHECK(inst.T == 47); // ⌈(κ²/ε)·ln(2/ε)⌉ = ⌈20·ln(10)⌉
    CHECK(inst.kind == ProblemKind::InversionII);
    REQUIRE(inst.epsilons.size() == 1);
    CHECK(inst.epsilons[0] == 0.2);
    CHECK(max_abs_diff(inst.a, a) == 0.0);

    const ProblemInstance direct = continuous_setup(-0.5 * a, kHalf2, 0.1, 0.1);
    CHECK(inst.delta == direct.delta);
    CHECK(inst.T == direct.T);
    CHECK(max_abs_diff(inst.channel.kraus(), direct.channel.kraus()) == 0.0);
    CHECK(max_abs_diff(inst.generator, -0.5 * a) == 0.0);

    CHECK(inversion_II_setup(diag2(1.0, 10.0), 0.1).T == 2996);

    // A = I: kraus = e^{−ε/2}·I.
    const ProblemInstance iso = inversion_II_setup(kEye2, 0.3);
    CHECK(max_abs_diff(iso.channel.kraus(), std::exp(-0.15) * kEye2) < 1e-14);

    CHECK_THROWS_AS(inversion_II_setup(diag2(0.0, 1.0), 0.1), InvalidInputError);
}

TEST_CASE("oracle_discrete closed forms") {
    const ExactSolution passthrough = oracle_discrete(ComplexMatrix::Zero(2, 2), kHalf2);
    CHECK(max_abs_diff(passthrough.x, kHalf2) < 1e-14);
    CHECK(passthrough.trace == doctest::Approx(1.0).epsilon(1e-14));

    // Diagonal data decouples: X_ii = B_ii / (1 − |A_ii|²).
    const ExactSolution diag = oracle_discrete(diag2(0.8, 0.4), kHalf2);
    CHECK(max_abs_diff(diag.x, diag2(0.5 / 0.36, 0.5 / 0.84)) < 1e-12);
    CHECK(diag.trace == doctest::Approx(1.0 / 0.72 + 1.0 / 1.68).epsilon(1e-12));
    CHECK(max_abs_diff(diag.normalized.matrix(), diag2(0.7, 0.3)) < 1e-12);

    // Scalar case: x = b / (1 − a²).
    ComplexMatrix a1(1, 1), b1(1, 1);
    a1(0, 0) = 0.5;
    b1(0, 0) = 1.0;
    CHECK(oracle_discrete(a1, b1).x(0, 0).real() == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

    CHECK_THROWS_AS(oracle_discrete(kEye2, kHalf2), UnstableMatrixError);
    CHECK_THROWS_AS(oracle_discrete(diag2(0.5, 0.1), diag2(0.5, -0.1)), InvalidInputError);
    CHECK_THROWS_AS(oracle_discrete(ComplexMatrix::Zero(3, 3), kHalf2), InvalidInputError);
}

TEST_CASE("oracle_continuous closed forms") {
    SplitMix64 rng(502);
    // A = −I/2 makes the equation X = B.
    const ComplexMatrix rho = random_density(3, rng);
    CHECK(max_abs_diff(oracle_continuous(-0.5 * ComplexMatrix::Identity(3, 3), rho).x, rho) <
          1e-12);

    const ExactSolution diag = oracle_continuous(diag2(-1.0, -2.0), kHalf2);
    CHECK(max_abs_diff(diag.x, diag2(0.25, 0.125)) < 1e-12);
    CHECK(max_abs_diff(diag.normalized.matrix(), diag2(2.0 / 3.0, 1.0 / 3.0)) < 1e-12);

    // Scalar case: x = b / (2|a|).
    ComplexMatrix a1(1, 1), b1(1, 1);
    a1(0, 0) = -1.0;
    b1(0, 0) = 1.0;
    CHECK(oracle_continuous(a1, b1).x(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));

    // λ + λ̄ = 0 for a purely imaginary eigenvalue: the linear system is
    // singular and must be reported, not silently solved.
    ComplexMatrix rotor = ComplexMatrix::Zero(2, 2);
    rotor(0, 0) = std::complex<double>(0.0, 1.0);
    rotor(1, 1) = std::complex<double>(0.0, -1.0);
    CHECK_THROWS_AS(oracle_continuous(rotor, kHalf2), SingularLyapunovError);

    CHECK_THROWS_AS(oracle_continuous(diag2(-1.0, -2.0), diag2(0.5, -0.1)), InvalidInputError);
}

TEST_CASE("oracle_inverse closed forms") {
    const ExactSolution eye = oracle_inverse(kEye2);
    CHECK(max_abs_diff(eye.x, kEye2) < 1e-12);
    CHECK(eye.trace == doctest::Approx(2.0).epsilon(1e-12));

    const ExactSolution two = oracle_inverse(diag2(1.0, 2.0));
    CHECK(max_abs_diff(two.x, diag2(1.0, 0.5)) < 1e-12);
    CHECK(max_abs_diff(two.normalized.matrix(), diag2(2.0 / 3.0, 1.0 / 3.0)) < 1e-12);

    CHECK_THROWS_AS(oracle_inverse(diag2(1.0, -1.0)), InvalidInputError);
    CHECK_THROWS_AS(oracle_inverse(diag2(1.0, 0.0)), InvalidInputError);
}

TEST_CASE("oracle solutions satisfy their defining equations") {
    SplitMix64 rng(503);
    for (int i = 0; i < 100; ++i) {
        const Eigen::Index n = 2 + i % 3;

        const ComplexMatrix ad = random_normal_matrix(n, rng, 0.2 + 0.7 * rng.next_double());
        const ComplexMatrix b = random_density(n, rng);
        const ExactSolution xd = oracle_discrete(ad, b);
        CHECK(discrete_residual(ad, b, xd.x) <= 1e-9 * xd.trace);
        CHECK(is_psd(xd.x));
        CHECK(xd.trace > 0.0);
        CHECK_NOTHROW(DensityMatrix{xd.normalized.matrix()});

        const ComplexMatrix ac = random_hurwitz_normal(n, rng);
        const ExactSolution xc = oracle_continuous(ac, b);
        CHECK(continuous_residual(ac, b, xc.x) <= 1e-8 * std::max(1.0, xc.trace));
        CHECK(is_psd(xc.x));

        const ComplexMatrix ap = random_pd_kappa(n, rng, 1.0 + 9.0 * rng.next_double());
        const ExactSolution xi = oracle_inverse(ap);
        CHECK(op_norm(ap * xi.x - ComplexMatrix::Identity(n, n)) <= 1e-8);
    }
}

TEST_CASE("inversion reduces to the discrete-time equation") {
    SplitMix64 rng(504);
    for (int i = 0; i < 25; ++i) {
        const Eigen::Index n = 2 + i % 3;
        const ComplexMatrix a = random_pd_kappa(n, rng, 1.5 + 6.0 * rng.next_double());
        const ComplexMatrix kraus =
            sqrtm_psd(ComplexMatrix::Identity(n, n) - a / op_norm(a));
        const ComplexMatrix uniform_b =
            ComplexMatrix::Identity(n, n) / static_cast<double>(n);
        const ExactSolution via_discrete = oracle_discrete(kraus, uniform_b);
        const ExactSolution via_inverse = oracle_inverse(a);
        CHECK(trace_distance(via_discrete.normalized, via_inverse.normalized) <= 1e-8);
    }
}

TEST_CASE("oracle_for dispatches on the instance kind") {
    const ProblemInstance d = discrete_setup(diag2(0.8, 0.4), kHalf2, 0.1);
    CHECK(max_abs_diff(oracle_for(d).x, oracle_discrete(d.a, kHalf2).x) == 0.0);

    const ProblemInstance c = continuous_setup(diag2(-1.0, -2.0), kHalf2, 0.1, 0.1);
    CHECK(max_abs_diff(oracle_for(c).x, oracle_continuous(c.a, kHalf2).x) == 0.0);

    const ProblemInstance i1 = inversion_I_setup(diag2(1.0, 2.0), 0.1);
    CHECK(max_abs_diff(oracle_for(i1).x, oracle_inverse(i1.a).x) == 0.0);

    const ProblemInstance i2 = inversion_II_setup(diag2(1.0, 2.0), 0.2);
    CHECK(max_abs_diff(oracle_for(i2).x, oracle_inverse(i2.a).x) == 0.0);
}

TEST_CASE("problem kinds print stable names") {
    CHECK(std::string(to_string(ProblemKind::DiscreteLyapunov)) == "discrete");
    CHECK(std::string(to_string(ProblemKind::ContinuousLyapunov)) == "continuous");
    CHECK(std::string(to_string(ProblemKind::InversionI)) == "inversion-i");
    CHECK(std::string(to_string(ProblemKind::InversionII)) == "inversion-ii");
}

TEST_CASE("partial sums increase towards the solution in the Loewner order") {
    SplitMix64 rng(505);
    for (int i = 0; i < 100; ++i) {
        const Eigen::Index n = 2 + i % 3;
        const ComplexMatrix a = random_normal_matrix(n, rng, 0.2 + 0.75 * rng.next_double());
        const ComplexMatrix b = random_density(n, rng);
        const KrausChannel ch(a);
        const ExactSolution sol = oracle_discrete(a, b);

        ComplexMatrix partial = ComplexMatrix::Zero(n, n);
        ComplexMatrix iterate = b;
        ComplexMatrix previous = partial;
        for (int k = 0; k <= 6; ++k) {
            partial += iterate;
            iterate = lyapsim::apply(ch, iterate);
            // Each increment is PSD, and the tail X − S(T) stays PSD.
            CHECK(min_eigenvalue(partial - previous) >= -1e-10);
            CHECK(min_eigenvalue(sol.x - partial) >= -1e-10);
            previous = partial;
        }
    }
}

TEST_CASE("truncation error is bounded by the norm power") {
    SplitMix64 rng(506);
    for (int i = 0; i < 40; ++i) {
        const Eigen::Index n = 2 + i % 3;
        const double norm = 0.3 + 0.6 * rng.next_double();
        const ComplexMatrix a = random_normal_matrix(n, rng, norm);
        const ComplexMatrix b = random_density(n, rng);
        const int T = static_cast<int>(rng.next() % 12);

        const ExpectedState es =
            expected_state(KrausChannel(a), DensityMatrix(b), uniform(T));
        const ExactSolution sol = oracle_discrete(a, b);
        CHECK(trace_distance(es.state, sol.normalized) <=
              std::pow(norm, 2 * (T + 1)) + 1e-12);
    }
}

TEST_CASE("hardness_instance spot values") {
    const HardnessInstance inst = hardness_instance(0.8);
    // A = diag(λ, √ν) with ν = (3λ² − 1)/2 = 0.46, B = I/2.
    CHECK(max_abs_diff(inst.a, diag2(0.8, std::sqrt(0.46))) < 1e-14);
    CHECK(max_abs_diff(inst.b, kHalf2) == 0.0);

    CHECK(inst.exact_distance(2) == doctest::Approx(hardness_closed_form(0.8, 2)).epsilon(1e-13));
    CHECK(inst.exact_distance(2) == doctest::Approx(0.0492099).epsilon(1e-5));
    CHECK(inst.lower_bound(2) == doctest::Approx(std::pow(0.8, 8) / 10.0).epsilon(1e-14));

    // At T = 0 both sides evaluate to exactly 1/10; allow rounding when
    // checking the ordering.
    CHECK(inst.lower_bound(0) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(inst.exact_distance(0) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(inst.exact_distance(0) >= inst.lower_bound(0) - 1e-12);

    CHECK_THROWS_AS(inst.exact_distance(-1), InvalidInputError);
    CHECK_THROWS_AS(inst.lower_bound(-1), InvalidInputError);
}

TEST_CASE("hardness_instance domain") {
    CHECK_THROWS_AS(hardness_instance(0.5), InvalidInputError);
    CHECK_THROWS_AS(hardness_instance(0.70), InvalidInputError);
    CHECK_THROWS_AS(hardness_instance(1.0), InvalidInputError);
    CHECK_NOTHROW(hardness_instance(1.0 / std::sqrt(2.0)));
    CHECK_NOTHROW(hardness_instance(0.99));
}

TEST_CASE("hardness closed form dominates its bound and matches simulation") {
    for (double lambda : {0.75, 0.8, 0.9, 0.95}) {
        const HardnessInstance inst = hardness_instance(lambda);
        const ExactSolution sol = oracle_discrete(inst.a, inst.b);
        for (int T = 0; T <= 10; ++T) {
            const double exact = inst.exact_distance(T);
            CHECK(exact == doctest::Approx(hardness_closed_form(lambda, T)).epsilon(1e-12));
            CHECK(exact >= inst.lower_bound(T) - 1e-12);

            // The closed form is the truncation error of the actual process.
            const ExpectedState es = expected_state(KrausChannel(inst.a),
                                                    DensityMatrix(inst.b), uniform(T));
            CHECK(std::abs(trace_distance(es.state, sol.normalized) - exact) <= 1e-9);
        }
    }
}

} // TEST_SUITE("problems")
