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

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lyapsim/channel.hpp"
#include "lyapsim/linalg.hpp"
#include "lyapsim/schedule.hpp"

namespace lyapsim {

enum class ProblemKind { DiscreteLyapunov, ContinuousLyapunov, InversionI, InversionII };

const char* to_string(ProblemKind kind);

// A fully parameterized run of the stopped process: the channel, the initial
// state, the horizon with its uniform schedule, and the accuracy targets the
// horizon was derived from.  For the continuous family `delta` is the time
// discretization Δ and `generator` the Hurwitz generator G with
// kraus = exp(Δ·G); both are needed later by the robustness budget and the
// trace-estimator bias bound.
struct ProblemInstance {
    ProblemKind kind;
    KrausChannel channel;
    DensityMatrix rho0;
    int T;
    ProbabilitySchedule schedule;
    double delta;                  // Δ; 0 for the discrete family
    std::vector<double> epsilons;  // (ε) or (ε₁, ε₂)
    ComplexMatrix a;               // the user-supplied matrix A
    ComplexMatrix generator;       // continuous family: G with kraus = exp(Δ·G); empty otherwise
};

// Ground truth produced by a brute-force classical solve.
struct ExactSolution {
    ComplexMatrix x;            // PSD solution of the defining equation
    double trace;               // tr(X) > 0
    DensityMatrix normalized;   // X / tr(X)
};

// The two-dimensional family that makes dependence on the horizon provably
// unavoidable: closed-form distance between the truncated and untruncated
// normalized solutions, next to its lower bound.
struct HardnessInstance {
    ComplexMatrix a;
    ComplexMatrix b;
    std::function<double(int)> exact_distance; // distance after horizon T
    std::function<double(int)> lower_bound;    // λ^{4T}/10
};

// Discrete-time instance: kraus = A, ρ₀ = B, T* = ⌈ln(1/ε)/(2 ln(1/‖A‖))⌉
// (0 when A = 0).  A must be normal with ‖A‖ < 1; B PSD with tr(B) = 1
// (renormalized when within tolerance).  T_override may raise the horizon
// above T*, never lower it (InsufficientHorizonError).
ProblemInstance discrete_setup(const ComplexMatrix& a, const ComplexMatrix& b, double epsilon,
                               std::optional<int> T_override = std::nullopt);

// Continuous-time instance: Δ = (ε₁/‖A‖)·(max Re λ / min Re λ),
// T* = ⌈(1/2ε₁)·ln(1/ε₂)·‖A‖·|min Re λ| / |max Re λ|²⌉, kraus = exp(Δ·A).
// A must be normal Hurwitz (all Re λ < 0); for Hermitian A these reduce to
// Δ = ε₁/(κ‖A‖) and T* = ⌈(κ²/2ε₁)·ln(1/ε₂)⌉.
ProblemInstance continuous_setup(const ComplexMatrix& a, const ComplexMatrix& b, double epsilon1,
                                 double epsilon2);

// Matrix inversion via the discrete-time equation: kraus = √(I − A/‖A‖),
// ρ₀ = I/N, T = ⌈κ·ln(1/ε)⌉.  A must be Hermitian positive definite.  The
// degenerate κ = 1 case (kraus = 0) is accepted: the expected state is
// exactly I/N = A⁻¹/tr(A⁻¹).
ProblemInstance inversion_I_setup(const ComplexMatrix& a, double epsilon);

// Matrix inversion via the continuous-time equation, instantiated as
// continuous_setup(−A/2, I/N, ε/2, ε/2): kraus = exp(−ε·A/(2κ‖A‖)),
// T = ⌈(κ²/ε)·ln(2/ε)⌉.
ProblemInstance inversion_II_setup(const ComplexMatrix& a, double epsilon);

// Solves A X A† − X + B = 0 by dense vectorization (desk scale only; the
// N²×N² solve is the simplest method to audit as ground truth).  Requires
// spectral radius of A below 1 and B PSD.
ExactSolution oracle_discrete(const ComplexMatrix& a, const ComplexMatrix& b);

// Solves A X + X A† + B = 0 by dense vectorization.  A singular linear
// system (an eigenvalue pairing λ_i + λ̄_j = 0) throws SingularLyapunovError.
ExactSolution oracle_continuous(const ComplexMatrix& a, const ComplexMatrix& b);

// X = A⁻¹ for Hermitian positive definite A, with residual ‖AX − I‖ ≤ 1e-9·κ.
ExactSolution oracle_inverse(const ComplexMatrix& a);

// The exact solution matching an instance's kind and inputs.
ExactSolution oracle_for(const ProblemInstance& instance);

// Hardness family A = diag(√μ, √ν), μ = λ², ν = (3λ²−1)/2, B = I/2 for
// λ ∈ [1/√2, 1).  The lower end is pinned where the closed form is valid:
// ν > 0 needs λ > 1/√3 and the distance bound needs 1−λ² ≤ ½.
HardnessInstance hardness_instance(double lambda);

} // namespace lyapsim
