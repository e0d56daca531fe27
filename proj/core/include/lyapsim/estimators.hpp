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

#include "lyapsim/linalg.hpp"
#include "lyapsim/problems.hpp"
#include "lyapsim/sampler.hpp"

namespace lyapsim {

// A Hermitian observable, validated at construction.
class Observable {
  public:
    explicit Observable(ComplexMatrix matrix, double tol = -1.0);

    const ComplexMatrix& matrix() const { return matrix_; }
    Eigen::Index dim() const { return matrix_.rows(); }

  private:
    ComplexMatrix matrix_;
};

// Restart-based estimator of the normalization constant Σ r_k R_k t_k (the
// probability that a fresh pass returns instead of restarting), next to the
// exact value, its binomial standard error, and the kind-specific bound on
// the relative bias of the derived trace estimator.
struct NormalizationEstimate {
    double estimate;            // n_runs / (n_runs + n_restarts)
    double exact;               // Σ r_k R_k t_k
    double std_error;           // normal approximation to the binomial
    double relative_bias_bound; // ‖M‖^{2(T+1)}, plus a 2Δ·|min Re λ| discretization term
                                // for the continuous family
};

// Pair of values computed by a read-out identity: the explicit circuit
// simulation and the algebraic right-hand side it must reproduce.
struct SwapTestResult {
    double circuit_value;
    double algebraic_value;
};

// tr(ρO).  The imaginary residue must be below tolerance (it is asserted,
// then discarded).
double observable_expectation(const DensityMatrix& rho, const Observable& o);

// ⟨ψ|ρ|ψ⟩ for a unit vector ψ.
double pure_overlap(const DensityMatrix& rho, const ComplexVector& psi);

// Builds the controlled-SWAP circuit on ℂ²⊗ℂᴺ⊗ℂᴺ explicitly and evaluates
// tr[(σ_X⊗I⊗I)·C_S·(|+⟩⟨+|⊗ρ⊗|ψ⟩⟨ψ|)·C_S†], which must equal ⟨ψ|ρ|ψ⟩.
// The circuit path exists to verify the identity; callers use the algebraic
// value.
SwapTestResult swap_test_check(const DensityMatrix& rho, const ComplexVector& psi);

// ⟨φ|ρ|ψ⟩.  Also builds the Hadamard-test circuit with
// C = |0⟩⟨0|⊗V† + |1⟩⟨1|⊗U† (U|0⟩ = ψ, V|0⟩ = φ, completed to unitaries by
// deterministic orthonormal extension) and verifies that the σ_X read-out
// equals the real part and the σ_Y read-out equals minus the imaginary part,
// both within tolerance; a disagreement throws.
Complex matrix_element(const DensityMatrix& rho, const ComplexVector& phi,
                       const ComplexVector& psi);

// Extends a unit vector to a full unitary whose first column is the vector,
// via Gram-Schmidt over a deterministically chosen canonical basis
// completion.
ComplexMatrix complete_unitary(const ComplexVector& first_column);

// Normalization-constant estimate n/(n + restarts) for a sampling run on the
// given instance.
NormalizationEstimate normalization_estimate(const SampleStats& stats,
                                             const ProblemInstance& instance);

// Solution-trace estimate tr(X) ≈ (T+1)·estimate for the discrete family and
// Δ·(T+1)·estimate for the continuous family.  Its relative error against
// the oracle trace is bounded by relative_bias_bound + 3·(relative standard
// error).
double solution_trace_estimate(const NormalizationEstimate& estimate,
                               const ProblemInstance& instance);

} // namespace lyapsim
