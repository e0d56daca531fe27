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

#include <cstdint>
#include <vector>

#include "lyapsim/linalg.hpp"

namespace lyapsim {

// The trace non-increasing completely positive map ℰ(·) = M·M† with a single
// square Kraus operator M, ‖M‖ ≤ 1.  Immutable after construction.
class KrausChannel {
  public:
    // Requires ‖kraus‖ ≤ 1 + tol; throws UnstableMatrixError otherwise.
    // Norms inside (1, 1 + tol] come from rounding in matrix-function
    // constructions and are accepted as-is.
    explicit KrausChannel(ComplexMatrix kraus, double tol = -1.0);

    const ComplexMatrix& kraus() const { return kraus_; }
    Eigen::Index dim() const { return kraus_.rows(); }

    // ‖M‖, cached at construction.
    double norm() const { return norm_; }

  private:
    ComplexMatrix kraus_;
    double norm_;
};

// The trace sequence t_k = tr[ℰᵏ(ρ₀)] for k = 0..T.  t₀ = 1 and the sequence
// is monotone non-increasing.
struct ChannelTraces {
    std::vector<double> t;
};

// Applies the channel once: returns M ρ M† (unnormalized).  Throws
// InvalidInputError on dimension mismatch.
ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& rho);

// Computes t_k = tr[ℰᵏ(ρ₀)] for k = 0..T by repeated application.  The same
// code path serves exact and perturbed Kraus operators.
ChannelTraces iterate_traces(const KrausChannel& ch, const DensityMatrix& rho0, int T);

// The normalized k-step state ρ_k = ℰᵏ(ρ₀)/tr[ℰᵏ(ρ₀)].  Throws
// DegenerateStateError when the trace falls below 1e-14 (the stochastic
// process reaches such states with probability 0).
DensityMatrix normalized_iterate(const KrausChannel& ch, const DensityMatrix& rho0, int k);

// Computable upper bound (‖M‖ + ‖M̃‖)·‖M − M̃‖ on the diamond distance
// between the channels induced by M and M̃.  Exact diamond-norm evaluation
// would need semidefinite programming and is out of scope; the bound is
// conservative, so every statement in terms of δ still holds.
double diamond_bound(const ComplexMatrix& m, const ComplexMatrix& m_tilde);

// Builds the perturbed operator M̃ = M + E with a seeded random (generally
// non-Hermitian) E, rescaled so that diamond_bound(M, M̃) ≤ δ_target and
// ‖M̃‖ ≤ 1.  Deterministic for a fixed seed.
KrausChannel perturb(const KrausChannel& ch, double delta_target, std::uint64_t seed);

} // namespace lyapsim
