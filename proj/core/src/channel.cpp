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

#include "lyapsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "lyapsim/errors.hpp"
#include "lyapsim/rng.hpp"

namespace lyapsim {

KrausChannel::KrausChannel(ComplexMatrix kraus, double tol) : kraus_(std::move(kraus)) {
    tol = resolve_tol(tol);
    if (kraus_.rows() != kraus_.cols() || kraus_.size() == 0)
        throw InvalidInputError("KrausChannel: Kraus operator must be square and non-empty");
    if (!kraus_.allFinite())
        throw InvalidInputError("KrausChannel: Kraus operator has non-finite entries");
    norm_ = op_norm(kraus_);
    if (norm_ > 1.0 + tol) {
        std::ostringstream msg;
        msg << "KrausChannel: operator norm " << norm_ << " exceeds 1; the channel would increase trace";
        throw UnstableMatrixError(msg.str());
    }
}

ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& rho) {
    if (rho.rows() != ch.dim() || rho.cols() != ch.dim()) {
        std::ostringstream msg;
        msg << "apply: state dimension " << rho.rows() << "x" << rho.cols()
            << " does not match channel dimension " << ch.dim();
        throw InvalidInputError(msg.str());
    }
    return ch.kraus() * rho * ch.kraus().adjoint();
}

ChannelTraces iterate_traces(const KrausChannel& ch, const DensityMatrix& rho0, int T) {
    if (T < 0) throw InvalidInputError("iterate_traces: horizon must be non-negative");
    ChannelTraces traces;
    traces.t.reserve(static_cast<std::size_t>(T) + 1);
    ComplexMatrix state = rho0.matrix();
    traces.t.push_back(std::max(state.trace().real(), 0.0));
    for (int k = 1; k <= T; ++k) {
        state = lyapsim::apply(ch, state);
        traces.t.push_back(std::max(state.trace().real(), 0.0));
    }
    return traces;
}

DensityMatrix normalized_iterate(const KrausChannel& ch, const DensityMatrix& rho0, int k) {
    if (k < 0) throw InvalidInputError("normalized_iterate: step count must be non-negative");
    ComplexMatrix state = rho0.matrix();
    for (int i = 0; i < k; ++i) state = lyapsim::apply(ch, state);
    const double trace = state.trace().real();
    if (trace <= 1e-14) {
        std::ostringstream msg;
        msg << "normalized_iterate: trace " << trace << " at step " << k
            << " is numerically zero; the state is degenerate";
        throw DegenerateStateError(msg.str());
    }
    return DensityMatrix(state / trace);
}

double diamond_bound(const ComplexMatrix& m, const ComplexMatrix& m_tilde) {
    if (m.rows() != m_tilde.rows() || m.cols() != m_tilde.cols()) {
        std::ostringstream msg;
        msg << "diamond_bound: dimension mismatch (" << m.rows() << "x" << m.cols() << " vs "
            << m_tilde.rows() << "x" << m_tilde.cols() << ")";
        throw InvalidInputError(msg.str());
    }
    const double diff = op_norm(m - m_tilde);
    if (diff == 0.0) return 0.0;
    return (op_norm(m) + op_norm(m_tilde)) * diff;
}

KrausChannel perturb(const KrausChannel& ch, double delta_target, std::uint64_t seed) {
    if (!(delta_target > 0.0))
        throw InvalidInputError("perturb: delta_target must be positive");

    // Seeded random direction with unit operator norm.
    SplitMix64 rng(seed);
    const Eigen::Index n = ch.dim();
    ComplexMatrix direction(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            direction(i, j) = Complex(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0);
    direction /= op_norm(direction);

    // Search for a step size whose perturbation saturates the budget without
    // exceeding it.  diamond_bound(M, M + s·E) is continuous and vanishes at
    // s = 0, so bisection-style scaling always lands inside (0, δ].
    const ComplexMatrix& m = ch.kraus();
    double step = delta_target / (2.0 * std::max(1.0, ch.norm()) + 1.0);
    ComplexMatrix accepted;
    bool have_accepted = false;
    for (int iter = 0; iter < 100; ++iter) {
        ComplexMatrix candidate = m + step * direction;
        const double candidate_norm = op_norm(candidate);
        if (candidate_norm > 1.0) candidate /= candidate_norm;
        const double dist = diamond_bound(m, candidate);
        if (dist > delta_target) {
            step *= 0.5;
            continue;
        }
        if (dist == 0.0) {
            // Perturbation underflowed; grow until it registers.
            step *= 2.0;
            continue;
        }
        accepted = candidate;
        have_accepted = true;
        if (dist > 0.9 * delta_target) break;
        step *= std::min(1.5, 0.95 * delta_target / dist);
    }
    if (!have_accepted) return KrausChannel(m);
    return KrausChannel(std::move(accepted));
}

} // namespace lyapsim
