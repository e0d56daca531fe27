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

#include "lyapsim/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "lyapsim/errors.hpp"

namespace lyapsim {

namespace {

void require_unit_vector(const ComplexVector& v, const char* name) {
    const double norm = v.norm();
    if (std::abs(norm - 1.0) > resolve_tol(-1.0) || !v.allFinite()) {
        std::ostringstream msg;
        msg << name << " must be a unit vector, got norm " << norm;
        throw InvalidInputError(msg.str());
    }
}

// Basis states and Pauli operators of the single control qubit.
ComplexMatrix ket0_proj() {
    ComplexMatrix p = ComplexMatrix::Zero(2, 2);
    p(0, 0) = 1.0;
    return p;
}

ComplexMatrix ket1_proj() {
    ComplexMatrix p = ComplexMatrix::Zero(2, 2);
    p(1, 1) = 1.0;
    return p;
}

ComplexMatrix plus_proj() { return ComplexMatrix::Constant(2, 2, Complex(0.5, 0.0)); }

ComplexMatrix sigma_x() {
    ComplexMatrix s = ComplexMatrix::Zero(2, 2);
    s(0, 1) = 1.0;
    s(1, 0) = 1.0;
    return s;
}

ComplexMatrix sigma_y() {
    ComplexMatrix s = ComplexMatrix::Zero(2, 2);
    s(0, 1) = Complex(0.0, -1.0);
    s(1, 0) = Complex(0.0, 1.0);
    return s;
}

// |0⟩⟨0| in dimension n (projector onto the first basis state).
ComplexMatrix basis0_proj(Eigen::Index n) {
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    p(0, 0) = 1.0;
    return p;
}

// SWAP on ℂᴺ⊗ℂᴺ: |i⟩|j⟩ ↦ |j⟩|i⟩.
ComplexMatrix swap_operator(Eigen::Index n) {
    ComplexMatrix swap = ComplexMatrix::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) swap(j * n + i, i * n + j) = 1.0;
    return swap;
}

} // namespace

Observable::Observable(ComplexMatrix matrix, double tol) : matrix_(std::move(matrix)) {
    tol = resolve_tol(tol);
    if (matrix_.rows() != matrix_.cols() || matrix_.size() == 0)
        throw InvalidInputError("Observable: matrix must be square and non-empty");
    if (!matrix_.allFinite())
        throw InvalidInputError("Observable: matrix has non-finite entries");
    if (op_norm(matrix_ - matrix_.adjoint()) > tol * std::max(1.0, op_norm(matrix_)))
        throw InvalidInputError("Observable: matrix is not Hermitian");
}

double observable_expectation(const DensityMatrix& rho, const Observable& o) {
    if (rho.dim() != o.dim()) {
        std::ostringstream msg;
        msg << "observable_expectation: dimension mismatch (" << rho.dim() << " vs " << o.dim()
            << ")";
        throw InvalidInputError(msg.str());
    }
    const Complex value = (rho.matrix() * o.matrix()).trace();
    if (std::abs(value.imag()) > resolve_tol(-1.0)) {
        std::ostringstream msg;
        msg << "observable_expectation: imaginary residue " << value.imag() << " above tolerance";
        throw Error(msg.str());
    }
    return value.real();
}

double pure_overlap(const DensityMatrix& rho, const ComplexVector& psi) {
    require_unit_vector(psi, "psi");
    if (psi.size() != rho.dim())
        throw InvalidInputError("pure_overlap: vector dimension does not match state");
    const Complex value = psi.adjoint() * rho.matrix() * psi;
    return std::clamp(value.real(), 0.0, 1.0);
}

SwapTestResult swap_test_check(const DensityMatrix& rho, const ComplexVector& psi) {
    require_unit_vector(psi, "psi");
    if (psi.size() != rho.dim())
        throw InvalidInputError("swap_test_check: vector dimension does not match state");
    const Eigen::Index n = rho.dim();

    const ComplexMatrix eye_nn = ComplexMatrix::Identity(n * n, n * n);
    const ComplexMatrix controlled_swap = kron(ket0_proj(), eye_nn) + kron(ket1_proj(), swap_operator(n));
    const ComplexMatrix input =
        kron(plus_proj(), kron(rho.matrix(), (psi * psi.adjoint()).eval()));
    const ComplexMatrix observable = kron(sigma_x(), eye_nn);

    const double circuit =
        (observable * controlled_swap * input * controlled_swap.adjoint()).trace().real();
    const double algebraic = pure_overlap(rho, psi);
    return SwapTestResult{circuit, algebraic};
}

ComplexMatrix complete_unitary(const ComplexVector& first_column) {
    require_unit_vector(first_column, "first column");
    const Eigen::Index n = first_column.size();
    ComplexMatrix u(n, n);
    u.col(0) = first_column;

    for (Eigen::Index col = 1; col < n; ++col) {
        // Among the canonical basis vectors, take the one with the largest
        // residual against the span built so far (lowest index on ties).
        Eigen::Index best = -1;
        double best_norm = -1.0;
        ComplexVector best_residual;
        for (Eigen::Index i = 0; i < n; ++i) {
            ComplexVector residual = ComplexVector::Zero(n);
            residual(i) = 1.0;
            for (Eigen::Index c = 0; c < col; ++c)
                residual -= (u.col(c).adjoint() * residual).value() * u.col(c);
            const double norm = residual.norm();
            if (norm > best_norm + 1e-12) {
                best = i;
                best_norm = norm;
                best_residual = residual;
            }
        }
        if (best_norm < 1e-8)
            throw Error("complete_unitary: failed to extend to an orthonormal basis");
        // Re-orthogonalize once for numerical hygiene.
        for (Eigen::Index c = 0; c < col; ++c)
            best_residual -= (u.col(c).adjoint() * best_residual).value() * u.col(c);
        u.col(col) = best_residual / best_residual.norm();
    }
    return u;
}

Complex matrix_element(const DensityMatrix& rho, const ComplexVector& phi,
                       const ComplexVector& psi) {
    require_unit_vector(phi, "phi");
    require_unit_vector(psi, "psi");
    if (phi.size() != rho.dim() || psi.size() != rho.dim())
        throw InvalidInputError("matrix_element: vector dimension does not match state");

    const Complex algebraic = phi.adjoint() * rho.matrix() * psi;

    // Hadamard-test verification: C = |0⟩⟨0|⊗V† + |1⟩⟨1|⊗U† with U|0⟩ = ψ,
    // V|0⟩ = φ.  The σ_X read-out gives Re⟨φ|ρ|ψ⟩ and σ_Y gives −Im⟨φ|ρ|ψ⟩.
    const ComplexMatrix u = complete_unitary(psi);
    const ComplexMatrix v = complete_unitary(phi);
    const ComplexMatrix circuit =
        kron(ket0_proj(), v.adjoint()) + kron(ket1_proj(), u.adjoint());
    const ComplexMatrix evolved = circuit * kron(plus_proj(), rho.matrix()) * circuit.adjoint();

    const ComplexMatrix p0 = basis0_proj(rho.dim());
    const double re_circuit = (kron(sigma_x(), p0) * evolved).trace().real();
    const double im_circuit = -(kron(sigma_y(), p0) * evolved).trace().real();

    const double tol = resolve_tol(-1.0);
    if (std::abs(re_circuit - algebraic.real()) > tol ||
        std::abs(im_circuit - algebraic.imag()) > tol) {
        std::ostringstream msg;
        msg << "matrix_element: Hadamard-test circuit value (" << re_circuit << ", " << im_circuit
            << ") disagrees with algebraic value (" << algebraic.real() << ", " << algebraic.imag()
            << ")";
        throw Error(msg.str());
    }
    return algebraic;
}

NormalizationEstimate normalization_estimate(const SampleStats& stats,
                                             const ProblemInstance& instance) {
    if (stats.n_runs == 0) throw InvalidInputError("normalization_estimate: empty statistics");

    const double n = static_cast<double>(stats.n_runs);
    const double trials = n + static_cast<double>(stats.n_restarts);
    const double estimate = n / trials;
    const double std_error = std::sqrt(estimate * (1.0 - estimate) / trials);

    const ChannelTraces traces = iterate_traces(instance.channel, instance.rho0, instance.T);
    double exact = 0.0;
    for (std::size_t k = 0; k < traces.t.size(); ++k)
        exact += instance.schedule.r[k] * instance.schedule.R[k] * traces.t[k];

    const double kraus_norm = instance.channel.norm();
    double bias = std::pow(std::min(kraus_norm, 1.0), 2.0 * (instance.T + 1));
    if (instance.kind == ProblemKind::ContinuousLyapunov ||
        instance.kind == ProblemKind::InversionII) {
        // Left-endpoint discretization of the time integral adds at most
        // 2Δ·|min Re λ| relative error on top of the truncation tail.
        const Eigen::VectorXd re = eig_normal(instance.generator).eigenvalues.real();
        bias += 2.0 * instance.delta * std::abs(re.minCoeff());
    }
    return NormalizationEstimate{estimate, exact, std_error, bias};
}

double solution_trace_estimate(const NormalizationEstimate& estimate,
                               const ProblemInstance& instance) {
    const double horizon_weight = static_cast<double>(instance.T) + 1.0;
    switch (instance.kind) {
        case ProblemKind::DiscreteLyapunov:
        case ProblemKind::InversionI:
            return horizon_weight * estimate.estimate;
        case ProblemKind::ContinuousLyapunov:
        case ProblemKind::InversionII:
            return instance.delta * horizon_weight * estimate.estimate;
    }
    throw InvalidInputError("solution_trace_estimate: unsupported problem kind");
}

} // namespace lyapsim
