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

#include "lyapsim/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "lyapsim/errors.hpp"

namespace lyapsim {

namespace {

std::atomic<double> g_default_tolerance{1e-10};

void require(bool condition, const std::string& message) {
    if (!condition) throw InvalidInputError(message);
}

void require_square(const ComplexMatrix& m, const char* op) {
    if (m.rows() != m.cols()) {
        std::ostringstream msg;
        msg << op << ": matrix must be square, got " << m.rows() << "x" << m.cols();
        throw InvalidInputError(msg.str());
    }
}

void require_finite(const ComplexMatrix& m, const char* op) {
    if (!m.allFinite()) throw InvalidInputError(std::string(op) + ": matrix has non-finite entries");
}

ComplexMatrix hermitize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Eigenvalues of the Hermitian part; used by the PSD and PD checks.
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(m), Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    const double scale = std::max(1.0, op_norm(m));
    return op_norm(m - m.adjoint()) <= tol * scale;
}

} // namespace

double default_tolerance() { return g_default_tolerance.load(); }

void set_default_tolerance(double tol) {
    require(std::isfinite(tol) && tol > 0.0, "set_default_tolerance: tolerance must be positive");
    g_default_tolerance.store(tol);
}

double resolve_tol(double tol) { return tol < 0.0 ? default_tolerance() : tol; }

double op_norm(const ComplexMatrix& m) {
    require_finite(m, "op_norm");
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
}

double trace_norm(const ComplexMatrix& m) {
    require_square(m, "trace_norm");
    require_finite(m, "trace_norm");
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues().sum();
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        std::ostringstream msg;
        msg << "trace_distance: dimension mismatch (" << rho.dim() << " vs " << sigma.dim() << ")";
        throw InvalidInputError(msg.str());
    }
    const double dist = 0.5 * trace_norm(rho.matrix() - sigma.matrix());
    return std::clamp(dist, 0.0, 1.0);
}

bool is_normal(const ComplexMatrix& m, double tol) {
    require_square(m, "is_normal");
    require_finite(m, "is_normal");
    tol = resolve_tol(tol);
    const double norm = op_norm(m);
    const double commutator = op_norm(m * m.adjoint() - m.adjoint() * m);
    return commutator <= tol * norm * norm;
}

Spectrum eig_normal(const ComplexMatrix& m, double tol) {
    require_square(m, "eig_normal");
    require_finite(m, "eig_normal");
    tol = resolve_tol(tol);
    if (!is_normal(m, tol)) {
        const double commutator = op_norm(m * m.adjoint() - m.adjoint() * m);
        std::ostringstream msg;
        msg << "eig_normal: matrix is not normal, commutator norm " << commutator
            << " exceeds " << tol << " * op_norm^2";
        throw NotNormalError(msg.str());
    }

    Eigen::ComplexSchur<ComplexMatrix> schur(m);
    const Eigen::Index n = m.rows();

    // A normal matrix has a diagonal Schur form, so the unitary factor is an
    // eigenbasis.  Sort eigenpairs for deterministic output.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    const auto& t = schur.matrixT();
    std::sort(order.begin(), order.end(), [&t](Eigen::Index a, Eigen::Index b) {
        const Complex la = t(a, a);
        const Complex lb = t(b, b);
        if (la.real() != lb.real()) return la.real() > lb.real();
        return la.imag() > lb.imag();
    });

    Spectrum spectrum;
    spectrum.eigenvalues.resize(n);
    spectrum.eigenvectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        spectrum.eigenvalues(i) = t(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
        spectrum.eigenvectors.col(i) = schur.matrixU().col(order[static_cast<std::size_t>(i)]);
    }

    // Verify that the Schur form really was diagonal (reconstruction check).
    const ComplexMatrix rebuilt =
        spectrum.eigenvectors * spectrum.eigenvalues.asDiagonal() * spectrum.eigenvectors.adjoint();
    const double residual = op_norm(rebuilt - m);
    const double scale = std::max(op_norm(m), 1e-300);
    if (residual > 1e-9 * scale) {
        std::ostringstream msg;
        msg << "eig_normal: Schur form not diagonal (reconstruction residual " << residual << ")";
        throw NotNormalError(msg.str());
    }
    return spectrum;
}

bool is_psd(const ComplexMatrix& m, double tol) {
    require_square(m, "is_psd");
    require_finite(m, "is_psd");
    tol = resolve_tol(tol);
    if (m.size() == 0) return true;
    if (!is_hermitian(m, tol)) return false;
    const double trace = m.trace().real();
    const double min_eig = hermitian_eigenvalues(m).minCoeff();
    return min_eig >= -tol * std::max(1.0, trace);
}

ComplexMatrix expm(const ComplexMatrix& m) {
    require_square(m, "expm");
    require_finite(m, "expm");
    if (m.size() == 0) return m;

    if (is_normal(m)) {
        const Spectrum spectrum = eig_normal(m);
        ComplexVector exp_eigs = spectrum.eigenvalues.array().exp();
        return spectrum.eigenvectors * exp_eigs.asDiagonal() * spectrum.eigenvectors.adjoint();
    }

    // Scaling and squaring: bring the norm below 1/2, sum the power series to
    // machine precision, then square back up.
    const double norm = op_norm(m);
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const ComplexMatrix scaled = m / std::pow(2.0, squarings);

    const Eigen::Index n = m.rows();
    ComplexMatrix result = ComplexMatrix::Identity(n, n);
    ComplexMatrix term = ComplexMatrix::Identity(n, n);
    for (int k = 1; k <= 64; ++k) {
        term = (term * scaled) / static_cast<double>(k);
        result += term;
        if (term.norm() <= 1e-17 * result.norm()) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

ComplexMatrix sqrtm_psd(const ComplexMatrix& m, double tol) {
    require_square(m, "sqrtm_psd");
    require_finite(m, "sqrtm_psd");
    tol = resolve_tol(tol);
    if (!is_psd(m, tol)) throw InvalidInputError("sqrtm_psd: matrix is not positive semidefinite");

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(m));
    Eigen::VectorXd eigs = solver.eigenvalues();
    // Anything negative at this point is rounding noise (the is_psd gate
    // bounds its magnitude); clamp before taking the root.
    Eigen::VectorXd roots = eigs.cwiseMax(0.0).cwiseSqrt();
    return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
}

double condition_number_pd(const ComplexMatrix& a, double tol) {
    require_square(a, "condition_number_pd");
    require_finite(a, "condition_number_pd");
    tol = resolve_tol(tol);
    require(a.size() > 0, "condition_number_pd: matrix is empty");
    if (!is_hermitian(a, tol))
        throw InvalidInputError("condition_number_pd: matrix is not Hermitian");
    const Eigen::VectorXd eigs = hermitian_eigenvalues(a);
    const double trace = a.trace().real();
    if (eigs.minCoeff() <= tol * trace)
        throw InvalidInputError("condition_number_pd: matrix is not positive definite");
    return eigs.maxCoeff() / eigs.minCoeff();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix, double tol) : matrix_(std::move(matrix)) {
    const double t = resolve_tol(tol);
    if (matrix_.rows() != matrix_.cols() || matrix_.size() == 0)
        throw InvalidStateError("DensityMatrix: matrix must be square and non-empty");
    if (!matrix_.allFinite())
        throw InvalidStateError("DensityMatrix: matrix has non-finite entries");

    const double norm = op_norm(matrix_);
    if (op_norm(matrix_ - matrix_.adjoint()) > t * norm)
        throw InvalidStateError("DensityMatrix: matrix is not Hermitian");

    const double trace = matrix_.trace().real();
    if (std::abs(matrix_.trace() - Complex(1.0, 0.0)) > t)
        throw InvalidStateError("DensityMatrix: trace must equal 1");

    const double min_eig = hermitian_eigenvalues(matrix_).minCoeff();
    if (min_eig < -t * trace)
        throw InvalidStateError("DensityMatrix: matrix is not positive semidefinite");
}

} // namespace lyapsim
