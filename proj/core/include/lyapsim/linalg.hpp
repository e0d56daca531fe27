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

#include <complex>

#include <Eigen/Dense>

namespace lyapsim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// ---------------------------------------------------------------------------
// Tolerance configuration
// ---------------------------------------------------------------------------

// Every operation taking a `tol` parameter accepts a negative value as a
// sentinel meaning "use the global default".  The default starts at 1e-10 and
// can be overridden once at startup (e.g. from a CLI flag).

double default_tolerance();
void set_default_tolerance(double tol);

// Maps the -1.0 sentinel to the current global default.
double resolve_tol(double tol);

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

// Unitary eigendecomposition of a normal matrix.  Columns of `eigenvectors`
// pair with `eigenvalues`; order is deterministic (real part descending, then
// imaginary part descending).
struct Spectrum {
    ComplexVector eigenvalues;
    ComplexMatrix eigenvectors;
};

// A quantum state: Hermitian, positive semidefinite, unit trace.  The
// invariants are validated on construction and the stored matrix is immutable
// afterwards, so instances are safe to share across threads.
class DensityMatrix {
  public:
    // Validates Hermiticity within tol·‖matrix‖, positivity (min eigenvalue
    // ≥ −tol·trace) and unit trace within tol; throws InvalidStateError
    // otherwise.
    explicit DensityMatrix(ComplexMatrix matrix, double tol = -1.0);

    const ComplexMatrix& matrix() const { return matrix_; }
    Eigen::Index dim() const { return matrix_.rows(); }

  private:
    ComplexMatrix matrix_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Largest singular value (spectral norm).  Throws InvalidInputError on
// non-finite entries.
double op_norm(const ComplexMatrix& m);

// Sum of singular values.  Throws InvalidInputError unless m is square.
double trace_norm(const ComplexMatrix& m);

// ½‖ρ − σ‖₁, the trace distance between two states.  Throws
// InvalidInputError on dimension mismatch.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// True iff ‖MM† − M†M‖ ≤ tol·‖M‖² in operator norm (vacuously true for 0).
bool is_normal(const ComplexMatrix& m, double tol = -1.0);

// Unitary eigendecomposition of a normal matrix via Schur reduction (the
// Schur form of a normal matrix is diagonal; this is verified).  Throws
// NotNormalError, with the commutator norm in the message, if m fails
// is_normal(m, tol).
Spectrum eig_normal(const ComplexMatrix& m, double tol = -1.0);

// True iff m is Hermitian within tol and its minimum eigenvalue is
// ≥ −tol·max(1, trace).
bool is_psd(const ComplexMatrix& m, double tol = -1.0);

// Matrix exponential.  Normal matrices go through eig_normal; general
// matrices use scaling-and-squaring on the truncated power series.
ComplexMatrix expm(const ComplexMatrix& m);

// Principal square root of a PSD matrix.  Eigenvalues driven slightly
// negative by rounding (within the is_psd tolerance) are clamped to zero;
// anything worse fails the is_psd gate and throws InvalidInputError.
ComplexMatrix sqrtm_psd(const ComplexMatrix& m, double tol = -1.0);

// Condition number κ = λ_max/λ_min of a Hermitian positive definite matrix
// (min eigenvalue > tol·trace required).  Throws InvalidInputError otherwise.
double condition_number_pd(const ComplexMatrix& a, double tol = -1.0);

// Kronecker product.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

} // namespace lyapsim
