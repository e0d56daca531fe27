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

#include "lyapsim/problems.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "lyapsim/errors.hpp"

namespace lyapsim {

namespace {

// Row-major vectorization: vec(X)[i·N + j] = X(i, j), under which
// vec(AXB) = (A ⊗ Bᵀ)·vec(X).
ComplexVector vec(const ComplexMatrix& x) {
    const Eigen::Index n = x.rows();
    ComplexVector out(n * x.cols());
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < x.cols(); ++j) out(i * x.cols() + j) = x(i, j);
    return out;
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index n) {
    ComplexMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = v(i * n + j);
    return out;
}

ComplexMatrix hermitize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Validates B (PSD, unit trace within tolerance) and returns it renormalized.
ComplexMatrix checked_rhs(const ComplexMatrix& b) {
    if (!is_psd(b)) throw InvalidStateError("B must be positive semidefinite");
    const double trace = b.trace().real();
    if (std::abs(trace - 1.0) > default_tolerance()) {
        std::ostringstream msg;
        msg << "B must have unit trace, got " << trace;
        throw InvalidStateError(msg.str());
    }
    return b / trace;
}

void check_epsilon(double epsilon, const char* name) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
        std::ostringstream msg;
        msg << name << " must lie in (0, 1), got " << epsilon;
        throw InvalidInputError(msg.str());
    }
}

double spectral_radius(const ComplexMatrix& a) {
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

ExactSolution make_solution(const ComplexMatrix& x_raw) {
    ComplexMatrix x = hermitize(x_raw);
    const double trace = x.trace().real();
    if (trace <= 1e-14)
        throw InvalidInputError("oracle: solution has vanishing trace (B must be non-zero)");
    return ExactSolution{x, trace, DensityMatrix(x / trace)};
}

} // namespace

const char* to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::DiscreteLyapunov: return "discrete";
        case ProblemKind::ContinuousLyapunov: return "continuous";
        case ProblemKind::InversionI: return "inversion-i";
        case ProblemKind::InversionII: return "inversion-ii";
    }
    return "unknown";
}

ProblemInstance discrete_setup(const ComplexMatrix& a, const ComplexMatrix& b, double epsilon,
                               std::optional<int> T_override) {
    check_epsilon(epsilon, "epsilon");
    if (!is_normal(a)) throw NotNormalError("discrete_setup: A must be normal");
    const double norm = op_norm(a);
    if (norm >= 1.0 - 1e-12) {
        std::ostringstream msg;
        msg << "discrete_setup: require ‖A‖ < 1, got " << norm;
        throw UnstableMatrixError(msg.str());
    }

    int T_star = 0;
    if (norm > 0.0)
        T_star = static_cast<int>(std::ceil(std::log(1.0 / epsilon) / (2.0 * std::log(1.0 / norm))));
    int T = T_star;
    if (T_override) {
        if (*T_override < T_star) {
            std::ostringstream msg;
            msg << "discrete_setup: horizon " << *T_override << " is below the minimum " << T_star
                << " required for epsilon = " << epsilon;
            throw InsufficientHorizonError(msg.str());
        }
        T = *T_override;
    }

    return ProblemInstance{ProblemKind::DiscreteLyapunov,
                           KrausChannel(a),
                           DensityMatrix(checked_rhs(b)),
                           T,
                           uniform(T),
                           0.0,
                           {epsilon},
                           a,
                           ComplexMatrix()};
}

ProblemInstance continuous_setup(const ComplexMatrix& a, const ComplexMatrix& b, double epsilon1,
                                 double epsilon2) {
    check_epsilon(epsilon1, "epsilon1");
    check_epsilon(epsilon2, "epsilon2");
    if (!is_normal(a)) throw NotNormalError("continuous_setup: A must be normal");

    const Spectrum spectrum = eig_normal(a);
    const Eigen::VectorXd re = spectrum.eigenvalues.real();
    const double max_re = re.maxCoeff(); // closest to zero
    const double min_re = re.minCoeff(); // most negative
    if (max_re >= -1e-12) {
        std::ostringstream msg;
        msg << "continuous_setup: A must be Hurwitz (all Re λ < 0), got max Re λ = " << max_re;
        throw NotHurwitzError(msg.str());
    }

    const double norm = op_norm(a);
    const double delta = (epsilon1 / norm) * (max_re / min_re);
    const double T_real =
        (1.0 / (2.0 * epsilon1)) * std::log(1.0 / epsilon2) * norm * std::abs(min_re) /
        (max_re * max_re);
    const int T = static_cast<int>(std::ceil(T_real));

    return ProblemInstance{ProblemKind::ContinuousLyapunov,
                           KrausChannel(expm(delta * a)),
                           DensityMatrix(checked_rhs(b)),
                           T,
                           uniform(T),
                           delta,
                           {epsilon1, epsilon2},
                           a,
                           a};
}

ProblemInstance inversion_I_setup(const ComplexMatrix& a, double epsilon) {
    check_epsilon(epsilon, "epsilon");
    const double kappa = condition_number_pd(a); // validates Hermitian positive definite
    const double norm = op_norm(a);
    const Eigen::Index n = a.rows();

    const ComplexMatrix kraus = sqrtm_psd(ComplexMatrix::Identity(n, n) - a / norm);
    const int T = static_cast<int>(std::ceil(kappa * std::log(1.0 / epsilon)));

    return ProblemInstance{ProblemKind::InversionI,
                           KrausChannel(kraus),
                           DensityMatrix(ComplexMatrix::Identity(n, n) / static_cast<double>(n)),
                           T,
                           uniform(T),
                           0.0,
                           {epsilon},
                           a,
                           ComplexMatrix()};
}

ProblemInstance inversion_II_setup(const ComplexMatrix& a, double epsilon) {
    check_epsilon(epsilon, "epsilon");
    condition_number_pd(a); // validates Hermitian positive definite
    const Eigen::Index n = a.rows();
    const ComplexMatrix rho0 = ComplexMatrix::Identity(n, n) / static_cast<double>(n);

    ProblemInstance instance = continuous_setup(-0.5 * a, rho0, 0.5 * epsilon, 0.5 * epsilon);
    instance.kind = ProblemKind::InversionII;
    instance.epsilons = {epsilon};
    instance.a = a;
    return instance;
}

ExactSolution oracle_discrete(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != a.cols() || a.rows() != b.rows() || b.rows() != b.cols())
        throw InvalidInputError("oracle_discrete: A and B must be square with equal dimensions");
    if (!is_psd(b)) throw InvalidInputError("oracle_discrete: B must be positive semidefinite");
    const double radius = spectral_radius(a);
    if (radius >= 1.0 - 1e-14) {
        std::ostringstream msg;
        msg << "oracle_discrete: spectral radius " << radius << " is not below 1";
        throw UnstableMatrixError(msg.str());
    }

    const Eigen::Index n = a.rows();
    const ComplexMatrix eye = ComplexMatrix::Identity(n * n, n * n);
    // AXA† − X + B = 0  ⇔  (I − A ⊗ Ā)·vec(X) = vec(B) in row-major vec.
    const ComplexMatrix system = eye - kron(a, a.conjugate());
    const ComplexVector solution = Eigen::FullPivLU<ComplexMatrix>(system).solve(vec(b));
    ExactSolution result = make_solution(unvec(solution, n));

    const double residual = op_norm(a * result.x * a.adjoint() - result.x + b);
    if (residual > 1e-8 * op_norm(b)) {
        std::ostringstream msg;
        msg << "oracle_discrete: residual " << residual << " too large; system is ill-conditioned";
        throw UnstableMatrixError(msg.str());
    }
    return result;
}

ExactSolution oracle_continuous(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != a.cols() || a.rows() != b.rows() || b.rows() != b.cols())
        throw InvalidInputError("oracle_continuous: A and B must be square with equal dimensions");
    if (!is_psd(b)) throw InvalidInputError("oracle_continuous: B must be positive semidefinite");

    const Eigen::Index n = a.rows();
    const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
    // AX + XA† + B = 0  ⇔  (A ⊗ I + I ⊗ Ā)·vec(X) = −vec(B) in row-major vec.
    const ComplexMatrix system = kron(a, eye) + kron(eye, a.conjugate());
    Eigen::FullPivLU<ComplexMatrix> lu(system);
    if (!lu.isInvertible())
        throw SingularLyapunovError(
            "oracle_continuous: Lyapunov operator is singular (eigenvalue pairing λ_i + λ̄_j = 0)");
    const ComplexVector solution = lu.solve(-vec(b));
    ExactSolution result = make_solution(unvec(solution, n));

    const double residual = op_norm(a * result.x + result.x * a.adjoint() + b);
    if (residual > 1e-8 * op_norm(b)) {
        std::ostringstream msg;
        msg << "oracle_continuous: residual " << residual
            << " too large; system is nearly singular";
        throw SingularLyapunovError(msg.str());
    }
    return result;
}

ExactSolution oracle_inverse(const ComplexMatrix& a) {
    const double kappa = condition_number_pd(a); // validates Hermitian positive definite
    const Eigen::Index n = a.rows();
    const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
    const ComplexMatrix x = hermitize(a).llt().solve(eye);
    ExactSolution result = make_solution(x);

    const double residual = op_norm(a * result.x - eye);
    if (residual > 1e-9 * kappa) {
        std::ostringstream msg;
        msg << "oracle_inverse: residual " << residual << " exceeds 1e-9·κ = " << 1e-9 * kappa;
        throw InvalidInputError(msg.str());
    }
    return result;
}

ExactSolution oracle_for(const ProblemInstance& instance) {
    switch (instance.kind) {
        case ProblemKind::DiscreteLyapunov:
            return oracle_discrete(instance.a, instance.rho0.matrix());
        case ProblemKind::ContinuousLyapunov:
            return oracle_continuous(instance.a, instance.rho0.matrix());
        case ProblemKind::InversionI:
        case ProblemKind::InversionII:
            return oracle_inverse(instance.a);
    }
    throw InvalidInputError("oracle_for: unknown problem kind");
}

HardnessInstance hardness_instance(double lambda) {
    const double lower = 1.0 / std::sqrt(2.0);
    if (!(lambda >= lower) || !(lambda < 1.0)) {
        std::ostringstream msg;
        msg << "hardness_instance: lambda must lie in [1/sqrt(2), 1), got " << lambda;
        throw InvalidInputError(msg.str());
    }

    const double mu = lambda * lambda;
    const double nu = (3.0 * mu - 1.0) / 2.0;

    HardnessInstance instance;
    instance.a = ComplexMatrix::Zero(2, 2);
    instance.a(0, 0) = std::sqrt(mu);
    instance.a(1, 1) = std::sqrt(nu);
    instance.b = 0.5 * ComplexMatrix::Identity(2, 2);

    instance.exact_distance = [mu, nu](int T) {
        if (T < 0) throw InvalidInputError("exact_distance: T must be non-negative");
        const double c = 1.5;
        const double x = std::pow(mu, T + 1);
        const double y = std::pow(nu, T + 1);
        return c * (x - y) / ((c + 1.0) * (c + 1.0 - c * x - y));
    };
    instance.lower_bound = [lambda](int T) {
        if (T < 0) throw InvalidInputError("lower_bound: T must be non-negative");
        return std::pow(lambda, 4 * T) / 10.0;
    };
    return instance;
}

} // namespace lyapsim
