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

// Micro-benchmarks for the hot paths: the closed-form expected state at a
// deep horizon, trajectory sampling, the dense oracle solve, and the
// read-out circuits.  Matrix dimensions follow the problem sweeps used by
// the acceptance suite.

#include <benchmark/benchmark.h>

#include "lyapsim/channel.hpp"
#include "lyapsim/estimators.hpp"
#include "lyapsim/linalg.hpp"
#include "lyapsim/problems.hpp"
#include "lyapsim/sampler.hpp"
#include "lyapsim/schedule.hpp"

namespace {

using namespace lyapsim;

ComplexMatrix diag_matrix(double a, double b) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

// Deterministic dense PSD fixture of size n: Gram matrix of a fixed
// non-singular seed matrix, normalized to unit trace.
ComplexMatrix dense_state(Eigen::Index n) {
    ComplexMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            g(i, j) = Complex(std::sin(0.7 * static_cast<double>(i * n + j) + 0.3),
                              std::cos(1.3 * static_cast<double>(i + 2 * j)));
    ComplexMatrix psd = g * g.adjoint();
    return psd / psd.trace().real();
}

void expected_state_horizon_120(benchmark::State& state) {
    const ProblemInstance inst =
        continuous_setup(diag_matrix(-1.0, -2.0), 0.5 * ComplexMatrix::Identity(2, 2), 0.05,
                         0.05);
    for (auto _ : state) {
        benchmark::DoNotOptimize(expected_state(inst.channel, inst.rho0, inst.schedule));
    }
}
BENCHMARK(expected_state_horizon_120);

void sample_10k_trajectories(benchmark::State& state) {
    const ProblemInstance inst =
        discrete_setup(diag_matrix(0.8, 0.4), 0.5 * ComplexMatrix::Identity(2, 2), 0.01, 22);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sample(inst.channel, inst.rho0, inst.schedule, 10000, seed++));
    }
}
BENCHMARK(sample_10k_trajectories);

void oracle_discrete_dense(benchmark::State& state) {
    const Eigen::Index n = state.range(0);
    const ComplexMatrix a = 0.9 * ComplexMatrix::Identity(n, n);
    const ComplexMatrix b = dense_state(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(oracle_discrete(a, b));
    }
}
BENCHMARK(oracle_discrete_dense)->Arg(2)->Arg(4)->Arg(8);

void matrix_exponential(benchmark::State& state) {
    const Eigen::Index n = state.range(0);
    const ComplexMatrix psd = dense_state(n);
    const ComplexMatrix generator = -ComplexMatrix::Identity(n, n) - psd;
    for (auto _ : state) {
        benchmark::DoNotOptimize(expm(0.0125 * generator));
    }
}
BENCHMARK(matrix_exponential)->Arg(2)->Arg(8);

void perturb_within_budget(benchmark::State& state) {
    const KrausChannel channel(diag_matrix(0.8, 0.4));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(perturb(channel, 1e-4, seed++));
    }
}
BENCHMARK(perturb_within_budget);

void swap_test_circuit(benchmark::State& state) {
    const Eigen::Index n = state.range(0);
    const DensityMatrix rho{dense_state(n)};
    ComplexVector psi = ComplexVector::Ones(n);
    psi /= psi.norm();
    for (auto _ : state) {
        benchmark::DoNotOptimize(swap_test_check(rho, psi));
    }
}
BENCHMARK(swap_test_circuit)->Arg(2)->Arg(4);

} // namespace

BENCHMARK_MAIN();
