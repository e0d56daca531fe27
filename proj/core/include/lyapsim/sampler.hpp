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

#include "lyapsim/channel.hpp"
#include "lyapsim/linalg.hpp"
#include "lyapsim/rng.hpp"
#include "lyapsim/schedule.hpp"

namespace lyapsim {

// Result of one simulated run of the stopped process: the iteration index at
// which the stopping coin fired, how many times the process reset to the
// start, and the total number of loop iterations consumed (the stopping time
// τ; one unit per loop iteration, including the final returning flip, so the
// minimum is 1).
struct TrajectoryOutcome {
    int stop_index;
    std::uint64_t restarts;
    std::uint64_t steps;
};

// Aggregate over many trajectories.  `stopping_times` keeps the raw per-run
// τ values, indexed by run, so tail statistics stay available; it is what
// makes the aggregate independent of how runs were distributed over threads.
struct SampleStats {
    std::uint64_t n_runs = 0;
    std::vector<std::uint64_t> histogram; // counts over stop_index 0..T
    std::uint64_t n_restarts = 0;
    double stopping_time_mean = 0.0;
    double stopping_time_second_moment = 0.0;
    std::vector<std::uint64_t> stopping_times;
};

// The closed-form expected state at stopping time: the normalized mixture
// Σ_k r_k R_k ℰᵏ(ρ₀) / Σ_l r_l R_l t_l, its normalization constant, and the
// per-k mixture weights w_k = r_k R_k t_k / normalization.
struct ExpectedState {
    DensityMatrix state;
    double normalization;
    std::vector<double> weights;
};

// Empirical tail fraction of runs with τ ≥ a·mean(τ) next to the Markov
// bound 1/a.
struct MarkovTail {
    double empirical_fraction;
    double bound;
};

// Evaluates the expected-state mixture in closed form.
ExpectedState expected_state(const KrausChannel& ch, const DensityMatrix& rho0,
                             const ProbabilitySchedule& s);

// Closed-form expected stopping time Σ R_k t_k / Σ r_l R_l t_l.  With the
// uniform schedule this is at most T+1.
double expected_stopping_time(const KrausChannel& ch, const DensityMatrix& rho0,
                              const ProbabilitySchedule& s);

// Ancilla success probabilities p_{i+1} = t_{i+1}/t_i (0 once the trace has
// vanished), clamped to [0, 1].  Output has one entry fewer than the input.
std::vector<double> success_probabilities(const ChannelTraces& traces);

// Simulates one trajectory of the counter Markov chain: at counter i, stop
// with probability r_i; otherwise advance with probability p[i]; otherwise
// reset the counter and count a restart.  No matrix arithmetic happens here —
// the process only ever occupies the precomputed states, so the counter
// simulation is exact.  `max_total_steps` 0 means the default budget of
// 1000·(T+1); exceeding the budget throws RunawayTrajectoryError (carrying
// the restart count) rather than truncating silently.
TrajectoryOutcome run_trajectory(const std::vector<double>& p, const ProbabilitySchedule& s,
                                 SplitMix64& rng, std::uint64_t max_total_steps = 0);

// Runs n_runs independent trajectories with per-run random streams derived
// from (master_seed, run index) and aggregates them.  Deterministic for a
// fixed master_seed regardless of how many worker threads execute the runs.
SampleStats sample(const KrausChannel& ch, const DensityMatrix& rho0,
                   const ProbabilitySchedule& s, std::uint64_t n_runs,
                   std::uint64_t master_seed);

// The histogram-weighted mixture Σ_k (histogram_k/n_runs)·ρ_k, the empirical
// estimator of the expected state.
DensityMatrix empirical_state(const SampleStats& stats, const KrausChannel& ch,
                              const DensityMatrix& rho0);

// Empirical check of Markov's inequality P(τ ≥ a·E[τ]) ≤ 1/a, with the
// sample mean standing in for E[τ].  Requires a > 1.
MarkovTail markov_tail_check(const SampleStats& stats, double a);

} // namespace lyapsim
