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

#include "lyapsim/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>
#include <utility>

#include "lyapsim/errors.hpp"

namespace lyapsim {

namespace {

void require_match(const KrausChannel& ch, const DensityMatrix& rho0) {
    if (ch.dim() != rho0.dim()) {
        std::ostringstream msg;
        msg << "channel dimension " << ch.dim() << " does not match state dimension " << rho0.dim();
        throw InvalidInputError(msg.str());
    }
}

} // namespace

ExpectedState expected_state(const KrausChannel& ch, const DensityMatrix& rho0,
                             const ProbabilitySchedule& s) {
    require_match(ch, rho0);
    const int T = s.horizon();

    ComplexMatrix numerator = ComplexMatrix::Zero(ch.dim(), ch.dim());
    double normalization = 0.0;
    std::vector<double> unscaled(static_cast<std::size_t>(T) + 1);

    ComplexMatrix iterate = rho0.matrix();
    for (int k = 0; k <= T; ++k) {
        if (k > 0) iterate = lyapsim::apply(ch, iterate);
        const double coeff = s.r[static_cast<std::size_t>(k)] * s.R[static_cast<std::size_t>(k)];
        const double tk = std::max(iterate.trace().real(), 0.0);
        numerator += coeff * iterate;
        unscaled[static_cast<std::size_t>(k)] = coeff * tk;
        normalization += coeff * tk;
    }
    if (normalization <= 1e-14)
        throw DegenerateStateError("expected_state: normalization is numerically zero");

    std::vector<double> weights(unscaled.size());
    for (std::size_t k = 0; k < weights.size(); ++k) weights[k] = unscaled[k] / normalization;

    return ExpectedState{DensityMatrix(numerator / normalization), normalization,
                         std::move(weights)};
}

double expected_stopping_time(const KrausChannel& ch, const DensityMatrix& rho0,
                              const ProbabilitySchedule& s) {
    require_match(ch, rho0);
    const ChannelTraces traces = iterate_traces(ch, rho0, s.horizon());
    double numerator = 0.0;
    double denominator = 0.0;
    for (std::size_t k = 0; k < traces.t.size(); ++k) {
        numerator += s.R[k] * traces.t[k];
        denominator += s.r[k] * s.R[k] * traces.t[k];
    }
    if (denominator <= 1e-14)
        throw DegenerateStateError("expected_stopping_time: stop probability is numerically zero");
    return numerator / denominator;
}

std::vector<double> success_probabilities(const ChannelTraces& traces) {
    if (traces.t.empty()) throw InvalidInputError("success_probabilities: empty trace sequence");
    std::vector<double> p(traces.t.size() - 1);
    for (std::size_t i = 0; i + 1 < traces.t.size(); ++i) {
        const double ratio = traces.t[i] > 1e-14 ? traces.t[i + 1] / traces.t[i] : 0.0;
        p[i] = std::clamp(ratio, 0.0, 1.0);
    }
    return p;
}

TrajectoryOutcome run_trajectory(const std::vector<double>& p, const ProbabilitySchedule& s,
                                 SplitMix64& rng, std::uint64_t max_total_steps) {
    const int T = s.horizon();
    if (p.size() != static_cast<std::size_t>(T)) {
        std::ostringstream msg;
        msg << "run_trajectory: expected " << T << " success probabilities, got " << p.size();
        throw InvalidInputError(msg.str());
    }
    const std::uint64_t budget =
        max_total_steps > 0 ? max_total_steps : 1000ull * (static_cast<std::uint64_t>(T) + 1);

    TrajectoryOutcome outcome{0, 0, 0};
    int i = 0;
    while (true) {
        ++outcome.steps;
        if (outcome.steps > budget) {
            std::ostringstream msg;
            msg << "run_trajectory: step budget " << budget << " exhausted after "
                << outcome.restarts << " restarts";
            throw RunawayTrajectoryError(msg.str(), outcome.restarts);
        }
        if (rng.bernoulli(s.r[static_cast<std::size_t>(i)])) {
            outcome.stop_index = i;
            return outcome;
        }
        if (rng.bernoulli(p[static_cast<std::size_t>(i)])) {
            ++i; // ancilla success: advance the counter
        } else {
            i = 0; // failure: discard and restart
            ++outcome.restarts;
        }
    }
}

SampleStats sample(const KrausChannel& ch, const DensityMatrix& rho0,
                   const ProbabilitySchedule& s, std::uint64_t n_runs,
                   std::uint64_t master_seed) {
    require_match(ch, rho0);
    if (n_runs == 0) throw InvalidInputError("sample: n_runs must be positive");

    const int T = s.horizon();
    const ChannelTraces traces = iterate_traces(ch, rho0, T);
    const std::vector<double> p = success_probabilities(traces);

    SampleStats stats;
    stats.n_runs = n_runs;
    stats.histogram.assign(static_cast<std::size_t>(T) + 1, 0);
    stats.stopping_times.assign(n_runs, 0);

    // Static chunking over workers.  Each run owns a random stream derived
    // from (master_seed, run index), so the partition into chunks has no
    // effect on any individual trajectory; per-worker tallies merge by
    // integer addition, which is order-independent.
    const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t n_workers = std::min<std::uint64_t>(std::min(hardware, 8u), n_runs);
    const std::uint64_t chunk = (n_runs + n_workers - 1) / n_workers;

    std::mutex merge_mutex;
    std::exception_ptr first_error;

    auto worker = [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<std::uint64_t> local_histogram(stats.histogram.size(), 0);
        std::uint64_t local_restarts = 0;
        try {
            for (std::uint64_t run = begin; run < end; ++run) {
                SplitMix64 rng(derive_stream_seed(master_seed, run));
                const TrajectoryOutcome outcome = run_trajectory(p, s, rng);
                local_histogram[static_cast<std::size_t>(outcome.stop_index)] += 1;
                local_restarts += outcome.restarts;
                stats.stopping_times[run] = outcome.steps;
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(merge_mutex);
            if (!first_error) first_error = std::current_exception();
            return;
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        for (std::size_t k = 0; k < local_histogram.size(); ++k)
            stats.histogram[k] += local_histogram[k];
        stats.n_restarts += local_restarts;
    };

    if (n_workers <= 1) {
        worker(0, n_runs);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(n_workers);
        for (std::uint64_t w = 0; w < n_workers; ++w) {
            const std::uint64_t begin = w * chunk;
            const std::uint64_t end = std::min(n_runs, begin + chunk);
            if (begin >= end) break;
            threads.emplace_back(worker, begin, end);
        }
        for (auto& t : threads) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // Moments are computed serially from the ordered raw values, so they do
    // not depend on the thread count either.
    long double sum = 0.0L;
    long double sum_sq = 0.0L;
    for (const std::uint64_t tau : stats.stopping_times) {
        const long double t = static_cast<long double>(tau);
        sum += t;
        sum_sq += t * t;
    }
    stats.stopping_time_mean = static_cast<double>(sum / static_cast<long double>(n_runs));
    stats.stopping_time_second_moment =
        static_cast<double>(sum_sq / static_cast<long double>(n_runs));
    return stats;
}

DensityMatrix empirical_state(const SampleStats& stats, const KrausChannel& ch,
                              const DensityMatrix& rho0) {
    require_match(ch, rho0);
    if (stats.n_runs == 0 || stats.histogram.empty())
        throw InvalidInputError("empirical_state: empty statistics");

    ComplexMatrix acc = ComplexMatrix::Zero(ch.dim(), ch.dim());
    ComplexMatrix iterate = rho0.matrix();
    for (std::size_t k = 0; k < stats.histogram.size(); ++k) {
        if (k > 0) iterate = lyapsim::apply(ch, iterate);
        if (stats.histogram[k] == 0) continue;
        const double tk = iterate.trace().real();
        if (tk <= 1e-14) {
            std::ostringstream msg;
            msg << "empirical_state: histogram mass at step " << k
                << " but the state there has vanishing trace";
            throw DegenerateStateError(msg.str());
        }
        const double weight =
            static_cast<double>(stats.histogram[k]) / static_cast<double>(stats.n_runs);
        acc += (weight / tk) * iterate;
    }
    return DensityMatrix(acc);
}

MarkovTail markov_tail_check(const SampleStats& stats, double a) {
    if (stats.stopping_times.empty())
        throw InvalidInputError("markov_tail_check: no stopping times recorded");
    if (!(a > 1.0)) throw InvalidInputError("markov_tail_check: a must exceed 1");
    const double threshold = a * stats.stopping_time_mean;
    std::uint64_t count = 0;
    for (const std::uint64_t tau : stats.stopping_times)
        if (static_cast<double>(tau) >= threshold) ++count;
    return MarkovTail{static_cast<double>(count) / static_cast<double>(stats.stopping_times.size()),
                      1.0 / a};
}

} // namespace lyapsim
