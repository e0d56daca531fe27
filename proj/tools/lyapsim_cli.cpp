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

// Command-line front end.  Subcommands:
//   solve       closed-form pipeline: build instance, compare to the oracle
//   sample      Monte Carlo simulation of the stopped process
//   robustness  perturbed-channel run against the error budget
//   hardness    horizon lower-bound family, closed form vs simulation
//   estimate    normalization / trace / observable read-out
//
// Exit codes: 0 all bound checks pass; 1 at least one bound check failed;
// 2 usage or parse error; 3 domain error (invalid instance or state).
// Reports are deterministic JSON, byte-identical for identical inputs.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lyapsim/errors.hpp"
#include "lyapsim/estimators.hpp"
#include "lyapsim/io.hpp"
#include "lyapsim/problems.hpp"
#include "lyapsim/sampler.hpp"

namespace {

using nlohmann::ordered_json;
using namespace lyapsim;

constexpr std::uint64_t kDefaultSeed = 24601;
constexpr std::uint64_t kDefaultTrajectories = 100000;

// Usage mistakes that CLI11 cannot catch (flag combinations).
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string kind;
    std::string matrix_a;
    std::string matrix_b;
    std::string observable;
    double epsilon = 0.01;
    double epsilon1 = 0.05;
    double epsilon2 = 0.05;
    double epsilon_be = 0.05;
    int horizon = -1;
    std::uint64_t trajectories = 0;
    std::uint64_t seed = kDefaultSeed;
    std::string output;
    double tolerance = -1.0;
    double lambda = 0.8;
    int t_max = 10;

    // set by CLI11 when the user supplied the flag
    bool has_matrix_b = false;
    bool has_epsilon = false;
    bool has_epsilon1 = false;
    bool has_epsilon2 = false;
    bool has_horizon = false;
    bool has_trajectories = false;
};

struct Check {
    std::string name;
    double bound;
    double observed;
    bool pass;
};

Check make_check(const std::string& name, double bound, double observed) {
    return Check{name, bound, observed, observed <= bound};
}

ordered_json checks_to_json(const std::vector<Check>& checks) {
    ordered_json arr = ordered_json::array();
    for (const Check& c : checks) {
        ordered_json j;
        j["name"] = c.name;
        j["bound"] = c.bound;
        j["observed"] = c.observed;
        j["pass"] = c.pass;
        arr.push_back(j);
    }
    return arr;
}

bool all_pass(const std::vector<Check>& checks) {
    for (const Check& c : checks)
        if (!c.pass) return false;
    return true;
}

ProblemKind parse_kind(const std::string& kind) {
    if (kind == "discrete") return ProblemKind::DiscreteLyapunov;
    if (kind == "continuous") return ProblemKind::ContinuousLyapunov;
    if (kind == "inversion-i") return ProblemKind::InversionI;
    if (kind == "inversion-ii") return ProblemKind::InversionII;
    throw UsageError("unknown --kind value: " + kind);
}

// Validates flag combinations and builds the instance for the solve-style
// commands.
ProblemInstance build_instance(const Options& opt, ProblemKind kind) {
    const bool lyapunov =
        kind == ProblemKind::DiscreteLyapunov || kind == ProblemKind::ContinuousLyapunov;
    const bool continuous = kind == ProblemKind::ContinuousLyapunov;

    if (lyapunov && !opt.has_matrix_b)
        throw UsageError("--matrix-b is required for --kind " + opt.kind);
    if (!lyapunov && opt.has_matrix_b)
        throw UsageError("--matrix-b is not accepted for --kind " + opt.kind +
                         " (the right-hand side is fixed to the identity)");
    if (continuous && opt.has_epsilon)
        throw UsageError("--kind continuous uses --epsilon1/--epsilon2, not --epsilon");
    if (!continuous && (opt.has_epsilon1 || opt.has_epsilon2))
        throw UsageError("--epsilon1/--epsilon2 are only accepted for --kind continuous");
    if (opt.has_horizon && kind != ProblemKind::DiscreteLyapunov)
        throw UsageError("--horizon is only accepted for --kind discrete");

    const ComplexMatrix a = read_matrix_file(opt.matrix_a);
    switch (kind) {
        case ProblemKind::DiscreteLyapunov: {
            const ComplexMatrix b = read_matrix_file(opt.matrix_b);
            std::optional<int> T_override;
            if (opt.has_horizon) T_override = opt.horizon;
            return discrete_setup(a, b, opt.epsilon, T_override);
        }
        case ProblemKind::ContinuousLyapunov: {
            const ComplexMatrix b = read_matrix_file(opt.matrix_b);
            return continuous_setup(a, b, opt.epsilon1, opt.epsilon2);
        }
        case ProblemKind::InversionI:
            return inversion_I_setup(a, opt.epsilon);
        case ProblemKind::InversionII:
            return inversion_II_setup(a, opt.epsilon);
    }
    throw UsageError("unknown kind");
}

// The guaranteed trace-distance target for an instance: ε, or ε₁+ε₂ for
// the continuous kind.
double epsilon_target(const ProblemInstance& inst) {
    if (inst.kind == ProblemKind::ContinuousLyapunov)
        return inst.epsilons.at(0) + inst.epsilons.at(1);
    return inst.epsilons.at(0);
}

ordered_json inputs_to_json(const Options& opt, const std::string& command) {
    ordered_json j;
    if (command == "hardness") {
        j["lambda"] = opt.lambda;
        j["t_max"] = opt.t_max;
        j["tolerance"] = default_tolerance();
        return j;
    }
    j["kind"] = opt.kind;
    j["matrix_a"] = opt.matrix_a;
    j["matrix_b"] = opt.has_matrix_b ? ordered_json(opt.matrix_b) : ordered_json(nullptr);
    if (opt.kind == "continuous") {
        j["epsilon1"] = opt.epsilon1;
        j["epsilon2"] = opt.epsilon2;
    } else {
        j["epsilon"] = opt.epsilon;
    }
    if (command == "robustness") j["epsilon_be"] = opt.epsilon_be;
    j["horizon_override"] = opt.has_horizon ? ordered_json(opt.horizon) : ordered_json(nullptr);
    j["trajectories"] = opt.trajectories;
    j["seed"] = opt.seed;
    if (command == "estimate")
        j["observable"] =
            opt.observable.empty() ? ordered_json(nullptr) : ordered_json(opt.observable);
    j["tolerance"] = default_tolerance();
    return j;
}

ordered_json instance_to_json(const ProblemInstance& inst) {
    ordered_json j;
    j["kind"] = to_string(inst.kind);
    j["n"] = inst.rho0.dim();
    j["t"] = inst.T;
    const bool continuous_family =
        inst.kind == ProblemKind::ContinuousLyapunov || inst.kind == ProblemKind::InversionII;
    j["delta"] = continuous_family ? ordered_json(inst.delta) : ordered_json(nullptr);
    j["epsilons"] = inst.epsilons;
    const bool inversion =
        inst.kind == ProblemKind::InversionI || inst.kind == ProblemKind::InversionII;
    j["kappa"] = inversion ? ordered_json(condition_number_pd(inst.a)) : ordered_json(nullptr);
    j["a_norm"] = op_norm(inst.a);
    j["kraus_norm"] = inst.channel.norm();
    const Eigen::VectorXd re = eig_normal(inst.a).eigenvalues.real();
    j["re_lambda_max"] = re.maxCoeff();
    j["re_lambda_min"] = re.minCoeff();
    return j;
}

// Monte Carlo section shared by solve/sample/estimate.  Returns the JSON
// fragment and appends the statistical bound checks.
ordered_json run_monte_carlo(const ProblemInstance& inst, const ExpectedState& expected,
                             std::uint64_t n_runs, std::uint64_t seed,
                             std::vector<Check>& checks, NormalizationEstimate* norm_out) {
    ordered_json j;
    j["n_runs"] = n_runs;
    j["seed"] = seed;
    try {
        const SampleStats stats = sample(inst.channel, inst.rho0, inst.schedule, n_runs, seed);
        const DensityMatrix empirical = empirical_state(stats, inst.channel, inst.rho0);
        const NormalizationEstimate norm = normalization_estimate(stats, inst);
        const MarkovTail tail = markov_tail_check(stats, 4.0);
        const double exact_tau = expected_stopping_time(inst.channel, inst.rho0, inst.schedule);
        const double tau_variance = std::max(
            stats.stopping_time_second_moment - stats.stopping_time_mean * stats.stopping_time_mean,
            0.0);
        const double tau_se = std::sqrt(tau_variance / static_cast<double>(n_runs));

        j["histogram"] = stats.histogram;
        j["n_restarts"] = stats.n_restarts;
        j["mean_tau"] = stats.stopping_time_mean;
        j["tau_standard_error"] = tau_se;
        j["exact_expected_tau"] = exact_tau;
        j["empirical_state_trace_distance"] = trace_distance(empirical, expected.state);
        ordered_json norm_json;
        norm_json["estimate"] = norm.estimate;
        norm_json["exact"] = norm.exact;
        norm_json["std_error"] = norm.std_error;
        j["normalization"] = norm_json;
        ordered_json tail_json;
        tail_json["a"] = 4.0;
        tail_json["fraction"] = tail.empirical_fraction;
        tail_json["bound"] = tail.bound;
        j["markov_tail"] = tail_json;

        checks.push_back(make_check("mean_tau_within_3se",
                                    3.0 * tau_se, std::abs(stats.stopping_time_mean - exact_tau)));
        checks.push_back(make_check("mean_tau_le_horizon_plus_one_3se",
                                    static_cast<double>(inst.T) + 1.0 + 3.0 * tau_se + 1e-10,
                                    stats.stopping_time_mean));
        const double tail_se =
            std::sqrt(tail.bound * (1.0 - tail.bound) / static_cast<double>(n_runs));
        checks.push_back(
            make_check("markov_tail_a4", tail.bound + 3.0 * tail_se, tail.empirical_fraction));
        checks.push_back(make_check("normalization_within_3se", 3.0 * norm.std_error,
                                    std::abs(norm.estimate - norm.exact)));

        // Histogram agreement: every stop-index frequency within three
        // binomial standard errors of its exact weight.
        double worst = -1.0;
        for (std::size_t k = 0; k < stats.histogram.size(); ++k) {
            const double f =
                static_cast<double>(stats.histogram[k]) / static_cast<double>(n_runs);
            const double w = expected.weights[k];
            const double se = std::sqrt(w * (1.0 - w) / static_cast<double>(n_runs));
            worst = std::max(worst, std::abs(f - w) - 3.0 * se);
        }
        checks.push_back(make_check("histogram_within_3se", 0.0, worst));

        if (norm_out) *norm_out = norm;
    } catch (const RunawayTrajectoryError& e) {
        // A trajectory exceeding its step budget is a failed check with
        // diagnostics, not a crash.
        j["error"] = e.what();
        j["restarts_so_far"] = e.restarts_so_far;
        checks.push_back(Check{"no_runaway_trajectories", 0.0, 1.0, false});
    }
    return j;
}

int emit_report(ordered_json& report, std::vector<Check>& checks, const std::string& output) {
    const bool pass = all_pass(checks);
    report["checks"] = checks_to_json(checks);
    report["pass"] = pass;
    const std::string text = report.dump(2) + "\n";
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream stream(output, std::ios::binary);
        if (!stream) throw ParseError("cannot open output file: " + output);
        stream << text;
    }
    return pass ? 0 : 1;
}

int cmd_solve(const Options& opt) {
    const ProblemInstance inst = build_instance(opt, parse_kind(opt.kind));
    const ExactSolution oracle = oracle_for(inst);
    const ExpectedState expected = expected_state(inst.channel, inst.rho0, inst.schedule);
    const double exact_tau = expected_stopping_time(inst.channel, inst.rho0, inst.schedule);
    const double distance = trace_distance(expected.state, oracle.normalized);

    std::vector<Check> checks;
    checks.push_back(make_check("trace_distance_le_epsilon", epsilon_target(inst), distance));
    checks.push_back(make_check("expected_stopping_time_le_horizon_plus_one",
                                static_cast<double>(inst.T) + 1.0 + 1e-10, exact_tau));

    ordered_json report;
    report["command"] = "solve";
    report["inputs"] = inputs_to_json(opt, "solve");
    report["instance"] = instance_to_json(inst);
    ordered_json exact;
    exact["oracle_trace"] = oracle.trace;
    exact["trace_distance_to_oracle"] = distance;
    exact["expected_stopping_time"] = exact_tau;
    exact["normalization"] = expected.normalization;
    report["exact"] = exact;
    if (opt.trajectories > 0)
        report["monte_carlo"] =
            run_monte_carlo(inst, expected, opt.trajectories, opt.seed, checks, nullptr);
    return emit_report(report, checks, opt.output);
}

int cmd_sample(const Options& opt) {
    if (opt.trajectories == 0) throw UsageError("--trajectories must be at least 1");
    const ProblemInstance inst = build_instance(opt, parse_kind(opt.kind));
    const ExactSolution oracle = oracle_for(inst);
    const ExpectedState expected = expected_state(inst.channel, inst.rho0, inst.schedule);
    const double distance = trace_distance(expected.state, oracle.normalized);

    std::vector<Check> checks;
    ordered_json report;
    report["command"] = "sample";
    report["inputs"] = inputs_to_json(opt, "sample");
    report["instance"] = instance_to_json(inst);
    ordered_json exact;
    exact["oracle_trace"] = oracle.trace;
    exact["trace_distance_to_oracle"] = distance;
    exact["expected_stopping_time"] =
        expected_stopping_time(inst.channel, inst.rho0, inst.schedule);
    exact["normalization"] = expected.normalization;
    report["exact"] = exact;
    report["monte_carlo"] =
        run_monte_carlo(inst, expected, opt.trajectories, opt.seed, checks, nullptr);
    return emit_report(report, checks, opt.output);
}

int cmd_robustness(const Options& opt) {
    const ProblemInstance inst = build_instance(opt, parse_kind(opt.kind));
    const ExactSolution oracle = oracle_for(inst);
    const double target = epsilon_target(inst) + opt.epsilon_be;

    const bool continuous_family =
        inst.kind == ProblemKind::ContinuousLyapunov || inst.kind == ProblemKind::InversionII;

    ordered_json rob;
    rob["epsilon_be"] = opt.epsilon_be;
    std::vector<Check> checks;

    // Block-encoding error budget: δ ≤ 2ε_BE/(T(T+1)) for the discrete
    // family and δ ≤ 2ε_BE/((T+1)(T+2)Δ²) for the continuous family.  At
    // T = 0 the channel is never applied and δ is irrelevant.
    std::optional<double> budget;
    if (inst.T == 0) {
        rob["delta_budget"] = nullptr;
        rob["note"] = "delta irrelevant: the channel is never applied at T = 0";
    } else if (opt.epsilon_be <= 0.0) {
        rob["delta_budget"] = 0.0;
        rob["note"] = "epsilon-be is zero: the channel is used unperturbed";
    } else {
        const double T = static_cast<double>(inst.T);
        budget = continuous_family
                     ? 2.0 * opt.epsilon_be / ((T + 1.0) * (T + 2.0) * inst.delta * inst.delta)
                     : 2.0 * opt.epsilon_be / (T * (T + 1.0));
        rob["delta_budget"] = *budget;
        rob["note"] = nullptr;
    }

    KrausChannel perturbed = budget ? perturb(inst.channel, *budget, opt.seed) : inst.channel;
    const double observed_diamond = diamond_bound(inst.channel.kraus(), perturbed.kraus());
    rob["diamond_bound_observed"] = observed_diamond;

    const ExpectedState perturbed_expected = expected_state(perturbed, inst.rho0, inst.schedule);
    const double perturbed_distance =
        trace_distance(perturbed_expected.state, oracle.normalized);
    rob["perturbed_trace_distance"] = perturbed_distance;

    if (budget)
        checks.push_back(make_check("diamond_bound_le_delta_budget", *budget, observed_diamond));
    checks.push_back(
        make_check("total_trace_distance_le_eps_plus_eps_be", target, perturbed_distance));

    ordered_json report;
    report["command"] = "robustness";
    report["inputs"] = inputs_to_json(opt, "robustness");
    report["instance"] = instance_to_json(inst);
    ordered_json exact;
    exact["oracle_trace"] = oracle.trace;
    exact["unperturbed_trace_distance"] =
        trace_distance(expected_state(inst.channel, inst.rho0, inst.schedule).state,
                       oracle.normalized);
    report["exact"] = exact;
    report["robustness"] = rob;
    return emit_report(report, checks, opt.output);
}

int cmd_hardness(const Options& opt) {
    const HardnessInstance hard = hardness_instance(opt.lambda);
    if (opt.t_max < 0) throw UsageError("--t-max must be non-negative");

    const ExactSolution oracle = oracle_discrete(hard.a, hard.b);
    const KrausChannel channel(hard.a);
    const DensityMatrix rho0(hard.b);

    std::vector<Check> checks;
    ordered_json rows = ordered_json::array();
    for (int T = 0; T <= opt.t_max; ++T) {
        const double closed_form = hard.exact_distance(T);
        const double bound = hard.lower_bound(T);
        const ExpectedState expected = expected_state(channel, rho0, uniform(T));
        const double simulated = trace_distance(expected.state, oracle.normalized);

        ordered_json row;
        row["t"] = T;
        row["exact_distance"] = closed_form;
        row["lower_bound"] = bound;
        row["simulated_distance"] = simulated;
        row["abs_diff"] = std::abs(closed_form - simulated);
        rows.push_back(row);

        // The bound is exactly tight at T = 0 (both sides equal 1/10), so the
        // comparison carries a rounding allowance.
        checks.push_back(make_check("lower_bound_le_exact_t" + std::to_string(T), 1e-12,
                                    bound - closed_form));
        checks.push_back(make_check("closed_form_matches_simulation_t" + std::to_string(T), 1e-9,
                                    std::abs(closed_form - simulated)));
    }

    ordered_json report;
    report["command"] = "hardness";
    report["inputs"] = inputs_to_json(opt, "hardness");
    ordered_json instance;
    instance["lambda"] = opt.lambda;
    instance["mu"] = opt.lambda * opt.lambda;
    instance["nu"] = (3.0 * opt.lambda * opt.lambda - 1.0) / 2.0;
    instance["a_norm"] = op_norm(hard.a);
    report["instance"] = instance;
    report["hardness"] = ordered_json{{"rows", rows}};
    return emit_report(report, checks, opt.output);
}

int cmd_estimate(const Options& opt) {
    if (opt.trajectories == 0) throw UsageError("--trajectories must be at least 1");
    const ProblemInstance inst = build_instance(opt, parse_kind(opt.kind));
    const ExactSolution oracle = oracle_for(inst);
    const ExpectedState expected = expected_state(inst.channel, inst.rho0, inst.schedule);

    std::vector<Check> checks;
    ordered_json report;
    report["command"] = "estimate";
    report["inputs"] = inputs_to_json(opt, "estimate");
    report["instance"] = instance_to_json(inst);
    ordered_json exact;
    exact["oracle_trace"] = oracle.trace;
    exact["trace_distance_to_oracle"] = trace_distance(expected.state, oracle.normalized);
    exact["expected_stopping_time"] =
        expected_stopping_time(inst.channel, inst.rho0, inst.schedule);
    exact["normalization"] = expected.normalization;
    report["exact"] = exact;

    NormalizationEstimate norm{0.0, 0.0, 0.0, 0.0};
    report["monte_carlo"] =
        run_monte_carlo(inst, expected, opt.trajectories, opt.seed, checks, &norm);

    ordered_json est;
    if (norm.estimate > 0.0) {
        const double trace_est = solution_trace_estimate(norm, inst);
        const double relative_error = std::abs(trace_est - oracle.trace) / oracle.trace;
        const double relative_se = 3.0 * norm.std_error / norm.estimate;
        est["trace_estimate"] = trace_est;
        est["oracle_trace"] = oracle.trace;
        est["relative_error"] = relative_error;
        est["relative_bias_bound"] = norm.relative_bias_bound;
        checks.push_back(make_check("trace_estimate_relative_error",
                                    norm.relative_bias_bound + relative_se, relative_error));
    } else {
        est["trace_estimate"] = nullptr;
    }

    if (!opt.observable.empty()) {
        const Observable obs(read_matrix_file(opt.observable));
        const double on_expected = observable_expectation(expected.state, obs);
        const double on_oracle = observable_expectation(oracle.normalized, obs);
        ordered_json oj;
        oj["expectation_expected_state"] = on_expected;
        oj["expectation_oracle"] = on_oracle;
        oj["difference"] = std::abs(on_expected - on_oracle);
        est["observable"] = oj;
        // |tr(ρO) − tr(σO)| ≤ 2·dist(ρ,σ)·‖O‖ for any Hermitian O.
        checks.push_back(make_check("observable_diff_le_2eps_norm",
                                    2.0 * epsilon_target(inst) * op_norm(obs.matrix()),
                                    std::abs(on_expected - on_oracle)));
    }
    report["estimate"] = est;
    return emit_report(report, checks, opt.output);
}

int fail_with_record(int code, const char* type, const std::string& message) {
    ordered_json j;
    ordered_json detail;
    detail["code"] = code;
    detail["type"] = type;
    detail["message"] = message;
    j["error"] = detail;
    std::cout << j.dump() << "\n";
    return code;
}

void add_common_flags(CLI::App* cmd, Options& opt, bool with_instance_flags) {
    if (with_instance_flags) {
        cmd->add_option("--kind", opt.kind, "Problem kind")
            ->required()
            ->check(CLI::IsMember({"discrete", "continuous", "inversion-i", "inversion-ii"}));
        cmd->add_option("--matrix-a", opt.matrix_a, "Path to the matrix A JSON file")->required();
        cmd->add_option("--matrix-b", opt.matrix_b, "Path to the matrix B JSON file")
            ->each([&opt](const std::string&) { opt.has_matrix_b = true; });
        cmd->add_option("--epsilon", opt.epsilon, "Accuracy target (discrete/inversion kinds)")
            ->check(CLI::Range(1e-12, 1.0))
            ->each([&opt](const std::string&) { opt.has_epsilon = true; });
        cmd->add_option("--epsilon1", opt.epsilon1, "Discretization target (continuous kind)")
            ->check(CLI::Range(1e-12, 1.0))
            ->each([&opt](const std::string&) { opt.has_epsilon1 = true; });
        cmd->add_option("--epsilon2", opt.epsilon2, "Truncation target (continuous kind)")
            ->check(CLI::Range(1e-12, 1.0))
            ->each([&opt](const std::string&) { opt.has_epsilon2 = true; });
        cmd->add_option("--horizon", opt.horizon,
                        "Horizon override, at least the derived T* (discrete kind only)")
            ->check(CLI::NonNegativeNumber)
            ->each([&opt](const std::string&) { opt.has_horizon = true; });
        cmd->add_option("--seed", opt.seed, "Master seed for all randomness");
    }
    cmd->add_option("--output", opt.output, "Write the JSON report to this path (default stdout)");
    cmd->add_option("--tolerance", opt.tolerance, "Override the global numerical tolerance")
        ->check(CLI::PositiveNumber);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stopped-process simulator for Lyapunov equations and matrix inversion"};
    app.require_subcommand(1);

    Options opt;

    CLI::App* solve = app.add_subcommand("solve", "Closed-form run against the exact oracle");
    add_common_flags(solve, opt, true);
    solve->add_option("--trajectories", opt.trajectories,
                      "Optional Monte Carlo runs appended to the report");

    CLI::App* sample_cmd = app.add_subcommand("sample", "Monte Carlo simulation of the process");
    add_common_flags(sample_cmd, opt, true);
    sample_cmd
        ->add_option("--trajectories", opt.trajectories, "Number of Monte Carlo trajectories")
        ->each([&opt](const std::string&) { opt.has_trajectories = true; });

    CLI::App* robustness =
        app.add_subcommand("robustness", "Perturbed-channel run against the error budget");
    add_common_flags(robustness, opt, true);
    robustness->add_option("--epsilon-be", opt.epsilon_be,
                           "Block-encoding error share of the distance budget")
        ->check(CLI::Range(0.0, 1.0));

    CLI::App* hardness = app.add_subcommand("hardness", "Horizon lower-bound family");
    add_common_flags(hardness, opt, false);
    hardness->add_option("--lambda", opt.lambda, "Family parameter in [1/sqrt(2), 1)")->required();
    hardness->add_option("--t-max", opt.t_max, "Largest horizon to tabulate");

    CLI::App* estimate =
        app.add_subcommand("estimate", "Normalization, trace and observable read-out");
    add_common_flags(estimate, opt, true);
    estimate->add_option("--trajectories", opt.trajectories, "Number of Monte Carlo trajectories");
    estimate->add_option("--observable", opt.observable,
                         "Optional Hermitian observable JSON file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail_with_record(2, "usage", e.what());
    }

    // Defaults that depend on the command.
    if (sample_cmd->parsed() && !opt.has_trajectories) opt.trajectories = kDefaultTrajectories;
    if (estimate->parsed() && opt.trajectories == 0) opt.trajectories = kDefaultTrajectories;

    try {
        if (opt.tolerance > 0.0) set_default_tolerance(opt.tolerance);
        if (solve->parsed()) return cmd_solve(opt);
        if (sample_cmd->parsed()) return cmd_sample(opt);
        if (robustness->parsed()) return cmd_robustness(opt);
        if (hardness->parsed()) return cmd_hardness(opt);
        if (estimate->parsed()) return cmd_estimate(opt);
        return fail_with_record(2, "usage", "no subcommand given");
    } catch (const UsageError& e) {
        return fail_with_record(2, "usage", e.what());
    } catch (const ParseError& e) {
        return fail_with_record(2, "parse", e.what());
    } catch (const Error& e) {
        return fail_with_record(3, "domain", e.what());
    } catch (const std::exception& e) {
        return fail_with_record(3, "internal", e.what());
    }
}
