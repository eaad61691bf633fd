// Copyright 2026 The cvforge Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Experiment commands behind the cvforge executable.
 *
 * Exit codes: 0 success, 1 unexpected failure, 2 config error, 3 cutoff
 * precondition failure, 4 numerical failure.
 */
#pragma once

#include "cvforge/io.hpp"
#include "cvforge/objective.hpp"
#include "cvforge/targets.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace cvforge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCutoff = 3;
inline constexpr int kExitNumerical = 4;

struct Overrides {
    std::optional<int> steps;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> restarts;
    std::optional<std::string> output_dir;
    std::optional<std::size_t> cutoff; ///< analyze only
    std::optional<std::filesystem::path> params; ///< analyze only
    bool allow_leaky = false;
};

void apply_overrides(ExperimentConfig &config, const Overrides &overrides);

/// min(requested, CVFORGE_THREADS) when the variable holds a positive integer.
std::size_t effective_parallelism(std::size_t requested);

struct Metrics {
    double cost = 0.0;    ///< training cost without the penalty
    double penalty = 0.0;
    std::optional<double> state_fidelity;
    std::optional<double> process_fidelity;
    std::optional<double> average_fidelity;
    std::optional<McEstimate> mc_average_fidelity;
    GateMagnitudes magnitudes;
};

/// Cost, fidelities (routed by block preservation) and gate magnitudes of a
/// circuit against a resolved target.
Metrics evaluate_metrics(const NetworkParams &params, const ResolvedTarget &target,
                         std::size_t mc_samples, std::uint64_t mc_seed,
                         double penalty_weight = 0.0);

nlohmann::json metrics_to_json(const Metrics &m);
nlohmann::json cutoff_to_json(const CutoffReport &r, std::size_t reference_dim,
                              bool allow_leaky);

/// Each command writes its artifacts under config.output_dir and a short
/// summary to `log`. They throw; run_task maps exceptions to exit codes.
void cmd_prepare(const ExperimentConfig &config, bool allow_leaky, std::ostream &log);
void cmd_synthesize(const ExperimentConfig &config, bool allow_leaky, std::ostream &log);
void cmd_sweep(const ExperimentConfig &config, bool allow_leaky, std::ostream &log);
void cmd_analyze(const ExperimentConfig &config, const NetworkParams &params,
                 bool allow_leaky, std::ostream &log);

/// Loads the config, applies overrides, checks the task and runs it.
int run_task(Task task, const std::filesystem::path &config_path,
             const Overrides &overrides, std::ostream &log, std::ostream &err);

} // namespace cvforge
