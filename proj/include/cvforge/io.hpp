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
 * JSON experiment configs and parameter files.
 */
#pragma once

#include "cvforge/diagnostics.hpp"
#include "cvforge/network.hpp"
#include "cvforge/optimizer.hpp"
#include "cvforge/targets.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvforge {

/// Schema violation; the message names the offending field (and line for
/// syntax errors).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Task { Prepare, Synthesize, Sweep, Analyze };

std::string_view task_name(Task task) noexcept;

struct SweepConfig {
    std::vector<int> depths;
    std::size_t runs_per_depth = 10;
};

struct DiagnosticsConfig {
    bool enabled = true;
    GridSpec grid;            ///< Wigner / two-mode wavefunction grid
    Index wavefunction_points = 400;
};

struct ExperimentConfig {
    Task task = Task::Prepare;
    TargetSpec target;
    NetworkShape network;
    AdamConfig optimizer;
    std::size_t restarts = 1;
    std::size_t parallelism = 1;
    std::string output_dir = "out";
    SweepConfig sweep;
    std::size_t mc_samples = 10000;
    DiagnosticsConfig diagnostics;
};

/// Strict parse: unknown keys and wrong types are ConfigErrors.
ExperimentConfig parse_config(const nlohmann::json &doc);
/// Reads and parses a config file; syntax errors report line and column.
ExperimentConfig load_config(const std::filesystem::path &path);
/// Fully resolved config, accepted back by parse_config.
nlohmann::json config_to_json(const ExperimentConfig &config);

TargetSpec parse_target(const nlohmann::json &doc);
nlohmann::json target_to_json(const TargetSpec &spec);

nlohmann::json params_to_json(const NetworkParams &params);
/// Throws ConfigError on a malformed document or inconsistent layer sizes.
NetworkParams params_from_json(const nlohmann::json &doc);
NetworkParams load_params(const std::filesystem::path &path);

/// Parses a whole file as JSON, turning syntax errors into ConfigError.
nlohmann::json read_json_file(const std::filesystem::path &path);
void write_json_file(const std::filesystem::path &path, const nlohmann::json &doc);

} // namespace cvforge
