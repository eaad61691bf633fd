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
 * Adam training of the network, restarts and depth sweeps.
 */
#pragma once

#include "cvforge/network.hpp"
#include "cvforge/objective.hpp"
#include "cvforge/targets.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace cvforge {

struct AdamConfig {
    double learning_rate = 0.025;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps_hat = 1e-8;
    int steps = 1000;
    double penalty_weight = 0.0;
    std::uint64_t seed = 0;
    /// Spread of the initial squeezing, displacement and Kerr parameters.
    double active_std = 0.001;

    void validate() const;
};

struct MomentState {
    std::vector<double> m;
    std::vector<double> v;

    static MomentState zeros(std::size_t n) { return {std::vector<double>(n), std::vector<double>(n)}; }
};

/// One Adam update in place; `step_index` counts from 0.
void adam_step(std::vector<double> &params, std::span<const double> grads,
               MomentState &state, const AdamConfig &config, int step_index);

struct RunRecord {
    AdamConfig config;
    NetworkShape shape;
    std::uint64_t seed = 0;
    /// cost_trace[s] is the cost of the parameters entering update s.
    std::vector<double> cost_trace;
    int best_step = 0;
    double best_cost = 0.0;
    double initial_cost = 0.0;
    NetworkParams best_params;
    double wall_time = 0.0;
};

/// Trains from init_params(shape, config.seed) and keeps the best-seen point.
RunRecord run(const ObjectiveSpec &objective, const NetworkShape &shape,
              const AdamConfig &config);

/// Same, after checking the target cutoff. Throws CutoffInsufficient (with
/// the smallest passing D) unless `allow_leaky`.
RunRecord run(const ResolvedTarget &target, const NetworkShape &shape,
              const AdamConfig &config, bool allow_leaky = false);

struct MultiRunResult {
    std::size_t best_index = 0;
    std::vector<RunRecord> runs; ///< runs[i] used seed config.seed + i

    [[nodiscard]] const RunRecord &best() const { return runs.at(best_index); }
};

/// Independent restarts on up to `parallelism` threads; the result does not
/// depend on scheduling. Ties go to the lowest restart index.
MultiRunResult multi_run(const ObjectiveSpec &objective, const NetworkShape &shape,
                         const AdamConfig &config, std::size_t n_restarts,
                         std::size_t parallelism = 1);
MultiRunResult multi_run(const ResolvedTarget &target, const NetworkShape &shape,
                         const AdamConfig &config, std::size_t n_restarts,
                         std::size_t parallelism = 1, bool allow_leaky = false);

struct SweepRow {
    int depth = 0;
    double mean_best_cost = 0.0;
    double min_best_cost = 0.0;
    double std_best_cost = 0.0;
    std::size_t runs = 0;
};

/// multi_run at every depth (same seed schedule at each depth).
std::vector<SweepRow> depth_sweep(const ObjectiveSpec &objective,
                                  const NetworkShape &base, std::span<const int> depths,
                                  const AdamConfig &config, std::size_t runs_per_depth,
                                  std::size_t parallelism = 1);

/// `depth,mean_best_cost,min_best_cost,std_best_cost,runs` with a header row.
void write_sweep_csv(std::ostream &out, std::span<const SweepRow> rows);

/// `step,cost` with a header row.
void write_trace_csv(std::ostream &out, std::span<const double> trace);

} // namespace cvforge
