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

#include "cvforge/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>

namespace cvforge {

void AdamConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw PreconditionError("learning_rate must be > 0");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw PreconditionError("beta1 and beta2 must lie in [0, 1)");
    }
    if (!(eps_hat > 0.0)) {
        throw PreconditionError("eps_hat must be > 0");
    }
    if (steps < 0) {
        throw PreconditionError("steps must be >= 0");
    }
    if (!(penalty_weight >= 0.0)) {
        throw PreconditionError("penalty_weight must be >= 0");
    }
    if (!(active_std >= 0.0)) {
        throw PreconditionError("active_std must be >= 0");
    }
}

void adam_step(std::vector<double> &params, std::span<const double> grads,
               MomentState &state, const AdamConfig &config, int step_index) {
    const std::size_t n = params.size();
    if (grads.size() != n || state.m.size() != n || state.v.size() != n) {
        throw DimensionMismatch("adam_step: parameter, gradient and moment sizes differ");
    }
    if (step_index < 0) {
        throw PreconditionError("adam_step: step index must be >= 0");
    }
    const double t = static_cast<double>(step_index) + 1.0;
    const double c1 = 1.0 - std::pow(config.beta1, t);
    const double c2 = 1.0 - std::pow(config.beta2, t);
    for (std::size_t k = 0; k < n; ++k) {
        const double g = grads[k];
        state.m[k] = config.beta1 * state.m[k] + (1.0 - config.beta1) * g;
        state.v[k] = config.beta2 * state.v[k] + (1.0 - config.beta2) * g * g;
        const double m_hat = state.m[k] / c1;
        const double v_hat = state.v[k] / c2;
        params[k] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.eps_hat);
    }
}

RunRecord run(const ObjectiveSpec &objective, const NetworkShape &shape,
              const AdamConfig &config) {
    config.validate();
    shape.validate();
    const auto start = std::chrono::steady_clock::now();

    ObjectiveSpec obj = objective;
    obj.penalty_weight = config.penalty_weight;

    InitOptions init;
    init.active_std = config.active_std;
    NetworkParams current = init_params(shape, config.seed, init);
    std::vector<double> flat = current.flatten();
    MomentState moments = MomentState::zeros(flat.size());

    RunRecord rec;
    rec.config = config;
    rec.shape = shape;
    rec.seed = config.seed;
    rec.cost_trace.reserve(static_cast<std::size_t>(config.steps));

    if (config.steps == 0) {
        rec.initial_cost = evaluate_cost(current, obj);
        rec.best_cost = rec.initial_cost;
        rec.best_params = current;
    }
    for (int s = 0; s < config.steps; ++s) {
        const CostGradient cg = cost_and_gradient(current, obj);
        rec.cost_trace.push_back(cg.cost);
        if (s == 0) {
            rec.initial_cost = cg.cost;
        }
        if (s == 0 || cg.cost < rec.best_cost) {
            rec.best_cost = cg.cost;
            rec.best_step = s;
            rec.best_params = current;
        }
        adam_step(flat, cg.gradient, moments, config, s);
        current = NetworkParams::from_flat(shape, flat);
    }
    rec.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

namespace {

void require_cutoff(const ResolvedTarget &target, bool allow_leaky) {
    if (allow_leaky) {
        return;
    }
    const CutoffReport r = check_target_cutoff(target);
    if (!r.passes) {
        const std::size_t smallest = r.smallest_passing.value_or(0);
        throw CutoffInsufficient("cutoff D = " + std::to_string(r.cutoff) +
                                     " keeps only " + std::to_string(r.margin) +
                                     " of the target norm; smallest passing D = " +
                                     std::to_string(smallest),
                                 smallest);
    }
}

} // namespace

RunRecord run(const ResolvedTarget &target, const NetworkShape &shape,
              const AdamConfig &config, bool allow_leaky) {
    require_cutoff(target, allow_leaky);
    return run(target.objective, shape, config);
}

MultiRunResult multi_run(const ObjectiveSpec &objective, const NetworkShape &shape,
                         const AdamConfig &config, std::size_t n_restarts,
                         std::size_t parallelism) {
    if (n_restarts < 1) {
        throw PreconditionError("multi_run needs at least one restart");
    }
    config.validate();
    shape.validate();
    objective.validate();

    MultiRunResult out;
    out.runs.resize(n_restarts);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_restarts) {
                return;
            }
            try {
                AdamConfig c = config;
                c.seed = config.seed + i;
                out.runs[i] = run(objective, shape, c);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(n_restarts);
            }
        }
    };

    const std::size_t threads = std::clamp<std::size_t>(parallelism, 1, n_restarts);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    for (std::size_t i = 1; i < n_restarts; ++i) {
        if (out.runs[i].best_cost < out.runs[out.best_index].best_cost) {
            out.best_index = i;
        }
    }
    return out;
}

MultiRunResult multi_run(const ResolvedTarget &target, const NetworkShape &shape,
                         const AdamConfig &config, std::size_t n_restarts,
                         std::size_t parallelism, bool allow_leaky) {
    require_cutoff(target, allow_leaky);
    return multi_run(target.objective, shape, config, n_restarts, parallelism);
}

std::vector<SweepRow> depth_sweep(const ObjectiveSpec &objective,
                                  const NetworkShape &base, std::span<const int> depths,
                                  const AdamConfig &config, std::size_t runs_per_depth,
                                  std::size_t parallelism) {
    if (depths.empty()) {
        throw PreconditionError("depth_sweep needs at least one depth");
    }
    std::vector<SweepRow> rows;
    for (int depth : depths) {
        NetworkShape shape = base;
        shape.layers = depth;
        const auto res = multi_run(objective, shape, config, runs_per_depth, parallelism);
        SweepRow row;
        row.depth = depth;
        row.runs = res.runs.size();
        double sum = 0.0;
        row.min_best_cost = res.runs.front().best_cost;
        for (const auto &r : res.runs) {
            sum += r.best_cost;
            row.min_best_cost = std::min(row.min_best_cost, r.best_cost);
        }
        row.mean_best_cost = sum / static_cast<double>(row.runs);
        double var = 0.0;
        for (const auto &r : res.runs) {
            var += (r.best_cost - row.mean_best_cost) * (r.best_cost - row.mean_best_cost);
        }
        row.std_best_cost =
            row.runs > 1 ? std::sqrt(var / static_cast<double>(row.runs - 1)) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

void write_sweep_csv(std::ostream &out, std::span<const SweepRow> rows) {
    out << "depth,mean_best_cost,min_best_cost,std_best_cost,runs\n";
    out << std::setprecision(17);
    for (const auto &r : rows) {
        out << r.depth << ',' << r.mean_best_cost << ',' << r.min_best_cost << ','
            << r.std_best_cost << ',' << r.runs << '\n';
    }
}

void write_trace_csv(std::ostream &out, std::span<const double> trace) {
    out << "step,cost\n";
    out << std::setprecision(17);
    for (std::size_t s = 0; s < trace.size(); ++s) {
        out << s << ',' << trace[s] << '\n';
    }
}

} // namespace cvforge
