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

#include "cvforge/app.hpp"

#include "cvforge/diagnostics.hpp"
#include "cvforge/kernels.hpp"
#include "cvforge/optimizer.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace cvforge {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

template <class F>
void write_file(const fs::path &path, F &&body) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    body(out);
}

fs::path prepare_dir(const ExperimentConfig &config) {
    fs::path dir(config.output_dir);
    fs::create_directories(dir);
    return dir;
}

FockVector vacuum(const CutoffConfig &c) { return FockVector::basis(c, 0); }

/// Wigner and 1D wavefunction (one mode), or the 2D wavefunction (two modes).
void write_state_diagnostics(const fs::path &dir, const std::string &tag,
                             const FockVector &psi, const DiagnosticsConfig &diag) {
    if (psi.cutoff.modes == 1) {
        write_file(dir / ("wigner_" + tag + ".csv"),
                   [&](std::ostream &o) { write_grid_csv(o, wigner(psi, diag.grid)); });
        const auto xs = linspace(diag.grid.x_min, diag.grid.x_max, diag.wavefunction_points);
        write_file(dir / ("wavefunction_" + tag + ".csv"), [&](std::ostream &o) {
            write_wavefunction_csv(o, xs, wavefunction1d(psi, xs));
        });
    } else {
        write_file(dir / ("wavefunction2d_" + tag + ".csv"),
                   [&](std::ostream &o) { write_grid_csv(o, wavefunction2d(psi, diag.grid)); });
    }
}

void write_heatmap(const fs::path &dir, const std::string &tag, const Heatmap &h) {
    write_file(dir / ("heatmap_" + tag + "_real.csv"),
               [&](std::ostream &o) { write_matrix_csv(o, h.real); });
    write_file(dir / ("heatmap_" + tag + "_imag.csv"),
               [&](std::ostream &o) { write_matrix_csv(o, h.imag); });
    write_file(dir / ("heatmap_" + tag + "_labels.csv"),
               [&](std::ostream &o) { write_labels_csv(o, h); });
}

json run_json(const RunRecord &r, const ExperimentConfig &config) {
    const auto mags = max_magnitudes(r.best_params);
    return {{"version", kVersion},
            {"config", config_to_json(config)},
            {"seed", r.seed},
            {"steps", r.cost_trace.size()},
            {"initial_cost", r.initial_cost},
            {"best_cost", r.best_cost},
            {"best_step", r.best_step},
            {"max_abs_displacement", mags.displacement},
            {"max_abs_squeezing", mags.squeezing},
            {"max_abs_kerr", mags.kerr},
            {"wall_time", r.wall_time}};
}

void write_runs(const fs::path &dir, const MultiRunResult &res,
                const ExperimentConfig &config) {
    for (const auto &r : res.runs) {
        const std::string s = std::to_string(r.seed);
        write_json_file(dir / ("run_" + s + ".json"), run_json(r, config));
        write_file(dir / ("trace_" + s + ".csv"),
                   [&](std::ostream &o) { write_trace_csv(o, r.cost_trace); });
    }
}

json runs_summary(const MultiRunResult &res) {
    json runs = json::array();
    for (const auto &r : res.runs) {
        runs.push_back({{"seed", r.seed}, {"best_cost", r.best_cost}, {"best_step", r.best_step}});
    }
    return runs;
}

ResolvedTarget resolve_for(const ExperimentConfig &config) {
    return resolve_target(config.target, config.network.cutoff_config(),
                          config.optimizer.penalty_weight);
}

json target_extras(const ResolvedTarget &t) {
    json j = json::object();
    if (t.certificate) {
        j["gkp_lattice_radius"] = t.certificate->lattice_radius;
        j["gkp_tail"] = t.certificate->tail;
    }
    j["relations"] = t.objective.relations();
    j["block_preserving"] = t.block_preserving;
    return j;
}

/// Fails with exit code 3 unless the cutoff passes (or the user opted out).
CutoffReport enforce_cutoff(const ResolvedTarget &target, bool allow_leaky) {
    const CutoffReport r = check_target_cutoff(target);
    if (!r.passes && !allow_leaky) {
        const std::size_t smallest = r.smallest_passing.value_or(0);
        throw CutoffInsufficient("cutoff D = " + std::to_string(r.cutoff) +
                                     " keeps only " + std::to_string(r.margin) +
                                     " of the target norm (need >= " +
                                     std::to_string(1.0 - kCutoffEpsilon) +
                                     "); smallest passing D = " + std::to_string(smallest),
                                 smallest);
    }
    return r;
}

void log_metrics(std::ostream &log, const Metrics &m) {
    log << std::setprecision(8) << "cost " << m.cost;
    if (m.state_fidelity) log << "  fidelity " << *m.state_fidelity;
    if (m.average_fidelity) log << "  average_fidelity " << *m.average_fidelity;
    if (m.mc_average_fidelity) {
        log << "  mc_average_fidelity " << m.mc_average_fidelity->mean << " +- "
            << m.mc_average_fidelity->std_error;
    }
    log << "  max|alpha| " << m.magnitudes.displacement << "  max|r| "
        << m.magnitudes.squeezing << "  max|kappa| " << m.magnitudes.kerr << '\n';
}

void write_gate_diagnostics(const fs::path &dir, const ExperimentConfig &config,
                            const ResolvedTarget &target, const NetworkParams &params) {
    const auto &inputs = target.objective.inputs;
    const CMatrix learned = network_columns(params, inputs);
    const CMatrix &ideal = target.objective.targets;
    std::vector<Index> rows;
    if (target.block_preserving) {
        rows = inputs;
    } else {
        for (Index r = 0; r < learned.rows(); ++r) {
            rows.push_back(r);
        }
    }
    const auto &c = target.objective.cutoff;
    write_heatmap(dir, "target", matrix_heatmap(ideal, c, rows, inputs));
    write_heatmap(dir, "learned", matrix_heatmap(learned, c, rows, inputs));
    if (!config.diagnostics.enabled) {
        return;
    }
    const CVector weights = CVector::Constant(
        static_cast<Index>(inputs.size()), 1.0 / std::sqrt(static_cast<double>(inputs.size())));
    write_state_diagnostics(dir, "target", FockVector(c, ideal * weights), config.diagnostics);
    write_state_diagnostics(dir, "learned", FockVector(c, learned * weights), config.diagnostics);
}

json base_report(const ExperimentConfig &config, const ResolvedTarget &target,
                 const CutoffReport &cutoff, bool allow_leaky) {
    return {{"version", kVersion},
            {"task", std::string(task_name(config.task))},
            {"config", config_to_json(config)},
            {"seed", config.optimizer.seed},
            {"simd", std::string(kernels::isa_name(kernels::active().isa))},
            {"target", target_extras(target)},
            {"cutoff", cutoff_to_json(cutoff, target.reference_dim, allow_leaky)}};
}

void train_and_report(const ExperimentConfig &config, bool allow_leaky, std::ostream &log) {
    const auto start = std::chrono::steady_clock::now();
    const ResolvedTarget target = resolve_for(config);
    const CutoffReport cutoff = enforce_cutoff(target, allow_leaky);
    const fs::path dir = prepare_dir(config);

    const std::size_t threads = effective_parallelism(config.parallelism);
    log << task_name(config.task) << ": " << target_kind_name(config.target.kind) << ", L="
        << config.network.layers << ", D=" << config.network.cutoff << ", "
        << config.optimizer.steps << " steps x " << config.restarts << " restart(s) on "
        << threads << " thread(s)\n";
    const MultiRunResult res = multi_run(target.objective, config.network, config.optimizer,
                                         config.restarts, threads);
    write_runs(dir, res, config);
    const RunRecord &best = res.best();
    write_json_file(dir / "params.json", params_to_json(best.best_params));

    const Metrics m = evaluate_metrics(best.best_params, target, config.mc_samples,
                                       config.optimizer.seed, config.optimizer.penalty_weight);
    log << "best seed " << best.seed << ": ";
    log_metrics(log, m);

    if (is_gate_target(config.target.kind)) {
        write_gate_diagnostics(dir, config, target, best.best_params);
    } else if (config.diagnostics.enabled) {
        write_state_diagnostics(dir, "target", *target.state, config.diagnostics);
        write_state_diagnostics(dir, "learned",
                                apply_network(best.best_params, vacuum(target.state->cutoff)),
                                config.diagnostics);
    }

    json report = base_report(config, target, cutoff, allow_leaky);
    report["best_index"] = res.best_index;
    report["best_seed"] = best.seed;
    report["best_step"] = best.best_step;
    report["initial_cost"] = best.initial_cost;
    report["best_cost"] = best.best_cost;
    report["metrics"] = metrics_to_json(m);
    report["runs"] = runs_summary(res);
    report["wall_time"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_json_file(dir / "report.json", report);
    log << "wrote " << dir.string() << '\n';
}

void require_task_kind(const ExperimentConfig &config, bool gate) {
    if (is_gate_target(config.target.kind) != gate) {
        throw ConfigError("config field 'target.kind': " +
                          std::string(target_kind_name(config.target.kind)) + " is not a " +
                          (gate ? "gate" : "state") + " target");
    }
}

} // namespace

void apply_overrides(ExperimentConfig &config, const Overrides &o) {
    if (o.steps) {
        if (*o.steps < 0) {
            throw ConfigError("--steps must be >= 0");
        }
        config.optimizer.steps = *o.steps;
    }
    if (o.seed) {
        config.optimizer.seed = *o.seed;
    }
    if (o.restarts) {
        if (*o.restarts < 1) {
            throw ConfigError("--restarts must be >= 1");
        }
        config.restarts = *o.restarts;
    }
    if (o.output_dir) {
        config.output_dir = *o.output_dir;
    }
    if (o.cutoff) {
        if (*o.cutoff < 2) {
            throw ConfigError("--cutoff must be >= 2");
        }
        config.network.cutoff = *o.cutoff;
    }
}

std::size_t effective_parallelism(std::size_t requested) {
    std::size_t n = std::max<std::size_t>(requested, 1);
    if (const char *env = std::getenv("CVFORGE_THREADS")) {
        char *end = nullptr;
        const long long cap = std::strtoll(env, &end, 10);
        if (end != env && *end == '\0' && cap > 0) {
            n = std::min(n, static_cast<std::size_t>(cap));
        }
    }
    return n;
}

Metrics evaluate_metrics(const NetworkParams &params, const ResolvedTarget &target,
                         std::size_t mc_samples, std::uint64_t mc_seed,
                         double penalty_weight) {
    Metrics m;
    m.magnitudes = max_magnitudes(params);
    m.penalty = parameter_penalty(params, penalty_weight);
    const CMatrix cols = network_columns(params, target.objective.inputs);
    m.cost = gate_synth_cost(cols, target.objective.targets);
    if (target.objective.mode == ObjectiveMode::StatePrep) {
        m.state_fidelity = std::norm(target.objective.targets.col(0).dot(cols.col(0)));
    } else {
        m.process_fidelity = process_fidelity(cols, target.objective.targets);
        if (target.block_preserving) {
            m.average_fidelity = average_fidelity(*m.process_fidelity, cols.cols());
        } else {
            m.mc_average_fidelity =
                mc_average_fidelity(cols, target.objective.targets, mc_samples, mc_seed);
        }
    }
    if (!std::isfinite(m.cost)) {
        throw NumericalFailure("non-finite cost while evaluating metrics");
    }
    return m;
}

json metrics_to_json(const Metrics &m) {
    json j{{"cost", m.cost},
           {"penalty", m.penalty},
           {"max_abs_displacement", m.magnitudes.displacement},
           {"max_abs_squeezing", m.magnitudes.squeezing},
           {"max_abs_kerr", m.magnitudes.kerr}};
    if (m.state_fidelity) j["state_fidelity"] = *m.state_fidelity;
    if (m.process_fidelity) j["process_fidelity"] = *m.process_fidelity;
    if (m.average_fidelity) j["average_fidelity"] = *m.average_fidelity;
    if (m.mc_average_fidelity) {
        j["mc_average_fidelity"] = m.mc_average_fidelity->mean;
        j["mc_std_error"] = m.mc_average_fidelity->std_error;
    }
    return j;
}

json cutoff_to_json(const CutoffReport &r, std::size_t reference_dim, bool allow_leaky) {
    json j{{"cutoff", r.cutoff},
           {"passes", r.passes},
           {"margin", r.margin},
           {"epsilon", kCutoffEpsilon},
           {"reference_cutoff", reference_dim},
           {"allow_leaky", allow_leaky}};
    if (r.smallest_passing) {
        j["smallest_passing"] = *r.smallest_passing;
    }
    return j;
}

void cmd_prepare(const ExperimentConfig &config, bool allow_leaky, std::ostream &log) {
    require_task_kind(config, false);
    train_and_report(config, allow_leaky, log);
}

void cmd_synthesize(const ExperimentConfig &config, bool allow_leaky, std::ostream &log) {
    require_task_kind(config, true);
    train_and_report(config, allow_leaky, log);
}

void cmd_sweep(const ExperimentConfig &config, bool allow_leaky, std::ostream &log) {
    if (config.sweep.depths.empty()) {
        throw ConfigError("config field 'sweep.depths': required for task sweep");
    }
    const auto start = std::chrono::steady_clock::now();
    const ResolvedTarget target = resolve_for(config);
    const CutoffReport cutoff = enforce_cutoff(target, allow_leaky);
    const fs::path dir = prepare_dir(config);
    const std::size_t threads = effective_parallelism(config.parallelism);
    log << "sweep: " << target_kind_name(config.target.kind) << ", depths";
    for (int d : config.sweep.depths) {
        log << ' ' << d;
    }
    log << ", " << config.sweep.runs_per_depth << " run(s) each\n";
    const auto rows = depth_sweep(target.objective, config.network, config.sweep.depths,
                                  config.optimizer, config.sweep.runs_per_depth, threads);
    write_file(dir / "sweep.csv", [&](std::ostream &o) { write_sweep_csv(o, rows); });
    json table = json::array();
    for (const auto &r : rows) {
        log << "depth " << r.depth << ": mean best cost " << r.mean_best_cost << '\n';
        table.push_back({{"depth", r.depth},
                         {"mean_best_cost", r.mean_best_cost},
                         {"min_best_cost", r.min_best_cost},
                         {"std_best_cost", r.std_best_cost},
                         {"runs", r.runs}});
    }
    json report = base_report(config, target, cutoff, allow_leaky);
    report["sweep"] = table;
    report["wall_time"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_json_file(dir / "report.json", report);
    log << "wrote " << dir.string() << '\n';
}

void cmd_analyze(const ExperimentConfig &config, const NetworkParams &loaded,
                 bool allow_leaky, std::ostream &log) {
    if (loaded.modes != config.network.modes) {
        throw ConfigError("parameter file has " + std::to_string(loaded.modes) +
                          " mode(s), the config declares " +
                          std::to_string(config.network.modes));
    }
    if (static_cast<int>(loaded.layers.size()) != config.network.layers) {
        throw ConfigError("parameter file has " + std::to_string(loaded.layers.size()) +
                          " layer(s), the config declares " +
                          std::to_string(config.network.layers));
    }
    NetworkParams params = loaded;
    params.cutoff = config.network.cutoff;
    const ResolvedTarget target = resolve_for(config);
    const CutoffReport cutoff = enforce_cutoff(target, allow_leaky);
    const fs::path dir = prepare_dir(config);
    const Metrics m = evaluate_metrics(params, target, config.mc_samples,
                                       config.optimizer.seed, config.optimizer.penalty_weight);
    log << "analyze at D=" << config.network.cutoff << ": ";
    log_metrics(log, m);
    if (is_gate_target(config.target.kind)) {
        write_gate_diagnostics(dir, config, target, params);
    } else if (config.diagnostics.enabled) {
        write_state_diagnostics(dir, "target", *target.state, config.diagnostics);
        write_state_diagnostics(dir, "learned",
                                apply_network(params, vacuum(target.state->cutoff)),
                                config.diagnostics);
    }
    json report = base_report(config, target, cutoff, allow_leaky);
    report["task"] = "analyze";
    report["trained_cutoff"] = loaded.cutoff;
    report["metrics"] = metrics_to_json(m);
    write_json_file(dir / "analysis.json", report);
    log << "wrote " << (dir / "analysis.json").string() << '\n';
}

int run_task(Task task, const fs::path &config_path, const Overrides &overrides,
             std::ostream &log, std::ostream &err) {
    try {
        ExperimentConfig config = load_config(config_path);
        if (task != Task::Analyze && config.task != task) {
            throw ConfigError("config field 'task': file declares '" +
                              std::string(task_name(config.task)) + "', command is '" +
                              std::string(task_name(task)) + "'");
        }
        if (task == Task::Analyze && !overrides.params) {
            throw ConfigError("analyze needs --params <file>");
        }
        apply_overrides(config, overrides);
        switch (task) {
        case Task::Prepare:
            cmd_prepare(config, overrides.allow_leaky, log);
            break;
        case Task::Synthesize:
            cmd_synthesize(config, overrides.allow_leaky, log);
            break;
        case Task::Sweep:
            cmd_sweep(config, overrides.allow_leaky, log);
            break;
        case Task::Analyze:
            cmd_analyze(config, load_params(*overrides.params), overrides.allow_leaky, log);
            break;
        }
        return kExitOk;
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const CutoffInsufficient &e) {
        err << "cutoff error: " << e.what() << '\n';
        return kExitCutoff;
    } catch (const NumericalFailure &e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument &e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const PreconditionError &e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace cvforge
