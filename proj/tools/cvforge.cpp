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

// cvforge prepare|synthesize|sweep|analyze --config <file> [overrides]

#include "cvforge/app.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv) {
    using namespace cvforge;
    CLI::App app{"Learn CV quantum circuits that prepare states or synthesize gates"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    struct Sub {
        Task task;
        CLI::App *cmd;
        std::string config;
    };
    std::vector<Sub> subs;
    Overrides o;
    int steps = -1;
    std::uint64_t seed = 0;
    std::size_t restarts = 0;
    std::string output_dir;
    std::size_t cutoff = 0;
    std::string params;

    const std::pair<Task, const char *> tasks[] = {
        {Task::Prepare, "train a circuit that prepares a target state"},
        {Task::Synthesize, "train a circuit that synthesizes a target gate"},
        {Task::Sweep, "mean best cost over a list of network depths"},
        {Task::Analyze, "re-evaluate saved parameters without training"},
    };
    subs.reserve(4);
    for (const auto &[task, help] : tasks) {
        subs.push_back({task, app.add_subcommand(std::string(task_name(task)), help), {}});
    }
    for (auto &s : subs) {
        s.cmd->add_option("--config", s.config, "experiment config JSON")->required();
        s.cmd->add_option("--seed", seed, "base seed (restart i uses seed + i)");
        s.cmd->add_option("--output-dir", output_dir, "artifact directory");
        s.cmd->add_flag("--allow-leaky", o.allow_leaky,
                        "run even if the cutoff fails the leakage check");
        if (s.task == Task::Analyze) {
            s.cmd->add_option("--params", params, "parameter JSON to evaluate")->required();
            s.cmd->add_option("--cutoff", cutoff, "re-simulate at this cutoff");
        } else {
            s.cmd->add_option("--steps", steps, "optimization steps per run");
            s.cmd->add_option("--restarts", restarts, "independent restarts");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    for (const auto &s : subs) {
        if (!s.cmd->parsed()) {
            continue;
        }
        auto given = [&](const char *name) {
            const CLI::Option *opt = s.cmd->get_option_no_throw(name);
            return opt != nullptr && opt->count() > 0;
        };
        if (given("--steps")) o.steps = steps;
        if (given("--seed")) o.seed = seed;
        if (given("--restarts")) o.restarts = restarts;
        if (given("--output-dir")) o.output_dir = output_dir;
        if (given("--cutoff")) o.cutoff = cutoff;
        if (given("--params")) o.params = params;
        return run_task(s.task, s.config, o, std::cout, std::cerr);
    }
    return kExitConfig;
}
