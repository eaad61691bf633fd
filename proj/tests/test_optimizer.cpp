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
#include "test_helpers.hpp"

#include <catch_amalgamated.hpp>

#include <sstream>

using namespace cvforge;
using Catch::Approx;

namespace {

ObjectiveSpec photon_objective(std::size_t dim) {
    return ObjectiveSpec::state_prep(single_photon(dim));
}

} // namespace

TEST_CASE("adam_step", "[optimizer]") {
    AdamConfig cfg;
    std::vector<double> p{0.5, -1.0, 2.0};
    const std::vector<double> zero(3, 0.0);
    auto st = MomentState::zeros(3);
    adam_step(p, zero, st, cfg, 0);
    CHECK(p == std::vector<double>{0.5, -1.0, 2.0});

    // constant gradient: bias-corrected step approaches the learning rate
    std::vector<double> q{0.0};
    const std::vector<double> g{3.7};
    auto sq = MomentState::zeros(1);
    double last = 0.0;
    for (int s = 0; s < 2000; ++s) {
        const double before = q[0];
        adam_step(q, g, sq, cfg, s);
        last = before - q[0];
    }
    CHECK(last == Approx(cfg.learning_rate).epsilon(1e-6));

    std::vector<double> a{1.0, 2.0};
    std::vector<double> b = a;
    auto sa = MomentState::zeros(2);
    auto sb = MomentState::zeros(2);
    const std::vector<double> gg{0.3, -0.2};
    adam_step(a, gg, sa, cfg, 4);
    adam_step(b, gg, sb, cfg, 4);
    CHECK(a == b);

    std::vector<double> bad{1.0};
    CHECK_THROWS_AS(adam_step(bad, gg, sa, cfg, 0), DimensionMismatch);
}

TEST_CASE("AdamConfig validation", "[optimizer]") {
    AdamConfig c;
    CHECK_NOTHROW(c.validate());
    c.learning_rate = 0.0;
    CHECK_THROWS_AS(c.validate(), PreconditionError);
    c = AdamConfig{};
    c.beta2 = 1.0;
    CHECK_THROWS_AS(c.validate(), PreconditionError);
    c = AdamConfig{};
    c.steps = -1;
    CHECK_THROWS_AS(c.validate(), PreconditionError);
}

TEST_CASE("run records the trace and the best parameters", "[optimizer]") {
    const NetworkShape shape{4, 1, 6};
    AdamConfig cfg;
    cfg.steps = 300;
    cfg.seed = 5;
    cfg.learning_rate = 0.01;
    cfg.active_std = 0.1;
    const auto obj = photon_objective(6);
    const auto rec = run(obj, shape, cfg);
    REQUIRE(rec.cost_trace.size() == 300);
    CHECK(rec.initial_cost == rec.cost_trace.front());
    CHECK(rec.best_cost <= rec.initial_cost);
    CHECK(rec.best_cost == *std::min_element(rec.cost_trace.begin(), rec.cost_trace.end()));
    CHECK(rec.cost_trace[static_cast<std::size_t>(rec.best_step)] == rec.best_cost);
    CHECK(evaluate_cost(rec.best_params, obj) == Approx(rec.best_cost).epsilon(1e-12));
    CHECK(rec.best_cost < 0.5 * rec.initial_cost);

    const auto again = run(obj, shape, cfg);
    CHECK(again.cost_trace == rec.cost_trace);
    CHECK(again.best_params.flatten() == rec.best_params.flatten());
}

TEST_CASE("steps = 0 reports the initial cost", "[optimizer]") {
    const NetworkShape shape{2, 1, 5};
    AdamConfig cfg;
    cfg.steps = 0;
    cfg.seed = 3;
    const auto obj = photon_objective(5);
    const auto rec = run(obj, shape, cfg);
    CHECK(rec.cost_trace.empty());
    CHECK(rec.best_cost == evaluate_cost(init_params(shape, 3), obj));
}

TEST_CASE("run refuses a leaky cutoff", "[optimizer]") {
    TargetSpec spec;
    spec.kind = TargetKind::Coherent;
    spec.a = 2.5;
    const NetworkShape shape{1, 1, 5};
    const auto target = resolve_target(spec, shape.cutoff_config());
    AdamConfig cfg;
    cfg.steps = 2;
    try {
        run(target, shape, cfg);
        FAIL("expected CutoffInsufficient");
    } catch (const CutoffInsufficient &e) {
        CHECK(e.smallest_passing() > 5);
    }
    CHECK_NOTHROW(run(target, shape, cfg, true));
}

TEST_CASE("multi_run is independent of parallelism", "[optimizer]") {
    const NetworkShape shape{3, 1, 6};
    AdamConfig cfg;
    cfg.steps = 60;
    cfg.seed = 10;
    cfg.learning_rate = 0.01;
    const auto obj = photon_objective(6);
    const auto serial = multi_run(obj, shape, cfg, 4, 1);
    const auto parallel = multi_run(obj, shape, cfg, 4, 3);
    REQUIRE(serial.runs.size() == 4);
    CHECK(serial.best_index == parallel.best_index);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(serial.runs[i].seed == 10 + i);
        CHECK(serial.runs[i].cost_trace == parallel.runs[i].cost_trace);
    }
    for (const auto &r : serial.runs) {
        CHECK(serial.best().best_cost <= r.best_cost);
    }

    AdamConfig one = cfg;
    const auto single = multi_run(obj, shape, one, 1);
    CHECK(single.best().cost_trace == run(obj, shape, one).cost_trace);

    const auto more = multi_run(obj, shape, cfg, 6, 2);
    CHECK(more.best().best_cost <= serial.best().best_cost);
}

TEST_CASE("depth_sweep", "[optimizer]") {
    const NetworkShape base{1, 1, 6};
    AdamConfig cfg;
    cfg.steps = 40;
    cfg.seed = 2;
    const auto obj = photon_objective(6);
    const std::vector<int> depths{1, 3};
    const auto rows = depth_sweep(obj, base, depths, cfg, 3, 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].depth == 1);
    CHECK(rows[1].runs == 3);
    CHECK(rows[0].min_best_cost <= rows[0].mean_best_cost);

    const std::vector<int> one{3};
    const auto single = depth_sweep(obj, base, one, cfg, 3);
    NetworkShape s3 = base;
    s3.layers = 3;
    const auto mr = multi_run(obj, s3, cfg, 3);
    double mean = 0.0;
    for (const auto &r : mr.runs) {
        mean += r.best_cost / 3.0;
    }
    CHECK(single[0].mean_best_cost == Approx(mean).epsilon(1e-12));
    CHECK(single[0].mean_best_cost == rows[1].mean_best_cost);

    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    CHECK(csv.str().rfind("depth,", 0) == 0);
    std::ostringstream trace;
    const std::vector<double> t{0.5, 0.25};
    write_trace_csv(trace, t);
    CHECK(trace.str() == "step,cost\n0,0.5\n1,0.25\n");

    CHECK_THROWS_AS(depth_sweep(obj, base, std::vector<int>{}, cfg, 2), PreconditionError);
}
