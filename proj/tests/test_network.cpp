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

#include "cvforge/gates.hpp"
#include "cvforge/network.hpp"
#include "cvforge/objective.hpp"
#include "cvforge/targets.hpp"
#include "test_helpers.hpp"

#include <catch_amalgamated.hpp>

using namespace cvforge;
using Catch::Approx;

namespace {

/// Dense reference: the layer built from full gate matrices.
CMatrix dense_layer(const LayerParams &l, int modes, std::size_t dim) {
    const CutoffConfig c{dim, modes};
    CMatrix u = CMatrix::Identity(c.total(), c.total());
    auto single = [&](const FockOperator &g, int mode) {
        return modes == 1 ? g.entries : embed_single(g, mode, modes).entries;
    };
    auto interferometer = [&](const Interferometer &it) {
        if (modes == 2) {
            u = beamsplitter(it.theta[0], it.phi[0], dim).entries * u;
        }
        for (int m = 0; m < modes; ++m) {
            u = single(rotation(it.rotation[m], dim), m) * u;
        }
    };
    interferometer(l.u1);
    for (int m = 0; m < modes; ++m) {
        u = single(squeezing(l.r[m], dim), m) * u;
    }
    interferometer(l.u2);
    for (int m = 0; m < modes; ++m) {
        u = single(displacement(l.alpha_re[m], l.alpha_im[m], dim), m) * u;
    }
    for (int m = 0; m < modes; ++m) {
        u = single(kerr(l.kappa[m], dim), m) * u;
    }
    return u;
}

NetworkParams random_params(const NetworkShape &shape, std::uint64_t seed, double spread) {
    InitOptions o;
    o.active_std = spread;
    return init_params(shape, seed, o);
}

ObjectiveSpec random_objective(const NetworkShape &shape, bool gate, std::uint64_t seed) {
    const auto c = shape.cutoff_config();
    if (!gate) {
        Rng rng(seed);
        CVector v(c.total());
        for (Index k = 0; k < v.size(); ++k) {
            const double re = rng.normal();
            const double im = rng.normal();
            v(k) = {re, im};
        }
        return ObjectiveSpec::state_prep(FockVector(c, v / v.norm()));
    }
    const Index d = 3;
    Rng rng(seed);
    const CMatrix h = haar_unitary(c.total(), rng);
    std::vector<Index> inputs;
    for (Index i = 0; i < d; ++i) {
        inputs.push_back(shape.modes == 1 ? i : flat_index(shape.cutoff, 2, i / 2, i % 2));
    }
    CMatrix t(c.total(), d);
    for (Index i = 0; i < d; ++i) {
        t.col(i) = h.col(inputs[static_cast<std::size_t>(i)]);
    }
    return ObjectiveSpec::gate_synth(c, inputs, t);
}

} // namespace

TEST_CASE("flat layout round-trips and has 2N^2 + 4N entries per layer", "[network]") {
    CHECK(params_per_layer(1) == 6);
    CHECK(params_per_layer(2) == 16);
    for (int modes : {1, 2}) {
        const NetworkShape shape{3, modes, 5};
        const auto p = random_params(shape, 11, 0.1);
        const auto flat = p.flatten();
        CHECK(flat.size() == static_cast<std::size_t>(3 * params_per_layer(modes)));
        CHECK(NetworkParams::from_flat(shape, flat).flatten() == flat);
        CHECK(param_roles(shape).size() == flat.size());
    }
}

TEST_CASE("from_flat rejects a wrong length", "[network]") {
    const NetworkShape shape{2, 1, 4};
    std::vector<double> flat(11);
    CHECK_THROWS_AS(NetworkParams::from_flat(shape, flat), DimensionMismatch);
}

TEST_CASE("init_params is deterministic and spreads only active parameters", "[network]") {
    const NetworkShape shape{4, 2, 5};
    const auto a = init_params(shape, 3).flatten();
    const auto b = init_params(shape, 3).flatten();
    CHECK(a == b);
    CHECK(init_params(shape, 4).flatten() != a);
    const auto roles = param_roles(shape);
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (is_active(roles[k])) {
            CHECK(std::abs(a[k]) < 0.01);
        } else {
            CHECK(a[k] >= 0.0);
            CHECK(a[k] < 2.0 * std::numbers::pi);
        }
    }
}

TEST_CASE("zero parameters give the identity circuit", "[network]") {
    for (int modes : {1, 2}) {
        const NetworkShape shape{2, modes, 4};
        const auto u = network_unitary(NetworkParams::zeros(shape));
        CHECK(test::max_abs(u.entries - CMatrix::Identity(u.entries.rows(), u.entries.cols())) <
              1e-12);
    }
}

TEST_CASE("network matches the dense product of gate matrices", "[network]") {
    for (int modes : {1, 2}) {
        const std::size_t dim = modes == 1 ? 8 : 5;
        const NetworkShape shape{3, modes, dim};
        const auto p = random_params(shape, 5 + modes, 0.3);
        CMatrix dense = CMatrix::Identity(shape.cutoff_config().total(),
                                          shape.cutoff_config().total());
        for (const auto &l : p.layers) {
            dense = dense_layer(l, modes, dim) * dense;
        }
        CHECK(test::max_abs(network_unitary(p).entries - dense) < 1e-11);
    }
}

TEST_CASE("apply_layer equals a one-layer network", "[network]") {
    const NetworkShape shape{1, 1, 7};
    const auto p = random_params(shape, 9, 0.2);
    const auto v = FockVector::basis(shape.cutoff_config(), 2);
    CHECK(test::max_abs(apply_layer(v, p.layers[0]).amplitudes - apply_network(p, v).amplitudes) <
          1e-14);
}

TEST_CASE("network_columns returns the requested unitary columns", "[network]") {
    const NetworkShape shape{2, 2, 4};
    const auto p = random_params(shape, 2, 0.2);
    const auto u = network_unitary(p).entries;
    const std::vector<Index> inputs{5, 0, 9};
    const CMatrix cols = network_columns(p, inputs);
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        CHECK(test::max_abs(cols.col(static_cast<Index>(k)) - u.col(inputs[k])) < 1e-14);
    }
    CHECK_THROWS_AS(network_columns(p, Index{17}), DimensionMismatch);
}

TEST_CASE("adjoint gradient matches central differences", "[network][gradient]") {
    int config = 0;
    for (int modes : {1, 2}) {
        for (bool gate : {false, true}) {
            const NetworkShape shape{2, modes, modes == 1 ? std::size_t{7} : std::size_t{4}};
            const auto p = random_params(shape, 100 + config, 0.2);
            auto obj = random_objective(shape, gate, 7 + config);
            obj.penalty_weight = config % 2 == 0 ? 0.0 : 0.3;
            const auto cg = cost_and_gradient(p, obj);
            CHECK(cg.cost == Approx(evaluate_cost(p, obj)).epsilon(1e-12));
            const auto fd = test::central_difference(p, obj, 1e-5);
            CHECK(test::normwise_relative_error(cg.gradient, fd) < 1e-6);
            ++config;
        }
    }
}

TEST_CASE("relations at z = 1 contribute a zero subgradient", "[network][gradient]") {
    const NetworkShape shape{1, 1, 5};
    const auto p = NetworkParams::zeros(shape);
    const auto obj = ObjectiveSpec::state_prep(FockVector::basis(shape.cutoff_config(), 0));
    const auto cg = cost_and_gradient(p, obj);
    CHECK(cg.cost < 1e-12);
    for (double g : cg.gradient) {
        CHECK(g == 0.0);
    }
}

TEST_CASE("max_magnitudes reads the active parameters", "[network]") {
    const NetworkShape shape{2, 1, 4};
    auto p = NetworkParams::zeros(shape);
    p.layers[1].alpha_re[0] = 3.0;
    p.layers[1].alpha_im[0] = -4.0;
    p.layers[0].r[0] = -0.7;
    p.layers[0].kappa[0] = 0.2;
    const auto m = max_magnitudes(p);
    CHECK(m.displacement == Approx(5.0));
    CHECK(m.squeezing == Approx(0.7));
    CHECK(m.kerr == Approx(0.2));
}

TEST_CASE("shape validation", "[network]") {
    CHECK_THROWS_AS((NetworkShape{0, 1, 4}.validate()), PreconditionError);
    CHECK_THROWS_AS((NetworkShape{1, 3, 4}.validate()), InvalidCutoff);
    CHECK_THROWS_AS((NetworkShape{1, 1, 1}.validate()), InvalidCutoff);
}
