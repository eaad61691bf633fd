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


#include "cvforge/targets.hpp"
#include "test_helpers.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numbers>

using namespace cvforge;
using Catch::Approx;

namespace {

double block_unitarity(const FockOperator &g, Index d) {
    return unitarity_defect(CMatrix(g.entries.topLeftCorner(d, d)));
}

bool identity_outside(const FockOperator &g, Index d) {
    const Index n = g.entries.rows();
    CMatrix rest = g.entries;
    rest.topLeftCorner(d, d).setIdentity();
    return test::max_abs(rest - CMatrix::Identity(n, n)) < 1e-15;
}

} // namespace

TEST_CASE("target kind names round-trip", "[targets]") {
    for (auto kind : {TargetKind::SinglePhoton, TargetKind::FockN, TargetKind::OnState,
                      TargetKind::HexGkp, TargetKind::RandomState, TargetKind::Noon,
                      TargetKind::Coherent, TargetKind::CubicPhaseGate, TargetKind::QftGate,
                      TargetKind::HaarGate, TargetKind::CrossKerrGate}) {
        CHECK(parse_target_kind(target_kind_name(kind)) == kind);
    }
    CHECK_FALSE(parse_target_kind("squeezed_cat").has_value());
    CHECK(target_modes(TargetKind::Noon) == 2);
    CHECK(target_modes(TargetKind::CrossKerrGate) == 2);
    CHECK(target_modes(TargetKind::HexGkp) == 1);
    CHECK(is_gate_target(TargetKind::QftGate));
    CHECK_FALSE(is_gate_target(TargetKind::RandomState));
}

TEST_CASE("simple states", "[targets]") {
    CHECK(std::abs(single_photon(6).amplitudes(1) - 1.0) == 0.0);
    CHECK(std::abs(fock(3, 5).amplitudes(3) - 1.0) == 0.0);
    CHECK_THROWS_AS(fock(5, 5), InvalidCutoff);

    const auto on = on_state(1.0, 9, 14);
    CHECK(on.amplitudes(0).real() == Approx(1.0 / std::numbers::sqrt2));
    CHECK(on.amplitudes(9).real() == Approx(1.0 / std::numbers::sqrt2));
    CHECK(on.norm() == Approx(1.0).margin(1e-12));
    CHECK(std::abs(on_state(0.0, 4, 6).amplitudes(0) - 1.0) < 1e-15);
    CHECK(on_state(cplx(0.3, -1.7), 4, 6).norm() == Approx(1.0).margin(1e-12));
    CHECK_THROWS_AS(on_state(1.0, 9, 9), InvalidCutoff);

    const auto n5 = noon(5, 10);
    REQUIRE(n5.amplitudes.size() == 100);
    CHECK(n5.amplitudes(50).real() == Approx(1.0 / std::numbers::sqrt2));
    CHECK(n5.amplitudes(5).real() == Approx(1.0 / std::numbers::sqrt2));
    CHECK(n5.norm() == Approx(1.0).margin(1e-12));

    const auto coh = coherent(0.5, 20);
    double mean_n = 0.0;
    for (Index m = 0; m < 20; ++m) {
        mean_n += static_cast<double>(m) * std::norm(coh.amplitudes(m));
    }
    CHECK(mean_n == Approx(0.25).margin(1e-6));
}

TEST_CASE("random_state", "[targets]") {
    const auto a = random_state(15, 7, 20);
    const auto b = random_state(15, 7, 20);
    CHECK(test::max_abs(a.amplitudes - b.amplitudes) == 0.0);
    CHECK(a.norm() == Approx(1.0).margin(1e-12));
    CHECK(test::max_abs(CVector(a.amplitudes.tail(5))) == 0.0);
    CHECK(test::max_abs(random_state(15, 8, 20).amplitudes - a.amplitudes) > 0.0);
    CHECK_THROWS_AS(random_state(21, 1, 20), InvalidCutoff);
}

TEST_CASE("random_state weights follow the flat Dirichlet law", "[targets][statistics]") {
    const int samples = 10000;
    const double d = 15.0;
    double s1 = 0.0;
    double s2 = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double p = std::norm(random_state(15, static_cast<std::uint64_t>(k), 15).amplitudes(3));
        s1 += p;
        s2 += p * p;
    }
    const double mean = s1 / samples;
    const double second = s2 / samples;
    const double var = (d - 1.0) / (d * d * (d + 1.0));
    CHECK(std::abs(mean - 1.0 / d) < 3.0 * std::sqrt(var / samples));
    // E[p^2] = 2 / (d (d + 1)); Var[p^2] from the fourth moment 24 / (d..d+3).
    const double m2 = 2.0 / (d * (d + 1.0));
    const double m4 = 24.0 / (d * (d + 1.0) * (d + 2.0) * (d + 3.0));
    CHECK(std::abs(second - m2) < 3.0 * std::sqrt((m4 - m2 * m2) / samples));
}

TEST_CASE("hex GKP state", "[targets][gkp]") {
    const auto g = hex_gkp(1, 2, 0.3, 50);
    CHECK(g.state.norm() == Approx(1.0).margin(1e-12));
    CHECK(g.certificate.lattice_radius > 0);
    CHECK(g.certificate.tail < kGkpTailTolerance);
    const auto wide = hex_gkp(1, 2, 0.3, 50, 2 * g.certificate.lattice_radius);
    CHECK((wide.state.amplitudes - g.state.amplitudes).norm() < 1e-8);
    CHECK_THROWS_AS(hex_gkp(1, 2, 0.3, 50, 1), NumericalFailure);

    TargetSpec spec;
    spec.kind = TargetKind::HexGkp;
    spec.mu = 1;
    const auto resolved = resolve_target(spec, CutoffConfig{50, 1});
    CHECK(check_target_cutoff(resolved).passes);
}

TEST_CASE("QFT gate", "[targets]") {
    const auto one = qft_gate(1, 5);
    CHECK(test::max_abs(one.entries - CMatrix::Identity(5, 5)) < 1e-15);
    const auto q = qft_gate(8, 18);
    CHECK(block_unitarity(q, 8) < 1e-12);
    CHECK(identity_outside(q, 8));
    const auto sup = equal_superposition(8, 18);
    const CVector out = q.entries * sup.amplitudes;
    CHECK(std::abs(out(0) - 1.0) < 1e-12);
    CHECK(out.tail(17).norm() < 1e-12);
    CHECK_THROWS_AS(qft_gate(9, 8), InvalidCutoff);
}

TEST_CASE("Haar gate", "[targets]") {
    const auto h = haar_gate(5, 11, 16);
    CHECK(block_unitarity(h, 5) < 1e-12);
    CHECK(identity_outside(h, 5));
    CHECK(test::max_abs(haar_gate(5, 11, 16).entries - h.entries) == 0.0);
    CHECK(test::max_abs(haar_gate(5, 12, 16).entries - h.entries) > 0.0);
    CHECK_THROWS_AS(haar_gate(6, 1, 5), InvalidCutoff);
}

TEST_CASE("Haar marginal |V00|^2 is uniform", "[targets][statistics]") {
    const int samples = 10000;
    Rng rng(2026);
    std::vector<double> x(samples);
    for (auto &v : x) {
        v = std::norm(haar_unitary(2, rng)(0, 0));
    }
    std::sort(x.begin(), x.end());
    double ks = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double lo = static_cast<double>(k) / samples;
        const double hi = static_cast<double>(k + 1) / samples;
        ks = std::max({ks, std::abs(x[static_cast<std::size_t>(k)] - lo),
                       std::abs(hi - x[static_cast<std::size_t>(k)])});
    }
    // three-sigma Kolmogorov critical value
    CHECK(ks < 1.8 / std::sqrt(static_cast<double>(samples)));
}

TEST_CASE("gate targets are unitary on their block", "[targets]") {
    CHECK(unitarity_defect(cubic_phase_gate(0.01, 20).entries) < 1e-10);
    const auto ck = cross_kerr_gate(0.1, 9);
    CHECK(unitarity_defect(ck.entries) < 1e-12);
    const auto inputs = [] {
        TargetSpec s;
        s.kind = TargetKind::CrossKerrGate;
        s.d = 5;
        return gate_inputs(s, 9);
    }();
    REQUIRE(inputs.size() == 25);
    CHECK(inputs[6] == flat_index(9, 2, 1, 1));
}

TEST_CASE("resolve_target", "[targets]") {
    TargetSpec cubic;
    cubic.kind = TargetKind::CubicPhaseGate;
    cubic.d = 10;
    cubic.gamma = 0.01;
    const auto rc = resolve_target(cubic, CutoffConfig{20, 1});
    CHECK_FALSE(rc.block_preserving);
    CHECK(rc.reference_dim == 40);
    CHECK(rc.objective.relations() == 10);
    CHECK(check_target_cutoff(rc).passes);

    TargetSpec haar;
    haar.kind = TargetKind::HaarGate;
    haar.d = 5;
    haar.seed = 1;
    const auto rh = resolve_target(haar, CutoffConfig{16, 1});
    CHECK(rh.block_preserving);
    REQUIRE(rh.gate.has_value());

    TargetSpec noon_spec;
    noon_spec.kind = TargetKind::Noon;
    noon_spec.n = 5;
    CHECK_THROWS_AS(resolve_target(noon_spec, CutoffConfig{10, 1}), DimensionMismatch);
    const auto rn = resolve_target(noon_spec, CutoffConfig{10, 2});
    CHECK(rn.objective.relations() == 1);

    TargetSpec bad;
    bad.kind = TargetKind::HexGkp;
    bad.delta = -1.0;
    CHECK_THROWS_AS(bad.validate(), PreconditionError);
}
