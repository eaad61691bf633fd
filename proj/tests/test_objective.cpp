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


#include "cvforge/objective.hpp"
#include "cvforge/targets.hpp"
#include "test_helpers.hpp"

#include <catch_amalgamated.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <numbers>

using namespace cvforge;
using Catch::Approx;

namespace {

/// V and a nearby U, both unitary on the first d levels and identity above.
std::pair<CMatrix, CMatrix> block_pair(Index d, std::size_t dim, std::uint64_t seed,
                                       double spread) {
    Rng rng(seed);
    const CMatrix v = haar_unitary(d, rng);
    const CMatrix z = test::random_complex(d, d, static_cast<unsigned>(seed) + 17);
    const CMatrix w = CMatrix(spread * 0.5 * (z - z.adjoint())).exp();
    const auto n = static_cast<Index>(dim);
    CMatrix vc = CMatrix::Zero(n, d);
    CMatrix uc = CMatrix::Zero(n, d);
    vc.topRows(d) = v;
    uc.topRows(d) = v * w;
    return {uc, vc};
}

} // namespace

TEST_CASE("state_prep_cost", "[objective]") {
    const CutoffConfig c{5, 1};
    const auto t = FockVector::basis(c, 2);
    CHECK(state_prep_cost(t, t) == 0.0);
    CHECK(state_prep_cost(FockVector::basis(c, 0), t) == Approx(1.0));
    const FockVector rotated(c, cplx(0.0, 1.0) * t.amplitudes);
    CHECK(state_prep_cost(rotated, t) == Approx(std::numbers::sqrt2));
    CHECK_THROWS_AS(state_prep_cost(t, FockVector::basis({6, 1}, 0)), DimensionMismatch);
    CHECK(relation_cost(cplx(1.0, 0.0)) == 0.0);
}

TEST_CASE("gate_synth_cost", "[objective]") {
    const std::size_t dim = 6;
    const Index d = 4;
    const auto v = haar_gate(d, 3, dim);
    CHECK(gate_synth_cost(v.entries.leftCols(d), v, d) == Approx(0.0).margin(1e-14));

    const double phi = 0.7;
    CMatrix phase = CMatrix::Identity(6, 6);
    phase(1, 1) = std::polar(1.0, phi);
    const CMatrix u = v.entries * phase;
    CHECK(gate_synth_cost(u.leftCols(d), v, d) ==
          Approx(std::abs(std::polar(1.0, phi) - 1.0) / static_cast<double>(d)));

    const CVector raw = test::random_complex(6, 1, 2);
    const CVector col = raw / raw.norm();
    const FockVector target(CutoffConfig{dim, 1}, v.entries.col(0));
    CHECK(gate_synth_cost(CMatrix(col), v, 1) ==
          Approx(state_prep_cost(FockVector(CutoffConfig{dim, 1}, col), target)));
    CHECK_THROWS_AS(gate_synth_cost(CMatrix(u.leftCols(2)), CMatrix(u.leftCols(3))),
                    DimensionMismatch);
}

TEST_CASE("state_fidelity", "[objective]") {
    const CutoffConfig c{30, 1};
    const auto vac = FockVector::basis(c, 0);
    CHECK(state_fidelity(vac, vac) == Approx(1.0));
    CHECK(state_fidelity(vac, FockVector::basis(c, 1)) == 0.0);
    CHECK(state_fidelity(coherent(0.3, 30), vac) == Approx(std::exp(-0.09)).epsilon(1e-10));
}

TEST_CASE("process and average fidelity", "[objective]") {
    const auto v = haar_gate(5, 1, 8);
    CHECK(process_fidelity(v, v, 5) == Approx(1.0));
    const FockOperator phased(v.cutoff, std::polar(1.0, 0.4) * v.entries);
    CHECK(process_fidelity(phased, v, 5) == Approx(1.0));

    CMatrix u = CMatrix::Identity(3, 2);
    u(1, 1) = -1.0;
    CHECK(process_fidelity(u, CMatrix(CMatrix::Identity(3, 2))) == Approx(0.0).margin(1e-15));
    CHECK_THROWS_AS(process_fidelity(v, v, 9), DimensionMismatch);

    CHECK(average_fidelity(1.0, 7) == 1.0);
    CHECK(average_fidelity(0.0, 1) == 0.5);
    CHECK(average_fidelity(0.99994, 25) == Approx((0.99994 * 25 + 1) / 26));
    double last = -1.0;
    for (double f = 0.0; f <= 1.0; f += 0.05) {
        const double a = average_fidelity(f, 5);
        CHECK(a > last);
        last = a;
    }
}

TEST_CASE("fidelities stay in [0, 1]", "[objective]") {
    for (unsigned seed = 0; seed < 20; ++seed) {
        const CVector a = test::random_complex(7, 1, seed);
        const CVector b = test::random_complex(7, 1, seed + 100);
        const CutoffConfig c{7, 1};
        const double f = state_fidelity(FockVector(c, a / a.norm()), FockVector(c, b / b.norm()));
        CHECK(f >= 0.0);
        CHECK(f <= 1.0 + 1e-12);
        const auto [u, v] = block_pair(3, 7, seed, 2.0);
        const double p = process_fidelity(u, v);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0 + 1e-12);
    }
}

TEST_CASE("mc_average_fidelity", "[objective]") {
    const auto [u, v] = block_pair(5, 8, 4, 0.6);
    const auto same = mc_average_fidelity(v, v, 200, 1);
    CHECK(same.mean == Approx(1.0).margin(1e-12));
    CHECK(same.std_error < 1e-12);

    const auto a = mc_average_fidelity(u, v, 1000, 9);
    const auto b = mc_average_fidelity(u, v, 1000, 9);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);

    const auto est = mc_average_fidelity(u, v, 10000, 5);
    const double exact = average_fidelity(process_fidelity(u, v), 5);
    CHECK(std::abs(est.mean - exact) < 3.0 * est.std_error);
}

TEST_CASE("mc standard error scales as 1/sqrt(N)", "[objective]") {
    const auto [u, v] = block_pair(5, 8, 6, 1.0);
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t n : {100, 1000, 10000}) {
        const double x = std::log(static_cast<double>(n));
        const double y = std::log(mc_average_fidelity(u, v, n, 3).std_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);
    CHECK(std::abs(slope + 0.5) < 0.05);
}

TEST_CASE("cutoff_check", "[objective]") {
    const auto f3 = fock(3, 26);
    const auto r = cutoff_check(f3, 6);
    CHECK(r.passes);
    CHECK(r.margin == Approx(1.0));
    CHECK_FALSE(cutoff_check(coherent(3.0, 40), 4).passes);
    CHECK_THROWS_AS(cutoff_check(f3, 26), PreconditionError);

    const auto found = cutoff_check(coherent(1.0, 40), 4, kCutoffEpsilon, true);
    REQUIRE(found.smallest_passing.has_value());
    const std::size_t smallest = *found.smallest_passing;
    CHECK(cutoff_check(coherent(1.0, 40), smallest).passes);
    CHECK_FALSE(cutoff_check(coherent(1.0, 40), smallest - 1).passes);
}

TEST_CASE("parameter_penalty", "[objective]") {
    const NetworkShape shape{2, 1, 4};
    auto p = NetworkParams::zeros(shape);
    CHECK(parameter_penalty(p, 3.0) == 0.0);
    p.layers[0].r[0] = 0.5;
    CHECK(parameter_penalty(p, 2.0) == Approx(0.5));
    CHECK(parameter_penalty(p, 0.0) == 0.0);
    p.layers[1].u1.rotation[0] = 4.0;
    CHECK(parameter_penalty(p, 2.0) == Approx(0.5));
}

TEST_CASE("objective validation", "[objective]") {
    const CutoffConfig c{4, 1};
    CHECK_THROWS_AS(ObjectiveSpec::gate_synth(c, {0, 1}, CMatrix::Zero(4, 3)), DimensionMismatch);
    CHECK_THROWS_AS(ObjectiveSpec::gate_synth(c, {0, 7}, CMatrix::Zero(4, 2)), DimensionMismatch);
    CHECK_NOTHROW(ObjectiveSpec::gate_synth(c, {0, 1}, CMatrix::Identity(4, 2)));
}
