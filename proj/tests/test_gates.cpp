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
#include "cvforge/objective.hpp"
#include "test_helpers.hpp"

#include <catch_amalgamated.hpp>

#include <numbers>

using namespace cvforge;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

CMatrix gate_fd(GateKind kind, std::vector<double> params, int which, std::size_t dim,
                double h = 1e-5) {
    const double x = params[static_cast<std::size_t>(which)];
    params[static_cast<std::size_t>(which)] = x + h;
    const CMatrix up = make_gate(kind, params, dim).entries;
    params[static_cast<std::size_t>(which)] = x - h;
    const CMatrix down = make_gate(kind, params, dim).entries;
    return (up - down) / (2.0 * h);
}

double rel_error(const CMatrix &a, const CMatrix &b) {
    return test::max_abs(a - b) / test::max_abs(b);
}

} // namespace

TEST_CASE("gate metadata", "[gates]") {
    CHECK(gate_arity(GateKind::Displacement) == 2);
    CHECK(gate_arity(GateKind::Beamsplitter) == 2);
    CHECK(gate_arity(GateKind::Kerr) == 1);
    CHECK(gate_modes(GateKind::CrossKerr) == 2);
    CHECK(gate_modes(GateKind::Squeezing) == 1);
    CHECK(gate_name(GateKind::CubicPhase).size() > 0);
}

TEST_CASE("zero parameters give the identity", "[gates]") {
    const double zero1[] = {0.0};
    const double zero2[] = {0.0, 0.0};
    for (auto kind : {GateKind::Rotation, GateKind::Squeezing, GateKind::Kerr,
                      GateKind::CrossKerr, GateKind::CubicPhase}) {
        const auto g = make_gate(kind, zero1, 5);
        CHECK(test::max_abs(g.entries - CMatrix::Identity(g.entries.rows(), g.entries.cols())) <
              1e-15);
    }
    for (auto kind : {GateKind::Displacement, GateKind::Beamsplitter}) {
        const auto g = make_gate(kind, zero2, 5);
        CHECK(test::max_abs(g.entries - CMatrix::Identity(g.entries.rows(), g.entries.cols())) <
              1e-15);
    }
}

TEST_CASE("rotation", "[gates]") {
    const CMatrix r = rotation(kPi, 3).entries;
    CHECK(std::abs(r(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(r(1, 1) + 1.0) < 1e-15);
    CHECK(std::abs(r(2, 2) - 1.0) < 1e-14);
    CHECK(test::max_abs(rotation(0.4, 7).entries * rotation(1.1, 7).entries -
                        rotation(1.5, 7).entries) < 1e-14);
}

TEST_CASE("displacement", "[gates]") {
    const auto d = displacement(0.3, 0.0, 30);
    CHECK(std::abs(d.entries(0, 0)) == Approx(std::exp(-0.045)).margin(1e-6));
    const auto c = displacement(0.2, -0.4, 30);
    const double a2 = 0.2 * 0.2 + 0.4 * 0.4;
    CHECK(std::abs(c.entries(0, 0)) == Approx(std::exp(-a2 / 2.0)).margin(1e-6));
    const auto inv = displacement(-0.2, 0.4, 30);
    CHECK(test::max_abs(c.entries * inv.entries - CMatrix::Identity(30, 30)) < 1e-12);
    CHECK(unitarity_defect(displacement(1.5, 0.7, 12).entries) < 1e-12);
}

TEST_CASE("squeezing", "[gates]") {
    const auto s = squeezing(0.2, 24);
    CHECK(std::abs(s.entries(0, 0)) == Approx(1.0 / std::sqrt(std::cosh(0.2))).margin(1e-5));
    for (Index m = 1; m < 24; m += 2) {
        CHECK(std::abs(s.entries(m, 0)) < 1e-15);
    }
    CHECK(unitarity_defect(squeezing(-0.8, 10).entries) < 1e-12);
}

TEST_CASE("beamsplitter conserves photon number", "[gates]") {
    const std::size_t dim = 5;
    const CutoffConfig c{dim, 2};
    const auto in = FockVector::basis(c, flat_index(dim, 2, 1, 0));

    const auto half = beamsplitter(kPi / 4.0, 0.0, dim).apply(in);
    for (std::size_t n1 = 0; n1 < dim; ++n1) {
        for (std::size_t n2 = 0; n2 < dim; ++n2) {
            if (n1 + n2 != 1) {
                CHECK(std::abs(half.amplitudes(flat_index(dim, 2, n1, n2))) < 1e-14);
            }
        }
    }
    CHECK(half.norm() == Approx(1.0).margin(1e-14));

    const auto swap = beamsplitter(kPi / 2.0, 0.0, dim).apply(in);
    CHECK(std::abs(swap.amplitudes(flat_index(dim, 2, 0, 1))) == Approx(1.0).margin(1e-10));

    const CMatrix u = beamsplitter(0.7, 1.3, dim).entries;
    CHECK(unitarity_defect(u) < 1e-12);
}

TEST_CASE("kerr and cross-kerr", "[gates]") {
    const CMatrix k = kerr(kPi, 4).entries;
    const double expected[] = {1.0, -1.0, 1.0, -1.0};
    for (Index m = 0; m < 4; ++m) {
        CHECK(std::abs(k(m, m) - expected[m]) < 1e-14);
    }
    const CVector psi = test::random_complex(6, 1, 3);
    const CVector out = kerr(0.37, 6).entries * psi;
    CHECK(test::max_abs(CVector(out.cwiseAbs() - psi.cwiseAbs())) < 1e-14);

    const std::size_t dim = 4;
    const CMatrix ck = cross_kerr(0.1, dim).entries;
    CHECK(std::abs(ck(flat_index(dim, 2, 1, 1), flat_index(dim, 2, 1, 1)) -
                   std::polar(1.0, -0.1)) < 1e-15);
    for (std::size_t n = 0; n < dim; ++n) {
        CHECK(std::abs(ck(flat_index(dim, 2, n, 0), flat_index(dim, 2, n, 0)) - 1.0) < 1e-15);
        CHECK(std::abs(ck(flat_index(dim, 2, 0, n), flat_index(dim, 2, 0, n)) - 1.0) < 1e-15);
    }
    CHECK(test::max_abs(CMatrix(ck.diagonal().cwiseAbs()) -
                        CMatrix::Ones(ck.rows(), 1)) < 1e-15);
}

TEST_CASE("cubic phase", "[gates]") {
    CHECK(unitarity_defect(cubic_phase(0.01, 20).entries) < 1e-10);
    const CMatrix ref = cubic_phase(0.01, 40).entries.leftCols(10);
    const auto report = cutoff_check(ref, 40, 1, 20);
    CHECK(report.passes);
}

TEST_CASE("gate_derivative matches central differences", "[gates][gradient]") {
    SECTION("rotation at zero") {
        const double p[] = {0.0};
        const CMatrix g = gate_derivative(GateKind::Rotation, p, 0, 5).entries;
        CMatrix expected = CMatrix::Zero(5, 5);
        for (Index m = 0; m < 5; ++m) {
            expected(m, m) = cplx(0.0, static_cast<double>(m));
        }
        CHECK(test::max_abs(g - expected) < 1e-15);
    }
    SECTION("displacement") {
        const std::vector<double> p{0.2, 0.1};
        for (int which : {0, 1}) {
            const CMatrix g = gate_derivative(GateKind::Displacement, p, which, 8).entries;
            CHECK(rel_error(g, gate_fd(GateKind::Displacement, p, which, 8)) < 1e-6);
        }
    }
    SECTION("squeezing") {
        const std::vector<double> p{0.15};
        const CMatrix g = gate_derivative(GateKind::Squeezing, p, 0, 12).entries;
        CHECK(rel_error(g, gate_fd(GateKind::Squeezing, p, 0, 12)) < 1e-6);
    }
    SECTION("beamsplitter") {
        const std::vector<double> p{0.6, 0.9};
        for (int which : {0, 1}) {
            const CMatrix g = gate_derivative(GateKind::Beamsplitter, p, which, 4).entries;
            CHECK(rel_error(g, gate_fd(GateKind::Beamsplitter, p, which, 4)) < 1e-6);
        }
        // phi direction through the Frechet derivative of the generator
        const CMatrix m = gate_generator(GateKind::Beamsplitter, p, 4).entries;
        const double h = 1e-6;
        const std::vector<double> up{p[0], p[1] + h};
        const std::vector<double> down{p[0], p[1] - h};
        const CMatrix dm = (gate_generator(GateKind::Beamsplitter, up, 4).entries -
                            gate_generator(GateKind::Beamsplitter, down, 4).entries) /
                           (2.0 * h);
        CHECK(rel_error(gate_derivative(GateKind::Beamsplitter, p, 1, 4).entries,
                        expm_frechet(m, dm)) < 1e-8);
    }
    SECTION("diagonal gates") {
        const std::vector<double> p{0.3};
        for (auto kind : {GateKind::Rotation, GateKind::Kerr, GateKind::CrossKerr,
                          GateKind::CubicPhase}) {
            const CMatrix g = gate_derivative(kind, p, 0, 5).entries;
            CHECK(rel_error(g, gate_fd(kind, p, 0, 5)) < 1e-6);
        }
    }
    SECTION("bad parameter index") {
        const double p[] = {0.1};
        CHECK_THROWS_AS(gate_derivative(GateKind::Kerr, p, 1, 4), PreconditionError);
    }
}

TEST_CASE("mode bases reproduce the dense gates", "[gates]") {
    const auto mb = mode_basis(9);
    CHECK(mode_basis(9).get() == mb.get());
    CHECK(test::max_abs(mb->squeeze.exp(0.3) - squeezing(0.3, 9).entries) < 1e-12);
    const auto bb = beamsplitter_basis(4);
    std::size_t total = 0;
    for (const auto &block : bb->blocks) {
        total += block.indices.size();
    }
    CHECK(total == 16);
}
