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


#include "cvforge/kernels.hpp"
#include "cvforge/network.hpp"
#include "cvforge/objective.hpp"
#include "test_helpers.hpp"

#include <catch_amalgamated.hpp>

#include <vector>

using namespace cvforge;

namespace {

std::vector<cplx> random_vec(std::size_t n, unsigned seed) {
    const CMatrix m = test::random_complex(static_cast<Index>(n), 1, seed);
    return {m.data(), m.data() + n};
}

struct RestoreIsa {
    kernels::Isa isa = kernels::active().isa;
    ~RestoreIsa() { kernels::select(isa); }
};

} // namespace

TEST_CASE("scalar table is always available", "[kernels]") {
    CHECK(kernels::scalar_table().isa == kernels::Isa::Scalar);
    CHECK(kernels::isa_name(kernels::Isa::Scalar) == "scalar");
    CHECK(kernels::isa_name(kernels::Isa::Avx2) == "avx2");
    RestoreIsa restore;
    CHECK(kernels::select(kernels::Isa::Scalar));
    CHECK(kernels::active().isa == kernels::Isa::Scalar);
}

TEST_CASE("scalar kernels on a small example", "[kernels]") {
    const auto &s = kernels::scalar_table();
    const std::vector<cplx> x{{1, 2}, {3, -1}, {0, 1}};
    const std::vector<cplx> y{{2, 0}, {1, 1}, {-1, 4}};
    const std::vector<double> w{0.5, 2.0, -1.0};
    cplx dot{0.0};
    cplx wdot{0.0};
    for (std::size_t k = 0; k < 3; ++k) {
        dot += std::conj(x[k]) * y[k];
        wdot += std::conj(x[k]) * w[k] * y[k];
    }
    CHECK(std::abs(s.cdot(x.data(), y.data(), 3) - dot) == 0.0);
    CHECK(std::abs(s.weighted_cdot(x.data(), w.data(), y.data(), 3) - wdot) < 1e-15);
    std::vector<cplx> d = y;
    s.scale(x.data(), d.data(), 3, true);
    CHECK(std::abs(d[1] - std::conj(x[1]) * y[1]) == 0.0);
    std::vector<cplx> out(3);
    s.hadamard(x.data(), y.data(), out.data(), 3);
    CHECK(std::abs(out[2] - x[2] * y[2]) == 0.0);
}

TEST_CASE("AVX2 kernels agree with the scalar reference", "[kernels][simd]") {
    const auto *avx = kernels::avx2_table();
    if (avx == nullptr || !kernels::cpu_has_avx2()) {
        SKIP("AVX2 not available on this host");
    }
    const auto &s = kernels::scalar_table();
    for (std::size_t n : {0, 1, 2, 3, 7, 16, 33, 400}) {
        const auto x = random_vec(n, 1 + static_cast<unsigned>(n));
        const auto y = random_vec(n, 1000 + static_cast<unsigned>(n));
        std::vector<double> w(n);
        for (std::size_t k = 0; k < n; ++k) {
            w[k] = static_cast<double>(k % 5) - 1.5;
        }
        const double tol = 1e-13 * static_cast<double>(n + 1);
        CHECK(std::abs(avx->cdot(x.data(), y.data(), n) - s.cdot(x.data(), y.data(), n)) < tol);
        CHECK(std::abs(avx->weighted_cdot(x.data(), w.data(), y.data(), n) -
                       s.weighted_cdot(x.data(), w.data(), y.data(), n)) < tol);
        for (bool conj : {false, true}) {
            auto a = y;
            auto b = y;
            avx->scale(x.data(), a.data(), n, conj);
            s.scale(x.data(), b.data(), n, conj);
            for (std::size_t k = 0; k < n; ++k) {
                CHECK(std::abs(a[k] - b[k]) < 1e-14);
            }
        }
        std::vector<cplx> ha(n);
        std::vector<cplx> hb(n);
        avx->hadamard(x.data(), y.data(), ha.data(), n);
        s.hadamard(x.data(), y.data(), hb.data(), n);
        for (std::size_t k = 0; k < n; ++k) {
            CHECK(std::abs(ha[k] - hb[k]) < 1e-14);
        }
    }
}

TEST_CASE("cost and gradient do not depend on the kernel variant", "[kernels][simd]") {
    if (!kernels::cpu_has_avx2()) {
        SKIP("AVX2 not available on this host");
    }
    RestoreIsa restore;
    const NetworkShape shape{3, 2, 4};
    InitOptions o;
    o.active_std = 0.2;
    const auto p = init_params(shape, 8, o);
    const CVector raw = test::random_complex(16, 1, 4);
    auto obj = ObjectiveSpec::state_prep(FockVector(shape.cutoff_config(), raw / raw.norm()));

    REQUIRE(kernels::select(kernels::Isa::Scalar));
    const auto a = cost_and_gradient(p, obj);
    REQUIRE(kernels::select(kernels::Isa::Avx2));
    const auto b = cost_and_gradient(p, obj);
    CHECK(std::abs(a.cost - b.cost) < 1e-13);
    CHECK(test::normwise_relative_error(b.gradient, a.gradient) < 1e-11);
}
