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
 * Complex inner-loop kernels used by the circuit simulator.
 *
 * Every kernel has a scalar reference implementation and, on x86-64, an
 * AVX2/FMA variant. The variant is picked once at start-up from CPUID; the
 * environment variable CVFORGE_SIMD=scalar forces the reference path.
 */
#pragma once

#include "cvforge/common.hpp"

#include <cstddef>
#include <span>
#include <string_view>

namespace cvforge::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
    Isa isa;
    // data[k] *= phases[k], or *= conj(phases[k]) when conjugate is set.
    void (*scale)(const cplx *phases, cplx *data, std::size_t n, bool conjugate);
    // sum_k conj(x[k]) * y[k]
    cplx (*cdot)(const cplx *x, const cplx *y, std::size_t n);
    // sum_k conj(x[k]) * w[k] * y[k]
    cplx (*weighted_cdot)(const cplx *x, const double *w, const cplx *y,
                          std::size_t n);
    // out[k] = a[k] * b[k]
    void (*hadamard)(const cplx *a, const cplx *b, cplx *out, std::size_t n);
};

const KernelTable &scalar_table() noexcept;
/// nullptr when the binary was built without AVX2 support.
const KernelTable *avx2_table() noexcept;

/// True when the running CPU supports the AVX2 table.
bool cpu_has_avx2() noexcept;

/// The table in use.
const KernelTable &active() noexcept;
/// Switch tables; returns false (and changes nothing) if `isa` is unavailable.
bool select(Isa isa) noexcept;
std::string_view isa_name(Isa isa) noexcept;

inline void scale(std::span<const cplx> phases, std::span<cplx> data,
                  bool conjugate = false) {
    active().scale(phases.data(), data.data(), data.size(), conjugate);
}
inline cplx cdot(std::span<const cplx> x, std::span<const cplx> y) {
    return active().cdot(x.data(), y.data(), x.size());
}
inline cplx weighted_cdot(std::span<const cplx> x, std::span<const double> w,
                          std::span<const cplx> y) {
    return active().weighted_cdot(x.data(), w.data(), y.data(), x.size());
}
inline void hadamard(std::span<const cplx> a, std::span<const cplx> b,
                     std::span<cplx> out) {
    active().hadamard(a.data(), b.data(), out.data(), out.size());
}

} // namespace cvforge::kernels
