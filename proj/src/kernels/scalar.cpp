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

namespace cvforge::kernels {

namespace {

// Explicit real arithmetic: std::complex operator* may take the slow
// NaN-recovery path without -ffast-math.
inline cplx mul(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(),
            a.real() * b.imag() + a.imag() * b.real()};
}

void scale_scalar(const cplx *phases, cplx *data, std::size_t n,
                  bool conjugate) {
    if (conjugate) {
        for (std::size_t k = 0; k < n; ++k) {
            data[k] = mul(data[k], std::conj(phases[k]));
        }
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            data[k] = mul(data[k], phases[k]);
        }
    }
}

cplx cdot_scalar(const cplx *x, const cplx *y, std::size_t n) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        re += x[k].real() * y[k].real() + x[k].imag() * y[k].imag();
        im += x[k].real() * y[k].imag() - x[k].imag() * y[k].real();
    }
    return {re, im};
}

cplx weighted_cdot_scalar(const cplx *x, const double *w, const cplx *y,
                          std::size_t n) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double yr = w[k] * y[k].real();
        const double yi = w[k] * y[k].imag();
        re += x[k].real() * yr + x[k].imag() * yi;
        im += x[k].real() * yi - x[k].imag() * yr;
    }
    return {re, im};
}

void hadamard_scalar(const cplx *a, const cplx *b, cplx *out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = mul(a[k], b[k]);
    }
}

constexpr KernelTable kScalar{Isa::Scalar, scale_scalar, cdot_scalar,
                              weighted_cdot_scalar, hadamard_scalar};

} // namespace

const KernelTable &scalar_table() noexcept { return kScalar; }

} // namespace cvforge::kernels
