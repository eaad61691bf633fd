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

// AVX2 + FMA kernels. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after cpu_has_avx2() returned true.

#include "cvforge/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace cvforge::kernels {

namespace {

// std::complex<double> is layout-compatible with double[2]; one __m256d holds
// two complex numbers as [re0, im0, re1, im1].
inline __m256d load2(const cplx *p) {
    return _mm256_loadu_pd(reinterpret_cast<const double *>(p));
}
inline void store2(cplx *p, __m256d v) {
    _mm256_storeu_pd(reinterpret_cast<double *>(p), v);
}

inline __m256d cmul(__m256d a, __m256d b) {
    const __m256d b_re = _mm256_movedup_pd(b);
    const __m256d b_im = _mm256_permute_pd(b, 0xF);
    const __m256d a_swap = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_swap, b_im));
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Sum of even lanes minus sum of odd lanes.
inline double halt(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_sub_sd(s, _mm_unpackhi_pd(s, s)));
}

void scale_avx2(const cplx *phases, cplx *data, std::size_t n, bool conjugate) {
    const __m256d flip = conjugate ? _mm256_set_pd(-0.0, 0.0, -0.0, 0.0)
                                   : _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d b = _mm256_xor_pd(load2(phases + k), flip);
        store2(data + k, cmul(load2(data + k), b));
    }
    for (; k < n; ++k) {
        const cplx b = conjugate ? std::conj(phases[k]) : phases[k];
        const cplx a = data[k];
        data[k] = {a.real() * b.real() - a.imag() * b.imag(),
                   a.real() * b.imag() + a.imag() * b.real()};
    }
}

cplx cdot_avx2(const cplx *x, const cplx *y, std::size_t n) {
    __m256d s_re = _mm256_setzero_pd();
    __m256d s_im = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d xv = load2(x + k);
        const __m256d yv = load2(y + k);
        s_re = _mm256_fmadd_pd(xv, yv, s_re);
        s_im = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0x5), s_im);
    }
    double re = hsum(s_re);
    double im = halt(s_im);
    for (; k < n; ++k) {
        re += x[k].real() * y[k].real() + x[k].imag() * y[k].imag();
        im += x[k].real() * y[k].imag() - x[k].imag() * y[k].real();
    }
    return {re, im};
}

cplx weighted_cdot_avx2(const cplx *x, const double *w, const cplx *y,
                        std::size_t n) {
    __m256d s_re = _mm256_setzero_pd();
    __m256d s_im = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m128d w2 = _mm_loadu_pd(w + k);
        const __m256d wv = _mm256_permute4x64_pd(_mm256_castpd128_pd256(w2), 0x50);
        const __m256d xv = load2(x + k);
        const __m256d yv = _mm256_mul_pd(load2(y + k), wv);
        s_re = _mm256_fmadd_pd(xv, yv, s_re);
        s_im = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0x5), s_im);
    }
    double re = hsum(s_re);
    double im = halt(s_im);
    for (; k < n; ++k) {
        const double yr = w[k] * y[k].real();
        const double yi = w[k] * y[k].imag();
        re += x[k].real() * yr + x[k].imag() * yi;
        im += x[k].real() * yi - x[k].imag() * yr;
    }
    return {re, im};
}

void hadamard_avx2(const cplx *a, const cplx *b, cplx *out, std::size_t n) {
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        store2(out + k, cmul(load2(a + k), load2(b + k)));
    }
    for (; k < n; ++k) {
        out[k] = {a[k].real() * b[k].real() - a[k].imag() * b[k].imag(),
                  a[k].real() * b[k].imag() + a[k].imag() * b[k].real()};
    }
}

constexpr KernelTable kAvx2{Isa::Avx2, scale_avx2, cdot_avx2,
                            weighted_cdot_avx2, hadamard_avx2};

} // namespace

const KernelTable *avx2_table() noexcept { return &kAvx2; }

} // namespace cvforge::kernels

#else

namespace cvforge::kernels {
const KernelTable *avx2_table() noexcept { return nullptr; }
} // namespace cvforge::kernels

#endif
