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
 * Truncated Fock-space linear algebra.
 *
 * Two-mode spaces use lexicographic ordering: the flat index of |n1, n2> is
 * n1 * D + n2, so the second mode runs fastest. Quadratures follow the
 * hbar = 2 convention (x = a + a^dagger, vacuum variance 1).
 */
#pragma once

#include "cvforge/common.hpp"

#include <cstddef>

namespace cvforge {

struct CutoffConfig {
    std::size_t dim = 2; ///< Fock levels kept per mode (D).
    int modes = 1;       ///< 1 or 2.

    [[nodiscard]] Index total() const noexcept {
        return modes == 1 ? static_cast<Index>(dim)
                          : static_cast<Index>(dim * dim);
    }
    /// Throws InvalidCutoff unless D >= 2 and modes is 1 or 2.
    void validate() const;

    friend bool operator==(const CutoffConfig &, const CutoffConfig &) = default;
};

struct FockVector {
    CutoffConfig cutoff;
    CVector amplitudes;

    FockVector() = default;
    FockVector(CutoffConfig c, CVector amps);

    /// |index> in the flat (lexicographic) basis.
    static FockVector basis(CutoffConfig c, Index index);
    [[nodiscard]] double norm() const { return amplitudes.norm(); }
};

struct FockOperator {
    CutoffConfig cutoff;
    CMatrix entries;
    bool unitary_flag = false;

    FockOperator() = default;
    FockOperator(CutoffConfig c, CMatrix m, bool unitary = false);

    static FockOperator identity(CutoffConfig c);
    [[nodiscard]] FockOperator adjoint() const;
    [[nodiscard]] FockVector apply(const FockVector &v) const;
};

/// max_ij |(U^dagger U - I)_ij|.
double unitarity_defect(const CMatrix &u);
/// max_ij |(M + M^dagger)_ij|; zero for an exactly anti-Hermitian matrix.
double antihermitian_defect(const CMatrix &m);

struct LadderOps {
    FockOperator a;
    FockOperator a_dag;
    FockOperator n;
};

/// Truncated annihilation/creation/number operators on one mode.
LadderOps ladder(std::size_t dim);

struct Quadratures {
    FockOperator x;
    FockOperator p;
};

/// x = a + a^dagger, p = -i (a - a^dagger).
Quadratures quadratures(std::size_t dim);

/**
 * Eigendecomposition of a Hermitian H kept around so that exp(iH) and its
 * Frechet derivatives can be produced without re-diagonalising.
 *
 * exp(iH) = V diag(exp(i lambda)) V^dagger.
 */
class HermitianExp {
  public:
    explicit HermitianExp(const CMatrix &hermitian);
    HermitianExp(CMatrix basis, RVector eigenvalues);

    [[nodiscard]] const CMatrix &basis() const noexcept { return basis_; }
    [[nodiscard]] const RVector &eigenvalues() const noexcept {
        return eigenvalues_;
    }

    /// exp(i t H).
    [[nodiscard]] CMatrix exp(double t = 1.0) const;

    /// Directional derivative of exp(M), M = iH, in direction E
    /// (Daleckii-Krein divided differences in the eigenbasis).
    [[nodiscard]] CMatrix frechet(const CMatrix &direction) const;

    /// Divided-difference kernel Phi_jk = (e^{i l_j} - e^{i l_k}) / (i l_j - i l_k),
    /// with e^{i l_j} on the diagonal.
    [[nodiscard]] CMatrix divided_differences() const;

  private:
    CMatrix basis_;
    RVector eigenvalues_;
};

/// Same kernel as HermitianExp::divided_differences for arbitrary eigenvalues.
CMatrix exp_divided_differences(const RVector &eigenvalues);

/// exp(M) for anti-Hermitian M (tolerance 1e-12 on M + M^dagger).
CMatrix expm_antihermitian(const CMatrix &m);
FockOperator expm_antihermitian(const FockOperator &m);

/// Frechet derivative L(M, E) of the matrix exponential, read off the
/// upper-right block of exp([[M, E], [0, M]]).
CMatrix expm_frechet(const CMatrix &m, const CMatrix &e);
FockOperator expm_frechet(const FockOperator &m, const FockOperator &e);

/// Kronecker product A (x) B in lexicographic order.
CMatrix kron(const CMatrix &a, const CMatrix &b);
FockOperator tensor(const FockOperator &a, const FockOperator &b);

/// Lifts a single-mode operator onto `mode` of a `modes`-mode space.
FockOperator embed_single(const FockOperator &a, int mode, int modes);

/// <u|v> = sum conj(u_k) v_k.
cplx overlap(const FockVector &u, const FockVector &v);

/// Restriction of a vector built at a larger cutoff onto the first `dim`
/// levels of every mode. No renormalisation.
CVector restrict_to_cutoff(const CVector &amps, std::size_t from_dim,
                           std::size_t to_dim, int modes);

/// Flat index of |n1, n2> (or |n1> for one mode).
inline Index flat_index(std::size_t dim, int modes, Index n1, Index n2 = 0) {
    return modes == 1 ? n1 : n1 * static_cast<Index>(dim) + n2;
}

} // namespace cvforge
