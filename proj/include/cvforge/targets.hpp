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
 * Target states and gates, and their resolution into training objectives.
 */
#pragma once

#include "cvforge/fock.hpp"
#include "cvforge/objective.hpp"
#include "cvforge/rng.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace cvforge {

enum class TargetKind {
    SinglePhoton,
    FockN,
    OnState,
    HexGkp,
    RandomState,
    Noon,
    Coherent,
    CubicPhaseGate,
    QftGate,
    HaarGate,
    CrossKerrGate,
};

std::string_view target_kind_name(TargetKind kind) noexcept;
std::optional<TargetKind> parse_target_kind(std::string_view name) noexcept;
bool is_gate_target(TargetKind kind) noexcept;
int target_modes(TargetKind kind) noexcept;

/// Declarative target; only the fields of the selected kind are read.
struct TargetSpec {
    TargetKind kind = TargetKind::SinglePhoton;
    Index n = 1;           ///< fock: n; on_state / noon: N
    cplx a{1.0, 0.0};      ///< on_state: a; coherent: alpha
    int mu = 0;            ///< hex_gkp logical value
    int d_code = 2;        ///< hex_gkp code dimension
    double delta = 0.3;    ///< hex_gkp envelope width
    int lattice_radius = 0; ///< hex_gkp; 0 picks it adaptively
    double gamma = 0.01;   ///< cubic phase strength
    double kappa = 0.1;    ///< cross-Kerr strength
    Index d = 1;           ///< random_state support / gate subspace dimension
    std::uint64_t seed = 0;

    /// Throws PreconditionError on out-of-range parameters.
    void validate() const;
};

FockVector single_photon(std::size_t dim);
FockVector fock(Index n, std::size_t dim);
/// (|0> + a|N>) / sqrt(1 + |a|^2).
FockVector on_state(cplx a, Index big_n, std::size_t dim);
/// (|N,0> + |0,N>) / sqrt(2).
FockVector noon(Index big_n, std::size_t dim);
/// Coherent amplitudes on the first D levels, renormalised.
FockVector coherent(cplx alpha, std::size_t dim);
/// (a_n + i b_n) on the first d levels, a_n, b_n standard normal (drawn a_0,
/// b_0, a_1, ...), unit 2-norm.
FockVector random_state(Index d, std::uint64_t seed, std::size_t dim);
/// (1/sqrt(d)) sum_{i<d} |i>, or (1/d) sum_{i,j<d} |i,j> for two modes.
FockVector equal_superposition(Index d, std::size_t dim, int modes = 1);

struct GkpCertificate {
    int lattice_radius = 0;
    /// Norm of the radius L+1 ring relative to the radius-L sum, both before
    /// normalisation.
    double tail = 0.0;
};

struct GkpState {
    FockVector state;
    GkpCertificate certificate;
};

inline constexpr double kGkpTailTolerance = 1e-10;

/**
 * Finite-energy hexagonal GKP state
 *
 *   sum_{n1,n2 in [-L, L]} exp(-i (q/2 + sqrt(3) p/2) c (d n1 + mu))
 *                          exp(i q c n2) |0>,   c = sqrt(4 pi / (sqrt(3) d)),
 *
 * with each term summed as a single phased coherent state, then damped by
 * exp(-delta^2 n) and normalised. `lattice_radius` = 0 grows L until the
 * next ring falls below `tolerance`; an explicit L that fails the tail test
 * throws NumericalFailure.
 */
GkpState hex_gkp(int mu, int d_code, double delta, std::size_t dim,
                 int lattice_radius = 0, double tolerance = kGkpTailTolerance);

/// d x d DFT block (1/sqrt(d)) e^{2 pi i m n / d}, identity elsewhere.
FockOperator qft_gate(Index d, std::size_t dim);
/// Haar-distributed d x d unitary (QR of a complex Ginibre matrix with the
/// R-diagonal phase fix). Entries are drawn column-major, real part first.
CMatrix haar_unitary(Index d, Rng &rng);
/// Haar block from haar_unitary(d, Rng(seed)), identity elsewhere.
FockOperator haar_gate(Index d, std::uint64_t seed, std::size_t dim);
FockOperator cubic_phase_gate(double gamma, std::size_t dim);
FockOperator cross_kerr_gate(double kappa, std::size_t dim);

/// State target at cutoff `dim`.
FockVector target_state(const TargetSpec &spec, std::size_t dim);
/// Gate target at cutoff `dim`.
FockOperator target_gate(const TargetSpec &spec, std::size_t dim);

/// Flat input indices of the relations a gate target trains on: i < d for one
/// mode, i D + j with i, j < d for two modes.
std::vector<Index> gate_inputs(const TargetSpec &spec, std::size_t dim);

/// A target made ready for training and reporting at one network cutoff.
struct ResolvedTarget {
    TargetSpec spec;
    ObjectiveSpec objective;
    /// Target columns at the reference cutoff, for cutoff_check.
    CMatrix reference_columns;
    std::size_t reference_dim = 0;
    std::optional<FockVector> state;  ///< state targets, at the network cutoff
    std::optional<FockOperator> gate; ///< gate targets, at the network cutoff
    /// The network is scored with process/average fidelity when true and the
    /// Monte-Carlo estimator otherwise (the gate leaves its input block).
    bool block_preserving = true;
    std::optional<GkpCertificate> certificate;
};

/**
 * Builds the objective for `spec` on a network with the given cutoff.
 * State targets are built and normalised at the network cutoff. The cubic
 * phase gate is built at the reference cutoff (D + 20) and its columns are
 * projected onto D without renormalising.
 */
ResolvedTarget resolve_target(const TargetSpec &spec, const CutoffConfig &cutoff,
                              double penalty_weight = 0.0,
                              std::size_t reference_padding = kReferencePadding);

/// cutoff_check of the resolved target's reference columns at its cutoff.
CutoffReport check_target_cutoff(const ResolvedTarget &target,
                                 double eps = kCutoffEpsilon);

} // namespace cvforge
