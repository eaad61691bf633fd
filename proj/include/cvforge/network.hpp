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
 * Layered CV neural network ansatz and its adjoint-mode gradient.
 *
 * One layer applies, in order:
 *   U1 -> S -> U2 -> D -> K
 * where each interferometer is a rectangular mesh of N(N-1)/2 beamsplitters
 * followed by N rotations (a single rotation for N = 1), S and D act per mode
 * and K is a per-mode Kerr gate.
 *
 * Flat parameter layout (layer-major, gate order as above, mode-minor):
 *
 *   u1.theta[B] u1.phi[B] u1.rotation[N] r[N]
 *   u2.theta[B] u2.phi[B] u2.rotation[N]
 *   alpha_re[N] alpha_im[N] kappa[N]
 *
 * with B = N(N-1)/2, i.e. 2N^2 + 4N values per layer (6 for N = 1, 16 for
 * N = 2).
 */
#pragma once

#include "cvforge/fock.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace cvforge {

struct ObjectiveSpec;

struct NetworkShape {
    int layers = 1;
    int modes = 1;
    std::size_t cutoff = 2;

    [[nodiscard]] CutoffConfig cutoff_config() const { return {cutoff, modes}; }
    /// Throws PreconditionError/InvalidCutoff on an unusable shape.
    void validate() const;
    friend bool operator==(const NetworkShape &, const NetworkShape &) = default;
};

struct Interferometer {
    std::vector<double> theta;    ///< beamsplitter angles
    std::vector<double> phi;      ///< beamsplitter phases
    std::vector<double> rotation; ///< output rotations, one per mode
};

struct LayerParams {
    Interferometer u1;
    std::vector<double> r;
    Interferometer u2;
    std::vector<double> alpha_re;
    std::vector<double> alpha_im;
    std::vector<double> kappa;

    static LayerParams zeros(int modes);
};

/// What a flat parameter controls.
enum class ParamRole : std::uint8_t {
    BeamsplitterTheta,
    BeamsplitterPhi,
    Rotation,
    Squeezing,
    DisplacementRe,
    DisplacementIm,
    Kerr,
};

/// Squeezing, displacement and Kerr strengths: the photon-number-changing or
/// non-Gaussian parameters that the penalty and the init spread act on.
constexpr bool is_active(ParamRole role) noexcept {
    return role == ParamRole::Squeezing || role == ParamRole::DisplacementRe ||
           role == ParamRole::DisplacementIm || role == ParamRole::Kerr;
}

int beamsplitters_per_interferometer(int modes) noexcept;
int params_per_layer(int modes) noexcept;
/// Role of every entry in the flat vector of a network with this shape.
std::vector<ParamRole> param_roles(const NetworkShape &shape);

struct NetworkParams {
    int modes = 1;
    std::size_t cutoff = 2;
    std::vector<LayerParams> layers;

    [[nodiscard]] NetworkShape shape() const {
        return {static_cast<int>(layers.size()), modes, cutoff};
    }
    [[nodiscard]] std::vector<double> flatten() const;
    static NetworkParams from_flat(const NetworkShape &shape,
                                   std::span<const double> flat);
    static NetworkParams zeros(const NetworkShape &shape);
};

struct InitOptions {
    double active_std = 0.001;
    double phase_range = 6.283185307179586; ///< phases ~ U[0, phase_range)
};

/// Random initial parameters; bit-identical for equal arguments.
NetworkParams init_params(const NetworkShape &shape, std::uint64_t seed,
                          const InitOptions &options = {});

/// Largest |alpha|, |r| and |kappa| over the circuit.
struct GateMagnitudes {
    double displacement = 0.0;
    double squeezing = 0.0;
    double kerr = 0.0;
};
GateMagnitudes max_magnitudes(const NetworkParams &params);

/// One layer applied to a normalised state.
FockVector apply_layer(const FockVector &state, const LayerParams &layer);
FockVector apply_network(const NetworkParams &params, const FockVector &state);

/// Network applied to the Fock basis states listed in `inputs` (flat
/// indices); column i is U|inputs[i]>.
CMatrix network_columns(const NetworkParams &params, std::span<const Index> inputs);
/// Same for the first `d` flat basis states.
CMatrix network_columns(const NetworkParams &params, Index d);
/// The full D^N x D^N circuit unitary.
FockOperator network_unitary(const NetworkParams &params);

struct CostGradient {
    double cost = 0.0;
    std::vector<double> gradient;
};

/**
 * Training cost and its gradient with respect to every flat parameter.
 *
 * The forward pass keeps the column block after every elementary gate; the
 * backward pass carries the cost co-state through the gate adjoints and
 * contracts it with each gate's parameter derivative. Relations sitting
 * exactly at z = 1 (|z - 1| < 1e-12) contribute the zero subgradient.
 */
CostGradient cost_and_gradient(const NetworkParams &params,
                               const ObjectiveSpec &objective);
/// Cost alone (same value as cost_and_gradient, no backward pass).
double evaluate_cost(const NetworkParams &params, const ObjectiveSpec &objective);

} // namespace cvforge
