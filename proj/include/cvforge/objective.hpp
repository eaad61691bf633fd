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
 * Training costs, reporting fidelities and the cutoff adequacy check.
 *
 * Training minimises phase-pinning distances |<t|U|i> - 1| averaged over the
 * input relations; reports use fidelities, which ignore global phase.
 */
#pragma once

#include "cvforge/fock.hpp"
#include "cvforge/network.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace cvforge {

enum class ObjectiveMode { StatePrep, GateSynth };

struct ObjectiveSpec {
    ObjectiveMode mode = ObjectiveMode::StatePrep;
    CutoffConfig cutoff;
    /// Flat Fock indices of the input states, one per relation.
    std::vector<Index> inputs;
    /// Target output for each relation, as columns (D^N x d).
    CMatrix targets;
    double penalty_weight = 0.0;

    [[nodiscard]] Index relations() const {
        return static_cast<Index>(inputs.size());
    }
    /// Throws DimensionMismatch/PreconditionError on inconsistent fields.
    void validate() const;

    static ObjectiveSpec state_prep(const FockVector &target,
                                    double penalty_weight = 0.0);
    static ObjectiveSpec gate_synth(CutoffConfig cutoff, std::vector<Index> inputs,
                                    CMatrix target_columns,
                                    double penalty_weight = 0.0);
};

/// |z - 1| with the state/relation overlap z.
double relation_cost(cplx z);

/// |<target|out> - 1|.
double state_prep_cost(const FockVector &out, const FockVector &target);
/// (1/d) sum_i |<t_i|u_i> - 1| over matching columns.
double gate_synth_cost(const CMatrix &columns, const CMatrix &target_columns);
/// Targets V_t|i> for i < d.
double gate_synth_cost(const CMatrix &columns, const FockOperator &target, Index d);

/// |<target|psi>|^2.
double state_fidelity(const FockVector &psi, const FockVector &target);

/// |(1/d) sum_j <V_j|U_j>|^2 over the d input columns of both maps. The
/// columns may leave the input block.
double process_fidelity(const CMatrix &u_columns, const CMatrix &v_columns);
double process_fidelity(const FockOperator &u, const FockOperator &v, Index d);

/// (F_proc d + 1) / (d + 1).
double average_fidelity(double process_fidelity, Index d);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/**
 * Haar average of |<w|V^dagger U|w>|^2 over random input states w = W|0>,
 * W Haar on the d-dimensional input block. Sample k draws from its own
 * stream derive_seed(seed, k), so the estimate does not depend on
 * evaluation order.
 */
McEstimate mc_average_fidelity(const CMatrix &u_columns, const CMatrix &v_columns,
                               std::size_t samples, std::uint64_t seed);

struct CutoffReport {
    bool passes = false;
    double margin = 0.0; ///< smallest ||Pi_D psi||_2 over the checked columns
    std::size_t cutoff = 0;
    std::optional<std::size_t> smallest_passing;
};

inline constexpr double kCutoffEpsilon = 1e-4;
inline constexpr std::size_t kReferencePadding = 20;

/**
 * ||Pi_D psi_i||_2 >= 1 - eps for every column psi_i given at a larger
 * reference cutoff. With `find_smallest` the smallest passing D (searched
 * up to the reference cutoff) is filled in.
 */
CutoffReport cutoff_check(const CMatrix &reference_columns, std::size_t reference_dim,
                          int modes, std::size_t dim, double eps = kCutoffEpsilon,
                          bool find_smallest = false);
CutoffReport cutoff_check(const FockVector &reference, std::size_t dim,
                          double eps = kCutoffEpsilon, bool find_smallest = false);

/// weight * sum of squared squeezing, displacement and Kerr parameters.
double parameter_penalty(const NetworkParams &params, double weight);

} // namespace cvforge
