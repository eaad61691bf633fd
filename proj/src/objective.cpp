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

#include "cvforge/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cvforge {

namespace {

void require_same_shape(const CMatrix &a, const CMatrix &b, const char *what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch(std::string(what) + ": shapes " +
                                std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " and " +
                                std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + " differ");
    }
}

/// Columns V|i> for the first d flat inputs at cutoff `dim`, read from an
/// operator that may live at a larger cutoff and cut back to `dim`.
CMatrix target_columns(const FockOperator &target, std::size_t dim, Index d) {
    const int modes = target.cutoff.modes;
    const CutoffConfig small{dim, modes};
    if (target.cutoff.dim < dim) {
        throw DimensionMismatch("target operator cutoff below the network cutoff");
    }
    if (d < 1 || d > small.total()) {
        throw DimensionMismatch("relation count d = " + std::to_string(d) +
                                " outside the truncated space");
    }
    CMatrix out(small.total(), d);
    const auto big = static_cast<Index>(target.cutoff.dim);
    const auto small_dim = static_cast<Index>(dim);
    for (Index i = 0; i < d; ++i) {
        const Index src = modes == 1 ? i : (i / small_dim) * big + i % small_dim;
        out.col(i) = restrict_to_cutoff(target.entries.col(src), target.cutoff.dim, dim,
                                        modes);
    }
    return out;
}

double projected_norm(const CVector &column, std::size_t reference_dim, int modes,
                      std::size_t dim) {
    return restrict_to_cutoff(column, reference_dim, dim, modes).norm();
}

} // namespace

void ObjectiveSpec::validate() const {
    cutoff.validate();
    const Index total = cutoff.total();
    if (inputs.empty()) {
        throw PreconditionError("objective needs at least one input relation");
    }
    if (mode == ObjectiveMode::StatePrep && inputs.size() != 1) {
        throw PreconditionError("state preparation uses exactly one relation");
    }
    if (targets.rows() != total || targets.cols() != relations()) {
        throw DimensionMismatch("objective targets must be " + std::to_string(total) +
                                "x" + std::to_string(relations()) + ", got " +
                                std::to_string(targets.rows()) + "x" +
                                std::to_string(targets.cols()));
    }
    for (Index i : inputs) {
        if (i < 0 || i >= total) {
            throw DimensionMismatch("input index " + std::to_string(i) +
                                    " outside the truncated space");
        }
    }
    if (!(penalty_weight >= 0.0) || !std::isfinite(penalty_weight)) {
        throw PreconditionError("penalty weight must be finite and >= 0");
    }
}

ObjectiveSpec ObjectiveSpec::state_prep(const FockVector &target, double penalty_weight) {
    ObjectiveSpec s;
    s.mode = ObjectiveMode::StatePrep;
    s.cutoff = target.cutoff;
    s.inputs = {0};
    s.targets = target.amplitudes;
    s.penalty_weight = penalty_weight;
    s.validate();
    return s;
}

ObjectiveSpec ObjectiveSpec::gate_synth(CutoffConfig cutoff, std::vector<Index> inputs,
                                        CMatrix target_columns, double penalty_weight) {
    ObjectiveSpec s;
    s.mode = ObjectiveMode::GateSynth;
    s.cutoff = cutoff;
    s.inputs = std::move(inputs);
    s.targets = std::move(target_columns);
    s.penalty_weight = penalty_weight;
    s.validate();
    return s;
}

double relation_cost(cplx z) { return std::abs(z - 1.0); }

double state_prep_cost(const FockVector &out, const FockVector &target) {
    return relation_cost(overlap(target, out));
}

double gate_synth_cost(const CMatrix &columns, const CMatrix &target_columns) {
    require_same_shape(columns, target_columns, "gate_synth_cost");
    if (columns.cols() == 0) {
        throw DimensionMismatch("gate_synth_cost: no relations");
    }
    double acc = 0.0;
    for (Index i = 0; i < columns.cols(); ++i) {
        acc += relation_cost(target_columns.col(i).dot(columns.col(i)));
    }
    return acc / static_cast<double>(columns.cols());
}

double gate_synth_cost(const CMatrix &columns, const FockOperator &target, Index d) {
    const auto dim = target.cutoff.modes == 1
                         ? static_cast<std::size_t>(columns.rows())
                         : static_cast<std::size_t>(
                               std::llround(std::sqrt(static_cast<double>(columns.rows()))));
    if (columns.cols() != d) {
        throw DimensionMismatch("gate_synth_cost: expected " + std::to_string(d) +
                                " columns");
    }
    return gate_synth_cost(columns, target_columns(target, dim, d));
}

double state_fidelity(const FockVector &psi, const FockVector &target) {
    return std::norm(overlap(target, psi));
}

double process_fidelity(const CMatrix &u_columns, const CMatrix &v_columns) {
    require_same_shape(u_columns, v_columns, "process_fidelity");
    const Index d = u_columns.cols();
    if (d < 1) {
        throw DimensionMismatch("process_fidelity: d must be >= 1");
    }
    cplx acc = 0.0;
    for (Index j = 0; j < d; ++j) {
        acc += v_columns.col(j).dot(u_columns.col(j));
    }
    return std::norm(acc / static_cast<double>(d));
}

double process_fidelity(const FockOperator &u, const FockOperator &v, Index d) {
    if (!(u.cutoff == v.cutoff)) {
        throw DimensionMismatch("process_fidelity: operators on different spaces");
    }
    if (d < 1 || d > u.cutoff.total()) {
        throw DimensionMismatch("process_fidelity: d = " + std::to_string(d) +
                                " out of range");
    }
    return process_fidelity(CMatrix(u.entries.leftCols(d)),
                            CMatrix(v.entries.leftCols(d)));
}

double average_fidelity(double process_fidelity, Index d) {
    const auto dd = static_cast<double>(d);
    return (process_fidelity * dd + 1.0) / (dd + 1.0);
}

McEstimate mc_average_fidelity(const CMatrix &u_columns, const CMatrix &v_columns,
                               std::size_t samples, std::uint64_t seed) {
    require_same_shape(u_columns, v_columns, "mc_average_fidelity");
    if (samples < 1) {
        throw PreconditionError("mc_average_fidelity needs at least one sample");
    }
    const Index d = u_columns.cols();
    // Only W|0> enters, and the first column of a Haar W is a uniformly
    // random unit vector (a normalised complex Gaussian vector).
    double sum = 0.0;
    double sum_sq = 0.0;
    CVector w(d);
    for (std::size_t k = 0; k < samples; ++k) {
        Rng rng(derive_seed(seed, k));
        for (Index j = 0; j < d; ++j) {
            const double re = rng.normal();
            const double im = rng.normal();
            w(j) = cplx(re, im);
        }
        w /= w.norm();
        const CVector uw = u_columns * w;
        const CVector vw = v_columns * w;
        const double f = std::norm(vw.dot(uw));
        sum += f;
        sum_sq += f * f;
    }
    const auto n = static_cast<double>(samples);
    McEstimate est;
    est.mean = sum / n;
    if (samples > 1) {
        const double var = std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1.0));
        est.std_error = std::sqrt(var / n);
    }
    return est;
}

CutoffReport cutoff_check(const CMatrix &reference_columns, std::size_t reference_dim,
                          int modes, std::size_t dim, double eps, bool find_smallest) {
    const CutoffConfig ref{reference_dim, modes};
    ref.validate();
    if (reference_dim <= dim) {
        throw PreconditionError("cutoff_check: reference cutoff " +
                                std::to_string(reference_dim) +
                                " must exceed the checked cutoff " + std::to_string(dim));
    }
    if (dim < 1) {
        throw InvalidCutoff("cutoff_check: cutoff must be >= 1");
    }
    if (reference_columns.rows() != ref.total() || reference_columns.cols() < 1) {
        throw DimensionMismatch("cutoff_check: columns do not live at the reference "
                                "cutoff");
    }
    auto margin_at = [&](std::size_t trial) {
        double m = 1.0;
        for (Index c = 0; c < reference_columns.cols(); ++c) {
            m = std::min(m, projected_norm(reference_columns.col(c), reference_dim, modes,
                                           trial));
        }
        return m;
    };
    CutoffReport r;
    r.cutoff = dim;
    r.margin = margin_at(dim);
    r.passes = r.margin >= 1.0 - eps;
    if (find_smallest) {
        r.smallest_passing = reference_dim;
        for (std::size_t trial = 1; trial < reference_dim; ++trial) {
            if (margin_at(trial) >= 1.0 - eps) {
                r.smallest_passing = trial;
                break;
            }
        }
    }
    return r;
}

CutoffReport cutoff_check(const FockVector &reference, std::size_t dim, double eps,
                          bool find_smallest) {
    return cutoff_check(CMatrix(reference.amplitudes), reference.cutoff.dim,
                        reference.cutoff.modes, dim, eps, find_smallest);
}

double parameter_penalty(const NetworkParams &params, double weight) {
    if (!(weight >= 0.0)) {
        throw PreconditionError("penalty weight must be >= 0");
    }
    if (weight == 0.0) {
        return 0.0;
    }
    const auto flat = params.flatten();
    const auto roles = param_roles(params.shape());
    double acc = 0.0;
    for (std::size_t k = 0; k < flat.size(); ++k) {
        if (is_active(roles[k])) {
            acc += flat[k] * flat[k];
        }
    }
    return weight * acc;
}

} // namespace cvforge
