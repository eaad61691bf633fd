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

#include "cvforge/targets.hpp"

#include "cvforge/gates.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace cvforge {

namespace {

constexpr std::array<std::pair<TargetKind, std::string_view>, 11> kKindNames{{
    {TargetKind::SinglePhoton, "single_photon"},
    {TargetKind::FockN, "fock"},
    {TargetKind::OnState, "on_state"},
    {TargetKind::HexGkp, "hex_gkp"},
    {TargetKind::RandomState, "random_state"},
    {TargetKind::Noon, "noon"},
    {TargetKind::Coherent, "coherent"},
    {TargetKind::CubicPhaseGate, "cubic_phase_gate"},
    {TargetKind::QftGate, "qft_gate"},
    {TargetKind::HaarGate, "haar_gate"},
    {TargetKind::CrossKerrGate, "cross_kerr_gate"},
}};

void require_level(Index n, std::size_t dim, const char *what) {
    if (n < 0 || n >= static_cast<Index>(dim)) {
        throw InvalidCutoff(std::string(what) + ": level " + std::to_string(n) +
                            " needs a cutoff above it, got D = " + std::to_string(dim));
    }
}

void require_block(Index d, std::size_t dim, const char *what) {
    if (d < 1 || d > static_cast<Index>(dim)) {
        throw InvalidCutoff(std::string(what) + ": block dimension " + std::to_string(d) +
                            " outside [1, " + std::to_string(dim) + "]");
    }
}

FockOperator embed_block(const CMatrix &block, std::size_t dim) {
    const CutoffConfig c{dim, 1};
    c.validate();
    CMatrix m = CMatrix::Identity(c.total(), c.total());
    m.topLeftCorner(block.rows(), block.cols()) = block;
    return {c, std::move(m), true};
}

/// Adds phase * <n|gamma> for n < D, evaluated in log space.
void add_coherent(CVector &acc, cplx gamma, cplx phase, const RVector &half_lgamma) {
    const double r = std::abs(gamma);
    if (r == 0.0) {
        acc(0) += phase;
        return;
    }
    const double log_r = std::log(r);
    const double angle = std::arg(gamma);
    const double base = -0.5 * r * r;
    for (Index n = 0; n < acc.size(); ++n) {
        const double nn = static_cast<double>(n);
        const double mag = std::exp(base + nn * log_r - half_lgamma(n));
        if (mag != 0.0) {
            acc(n) += phase * std::polar(mag, nn * angle);
        }
    }
}

struct GkpLattice {
    int mu;
    int d_code;
    double c;
    RVector half_lgamma;

    /// Sum of the lattice terms with max(|n1|, |n2|) == ring.
    [[nodiscard]] CVector ring(int k, Index dim) const {
        CVector acc = CVector::Zero(dim);
        auto term = [&](int n1, int n2) {
            const double t = c * (d_code * n1 + mu);
            const cplx b1 = std::polar(t, -std::numbers::pi / 6.0);
            const cplx b2{0.0, c * n2};
            const cplx phase = std::polar(1.0, (b1 * std::conj(b2)).imag());
            add_coherent(acc, b1 + b2, phase, half_lgamma);
        };
        if (k == 0) {
            term(0, 0);
            return acc;
        }
        for (int n1 = -k; n1 <= k; ++n1) {
            term(n1, -k);
            term(n1, k);
        }
        for (int n2 = -k + 1; n2 <= k - 1; ++n2) {
            term(-k, n2);
            term(k, n2);
        }
        return acc;
    }
};

} // namespace

std::string_view target_kind_name(TargetKind kind) noexcept {
    for (const auto &[k, name] : kKindNames) {
        if (k == kind) {
            return name;
        }
    }
    return "unknown";
}

std::optional<TargetKind> parse_target_kind(std::string_view name) noexcept {
    for (const auto &[k, n] : kKindNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

bool is_gate_target(TargetKind kind) noexcept {
    return kind == TargetKind::CubicPhaseGate || kind == TargetKind::QftGate ||
           kind == TargetKind::HaarGate || kind == TargetKind::CrossKerrGate;
}

int target_modes(TargetKind kind) noexcept {
    return (kind == TargetKind::Noon || kind == TargetKind::CrossKerrGate) ? 2 : 1;
}

void TargetSpec::validate() const {
    auto fail = [this](const std::string &msg) {
        throw PreconditionError(std::string(target_kind_name(kind)) + ": " + msg);
    };
    switch (kind) {
    case TargetKind::SinglePhoton:
        break;
    case TargetKind::FockN:
        if (n < 0) fail("n must be >= 0");
        break;
    case TargetKind::OnState:
    case TargetKind::Noon:
        if (n < 1) fail("N must be >= 1");
        if (kind == TargetKind::OnState && !std::isfinite(std::abs(a))) fail("a must be finite");
        break;
    case TargetKind::Coherent:
        if (!std::isfinite(std::abs(a))) fail("alpha must be finite");
        break;
    case TargetKind::HexGkp:
        if (d_code < 1) fail("d_code must be >= 1");
        if (mu < 0 || mu >= d_code) fail("mu must lie in [0, d_code)");
        if (!(delta > 0.0) || !std::isfinite(delta)) fail("delta must be > 0");
        if (lattice_radius < 0) fail("lattice_radius must be >= 0");
        break;
    case TargetKind::RandomState:
    case TargetKind::QftGate:
    case TargetKind::HaarGate:
        if (d < 1) fail("d must be >= 1");
        break;
    case TargetKind::CubicPhaseGate:
        if (d < 1) fail("d must be >= 1");
        if (!std::isfinite(gamma)) fail("gamma must be finite");
        break;
    case TargetKind::CrossKerrGate:
        if (d < 1) fail("d must be >= 1");
        if (!std::isfinite(kappa)) fail("kappa must be finite");
        break;
    }
}

FockVector single_photon(std::size_t dim) { return fock(1, dim); }

FockVector fock(Index n, std::size_t dim) {
    require_level(n, dim, "fock");
    return FockVector::basis({dim, 1}, n);
}

FockVector on_state(cplx a, Index big_n, std::size_t dim) {
    if (big_n < 1) {
        throw PreconditionError("on_state: N must be >= 1");
    }
    require_level(big_n, dim, "on_state");
    CVector amps = CVector::Zero(static_cast<Index>(dim));
    const double s = 1.0 / std::sqrt(1.0 + std::norm(a));
    amps(0) = s;
    amps(big_n) = a * s;
    return {{dim, 1}, std::move(amps)};
}

FockVector noon(Index big_n, std::size_t dim) {
    if (big_n < 1) {
        throw PreconditionError("noon: N must be >= 1");
    }
    require_level(big_n, dim, "noon");
    const CutoffConfig c{dim, 2};
    CVector amps = CVector::Zero(c.total());
    amps(flat_index(dim, 2, big_n, 0)) = std::numbers::sqrt2 / 2.0;
    amps(flat_index(dim, 2, 0, big_n)) = std::numbers::sqrt2 / 2.0;
    return {c, std::move(amps)};
}

FockVector coherent(cplx alpha, std::size_t dim) {
    const CutoffConfig c{dim, 1};
    c.validate();
    RVector half_lgamma(c.total());
    for (Index n = 0; n < c.total(); ++n) {
        half_lgamma(n) = 0.5 * std::lgamma(static_cast<double>(n) + 1.0);
    }
    CVector amps = CVector::Zero(c.total());
    add_coherent(amps, alpha, 1.0, half_lgamma);
    const double norm = amps.norm();
    if (!(norm > 0.0)) {
        throw NumericalFailure("coherent: no weight below the cutoff");
    }
    return {c, amps / norm};
}

FockVector random_state(Index d, std::uint64_t seed, std::size_t dim) {
    require_block(d, dim, "random_state");
    Rng rng(seed);
    CVector amps = CVector::Zero(static_cast<Index>(dim));
    for (Index k = 0; k < d; ++k) {
        const double re = rng.normal();
        const double im = rng.normal();
        amps(k) = {re, im};
    }
    return {{dim, 1}, amps / amps.norm()};
}

FockVector equal_superposition(Index d, std::size_t dim, int modes) {
    require_block(d, dim, "equal_superposition");
    const CutoffConfig c{dim, modes};
    c.validate();
    CVector amps = CVector::Zero(c.total());
    if (modes == 1) {
        amps.head(d).setConstant(1.0 / std::sqrt(static_cast<double>(d)));
    } else {
        for (Index i = 0; i < d; ++i) {
            for (Index j = 0; j < d; ++j) {
                amps(flat_index(dim, 2, i, j)) = 1.0 / static_cast<double>(d);
            }
        }
    }
    return {c, std::move(amps)};
}

GkpState hex_gkp(int mu, int d_code, double delta, std::size_t dim, int lattice_radius,
                 double tolerance) {
    TargetSpec spec;
    spec.kind = TargetKind::HexGkp;
    spec.mu = mu;
    spec.d_code = d_code;
    spec.delta = delta;
    spec.lattice_radius = lattice_radius;
    spec.validate();
    const CutoffConfig c{dim, 1};
    c.validate();
    const Index n_levels = c.total();

    GkpLattice lattice{mu, d_code,
                       std::sqrt(4.0 * std::numbers::pi / (std::sqrt(3.0) * d_code)),
                       RVector(n_levels)};
    RVector envelope(n_levels);
    for (Index n = 0; n < n_levels; ++n) {
        lattice.half_lgamma(n) = 0.5 * std::lgamma(static_cast<double>(n) + 1.0);
        envelope(n) = std::exp(-delta * delta * static_cast<double>(n));
    }

    constexpr int kMaxRadius = 256;
    const bool adaptive = lattice_radius == 0;
    const int stop = adaptive ? kMaxRadius : lattice_radius;
    CVector sum = lattice.ring(0, n_levels);
    int radius = 0;
    double tail = 0.0;
    while (true) {
        const CVector next = lattice.ring(radius + 1, n_levels).cwiseProduct(envelope);
        const double base = sum.cwiseProduct(envelope).norm();
        tail = base > 0.0 ? next.norm() / base : std::numeric_limits<double>::infinity();
        if (radius >= stop || (adaptive && radius >= 1 && tail < tolerance)) {
            break;
        }
        sum += lattice.ring(radius + 1, n_levels);
        ++radius;
    }
    if (!(tail < tolerance)) {
        throw NumericalFailure("hex_gkp: lattice sum not converged at L = " +
                               std::to_string(radius) + " (tail " +
                               std::to_string(tail) + ")");
    }
    CVector amps = sum.cwiseProduct(envelope);
    amps /= amps.norm();
    return {FockVector(c, std::move(amps)), {radius, tail}};
}

FockOperator qft_gate(Index d, std::size_t dim) {
    require_block(d, dim, "qft_gate");
    CMatrix block(d, d);
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (Index m = 0; m < d; ++m) {
        for (Index n = 0; n < d; ++n) {
            const double angle =
                2.0 * std::numbers::pi * static_cast<double>((m * n) % d) / static_cast<double>(d);
            block(m, n) = std::polar(s, angle);
        }
    }
    return embed_block(block, dim);
}

CMatrix haar_unitary(Index d, Rng &rng) {
    if (d < 1) {
        throw PreconditionError("haar_unitary: d must be >= 1");
    }
    CMatrix z(d, d);
    const double s = std::numbers::sqrt2 / 2.0;
    for (Index col = 0; col < d; ++col) {
        for (Index row = 0; row < d; ++row) {
            const double re = rng.normal();
            const double im = rng.normal();
            z(row, col) = cplx(re, im) * s;
        }
    }
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
    const CMatrix &r = qr.matrixQR();
    for (Index j = 0; j < d; ++j) {
        const cplx rjj = r(j, j);
        const double mag = std::abs(rjj);
        if (mag > 0.0) {
            q.col(j) *= rjj / mag;
        }
    }
    return q;
}

FockOperator haar_gate(Index d, std::uint64_t seed, std::size_t dim) {
    require_block(d, dim, "haar_gate");
    Rng rng(seed);
    return embed_block(haar_unitary(d, rng), dim);
}

FockOperator cubic_phase_gate(double gamma, std::size_t dim) {
    return cubic_phase(gamma, dim);
}

FockOperator cross_kerr_gate(double kappa, std::size_t dim) {
    return cross_kerr(kappa, dim);
}

FockVector target_state(const TargetSpec &spec, std::size_t dim) {
    spec.validate();
    switch (spec.kind) {
    case TargetKind::SinglePhoton:
        return single_photon(dim);
    case TargetKind::FockN:
        return fock(spec.n, dim);
    case TargetKind::OnState:
        return on_state(spec.a, spec.n, dim);
    case TargetKind::HexGkp:
        return hex_gkp(spec.mu, spec.d_code, spec.delta, dim, spec.lattice_radius).state;
    case TargetKind::RandomState:
        return random_state(spec.d, spec.seed, dim);
    case TargetKind::Noon:
        return noon(spec.n, dim);
    case TargetKind::Coherent:
        return coherent(spec.a, dim);
    default:
        throw PreconditionError(std::string(target_kind_name(spec.kind)) +
                                " is a gate target, not a state");
    }
}

FockOperator target_gate(const TargetSpec &spec, std::size_t dim) {
    spec.validate();
    switch (spec.kind) {
    case TargetKind::CubicPhaseGate:
        require_block(spec.d, dim, "cubic_phase_gate");
        return cubic_phase_gate(spec.gamma, dim);
    case TargetKind::QftGate:
        return qft_gate(spec.d, dim);
    case TargetKind::HaarGate:
        return haar_gate(spec.d, spec.seed, dim);
    case TargetKind::CrossKerrGate:
        require_block(spec.d, dim, "cross_kerr_gate");
        return cross_kerr_gate(spec.kappa, dim);
    default:
        throw PreconditionError(std::string(target_kind_name(spec.kind)) +
                                " is a state target, not a gate");
    }
}

std::vector<Index> gate_inputs(const TargetSpec &spec, std::size_t dim) {
    require_block(spec.d, dim, target_kind_name(spec.kind).data());
    std::vector<Index> inputs;
    if (target_modes(spec.kind) == 1) {
        for (Index i = 0; i < spec.d; ++i) {
            inputs.push_back(i);
        }
    } else {
        for (Index i = 0; i < spec.d; ++i) {
            for (Index j = 0; j < spec.d; ++j) {
                inputs.push_back(flat_index(dim, 2, i, j));
            }
        }
    }
    return inputs;
}

ResolvedTarget resolve_target(const TargetSpec &spec, const CutoffConfig &cutoff,
                              double penalty_weight, std::size_t reference_padding) {
    spec.validate();
    cutoff.validate();
    if (target_modes(spec.kind) != cutoff.modes) {
        throw DimensionMismatch(std::string(target_kind_name(spec.kind)) + " needs " +
                                std::to_string(target_modes(spec.kind)) +
                                " mode(s), the network has " +
                                std::to_string(cutoff.modes));
    }
    const std::size_t dim = cutoff.dim;
    const std::size_t ref = dim + reference_padding;
    ResolvedTarget out;
    out.spec = spec;
    out.reference_dim = ref;

    if (!is_gate_target(spec.kind)) {
        if (spec.kind == TargetKind::HexGkp) {
            auto g = hex_gkp(spec.mu, spec.d_code, spec.delta, dim, spec.lattice_radius);
            out.certificate = g.certificate;
            out.state = std::move(g.state);
            out.reference_columns =
                hex_gkp(spec.mu, spec.d_code, spec.delta, ref, spec.lattice_radius)
                    .state.amplitudes;
        } else {
            out.state = target_state(spec, dim);
            out.reference_columns = target_state(spec, ref).amplitudes;
        }
        out.objective = ObjectiveSpec::state_prep(*out.state, penalty_weight);
        return out;
    }

    const auto inputs = gate_inputs(spec, dim);
    const auto d_in = static_cast<Index>(inputs.size());
    const FockOperator big = target_gate(spec, ref);
    CMatrix ref_cols(big.entries.rows(), d_in);
    const auto small = static_cast<Index>(dim);
    const auto big_dim = static_cast<Index>(ref);
    for (Index k = 0; k < d_in; ++k) {
        const Index i = inputs[static_cast<std::size_t>(k)];
        const Index src = cutoff.modes == 1 ? i : (i / small) * big_dim + i % small;
        ref_cols.col(k) = big.entries.col(src);
    }
    out.reference_columns = ref_cols;

    CMatrix target_cols(cutoff.total(), d_in);
    if (spec.kind == TargetKind::CubicPhaseGate) {
        out.block_preserving = false;
        for (Index k = 0; k < d_in; ++k) {
            target_cols.col(k) = restrict_to_cutoff(ref_cols.col(k), ref, dim, 1);
        }
        out.gate = FockOperator(cutoff, big.entries.topLeftCorner(small, small), false);
    } else {
        out.gate = target_gate(spec, dim);
        for (Index k = 0; k < d_in; ++k) {
            target_cols.col(k) = out.gate->entries.col(inputs[static_cast<std::size_t>(k)]);
        }
    }
    out.objective =
        ObjectiveSpec::gate_synth(cutoff, inputs, std::move(target_cols), penalty_weight);
    return out;
}

CutoffReport check_target_cutoff(const ResolvedTarget &target, double eps) {
    return cutoff_check(target.reference_columns, target.reference_dim,
                        target.objective.cutoff.modes, target.objective.cutoff.dim, eps,
                        true);
}

} // namespace cvforge
