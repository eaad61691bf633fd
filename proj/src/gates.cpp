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

#include "cvforge/gates.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

namespace cvforge {

namespace {

constexpr cplx kI{0.0, 1.0};

void require_finite(std::span<const double> params, GateKind kind) {
    for (double p : params) {
        if (!std::isfinite(p)) {
            throw PreconditionError(std::string(gate_name(kind)) +
                                    ": non-finite parameter");
        }
    }
}

void require_arity(std::span<const double> params, GateKind kind) {
    if (static_cast<int>(params.size()) != gate_arity(kind)) {
        throw PreconditionError(std::string(gate_name(kind)) + ": expected " +
                                std::to_string(gate_arity(kind)) +
                                " parameters, got " +
                                std::to_string(params.size()));
    }
}

CMatrix number_matrix(std::size_t dim) { return ladder(dim).n.entries; }

/// a1^dag a2 - a1 a2^dag on the two-mode space.
CMatrix beamsplitter_generator(std::size_t dim) {
    const auto ops = ladder(dim);
    return kron(ops.a_dag.entries, ops.a.entries) -
           kron(ops.a.entries, ops.a_dag.entries);
}

FockOperator diagonal_gate(CutoffConfig c, const CVector &diag) {
    return {c, diag.asDiagonal().toDenseMatrix(), true};
}

} // namespace

std::string_view gate_name(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::Rotation:
        return "rotation";
    case GateKind::Displacement:
        return "displacement";
    case GateKind::Squeezing:
        return "squeezing";
    case GateKind::Beamsplitter:
        return "beamsplitter";
    case GateKind::Kerr:
        return "kerr";
    case GateKind::CrossKerr:
        return "cross_kerr";
    case GateKind::CubicPhase:
        return "cubic_phase";
    }
    return "unknown";
}

int gate_arity(GateKind kind) noexcept {
    return (kind == GateKind::Displacement || kind == GateKind::Beamsplitter) ? 2
                                                                               : 1;
}

int gate_modes(GateKind kind) noexcept {
    return (kind == GateKind::Beamsplitter || kind == GateKind::CrossKerr) ? 2
                                                                            : 1;
}

FockOperator rotation(double phi, std::size_t dim) {
    const double p[] = {phi};
    return make_gate(GateKind::Rotation, p, dim);
}
FockOperator displacement(double alpha_re, double alpha_im, std::size_t dim) {
    const double p[] = {alpha_re, alpha_im};
    return make_gate(GateKind::Displacement, p, dim);
}
FockOperator squeezing(double r, std::size_t dim) {
    const double p[] = {r};
    return make_gate(GateKind::Squeezing, p, dim);
}
FockOperator beamsplitter(double theta, double phi, std::size_t dim) {
    const double p[] = {theta, phi};
    return make_gate(GateKind::Beamsplitter, p, dim);
}
FockOperator kerr(double kappa, std::size_t dim) {
    const double p[] = {kappa};
    return make_gate(GateKind::Kerr, p, dim);
}
FockOperator cross_kerr(double kappa, std::size_t dim) {
    const double p[] = {kappa};
    return make_gate(GateKind::CrossKerr, p, dim);
}
FockOperator cubic_phase(double gamma, std::size_t dim) {
    const double p[] = {gamma};
    return make_gate(GateKind::CubicPhase, p, dim);
}

FockOperator gate_generator(GateKind kind, std::span<const double> params,
                            std::size_t dim) {
    require_arity(params, kind);
    require_finite(params, kind);
    const CutoffConfig c{dim, gate_modes(kind)};
    c.validate();
    const auto ops = ladder(dim);
    const CMatrix &a = ops.a.entries;
    const CMatrix &ad = ops.a_dag.entries;
    const CMatrix &n = ops.n.entries;
    switch (kind) {
    case GateKind::Rotation:
        return {c, kI * params[0] * n};
    case GateKind::Displacement: {
        const cplx alpha{params[0], params[1]};
        return {c, alpha * ad - std::conj(alpha) * a};
    }
    case GateKind::Squeezing:
        return {c, 0.5 * params[0] * (a * a - ad * ad)};
    case GateKind::Beamsplitter: {
        const cplx e = std::polar(1.0, params[1]);
        return {c, params[0] * (e * kron(ad, a) - std::conj(e) * kron(a, ad))};
    }
    case GateKind::Kerr:
        return {c, kI * params[0] * n * n};
    case GateKind::CrossKerr:
        return {c, -kI * params[0] * kron(n, n)};
    case GateKind::CubicPhase: {
        const CMatrix x = a + ad;
        return {c, -kI * params[0] * x * x * x};
    }
    }
    throw PreconditionError("unknown gate kind");
}

FockOperator make_gate(GateKind kind, std::span<const double> params,
                       std::size_t dim) {
    require_arity(params, kind);
    require_finite(params, kind);
    const CutoffConfig c{dim, gate_modes(kind)};
    c.validate();
    const auto d = static_cast<Index>(dim);
    switch (kind) {
    case GateKind::Rotation: {
        CVector diag(d);
        for (Index m = 0; m < d; ++m) {
            diag(m) = std::polar(1.0, params[0] * static_cast<double>(m));
        }
        return diagonal_gate(c, diag);
    }
    case GateKind::Kerr: {
        CVector diag(d);
        for (Index m = 0; m < d; ++m) {
            const auto md = static_cast<double>(m);
            diag(m) = std::polar(1.0, params[0] * md * md);
        }
        return diagonal_gate(c, diag);
    }
    case GateKind::CrossKerr: {
        CVector diag(d * d);
        for (Index n1 = 0; n1 < d; ++n1) {
            for (Index n2 = 0; n2 < d; ++n2) {
                diag(n1 * d + n2) = std::polar(
                    1.0, -params[0] * static_cast<double>(n1 * n2));
            }
        }
        return diagonal_gate(c, diag);
    }
    case GateKind::Displacement:
    case GateKind::Squeezing:
    case GateKind::Beamsplitter:
    case GateKind::CubicPhase:
        return expm_antihermitian(gate_generator(kind, params, dim));
    }
    throw PreconditionError("unknown gate kind");
}

FockOperator gate_derivative(GateKind kind, std::span<const double> params,
                             int which, std::size_t dim) {
    require_arity(params, kind);
    if (which < 0 || which >= gate_arity(kind)) {
        throw PreconditionError(std::string(gate_name(kind)) +
                                ": no parameter with index " +
                                std::to_string(which));
    }
    const auto gate = make_gate(kind, params, dim);
    const CutoffConfig c = gate.cutoff;
    const auto ops = ladder(dim);
    const CMatrix &a = ops.a.entries;
    const CMatrix &ad = ops.a_dag.entries;
    const CMatrix n = number_matrix(dim);
    switch (kind) {
    case GateKind::Rotation:
        return {c, kI * n * gate.entries};
    case GateKind::Kerr:
        return {c, kI * n * n * gate.entries};
    case GateKind::CrossKerr:
        return {c, -kI * kron(n, n) * gate.entries};
    case GateKind::Squeezing:
        // The generator is linear in r, so it commutes with the gate.
        return {c, 0.5 * (a * a - ad * ad) * gate.entries};
    case GateKind::CubicPhase: {
        const CMatrix x = a + ad;
        return {c, -kI * x * x * x * gate.entries};
    }
    case GateKind::Displacement: {
        const CMatrix direction = which == 0 ? CMatrix(ad - a) : CMatrix(kI * (ad + a));
        const CMatrix m = gate_generator(kind, params, dim).entries;
        const CMatrix h = -kI * m;
        const HermitianExp spectral(CMatrix(0.5 * (h + h.adjoint())));
        return {c, spectral.frechet(direction)};
    }
    case GateKind::Beamsplitter: {
        const cplx e = std::polar(1.0, params[1]);
        if (which == 0) {
            const CMatrix g = e * kron(ad, a) - std::conj(e) * kron(a, ad);
            return {c, g * gate.entries};
        }
        // BS(theta, phi) = R1(phi) BS(theta, 0) R1(-phi), so d/dphi = i [n1, BS].
        const CMatrix n1 = kron(n, CMatrix::Identity(n.rows(), n.cols()));
        return {c, kI * (n1 * gate.entries - gate.entries * n1)};
    }
    }
    throw PreconditionError("unknown gate kind");
}

namespace {

std::shared_ptr<const ModeBasis> build_mode_basis(std::size_t dim) {
    CutoffConfig{dim, 1}.validate();
    const auto d = static_cast<Index>(dim);
    const auto ops = ladder(dim);
    const CMatrix &a = ops.a.entries;
    const CMatrix &ad = ops.a_dag.entries;

    RVector number(d);
    RVector number_sq(d);
    for (Index m = 0; m < d; ++m) {
        number(m) = static_cast<double>(m);
        number_sq(m) = number(m) * number(m);
    }
    RVector two_photon(std::max<Index>(d - 2, 0));
    for (Index m = 0; m + 2 < d; ++m) {
        two_photon(m) = std::sqrt(static_cast<double>((m + 1) * (m + 2)));
    }

    const CMatrix g_squeeze = 0.5 * (a * a - ad * ad);
    const CMatrix h_squeeze = -kI * g_squeeze;
    HermitianExp squeeze(CMatrix(0.5 * (h_squeeze + h_squeeze.adjoint())));

    const CMatrix h_disp = -kI * (ad - a);
    HermitianExp displace(CMatrix(0.5 * (h_disp + h_disp.adjoint())));
    const CMatrix b = kI * (ad + a);
    CMatrix b_rot = displace.basis().adjoint() * b * displace.basis();

    return std::make_shared<const ModeBasis>(
        ModeBasis{dim, std::move(number), std::move(number_sq),
                  std::move(two_photon), std::move(squeeze), std::move(displace),
                  std::move(b_rot)});
}

std::shared_ptr<const BeamsplitterBasis> build_beamsplitter_basis(std::size_t dim) {
    CutoffConfig{dim, 2}.validate();
    const auto d = static_cast<Index>(dim);
    const CMatrix h = -kI * beamsplitter_generator(dim);

    BeamsplitterBasis out{dim, {}, RVector(d * d), RVector(d * d)};
    for (Index n1 = 0; n1 < d; ++n1) {
        for (Index n2 = 0; n2 < d; ++n2) {
            out.n1(n1 * d + n2) = static_cast<double>(n1);
            out.n2(n1 * d + n2) = static_cast<double>(n2);
        }
    }
    for (Index total = 0; total <= 2 * (d - 1); ++total) {
        std::vector<Index> indices;
        for (Index n1 = std::max<Index>(0, total - (d - 1));
             n1 <= std::min(total, d - 1); ++n1) {
            indices.push_back(n1 * d + (total - n1));
        }
        const auto m = static_cast<Index>(indices.size());
        CMatrix sub(m, m);
        for (Index i = 0; i < m; ++i) {
            for (Index j = 0; j < m; ++j) {
                sub(i, j) = h(indices[i], indices[j]);
            }
        }
        out.blocks.push_back(BeamsplitterBasis::Block{
            std::move(indices), HermitianExp(CMatrix(0.5 * (sub + sub.adjoint())))});
    }
    return std::make_shared<const BeamsplitterBasis>(std::move(out));
}

template <class T, class Builder>
std::shared_ptr<const T> cached(std::size_t dim, Builder build) {
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const T>> cache;
    const std::lock_guard lock(mutex);
    auto &slot = cache[dim];
    if (!slot) {
        slot = build(dim);
    }
    return slot;
}

} // namespace

std::shared_ptr<const ModeBasis> mode_basis(std::size_t dim) {
    return cached<ModeBasis>(dim, build_mode_basis);
}

std::shared_ptr<const BeamsplitterBasis> beamsplitter_basis(std::size_t dim) {
    return cached<BeamsplitterBasis>(dim, build_beamsplitter_basis);
}

} // namespace cvforge
