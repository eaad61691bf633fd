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

#include "cvforge/network.hpp"

#include "cvforge/gates.hpp"
#include "cvforge/kernels.hpp"
#include "cvforge/objective.hpp"
#include "cvforge/rng.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

namespace cvforge {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kKinkGuard = 1e-12;

// ---------------------------------------------------------------------------
// Parameter layout
// ---------------------------------------------------------------------------

struct LayerLayout {
    Index u1_theta, u1_phi, u1_rot, r, u2_theta, u2_phi, u2_rot, alpha_re,
        alpha_im, kappa, size;
};

LayerLayout layer_layout(int modes) {
    const Index b = beamsplitters_per_interferometer(modes);
    const Index n = modes;
    LayerLayout l{};
    Index o = 0;
    l.u1_theta = o; o += b;
    l.u1_phi = o; o += b;
    l.u1_rot = o; o += n;
    l.r = o; o += n;
    l.u2_theta = o; o += b;
    l.u2_phi = o; o += b;
    l.u2_rot = o; o += n;
    l.alpha_re = o; o += n;
    l.alpha_im = o; o += n;
    l.kappa = o; o += n;
    l.size = o;
    return l;
}

void copy_out(const std::vector<double> &src, std::vector<double> &flat, Index at,
              std::size_t expected, const char *field) {
    if (src.size() != expected) {
        throw DimensionMismatch(std::string("layer field '") + field + "' has " +
                                std::to_string(src.size()) + " entries, expected " +
                                std::to_string(expected));
    }
    std::copy(src.begin(), src.end(), flat.begin() + at);
}

std::vector<double> copy_in(std::span<const double> flat, Index at, Index count) {
    return {flat.begin() + at, flat.begin() + at + count};
}

// ---------------------------------------------------------------------------
// Elementary-gate tape
// ---------------------------------------------------------------------------

enum class Op : std::uint8_t { Rotation, Squeeze, Displace, Kerr, Beamsplitter };

struct TapeGate {
    Op op{};
    int mode = 0;
    Index p0 = -1;
    Index p1 = -1;
    CVector diag{};     ///< full-space phases (rotation, Kerr, beamsplitter R1(phi))
    CVector spectral{}; ///< eigenbasis phases (squeeze, displace, beamsplitter blocks)
    CVector rot{};      ///< displacement frame rotation e^{i theta n}
    double rho = 0.0;
    double theta = 0.0;
};

/// Mode-major view: rows indexed by the photon number of `mode`.
CMatrix gather_mode0(const CMatrix &x, Index dim) {
    const Index cols = x.cols();
    CMatrix v(dim, dim * cols);
    for (Index c = 0; c < cols; ++c) {
        for (Index n1 = 0; n1 < dim; ++n1) {
            for (Index n2 = 0; n2 < dim; ++n2) {
                v(n1, n2 + dim * c) = x(n1 * dim + n2, c);
            }
        }
    }
    return v;
}

void scatter_mode0(const CMatrix &v, CMatrix &x, Index dim) {
    const Index cols = x.cols();
    for (Index c = 0; c < cols; ++c) {
        for (Index n1 = 0; n1 < dim; ++n1) {
            for (Index n2 = 0; n2 < dim; ++n2) {
                x(n1 * dim + n2, c) = v(n1, n2 + dim * c);
            }
        }
    }
}

CMatrix mode_view(const CMatrix &x, int mode, int modes, Index dim) {
    if (modes == 1 || mode == 1) {
        return Eigen::Map<const CMatrix>(x.data(), dim, x.size() / dim);
    }
    return gather_mode0(x, dim);
}

template <class F>
void on_mode(CMatrix &x, int mode, int modes, Index dim, F &&f) {
    if (modes == 1 || mode == 1) {
        Eigen::Map<CMatrix> v(x.data(), dim, x.size() / dim);
        f(v);
    } else {
        CMatrix v = gather_mode0(x, dim);
        f(v);
        scatter_mode0(v, x, dim);
    }
}

template <class M>
void scale_rows(M &y, const CVector &phases, bool conjugate) {
    for (Index c = 0; c < y.cols(); ++c) {
        kernels::active().scale(phases.data(), y.col(c).data(),
                                static_cast<std::size_t>(y.rows()), conjugate);
    }
}

/// sum over all entries of conj(x) .* y
cplx frobenius_dot(const CMatrix &x, const CMatrix &y) {
    return kernels::active().cdot(x.data(), y.data(), static_cast<std::size_t>(x.size()));
}

cplx weighted_frobenius(const CMatrix &x, const RVector &w, const CMatrix &y) {
    cplx s = 0.0;
    for (Index c = 0; c < x.cols(); ++c) {
        s += kernels::active().weighted_cdot(x.col(c).data(), w.data(),
                                             y.col(c).data(),
                                             static_cast<std::size_t>(x.rows()));
    }
    return s;
}

/// (a1^dag a2 - a1 a2^dag) applied to every column of a two-mode block.
CMatrix apply_bs_generator(const CMatrix &x, Index dim) {
    CMatrix out = CMatrix::Zero(x.rows(), x.cols());
    for (Index c = 0; c < x.cols(); ++c) {
        for (Index n1 = 0; n1 < dim; ++n1) {
            for (Index n2 = 0; n2 < dim; ++n2) {
                cplx v = 0.0;
                if (n1 >= 1 && n2 + 1 < dim) {
                    v += std::sqrt(static_cast<double>(n1 * (n2 + 1))) *
                         x((n1 - 1) * dim + n2 + 1, c);
                }
                if (n1 + 1 < dim && n2 >= 1) {
                    v -= std::sqrt(static_cast<double>((n1 + 1) * n2)) *
                         x((n1 + 1) * dim + n2 - 1, c);
                }
                out(n1 * dim + n2, c) = v;
            }
        }
    }
    return out;
}

CVector phases_of(const RVector &angles, double scale) {
    CVector out(angles.size());
    for (Index k = 0; k < angles.size(); ++k) {
        out(k) = std::polar(1.0, scale * angles(k));
    }
    return out;
}

class Tape {
  public:
    Tape(const NetworkShape &shape, std::span<const double> flat)
        : modes_(shape.modes), dim_(static_cast<Index>(shape.cutoff)),
          basis_(mode_basis(shape.cutoff)) {
        if (modes_ == 2) {
            bs_basis_ = beamsplitter_basis(shape.cutoff);
        }
        total_ = modes_ == 1 ? dim_ : dim_ * dim_;
        number_.resize(modes_);
        number_sq_.resize(modes_);
        for (int m = 0; m < modes_; ++m) {
            number_[m].resize(total_);
            for (Index k = 0; k < total_; ++k) {
                const Index nm = modes_ == 1 ? k : (m == 0 ? k / dim_ : k % dim_);
                number_[m](k) = static_cast<double>(nm);
            }
            number_sq_[m] = number_[m].cwiseProduct(number_[m]);
        }
        const auto layout = layer_layout(modes_);
        for (int l = 0; l < shape.layers; ++l) {
            const Index o = static_cast<Index>(l) * layout.size;
            add_interferometer(flat, o + layout.u1_theta, o + layout.u1_phi,
                               o + layout.u1_rot);
            for (int m = 0; m < modes_; ++m) {
                add_squeeze(flat, o + layout.r + m, m);
            }
            add_interferometer(flat, o + layout.u2_theta, o + layout.u2_phi,
                               o + layout.u2_rot);
            for (int m = 0; m < modes_; ++m) {
                add_displace(flat, o + layout.alpha_re + m, o + layout.alpha_im + m, m);
            }
            for (int m = 0; m < modes_; ++m) {
                add_diagonal(Op::Kerr, flat, o + layout.kappa + m, m);
            }
        }
    }

    [[nodiscard]] Index total() const noexcept { return total_; }
    [[nodiscard]] std::size_t size() const noexcept { return gates_.size(); }

    void forward(CMatrix &x) const {
        for (const auto &g : gates_) {
            apply(g, x, false);
        }
    }

    void forward_recording(const CMatrix &input, std::vector<CMatrix> &states) const {
        states.clear();
        states.reserve(gates_.size() + 1);
        states.push_back(input);
        for (const auto &g : gates_) {
            CMatrix next = states.back();
            apply(g, next, false);
            states.push_back(std::move(next));
        }
    }

    /// Walks the tape backwards from co-state `chi` (at the circuit output),
    /// accumulating Re<chi|dG|psi> into `grad`.
    void backward(CMatrix chi, const std::vector<CMatrix> &states,
                  std::vector<double> &grad) const {
        for (std::size_t k = gates_.size(); k-- > 0;) {
            const TapeGate &g = gates_[k];
            const CMatrix &before = states[k];
            const CMatrix &after = states[k + 1];
            switch (g.op) {
            case Op::Rotation:
                grad[g.p0] += (kI * weighted_frobenius(chi, number_[g.mode], after)).real();
                apply(g, chi, true);
                break;
            case Op::Kerr:
                grad[g.p0] +=
                    (kI * weighted_frobenius(chi, number_sq_[g.mode], after)).real();
                apply(g, chi, true);
                break;
            case Op::Squeeze:
                grad[g.p0] += squeeze_derivative(chi, after, g.mode).real();
                apply(g, chi, true);
                break;
            case Op::Displace:
                displace_backward(g, chi, before, grad);
                break;
            case Op::Beamsplitter: {
                CMatrix u = chi;
                CMatrix v = after;
                for (Index c = 0; c < u.cols(); ++c) {
                    kernels::active().scale(g.diag.data(), u.col(c).data(),
                                            static_cast<std::size_t>(total_), true);
                    kernels::active().scale(g.diag.data(), v.col(c).data(),
                                            static_cast<std::size_t>(total_), true);
                }
                grad[g.p0] += frobenius_dot(u, apply_bs_generator(v, dim_)).real();
                const cplx s_after = weighted_frobenius(chi, bs_basis_->n1, after);
                apply(g, chi, true);
                const cplx s_before = weighted_frobenius(chi, bs_basis_->n1, before);
                grad[g.p1] += (kI * (s_after - s_before)).real();
                break;
            }
            }
        }
    }

  private:
    void add_interferometer(std::span<const double> flat, Index theta, Index phi,
                            Index rot) {
        if (modes_ == 2) {
            add_beamsplitter(flat, theta, phi);
        }
        for (int m = 0; m < modes_; ++m) {
            add_diagonal(Op::Rotation, flat, rot + m, m);
        }
    }

    void add_diagonal(Op op, std::span<const double> flat, Index p, int mode) {
        TapeGate g{.op = op, .mode = mode, .p0 = p};
        const RVector &w = op == Op::Rotation ? number_[mode] : number_sq_[mode];
        g.diag = phases_of(w, flat[p]);
        gates_.push_back(std::move(g));
    }

    void add_squeeze(std::span<const double> flat, Index p, int mode) {
        TapeGate g{.op = Op::Squeeze, .mode = mode, .p0 = p};
        g.spectral = phases_of(basis_->squeeze.eigenvalues(), flat[p]);
        gates_.push_back(std::move(g));
    }

    void add_displace(std::span<const double> flat, Index p_re, Index p_im, int mode) {
        TapeGate g{.op = Op::Displace, .mode = mode, .p0 = p_re, .p1 = p_im};
        const cplx alpha{flat[p_re], flat[p_im]};
        g.rho = std::abs(alpha);
        g.theta = g.rho > 0.0 ? std::arg(alpha) : 0.0;
        g.spectral = phases_of(basis_->displace.eigenvalues(), g.rho);
        g.rot = phases_of(basis_->number, g.theta);
        gates_.push_back(std::move(g));
    }

    void add_beamsplitter(std::span<const double> flat, Index p_theta, Index p_phi) {
        TapeGate g{.op = Op::Beamsplitter, .mode = 0, .p0 = p_theta, .p1 = p_phi};
        g.diag = phases_of(bs_basis_->n1, flat[p_phi]);
        Index count = 0;
        for (const auto &b : bs_basis_->blocks) {
            count += static_cast<Index>(b.indices.size());
        }
        g.spectral.resize(count);
        Index at = 0;
        for (const auto &b : bs_basis_->blocks) {
            const auto &ev = b.spectrum.eigenvalues();
            g.spectral.segment(at, ev.size()) = phases_of(ev, flat[p_theta]);
            at += ev.size();
        }
        gates_.push_back(std::move(g));
    }

    // Every non-diagonal gate has the form F W diag(e) W^dagger F^dagger with a
    // diagonal frame F, so the adjoint only conjugates e.
    void apply(const TapeGate &g, CMatrix &x, bool adjoint) const {
        switch (g.op) {
        case Op::Rotation:
        case Op::Kerr:
            for (Index c = 0; c < x.cols(); ++c) {
                kernels::active().scale(g.diag.data(), x.col(c).data(),
                                        static_cast<std::size_t>(total_), adjoint);
            }
            return;
        case Op::Squeeze: {
            const CMatrix &w = basis_->squeeze.basis();
            on_mode(x, g.mode, modes_, dim_, [&](auto &v) {
                CMatrix y = w.adjoint() * v;
                scale_rows(y, g.spectral, adjoint);
                v.noalias() = w * y;
            });
            return;
        }
        case Op::Displace: {
            const CMatrix &w = basis_->displace.basis();
            on_mode(x, g.mode, modes_, dim_, [&](auto &v) {
                scale_rows(v, g.rot, true);
                CMatrix y = w.adjoint() * v;
                scale_rows(y, g.spectral, adjoint);
                v.noalias() = w * y;
                scale_rows(v, g.rot, false);
            });
            return;
        }
        case Op::Beamsplitter: {
            for (Index c = 0; c < x.cols(); ++c) {
                kernels::active().scale(g.diag.data(), x.col(c).data(),
                                        static_cast<std::size_t>(total_), true);
            }
            Index at = 0;
            for (const auto &b : bs_basis_->blocks) {
                const auto m = static_cast<Index>(b.indices.size());
                CMatrix sub(m, x.cols());
                for (Index i = 0; i < m; ++i) {
                    sub.row(i) = x.row(b.indices[i]);
                }
                CMatrix y = b.spectrum.basis().adjoint() * sub;
                const CVector e = g.spectral.segment(at, m);
                scale_rows(y, e, adjoint);
                sub.noalias() = b.spectrum.basis() * y;
                for (Index i = 0; i < m; ++i) {
                    x.row(b.indices[i]) = sub.row(i);
                }
                at += m;
            }
            for (Index c = 0; c < x.cols(); ++c) {
                kernels::active().scale(g.diag.data(), x.col(c).data(),
                                        static_cast<std::size_t>(total_), false);
            }
            return;
        }
        }
    }

    /// <chi| (G_s (x) I) |psi_after>, G_s = (a^2 - a^dag^2)/2.
    [[nodiscard]] cplx squeeze_derivative(const CMatrix &chi, const CMatrix &after,
                                          int mode) const {
        const CMatrix xv = mode_view(chi, mode, modes_, dim_);
        const CMatrix yv = mode_view(after, mode, modes_, dim_);
        const RVector &s = basis_->two_photon;
        cplx acc = 0.0;
        for (Index c = 0; c < xv.cols(); ++c) {
            for (Index m = 0; m + 2 < dim_; ++m) {
                acc += 0.5 * s(m) *
                       (std::conj(xv(m, c)) * yv(m + 2, c) -
                        std::conj(xv(m + 2, c)) * yv(m, c));
            }
        }
        return acc;
    }

    /// Gradient of both displacement components plus the adjoint step.
    ///
    /// With alpha = rho e^{i theta}, D(alpha) = R(theta) W diag(e^{i rho mu}) W^dag
    /// R(-theta); the Frechet derivative along E is
    /// Q (Phi o Q^dag E Q) Q^dag with Q = R(theta) W and Phi the divided
    /// differences of exp at i rho mu. Both directions (a^dag - a and
    /// i(a^dag + a)) are fixed matrices in the W frame, rotated by theta.
    void displace_backward(const TapeGate &g, CMatrix &chi, const CMatrix &before,
                           std::vector<double> &grad) const {
        const CMatrix &w = basis_->displace.basis();
        const RVector &mu = basis_->displace.eigenvalues();
        CMatrix yv = mode_view(before, g.mode, modes_, dim_);
        scale_rows(yv, g.rot, true);
        const CMatrix y = w.adjoint() * yv;

        const CMatrix phi = exp_divided_differences(g.rho * mu);
        const CMatrix p = basis_->displace_b_rotated.cwiseProduct(phi);
        CVector diag_term(mu.size());
        for (Index j = 0; j < mu.size(); ++j) {
            diag_term(j) = kI * mu(j) * g.spectral(j);
        }

        on_mode(chi, g.mode, modes_, dim_, [&](auto &v) {
            scale_rows(v, g.rot, true);
            CMatrix x = w.adjoint() * v;
            CMatrix dy = y;
            scale_rows(dy, diag_term, false);
            const cplx t1 = frobenius_dot(x, dy);
            const cplx t2 = frobenius_dot(x, CMatrix(p * y));
            const double c = std::cos(g.theta);
            const double s = std::sin(g.theta);
            grad[g.p0] += (c * t1 - s * t2).real();
            grad[g.p1] += (s * t1 + c * t2).real();
            scale_rows(x, g.spectral, true);
            v.noalias() = w * x;
            scale_rows(v, g.rot, false);
        });
    }

    int modes_;
    Index dim_;
    Index total_ = 0;
    std::shared_ptr<const ModeBasis> basis_;
    std::shared_ptr<const BeamsplitterBasis> bs_basis_;
    std::vector<RVector> number_;
    std::vector<RVector> number_sq_;
    std::vector<TapeGate> gates_;
};

CMatrix input_block(Index total, std::span<const Index> inputs) {
    CMatrix x = CMatrix::Zero(total, static_cast<Index>(inputs.size()));
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (inputs[i] < 0 || inputs[i] >= total) {
            throw DimensionMismatch("input index " + std::to_string(inputs[i]) +
                                    " outside the truncated space");
        }
        x(inputs[i], static_cast<Index>(i)) = 1.0;
    }
    return x;
}

void require_compatible(const NetworkParams &params, const ObjectiveSpec &objective) {
    objective.validate();
    if (!(objective.cutoff == params.shape().cutoff_config())) {
        throw DimensionMismatch("objective cutoff/modes do not match the network");
    }
}

struct Relations {
    double cost = 0.0;
    CMatrix costate; ///< conj(w_i) t_i
};

Relations relation_costs(const CMatrix &out, const ObjectiveSpec &objective,
                         bool want_costate) {
    const Index d = objective.relations();
    Relations r;
    if (want_costate) {
        r.costate = CMatrix::Zero(out.rows(), d);
    }
    for (Index i = 0; i < d; ++i) {
        const cplx z = kernels::active().cdot(objective.targets.col(i).data(),
                                              out.col(i).data(),
                                              static_cast<std::size_t>(out.rows()));
        const double dist = std::abs(z - 1.0);
        r.cost += dist;
        if (want_costate && dist >= kKinkGuard) {
            const cplx weight = std::conj(z - 1.0) / (static_cast<double>(d) * dist);
            r.costate.col(i) = std::conj(weight) * objective.targets.col(i);
        }
    }
    r.cost /= static_cast<double>(d);
    return r;
}

} // namespace

// ---------------------------------------------------------------------------

void NetworkShape::validate() const {
    if (layers < 1) {
        throw PreconditionError("network needs at least one layer, got " +
                                std::to_string(layers));
    }
    cutoff_config().validate();
}

LayerParams LayerParams::zeros(int modes) {
    const auto b = static_cast<std::size_t>(beamsplitters_per_interferometer(modes));
    const auto n = static_cast<std::size_t>(modes);
    LayerParams l;
    l.u1 = {std::vector<double>(b), std::vector<double>(b), std::vector<double>(n)};
    l.u2 = l.u1;
    l.r.assign(n, 0.0);
    l.alpha_re.assign(n, 0.0);
    l.alpha_im.assign(n, 0.0);
    l.kappa.assign(n, 0.0);
    return l;
}

int beamsplitters_per_interferometer(int modes) noexcept {
    return modes * (modes - 1) / 2;
}

int params_per_layer(int modes) noexcept {
    return 2 * modes * modes + 4 * modes;
}

std::vector<ParamRole> param_roles(const NetworkShape &shape) {
    const auto l = layer_layout(shape.modes);
    std::vector<ParamRole> one(static_cast<std::size_t>(l.size));
    auto fill = [&](Index from, Index count, ParamRole role) {
        std::fill_n(one.begin() + from, count, role);
    };
    const Index b = beamsplitters_per_interferometer(shape.modes);
    const Index n = shape.modes;
    fill(l.u1_theta, b, ParamRole::BeamsplitterTheta);
    fill(l.u1_phi, b, ParamRole::BeamsplitterPhi);
    fill(l.u1_rot, n, ParamRole::Rotation);
    fill(l.r, n, ParamRole::Squeezing);
    fill(l.u2_theta, b, ParamRole::BeamsplitterTheta);
    fill(l.u2_phi, b, ParamRole::BeamsplitterPhi);
    fill(l.u2_rot, n, ParamRole::Rotation);
    fill(l.alpha_re, n, ParamRole::DisplacementRe);
    fill(l.alpha_im, n, ParamRole::DisplacementIm);
    fill(l.kappa, n, ParamRole::Kerr);
    std::vector<ParamRole> roles;
    roles.reserve(one.size() * static_cast<std::size_t>(shape.layers));
    for (int k = 0; k < shape.layers; ++k) {
        roles.insert(roles.end(), one.begin(), one.end());
    }
    return roles;
}

std::vector<double> NetworkParams::flatten() const {
    const auto l = layer_layout(modes);
    const auto b = static_cast<std::size_t>(beamsplitters_per_interferometer(modes));
    const auto n = static_cast<std::size_t>(modes);
    std::vector<double> flat(static_cast<std::size_t>(l.size) * layers.size());
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const auto &lp = layers[k];
        const Index o = static_cast<Index>(k) * l.size;
        copy_out(lp.u1.theta, flat, o + l.u1_theta, b, "u1.theta");
        copy_out(lp.u1.phi, flat, o + l.u1_phi, b, "u1.phi");
        copy_out(lp.u1.rotation, flat, o + l.u1_rot, n, "u1.rotation");
        copy_out(lp.r, flat, o + l.r, n, "r");
        copy_out(lp.u2.theta, flat, o + l.u2_theta, b, "u2.theta");
        copy_out(lp.u2.phi, flat, o + l.u2_phi, b, "u2.phi");
        copy_out(lp.u2.rotation, flat, o + l.u2_rot, n, "u2.rotation");
        copy_out(lp.alpha_re, flat, o + l.alpha_re, n, "alpha_re");
        copy_out(lp.alpha_im, flat, o + l.alpha_im, n, "alpha_im");
        copy_out(lp.kappa, flat, o + l.kappa, n, "kappa");
    }
    return flat;
}

NetworkParams NetworkParams::from_flat(const NetworkShape &shape,
                                       std::span<const double> flat) {
    shape.validate();
    const auto l = layer_layout(shape.modes);
    const Index expected = l.size * shape.layers;
    if (static_cast<Index>(flat.size()) != expected) {
        throw DimensionMismatch("flat parameter vector has " +
                                std::to_string(flat.size()) + " entries, expected " +
                                std::to_string(expected));
    }
    const Index b = beamsplitters_per_interferometer(shape.modes);
    const Index n = shape.modes;
    NetworkParams p{shape.modes, shape.cutoff, {}};
    for (int k = 0; k < shape.layers; ++k) {
        const Index o = static_cast<Index>(k) * l.size;
        LayerParams lp;
        lp.u1 = {copy_in(flat, o + l.u1_theta, b), copy_in(flat, o + l.u1_phi, b),
                 copy_in(flat, o + l.u1_rot, n)};
        lp.r = copy_in(flat, o + l.r, n);
        lp.u2 = {copy_in(flat, o + l.u2_theta, b), copy_in(flat, o + l.u2_phi, b),
                 copy_in(flat, o + l.u2_rot, n)};
        lp.alpha_re = copy_in(flat, o + l.alpha_re, n);
        lp.alpha_im = copy_in(flat, o + l.alpha_im, n);
        lp.kappa = copy_in(flat, o + l.kappa, n);
        p.layers.push_back(std::move(lp));
    }
    return p;
}

NetworkParams NetworkParams::zeros(const NetworkShape &shape) {
    shape.validate();
    return {shape.modes, shape.cutoff,
            std::vector<LayerParams>(static_cast<std::size_t>(shape.layers),
                                     LayerParams::zeros(shape.modes))};
}

NetworkParams init_params(const NetworkShape &shape, std::uint64_t seed,
                          const InitOptions &options) {
    shape.validate();
    if (!(options.active_std >= 0.0) || !(options.phase_range >= 0.0)) {
        throw PreconditionError("init_params: spreads must be non-negative");
    }
    const auto roles = param_roles(shape);
    std::vector<double> flat(roles.size());
    Rng rng(seed);
    for (std::size_t k = 0; k < roles.size(); ++k) {
        flat[k] = is_active(roles[k]) ? rng.normal(0.0, options.active_std)
                                      : rng.uniform(0.0, options.phase_range);
    }
    return NetworkParams::from_flat(shape, flat);
}

GateMagnitudes max_magnitudes(const NetworkParams &params) {
    GateMagnitudes g;
    for (const auto &l : params.layers) {
        for (std::size_t m = 0; m < l.r.size(); ++m) {
            g.squeezing = std::max(g.squeezing, std::abs(l.r[m]));
            g.kerr = std::max(g.kerr, std::abs(l.kappa[m]));
            g.displacement =
                std::max(g.displacement, std::hypot(l.alpha_re[m], l.alpha_im[m]));
        }
    }
    return g;
}

FockVector apply_network(const NetworkParams &params, const FockVector &state) {
    const auto shape = params.shape();
    shape.validate();
    if (!(state.cutoff == shape.cutoff_config())) {
        throw DimensionMismatch("state cutoff/modes do not match the network");
    }
    const auto flat = params.flatten();
    const Tape tape(shape, flat);
    CMatrix x = state.amplitudes;
    tape.forward(x);
    return {state.cutoff, x.col(0)};
}

FockVector apply_layer(const FockVector &state, const LayerParams &layer) {
    const NetworkParams one{state.cutoff.modes, state.cutoff.dim, {layer}};
    return apply_network(one, state);
}

CMatrix network_columns(const NetworkParams &params, std::span<const Index> inputs) {
    const auto shape = params.shape();
    shape.validate();
    const auto flat = params.flatten();
    const Tape tape(shape, flat);
    CMatrix x = input_block(tape.total(), inputs);
    tape.forward(x);
    return x;
}

CMatrix network_columns(const NetworkParams &params, Index d) {
    const Index total = params.shape().cutoff_config().total();
    if (d < 1 || d > total) {
        throw DimensionMismatch("network_columns: d = " + std::to_string(d) +
                                " outside [1, " + std::to_string(total) + "]");
    }
    std::vector<Index> inputs(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) {
        inputs[static_cast<std::size_t>(i)] = i;
    }
    return network_columns(params, inputs);
}

FockOperator network_unitary(const NetworkParams &params) {
    const auto c = params.shape().cutoff_config();
    return {c, network_columns(params, c.total()), true};
}

double evaluate_cost(const NetworkParams &params, const ObjectiveSpec &objective) {
    require_compatible(params, objective);
    const CMatrix out = network_columns(params, objective.inputs);
    return relation_costs(out, objective, false).cost +
           parameter_penalty(params, objective.penalty_weight);
}

CostGradient cost_and_gradient(const NetworkParams &params,
                               const ObjectiveSpec &objective) {
    require_compatible(params, objective);
    const auto shape = params.shape();
    const auto flat = params.flatten();
    const Tape tape(shape, flat);

    std::vector<CMatrix> states;
    tape.forward_recording(input_block(tape.total(), objective.inputs), states);
    const Relations rel = relation_costs(states.back(), objective, true);

    CostGradient out;
    out.gradient.assign(flat.size(), 0.0);
    tape.backward(rel.costate, states, out.gradient);

    out.cost = rel.cost;
    if (objective.penalty_weight > 0.0) {
        out.cost += parameter_penalty(params, objective.penalty_weight);
        const auto roles = param_roles(shape);
        for (std::size_t k = 0; k < flat.size(); ++k) {
            if (is_active(roles[k])) {
                out.gradient[k] += 2.0 * objective.penalty_weight * flat[k];
            }
        }
    }
    if (!std::isfinite(out.cost)) {
        throw NumericalFailure("non-finite cost");
    }
    for (double g : out.gradient) {
        if (!std::isfinite(g)) {
            throw NumericalFailure("non-finite gradient");
        }
    }
    return out;
}

} // namespace cvforge
