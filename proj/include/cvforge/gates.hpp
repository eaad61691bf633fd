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
 * Elementary and target gates on the truncated Fock space.
 *
 * All non-diagonal gates are exponentials of truncated generators, so they are
 * unitary on the simulated space to machine precision:
 *
 *   R(phi)        = exp(i phi n)
 *   D(alpha)      = exp(alpha a^dag - alpha^* a)
 *   S(r)          = exp(r/2 (a^2 - a^dag^2))
 *   BS(theta,phi) = exp(theta (e^{i phi} a1^dag a2 - e^{-i phi} a1 a2^dag))
 *   K(kappa)      = exp(i kappa n^2)
 *   CK(kappa)     = exp(-i kappa n1 n2)
 *   V(gamma)      = exp(-i gamma x^3)
 */
#pragma once

#include "cvforge/fock.hpp"

#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace cvforge {

enum class GateKind {
    Rotation,     ///< (phi)
    Displacement, ///< (alpha_re, alpha_im)
    Squeezing,    ///< (r)
    Beamsplitter, ///< (theta, phi), two-mode
    Kerr,         ///< (kappa)
    CrossKerr,    ///< (kappa), two-mode
    CubicPhase,   ///< (gamma)
};

std::string_view gate_name(GateKind kind) noexcept;
/// Number of real parameters the gate takes.
int gate_arity(GateKind kind) noexcept;
/// Mode count the gate acts on.
int gate_modes(GateKind kind) noexcept;

FockOperator rotation(double phi, std::size_t dim);
FockOperator displacement(double alpha_re, double alpha_im, std::size_t dim);
FockOperator squeezing(double r, std::size_t dim);
FockOperator beamsplitter(double theta, double phi, std::size_t dim);
FockOperator kerr(double kappa, std::size_t dim);
FockOperator cross_kerr(double kappa, std::size_t dim);
FockOperator cubic_phase(double gamma, std::size_t dim);

/// Dispatching constructor; `params.size()` must equal gate_arity(kind).
FockOperator make_gate(GateKind kind, std::span<const double> params,
                       std::size_t dim);

/// Anti-Hermitian generator M with gate = exp(M).
FockOperator gate_generator(GateKind kind, std::span<const double> params,
                            std::size_t dim);

/// dG/d params[which]. Throws PreconditionError for an unknown index.
FockOperator gate_derivative(GateKind kind, std::span<const double> params,
                             int which, std::size_t dim);

/**
 * Parameter-independent spectral data for the single-mode gates at one
 * cutoff. Squeezing is exp(r G_s) with fixed G_s, and displacement is a
 * rotation-conjugated exp(|alpha| (a^dag - a)), so both reuse one
 * eigendecomposition across every parameter value.
 */
struct ModeBasis {
    std::size_t dim;
    RVector number;    ///< 0..D-1
    RVector number_sq; ///< m^2
    /// sqrt((m+1)(m+2)) = <m|a^2|m+2>, length D-2.
    RVector two_photon;
    /// exp(r G_s) = exp(i r H_s), G_s = (a^2 - a^dag^2)/2.
    HermitianExp squeeze;
    /// exp(rho A) = exp(i rho H_A), A = a^dag - a.
    HermitianExp displace;
    /// W^dagger B W with B = i (a^dag + a) and W the displace eigenbasis.
    CMatrix displace_b_rotated;
};

/// Block-diagonal spectral data of the two-mode beamsplitter generator
/// a1^dag a2 - a1 a2^dag, one block per total photon number.
struct BeamsplitterBasis {
    struct Block {
        std::vector<Index> indices; ///< flat indices with n1 + n2 = k
        HermitianExp spectrum;
    };
    std::size_t dim;
    std::vector<Block> blocks;
    RVector n1; ///< photon number of mode 0 per flat index
    RVector n2;
};

/// Cached per-cutoff bases; safe to call concurrently.
std::shared_ptr<const ModeBasis> mode_basis(std::size_t dim);
std::shared_ptr<const BeamsplitterBasis> beamsplitter_basis(std::size_t dim);

} // namespace cvforge
