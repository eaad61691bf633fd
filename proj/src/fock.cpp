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

#include "cvforge/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

namespace cvforge {

namespace {

constexpr double kAntiHermitianTol = 1e-12;

void require_same_shape(const CMatrix &a, const CMatrix &b, const char *what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + ")");
    }
}

double sinc(double x) {
    if (std::abs(x) < 1e-8) {
        return 1.0 - x * x / 6.0;
    }
    return std::sin(x) / x;
}

} // namespace

void CutoffConfig::validate() const {
    if (dim < 2) {
        throw InvalidCutoff("cutoff dimension must be at least 2, got " +
                            std::to_string(dim));
    }
    if (modes != 1 && modes != 2) {
        throw InvalidCutoff("only 1 or 2 modes are supported, got " +
                            std::to_string(modes));
    }
}

FockVector::FockVector(CutoffConfig c, CVector amps)
    : cutoff(c), amplitudes(std::move(amps)) {
    cutoff.validate();
    if (amplitudes.size() != cutoff.total()) {
        throw DimensionMismatch("FockVector: expected " +
                                std::to_string(cutoff.total()) +
                                " amplitudes, got " +
                                std::to_string(amplitudes.size()));
    }
}

FockVector FockVector::basis(CutoffConfig c, Index index) {
    c.validate();
    if (index < 0 || index >= c.total()) {
        throw DimensionMismatch("basis index " + std::to_string(index) +
                                " outside truncated space of size " +
                                std::to_string(c.total()));
    }
    CVector v = CVector::Zero(c.total());
    v(index) = 1.0;
    return {c, std::move(v)};
}

FockOperator::FockOperator(CutoffConfig c, CMatrix m, bool unitary)
    : cutoff(c), entries(std::move(m)), unitary_flag(unitary) {
    cutoff.validate();
    if (entries.rows() != cutoff.total() || entries.cols() != cutoff.total()) {
        throw DimensionMismatch("FockOperator: expected a " +
                                std::to_string(cutoff.total()) + "-square matrix");
    }
}

FockOperator FockOperator::identity(CutoffConfig c) {
    c.validate();
    return {c, CMatrix::Identity(c.total(), c.total()), true};
}

FockOperator FockOperator::adjoint() const {
    return {cutoff, entries.adjoint(), unitary_flag};
}

FockVector FockOperator::apply(const FockVector &v) const {
    if (!(v.cutoff == cutoff)) {
        throw DimensionMismatch("operator/vector cutoff mismatch");
    }
    return {cutoff, entries * v.amplitudes};
}

double unitarity_defect(const CMatrix &u) {
    const CMatrix g = u.adjoint() * u;
    return (g - CMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

double antihermitian_defect(const CMatrix &m) {
    if (m.size() == 0) {
        return 0.0;
    }
    return (m + m.adjoint()).cwiseAbs().maxCoeff();
}

LadderOps ladder(std::size_t dim) {
    const CutoffConfig c{dim, 1};
    c.validate();
    const auto d = static_cast<Index>(dim);
    CMatrix a = CMatrix::Zero(d, d);
    CMatrix n = CMatrix::Zero(d, d);
    for (Index m = 0; m + 1 < d; ++m) {
        a(m, m + 1) = std::sqrt(static_cast<double>(m + 1));
    }
    for (Index m = 0; m < d; ++m) {
        n(m, m) = static_cast<double>(m);
    }
    CMatrix a_dag = a.adjoint();
    return {FockOperator{c, std::move(a)}, FockOperator{c, std::move(a_dag)},
            FockOperator{c, std::move(n)}};
}

Quadratures quadratures(std::size_t dim) {
    const auto ops = ladder(dim);
    const cplx i{0.0, 1.0};
    return {FockOperator{ops.a.cutoff, ops.a.entries + ops.a_dag.entries},
            FockOperator{ops.a.cutoff, -i * (ops.a.entries - ops.a_dag.entries)}};
}

HermitianExp::HermitianExp(const CMatrix &hermitian) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("Hermitian eigendecomposition did not converge");
    }
    basis_ = solver.eigenvectors();
    eigenvalues_ = solver.eigenvalues();
}

HermitianExp::HermitianExp(CMatrix basis, RVector eigenvalues)
    : basis_(std::move(basis)), eigenvalues_(std::move(eigenvalues)) {}

CMatrix HermitianExp::exp(double t) const {
    CVector phases(eigenvalues_.size());
    for (Index k = 0; k < eigenvalues_.size(); ++k) {
        phases(k) = std::polar(1.0, t * eigenvalues_(k));
    }
    return basis_ * phases.asDiagonal() * basis_.adjoint();
}

CMatrix exp_divided_differences(const RVector &eigenvalues) {
    const Index n = eigenvalues.size();
    CMatrix phi(n, n);
    for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) {
            const double mean = 0.5 * (eigenvalues(j) + eigenvalues(k));
            const double half_gap = 0.5 * (eigenvalues(j) - eigenvalues(k));
            phi(j, k) = std::polar(sinc(half_gap), mean);
        }
    }
    return phi;
}

CMatrix HermitianExp::divided_differences() const {
    return exp_divided_differences(eigenvalues_);
}

CMatrix HermitianExp::frechet(const CMatrix &direction) const {
    require_same_shape(basis_, direction, "HermitianExp::frechet");
    const CMatrix rotated = basis_.adjoint() * direction * basis_;
    const CMatrix weighted = rotated.cwiseProduct(divided_differences());
    return basis_ * weighted * basis_.adjoint();
}

CMatrix expm_antihermitian(const CMatrix &m) {
    if (m.rows() != m.cols()) {
        throw DimensionMismatch("expm_antihermitian: matrix is not square");
    }
    const double defect = antihermitian_defect(m);
    if (defect > kAntiHermitianTol * std::max(1.0, m.cwiseAbs().maxCoeff())) {
        throw PreconditionError("expm_antihermitian: input is not anti-Hermitian "
                                "(|M + M^dagger|_max = " +
                                std::to_string(defect) + ")");
    }
    const cplx i{0.0, 1.0};
    // H = -iM; symmetrise so round-off in M does not leak into the solver.
    const CMatrix h = -i * m;
    const CMatrix hs = 0.5 * (h + h.adjoint());
    return HermitianExp(hs).exp();
}

FockOperator expm_antihermitian(const FockOperator &m) {
    return {m.cutoff, expm_antihermitian(m.entries), true};
}

CMatrix expm_frechet(const CMatrix &m, const CMatrix &e) {
    require_same_shape(m, e, "expm_frechet");
    if (m.rows() != m.cols()) {
        throw DimensionMismatch("expm_frechet: matrix is not square");
    }
    const Index n = m.rows();
    CMatrix block = CMatrix::Zero(2 * n, 2 * n);
    block.topLeftCorner(n, n) = m;
    block.topRightCorner(n, n) = e;
    block.bottomRightCorner(n, n) = m;
    const CMatrix expo = block.exp();
    return expo.topRightCorner(n, n);
}

FockOperator expm_frechet(const FockOperator &m, const FockOperator &e) {
    if (!(m.cutoff == e.cutoff)) {
        throw DimensionMismatch("expm_frechet: cutoff mismatch");
    }
    return {m.cutoff, expm_frechet(m.entries, e.entries)};
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

FockOperator tensor(const FockOperator &a, const FockOperator &b) {
    if (a.cutoff.modes != 1 || b.cutoff.modes != 1 ||
        a.cutoff.dim != b.cutoff.dim) {
        throw DimensionMismatch("tensor: expects two single-mode operators at "
                                "the same cutoff");
    }
    return {CutoffConfig{a.cutoff.dim, 2}, kron(a.entries, b.entries),
            a.unitary_flag && b.unitary_flag};
}

FockOperator embed_single(const FockOperator &a, int mode, int modes) {
    if (a.cutoff.modes != 1) {
        throw DimensionMismatch("embed_single: operator must be single-mode");
    }
    if (modes == 1) {
        if (mode != 0) {
            throw DimensionMismatch("embed_single: mode index out of range");
        }
        return a;
    }
    if (modes != 2 || mode < 0 || mode > 1) {
        throw DimensionMismatch("embed_single: mode index out of range");
    }
    const auto id = FockOperator::identity(a.cutoff);
    return mode == 0 ? tensor(a, id) : tensor(id, a);
}

cplx overlap(const FockVector &u, const FockVector &v) {
    if (!(u.cutoff == v.cutoff)) {
        throw DimensionMismatch("overlap: cutoff mismatch");
    }
    return u.amplitudes.dot(v.amplitudes); // Eigen's dot conjugates the left side
}

CVector restrict_to_cutoff(const CVector &amps, std::size_t from_dim,
                           std::size_t to_dim, int modes) {
    if (to_dim > from_dim) {
        throw InvalidCutoff("restrict_to_cutoff: target cutoff exceeds source");
    }
    const auto from = static_cast<Index>(from_dim);
    const auto to = static_cast<Index>(to_dim);
    if (modes == 1) {
        return amps.head(to);
    }
    CVector out(to * to);
    for (Index n1 = 0; n1 < to; ++n1) {
        for (Index n2 = 0; n2 < to; ++n2) {
            out(n1 * to + n2) = amps(n1 * from + n2);
        }
    }
    return out;
}

} // namespace cvforge
