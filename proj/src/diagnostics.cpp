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

#include "cvforge/diagnostics.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace cvforge {

namespace {

constexpr double kHbar = 2.0;

void require_single_mode(const FockVector &psi, const char *what) {
    if (psi.cutoff.modes != 1) {
        throw DimensionMismatch(std::string(what) + " takes a single-mode state");
    }
}

std::vector<double> split_numbers(const std::string &line, char sep) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, sep)) {
        if (!cell.empty()) {
            out.push_back(std::stod(cell));
        }
    }
    return out;
}

void write_header(std::ostream &out, const GridSpec &g) {
    out << "# " << g.x_min << ' ' << g.x_max << ' ' << g.nx << ' ' << g.p_min << ' '
        << g.p_max << ' ' << g.ny << '\n';
}

void write_block(std::ostream &out, const Eigen::MatrixXd &m) {
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j > 0) {
                out << ',';
            }
            out << m(i, j);
        }
        out << '\n';
    }
}

std::string fock_label(const CutoffConfig &c, Index flat) {
    if (c.modes == 1) {
        return std::to_string(flat);
    }
    const auto d = static_cast<Index>(c.dim);
    return std::to_string(flat / d) + "_" + std::to_string(flat % d);
}

} // namespace

void GridSpec::validate() const {
    if (nx < 1 || ny < 1) {
        throw PreconditionError("grid needs at least one point per axis");
    }
    if (!(x_max >= x_min) || !(p_max >= p_min) || !std::isfinite(x_min) ||
        !std::isfinite(x_max) || !std::isfinite(p_min) || !std::isfinite(p_max)) {
        throw PreconditionError("grid axes must be finite and increasing");
    }
}

double GridSpec::x(Index i) const {
    return nx == 1 ? x_min : x_min + (x_max - x_min) * static_cast<double>(i) /
                                         static_cast<double>(nx - 1);
}

double GridSpec::p(Index j) const {
    return ny == 1 ? p_min : p_min + (p_max - p_min) * static_cast<double>(j) /
                                         static_cast<double>(ny - 1);
}

std::vector<double> linspace(double lo, double hi, Index n) {
    GridSpec g{lo, hi, n, 0.0, 0.0, 1};
    g.validate();
    std::vector<double> out(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = g.x(i);
    }
    return out;
}

Grid2D wigner(const FockVector &psi, const GridSpec &grid) {
    require_single_mode(psi, "wigner");
    grid.validate();
    const Index m_count = psi.amplitudes.size();
    const CVector &c = psi.amplitudes;
    auto rho = [&](Index m, Index n) { return c(m) * std::conj(c(n)); };

    Grid2D out{grid, Eigen::MatrixXd(grid.nx, grid.ny)};
    std::vector<cplx> w(static_cast<std::size_t>(m_count));
    for (Index i = 0; i < grid.nx; ++i) {
        for (Index j = 0; j < grid.ny; ++j) {
            const cplx a = 0.5 * cplx(grid.x(i), grid.p(j));
            w[0] = std::exp(-2.0 * std::norm(a)) / std::numbers::pi;
            double acc = rho(0, 0).real() * w[0].real();
            for (Index n = 1; n < m_count; ++n) {
                w[n] = 2.0 * a * w[n - 1] / std::sqrt(static_cast<double>(n));
                acc += 2.0 * (rho(0, n) * w[n]).real();
            }
            for (Index m = 1; m < m_count; ++m) {
                const double sm = std::sqrt(static_cast<double>(m));
                cplx temp = w[m];
                w[m] = (2.0 * std::conj(a) * temp - sm * w[m - 1]) / sm;
                acc += (rho(m, m) * w[m]).real();
                for (Index n = m + 1; n < m_count; ++n) {
                    const cplx next =
                        (2.0 * a * w[n - 1] - sm * temp) / std::sqrt(static_cast<double>(n));
                    temp = w[n];
                    w[n] = next;
                    acc += 2.0 * (rho(m, n) * w[n]).real();
                }
            }
            out.values(i, j) = acc / kHbar;
        }
    }
    return out;
}

RVector hermite_functions(double x, Index count) {
    RVector phi = RVector::Zero(count);
    if (count == 0) {
        return phi;
    }
    const double xi = x / std::numbers::sqrt2;
    phi(0) = std::pow(2.0 * std::numbers::pi, -0.25) * std::exp(-0.25 * x * x);
    if (count > 1) {
        phi(1) = std::numbers::sqrt2 * xi * phi(0);
    }
    for (Index n = 1; n + 1 < count; ++n) {
        const double nn = static_cast<double>(n);
        phi(n + 1) = std::sqrt(2.0 / (nn + 1.0)) * xi * phi(n) -
                     std::sqrt(nn / (nn + 1.0)) * phi(n - 1);
    }
    return phi;
}

CVector wavefunction1d(const FockVector &psi, std::span<const double> xs) {
    require_single_mode(psi, "wavefunction1d");
    if (xs.empty()) {
        throw PreconditionError("wavefunction1d: empty grid");
    }
    CVector out(static_cast<Index>(xs.size()));
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const RVector phi = hermite_functions(xs[k], psi.amplitudes.size());
        out(static_cast<Index>(k)) = psi.amplitudes.transpose() * phi.cast<cplx>();
    }
    return out;
}

ComplexGrid2D wavefunction2d(const FockVector &psi, const GridSpec &grid) {
    if (psi.cutoff.modes != 2) {
        throw DimensionMismatch("wavefunction2d takes a two-mode state");
    }
    grid.validate();
    const auto d = static_cast<Index>(psi.cutoff.dim);
    Eigen::MatrixXd hx(d, grid.nx);
    Eigen::MatrixXd hy(d, grid.ny);
    for (Index i = 0; i < grid.nx; ++i) {
        hx.col(i) = hermite_functions(grid.x(i), d);
    }
    for (Index j = 0; j < grid.ny; ++j) {
        hy.col(j) = hermite_functions(grid.p(j), d);
    }
    // C(n1, n2) = c_{n1 D + n2}; psi(x, y) = hx^T C hy.
    CMatrix coeffs(d, d);
    for (Index n1 = 0; n1 < d; ++n1) {
        for (Index n2 = 0; n2 < d; ++n2) {
            coeffs(n1, n2) = psi.amplitudes(n1 * d + n2);
        }
    }
    ComplexGrid2D out{grid, hx.transpose().cast<cplx>() * coeffs * hy.cast<cplx>()};
    return out;
}

Heatmap matrix_heatmap(const CMatrix &columns, const CutoffConfig &cutoff, Index d_in,
                       Index d_out) {
    if (d_in < 1 || d_in > columns.cols() || d_out < 1 || d_out > columns.rows()) {
        throw DimensionMismatch("matrix_heatmap: block " + std::to_string(d_out) + "x" +
                                std::to_string(d_in) + " outside the " +
                                std::to_string(columns.rows()) + "x" +
                                std::to_string(columns.cols()) + " matrix");
    }
    Heatmap h;
    const CMatrix block = columns.topLeftCorner(d_out, d_in);
    h.real = block.real();
    h.imag = block.imag();
    for (Index r = 0; r < d_out; ++r) {
        h.row_labels.push_back(fock_label(cutoff, r));
    }
    for (Index c = 0; c < d_in; ++c) {
        h.col_labels.push_back(fock_label(cutoff, c));
    }
    return h;
}

Heatmap matrix_heatmap(const CMatrix &columns, const CutoffConfig &cutoff,
                       std::span<const Index> rows, std::span<const Index> inputs) {
    if (static_cast<Index>(inputs.size()) != columns.cols()) {
        throw DimensionMismatch("matrix_heatmap: one input label per column required");
    }
    Heatmap h;
    h.real.resize(static_cast<Index>(rows.size()), columns.cols());
    h.imag.resize(static_cast<Index>(rows.size()), columns.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r] < 0 || rows[r] >= columns.rows()) {
            throw DimensionMismatch("matrix_heatmap: row index out of range");
        }
        for (Index c = 0; c < columns.cols(); ++c) {
            const cplx v = columns(rows[r], c);
            h.real(static_cast<Index>(r), c) = v.real();
            h.imag(static_cast<Index>(r), c) = v.imag();
        }
        h.row_labels.push_back(fock_label(cutoff, rows[r]));
    }
    for (Index i : inputs) {
        h.col_labels.push_back(fock_label(cutoff, i));
    }
    return h;
}

Heatmap matrix_heatmap(const FockOperator &v, Index d_in, Index d_out) {
    if (d_in > static_cast<Index>(v.cutoff.dim) && v.cutoff.modes == 1) {
        throw DimensionMismatch("matrix_heatmap: d_in exceeds the cutoff");
    }
    return matrix_heatmap(v.entries, v.cutoff, d_in, d_out);
}

void write_grid_csv(std::ostream &out, const Grid2D &grid) {
    out << std::setprecision(17);
    write_header(out, grid.axes);
    write_block(out, grid.values);
}

void write_grid_csv(std::ostream &out, const ComplexGrid2D &grid) {
    out << std::setprecision(17);
    write_header(out, grid.axes);
    write_block(out, grid.values.real());
    write_header(out, grid.axes);
    write_block(out, grid.values.imag());
}

Grid2D read_grid_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind('#', 0) != 0) {
        throw PreconditionError("grid CSV: missing '#' axis header");
    }
    std::istringstream hs(line.substr(1));
    GridSpec g;
    if (!(hs >> g.x_min >> g.x_max >> g.nx >> g.p_min >> g.p_max >> g.ny)) {
        throw PreconditionError("grid CSV: malformed axis header");
    }
    g.validate();
    Grid2D out{g, Eigen::MatrixXd(g.nx, g.ny)};
    for (Index i = 0; i < g.nx; ++i) {
        if (!std::getline(in, line)) {
            throw PreconditionError("grid CSV: too few rows");
        }
        const auto row = split_numbers(line, ',');
        if (static_cast<Index>(row.size()) != g.ny) {
            throw PreconditionError("grid CSV: row " + std::to_string(i) +
                                    " has the wrong length");
        }
        for (Index j = 0; j < g.ny; ++j) {
            out.values(i, j) = row[static_cast<std::size_t>(j)];
        }
    }
    return out;
}

void write_wavefunction_csv(std::ostream &out, std::span<const double> xs,
                            const CVector &values) {
    out << "x,re,im\n" << std::setprecision(17);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const cplx v = values(static_cast<Index>(k));
        out << xs[k] << ',' << v.real() << ',' << v.imag() << '\n';
    }
}

void write_matrix_csv(std::ostream &out, const Eigen::MatrixXd &m) {
    out << std::setprecision(17);
    write_block(out, m);
}

Eigen::MatrixXd read_matrix_csv(std::istream &in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        rows.push_back(split_numbers(line, ','));
        if (rows.back().size() != rows.front().size()) {
            throw PreconditionError("matrix CSV: ragged rows");
        }
    }
    Eigen::MatrixXd m(static_cast<Index>(rows.size()),
                      rows.empty() ? 0 : static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return m;
}

void write_labels_csv(std::ostream &out, const Heatmap &h) {
    out << "rows";
    for (const auto &l : h.row_labels) {
        out << ',' << l;
    }
    out << "\ncols";
    for (const auto &l : h.col_labels) {
        out << ',' << l;
    }
    out << '\n';
}

} // namespace cvforge
