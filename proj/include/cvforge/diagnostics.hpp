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
 * Wigner functions, position wavefunctions and matrix heatmaps as plain data.
 *
 * Grids are written as CSV: a header line `# x_min x_max nx p_min p_max ny`
 * followed by nx rows of ny values (row i is x_i, column j is p_j).
 */
#pragma once

#include "cvforge/fock.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cvforge {

struct GridSpec {
    double x_min = -6.0;
    double x_max = 6.0;
    Index nx = 200;
    double p_min = -6.0;
    double p_max = 6.0;
    Index ny = 200;

    void validate() const;
    [[nodiscard]] double x(Index i) const;
    [[nodiscard]] double p(Index j) const;
};

struct Grid2D {
    GridSpec axes;
    Eigen::MatrixXd values; ///< nx x ny
};

struct ComplexGrid2D {
    GridSpec axes;
    CMatrix values; ///< nx x ny
};

/// Evenly spaced points including both ends (a single point sits at lo).
std::vector<double> linspace(double lo, double hi, Index n);

/// W(x, p) of a pure single-mode state, hbar = 2, integrating to one.
Grid2D wigner(const FockVector &psi, const GridSpec &grid = {});

/// Harmonic-oscillator eigenfunctions phi_0..phi_{D-1} at x (hbar = 2).
RVector hermite_functions(double x, Index count);

/// sum_n c_n phi_n(x) at every grid point.
CVector wavefunction1d(const FockVector &psi, std::span<const double> xs);
/// sum c_{n1 n2} phi_n1(x) phi_n2(y) over an x-by-y grid.
ComplexGrid2D wavefunction2d(const FockVector &psi, const GridSpec &grid = {});

struct Heatmap {
    Eigen::MatrixXd real;
    Eigen::MatrixXd imag;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
};

/// The d_out x d_in top-left block of V, with Fock labels ("n" or "n1_n2" in
/// lexicographic order).
Heatmap matrix_heatmap(const FockOperator &v, Index d_in, Index d_out);
/// Same for columns already extracted (rows = flat output index).
Heatmap matrix_heatmap(const CMatrix &columns, const CutoffConfig &cutoff, Index d_in,
                       Index d_out);

/// Columns already restricted to chosen inputs: keeps `rows` (flat output
/// indices) and labels column k by the flat input index inputs[k].
Heatmap matrix_heatmap(const CMatrix &columns, const CutoffConfig &cutoff,
                       std::span<const Index> rows, std::span<const Index> inputs);

void write_grid_csv(std::ostream &out, const Grid2D &grid);
/// Real and imaginary parts as two consecutive blocks, each with the header.
void write_grid_csv(std::ostream &out, const ComplexGrid2D &grid);
Grid2D read_grid_csv(std::istream &in);

/// `x,re,im` rows.
void write_wavefunction_csv(std::ostream &out, std::span<const double> xs,
                            const CVector &values);

/// Plain numeric CSV, 17 significant digits.
void write_matrix_csv(std::ostream &out, const Eigen::MatrixXd &m);
Eigen::MatrixXd read_matrix_csv(std::istream &in);
/// `rows,<labels...>` and `cols,<labels...>`.
void write_labels_csv(std::ostream &out, const Heatmap &h);

} // namespace cvforge
