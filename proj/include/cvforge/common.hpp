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
 * Shared scalar/matrix aliases and the exception types used across cvforge.
 */
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace cvforge {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr const char *kVersion = "cvforge 0.1.0";

/// Cutoff below 2, or a state/operator built at an unusable cutoff.
class InvalidCutoff : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Operands whose dimensions, modes or cutoffs do not line up.
class DimensionMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// An input that violates a documented precondition (non-anti-Hermitian
/// generator, out-of-range parameter index, ...).
class PreconditionError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// The truncated space does not hold the target to the requested tolerance.
class CutoffInsufficient : public std::runtime_error {
  public:
    CutoffInsufficient(const std::string &what, std::size_t smallest_passing)
        : std::runtime_error(what), smallest_passing_(smallest_passing) {}
    [[nodiscard]] std::size_t smallest_passing() const noexcept {
        return smallest_passing_;
    }

  private:
    std::size_t smallest_passing_;
};

/// Non-finite cost or gradient during evaluation.
class NumericalFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace cvforge
