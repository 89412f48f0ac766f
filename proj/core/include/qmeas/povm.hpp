// Copyright 2026 The qmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * POVM and PVM construction and validation, bivariate POVMs with their
 * marginals, and the joint-measurability decision for standard observables.
 */

#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "qmeas/operator_core.hpp"

namespace qmeas {

/// Outcome of checking a candidate effect collection against the POVM
/// invariants. `failing_effect` is -1 when no individual effect fails PSD.
struct PovmDiagnosis {
    bool valid = false;
    std::ptrdiff_t failing_effect = -1;
    double min_eigenvalue = 0.0;
    double completeness_residual = 0.0;
    std::string message;
};

PovmDiagnosis diagnose_povm(const std::vector<HermitianOperator> &effects);

/// Ordered collection of PSD effects summing to identity. Labels are carried
/// verbatim and never interpreted.
class Povm {
  public:
    explicit Povm(std::vector<HermitianOperator> effects,
                  std::vector<std::string> labels = {});

    const std::vector<HermitianOperator> &effects() const noexcept {
        return effects_;
    }
    const HermitianOperator &effect(std::size_t m) const { return effects_.at(m); }
    const std::vector<std::string> &labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return effects_.size(); }
    Eigen::Index dim() const noexcept { return effects_.front().dim(); }

  private:
    std::vector<HermitianOperator> effects_;
    std::vector<std::string> labels_;
};

/// Validates and returns the POVM; throws ValidationError carrying the
/// diagnosis otherwise.
Povm validate_povm(std::vector<HermitianOperator> effects,
                   std::vector<std::string> labels = {});

/// A POVM of idempotent, mutually orthogonal effects.
class Pvm {
  public:
    explicit Pvm(Povm povm);

    const Povm &povm() const noexcept { return povm_; }
    const std::vector<HermitianOperator> &effects() const noexcept {
        return povm_.effects();
    }
    const HermitianOperator &effect(std::size_t m) const { return povm_.effect(m); }
    std::size_t size() const noexcept { return povm_.size(); }
    Eigen::Index dim() const noexcept { return povm_.dim(); }

  private:
    Povm povm_;
};

/// K x L grid of PSD effects with unit total sum, stored row-major.
class BivariatePovm {
  public:
    BivariatePovm(std::vector<HermitianOperator> grid, Eigen::Index rows,
                  Eigen::Index cols);

    const HermitianOperator &at(Eigen::Index m, Eigen::Index n) const;
    const std::vector<HermitianOperator> &grid() const noexcept { return grid_; }
    Eigen::Index rows() const noexcept { return rows_; }
    Eigen::Index cols() const noexcept { return cols_; }
    Eigen::Index dim() const noexcept { return grid_.front().dim(); }

  private:
    std::vector<HermitianOperator> grid_;
    Eigen::Index rows_;
    Eigen::Index cols_;
};

struct Marginals {
    Povm row; // row_m = sum_n R_mn
    Povm col; // col_n = sum_m R_mn
};

Marginals marginals(const BivariatePovm &biv);

/// Maximal commutator violation over effect pairs of two PVMs.
struct CommutatorWitness {
    std::size_t m = 0;
    std::size_t n = 0;
    double commutator_norm = 0.0;
};

/// If every [M_m, N_n]_- vanishes within tol::commutator, returns the grid
/// R_mn = M_m N_n (symmetrized), a bivariate POVM whose marginals are the
/// inputs. Otherwise returns the witness of maximal violation.
std::variant<BivariatePovm, CommutatorWitness>
joint_pvm_construct(const Pvm &a, const Pvm &b);

} // namespace qmeas
