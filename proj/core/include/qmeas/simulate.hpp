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
 * Seeded Monte Carlo sampling of measurement outcomes.
 *
 * Reproducibility contract: outcomes are drawn by inverse CDF over the
 * probability vector flattened in row-major order. The uniform stream is
 * std::mt19937_64 seeded directly with `seed`; each 64-bit output x maps to
 * u = (x >> 11) * 2^-53 in [0, 1). Both the engine and this mapping are fully
 * specified, so identical (inputs, seed) give identical counts on every
 * platform. A draw of u at or beyond the last cumulative value selects the
 * last outcome.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "qmeas/operator_core.hpp"
#include "qmeas/povm.hpp"

namespace qmeas {

/// Outcome counts with the shape of the sampled POVM: rows x cols grid for
/// bivariate sampling, rows x 1 for flat sampling. Row-major storage.
struct OutcomeCounts {
    std::vector<std::uint64_t> counts;
    Eigen::Index rows = 0;
    Eigen::Index cols = 1;
    bool is_grid = false;
    std::uint64_t shots = 0;

    std::uint64_t at(Eigen::Index m, Eigen::Index n) const;
    std::vector<std::uint64_t> row_sums() const;
    std::vector<std::uint64_t> col_sums() const;
};

OutcomeCounts sample_outcomes(const DensityOperator &rho, const Povm &povm,
                              std::uint64_t shots, std::uint64_t seed);
OutcomeCounts sample_outcomes(const DensityOperator &rho,
                              const BivariatePovm &biv, std::uint64_t shots,
                              std::uint64_t seed);

/// Outcome probabilities Tr(rho R_i), clamped at -tol::entry_clamp and
/// renormalized when the total drifts by less than tol::probability_drift.
std::vector<double> outcome_probabilities(const DensityOperator &rho,
                                          const Povm &povm);
std::vector<double> outcome_probabilities(const DensityOperator &rho,
                                          const BivariatePovm &biv);

struct EmpiricalReport {
    double max_abs_dev = 0.0; // max |count/shots - p_i|
    double chi_square = 0.0;  // Pearson statistic over included cells
    Eigen::Index dof = 0;     // included cells - 1
    Eigen::Index excluded_cells = 0;          // cells with p < 1e-12
    std::uint64_t excluded_count_total = 0;   // shots landing in excluded cells
};

/// Compares empirical counts against analytic probabilities. Cells with
/// p < 1e-12 are excluded from the chi-square statistic and reported
/// separately.
EmpiricalReport empirical_report(const OutcomeCounts &counts,
                                 const std::vector<double> &analytic);

} // namespace qmeas
