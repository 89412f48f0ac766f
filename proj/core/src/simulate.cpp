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

#include "qmeas/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace qmeas {

namespace {

// p < 1e-12 cells are excluded from the chi-square statistic.
constexpr double kChiSquareCellFloor = 1e-12;

std::vector<double> probabilities_from_effects(
    const DensityOperator &rho, const std::vector<HermitianOperator> &effects) {
    std::vector<double> p;
    p.reserve(effects.size());
    double total = 0.0;
    for (std::size_t i = 0; i < effects.size(); ++i) {
        double value = expectation(rho, effects[i]);
        if (value < 0.0) {
            if (value < -tol::entry_clamp) {
                std::ostringstream msg;
                msg << "outcome_probabilities: probability " << i << " = " << value;
                throw NumericError(msg.str());
            }
            value = 0.0;
        }
        p.push_back(value);
        total += value;
    }
    if (std::abs(total - 1.0) >= tol::probability_drift) {
        std::ostringstream msg;
        msg << "outcome_probabilities: total probability " << total
            << " drifts beyond " << tol::probability_drift;
        throw NumericError(msg.str());
    }
    for (double &value : p) {
        value /= total;
    }
    return p;
}

// Uniform double in [0, 1) from the top 53 bits of the engine output.
double next_uniform(std::mt19937_64 &engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

std::vector<std::uint64_t> draw_counts(const std::vector<double> &p,
                                       std::uint64_t shots, std::uint64_t seed) {
    std::vector<double> cdf(p.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        cdf[i] = acc;
    }
    std::vector<std::uint64_t> counts(p.size(), 0);
    std::mt19937_64 engine(seed);
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        const double u = next_uniform(engine);
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t index = it == cdf.end()
                                      ? p.size() - 1
                                      : static_cast<std::size_t>(it - cdf.begin());
        ++counts[index];
    }
    return counts;
}

} // namespace

std::uint64_t OutcomeCounts::at(Eigen::Index m, Eigen::Index n) const {
    if (m < 0 || m >= rows || n < 0 || n >= cols) {
        throw DimensionError("OutcomeCounts::at: index out of range");
    }
    return counts[static_cast<std::size_t>(m * cols + n)];
}

std::vector<std::uint64_t> OutcomeCounts::row_sums() const {
    std::vector<std::uint64_t> sums(static_cast<std::size_t>(rows), 0);
    for (Eigen::Index m = 0; m < rows; ++m) {
        for (Eigen::Index n = 0; n < cols; ++n) {
            sums[static_cast<std::size_t>(m)] += at(m, n);
        }
    }
    return sums;
}

std::vector<std::uint64_t> OutcomeCounts::col_sums() const {
    std::vector<std::uint64_t> sums(static_cast<std::size_t>(cols), 0);
    for (Eigen::Index n = 0; n < cols; ++n) {
        for (Eigen::Index m = 0; m < rows; ++m) {
            sums[static_cast<std::size_t>(n)] += at(m, n);
        }
    }
    return sums;
}

std::vector<double> outcome_probabilities(const DensityOperator &rho,
                                          const Povm &povm) {
    if (rho.dim() != povm.dim()) {
        throw DimensionError("outcome_probabilities: dimension mismatch");
    }
    return probabilities_from_effects(rho, povm.effects());
}

std::vector<double> outcome_probabilities(const DensityOperator &rho,
                                          const BivariatePovm &biv) {
    if (rho.dim() != biv.dim()) {
        throw DimensionError("outcome_probabilities: dimension mismatch");
    }
    return probabilities_from_effects(rho, biv.grid());
}

OutcomeCounts sample_outcomes(const DensityOperator &rho, const Povm &povm,
                              std::uint64_t shots, std::uint64_t seed) {
    OutcomeCounts out;
    out.counts = draw_counts(outcome_probabilities(rho, povm), shots, seed);
    out.rows = static_cast<Eigen::Index>(povm.size());
    out.cols = 1;
    out.is_grid = false;
    out.shots = shots;
    return out;
}

OutcomeCounts sample_outcomes(const DensityOperator &rho,
                              const BivariatePovm &biv, std::uint64_t shots,
                              std::uint64_t seed) {
    OutcomeCounts out;
    out.counts = draw_counts(outcome_probabilities(rho, biv), shots, seed);
    out.rows = biv.rows();
    out.cols = biv.cols();
    out.is_grid = true;
    out.shots = shots;
    return out;
}

EmpiricalReport empirical_report(const OutcomeCounts &counts,
                                 const std::vector<double> &analytic) {
    if (counts.counts.size() != analytic.size()) {
        throw DimensionError("empirical_report: shape mismatch");
    }
    if (counts.shots == 0) {
        throw ValidationError("empirical_report: shots must be positive");
    }
    const double shots = static_cast<double>(counts.shots);
    EmpiricalReport report;
    Eigen::Index included = 0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double freq = static_cast<double>(counts.counts[i]) / shots;
        report.max_abs_dev = std::max(report.max_abs_dev,
                                      std::abs(freq - analytic[i]));
        if (analytic[i] < kChiSquareCellFloor) {
            ++report.excluded_cells;
            report.excluded_count_total += counts.counts[i];
            continue;
        }
        const double expected = shots * analytic[i];
        const double diff = static_cast<double>(counts.counts[i]) - expected;
        report.chi_square += diff * diff / expected;
        ++included;
    }
    report.dof = std::max<Eigen::Index>(included - 1, 0);
    return report;
}

} // namespace qmeas
