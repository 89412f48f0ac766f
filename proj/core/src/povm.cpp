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

#include "qmeas/povm.hpp"

#include <sstream>

namespace qmeas {

namespace {

double min_eigenvalue(const HermitianOperator &op) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(op.matrix(),
                                                        Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("min_eigenvalue: solver did not converge");
    }
    return solver.eigenvalues().minCoeff();
}

} // namespace

PovmDiagnosis diagnose_povm(const std::vector<HermitianOperator> &effects) {
    PovmDiagnosis diag;
    if (effects.empty()) {
        diag.message = "POVM must contain at least one effect";
        return diag;
    }
    const Eigen::Index d = effects.front().dim();
    for (std::size_t m = 0; m < effects.size(); ++m) {
        if (effects[m].dim() != d) {
            std::ostringstream msg;
            msg << "effect " << m << " has dimension " << effects[m].dim()
                << ", expected " << d;
            diag.failing_effect = static_cast<std::ptrdiff_t>(m);
            diag.message = msg.str();
            return diag;
        }
    }
    ComplexMatrix total = ComplexMatrix::Zero(d, d);
    for (std::size_t m = 0; m < effects.size(); ++m) {
        const double min_eig = min_eigenvalue(effects[m]);
        if (min_eig < -tol::psd) {
            std::ostringstream msg;
            msg << "effect " << m << " is not PSD: min eigenvalue " << min_eig;
            diag.failing_effect = static_cast<std::ptrdiff_t>(m);
            diag.min_eigenvalue = min_eig;
            diag.message = msg.str();
            return diag;
        }
        total += effects[m].matrix();
    }
    diag.completeness_residual =
        max_abs(ComplexMatrix(total - ComplexMatrix::Identity(d, d)));
    if (diag.completeness_residual > tol::completeness) {
        std::ostringstream msg;
        msg << "effects do not sum to identity: residual "
            << diag.completeness_residual;
        diag.message = msg.str();
        return diag;
    }
    diag.valid = true;
    diag.message = "valid POVM";
    return diag;
}

Povm::Povm(std::vector<HermitianOperator> effects,
           std::vector<std::string> labels)
    : effects_(std::move(effects)), labels_(std::move(labels)) {
    const PovmDiagnosis diag = diagnose_povm(effects_);
    if (!diag.valid) {
        throw ValidationError("Povm: " + diag.message);
    }
    if (!labels_.empty() && labels_.size() != effects_.size()) {
        throw ValidationError("Povm: label count does not match effect count");
    }
}

Povm validate_povm(std::vector<HermitianOperator> effects,
                   std::vector<std::string> labels) {
    return Povm(std::move(effects), std::move(labels));
}

Pvm::Pvm(Povm povm) : povm_(std::move(povm)) {
    const auto &effects = povm_.effects();
    for (std::size_t m = 0; m < effects.size(); ++m) {
        const ComplexMatrix &e = effects[m].matrix();
        const double idem = max_abs(ComplexMatrix(e * e - e));
        if (idem > tol::idempotent) {
            std::ostringstream msg;
            msg << "Pvm: effect " << m << " not idempotent: |E^2 - E| = " << idem;
            throw ValidationError(msg.str());
        }
        for (std::size_t n = m + 1; n < effects.size(); ++n) {
            const double cross = max_abs(ComplexMatrix(e * effects[n].matrix()));
            if (cross > tol::orthogonal) {
                std::ostringstream msg;
                msg << "Pvm: effects " << m << " and " << n
                    << " not orthogonal: |E_m E_n| = " << cross;
                throw ValidationError(msg.str());
            }
        }
    }
}

BivariatePovm::BivariatePovm(std::vector<HermitianOperator> grid,
                             Eigen::Index rows, Eigen::Index cols)
    : grid_(std::move(grid)), rows_(rows), cols_(cols) {
    if (rows_ < 1 || cols_ < 1 ||
        grid_.size() != static_cast<std::size_t>(rows_ * cols_)) {
        throw ValidationError("BivariatePovm: grid size does not match shape");
    }
    const PovmDiagnosis diag = diagnose_povm(grid_);
    if (!diag.valid) {
        throw ValidationError("BivariatePovm: " + diag.message);
    }
}

const HermitianOperator &BivariatePovm::at(Eigen::Index m, Eigen::Index n) const {
    if (m < 0 || m >= rows_ || n < 0 || n >= cols_) {
        throw DimensionError("BivariatePovm::at: index out of range");
    }
    return grid_[static_cast<std::size_t>(m * cols_ + n)];
}

Marginals marginals(const BivariatePovm &biv) {
    const Eigen::Index d = biv.dim();
    std::vector<HermitianOperator> row_effects;
    std::vector<HermitianOperator> col_effects;
    row_effects.reserve(static_cast<std::size_t>(biv.rows()));
    col_effects.reserve(static_cast<std::size_t>(biv.cols()));
    for (Eigen::Index m = 0; m < biv.rows(); ++m) {
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (Eigen::Index n = 0; n < biv.cols(); ++n) {
            sum += biv.at(m, n).matrix();
        }
        row_effects.emplace_back(std::move(sum));
    }
    for (Eigen::Index n = 0; n < biv.cols(); ++n) {
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (Eigen::Index m = 0; m < biv.rows(); ++m) {
            sum += biv.at(m, n).matrix();
        }
        col_effects.emplace_back(std::move(sum));
    }
    return Marginals{Povm(std::move(row_effects)), Povm(std::move(col_effects))};
}

std::variant<BivariatePovm, CommutatorWitness> joint_pvm_construct(const Pvm &a,
                                                                   const Pvm &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("joint_pvm_construct: dimension mismatch");
    }
    CommutatorWitness worst;
    for (std::size_t m = 0; m < a.size(); ++m) {
        for (std::size_t n = 0; n < b.size(); ++n) {
            const double norm = max_abs(
                commutator(a.effect(m).matrix(), b.effect(n).matrix()));
            if (norm > worst.commutator_norm) {
                worst = CommutatorWitness{m, n, norm};
            }
        }
    }
    if (worst.commutator_norm >= tol::commutator) {
        return worst;
    }
    std::vector<HermitianOperator> grid;
    grid.reserve(a.size() * b.size());
    for (std::size_t m = 0; m < a.size(); ++m) {
        for (std::size_t n = 0; n < b.size(); ++n) {
            grid.push_back(HermitianOperator::symmetrized(
                a.effect(m).matrix() * b.effect(n).matrix()));
        }
    }
    return BivariatePovm(std::move(grid), static_cast<Eigen::Index>(a.size()),
                         static_cast<Eigen::Index>(b.size()));
}

} // namespace qmeas
