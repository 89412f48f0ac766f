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

#include "qmeas/operator_core.hpp"

#include <cmath>
#include <sstream>

namespace qmeas {

double max_abs(const ComplexMatrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs(const RealMatrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b) {
    return a * b - b * a;
}

HermitianOperator::HermitianOperator(ComplexMatrix matrix)
    : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) {
        throw ValidationError("HermitianOperator: matrix must be square");
    }
    if (matrix_.rows() < 1) {
        throw ValidationError("HermitianOperator: dimension must be >= 1");
    }
    if (!matrix_.allFinite()) {
        throw ValidationError("HermitianOperator: entries must be finite");
    }
    const double dev = max_abs(ComplexMatrix(matrix_ - matrix_.adjoint()));
    if (dev > tol::hermitian) {
        std::ostringstream msg;
        msg << "HermitianOperator: adjoint deviation " << dev << " exceeds "
            << tol::hermitian;
        throw ValidationError(msg.str());
    }
}

HermitianOperator HermitianOperator::identity(Eigen::Index dim) {
    return HermitianOperator(ComplexMatrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::zero(Eigen::Index dim) {
    return HermitianOperator(ComplexMatrix::Zero(dim, dim));
}

HermitianOperator HermitianOperator::symmetrized(const ComplexMatrix &m) {
    return HermitianOperator(0.5 * (m + m.adjoint().eval()));
}

HermitianOperator operator+(const HermitianOperator &a,
                            const HermitianOperator &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("operator+: dimension mismatch");
    }
    return HermitianOperator(a.matrix_ + b.matrix_);
}

HermitianOperator operator-(const HermitianOperator &a,
                            const HermitianOperator &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("operator-: dimension mismatch");
    }
    return HermitianOperator(a.matrix_ - b.matrix_);
}

HermitianOperator operator*(double s, const HermitianOperator &a) {
    return HermitianOperator(s * a.matrix_);
}

DensityOperator::DensityOperator(HermitianOperator op) : op_(std::move(op)) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(op_.matrix(),
                                                        Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("DensityOperator: eigenvalue computation failed");
    }
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -tol::psd) {
        std::ostringstream msg;
        msg << "DensityOperator: min eigenvalue " << min_eig << " below "
            << -tol::psd;
        throw ValidationError(msg.str());
    }
    const double tr = op_.trace();
    if (std::abs(tr - 1.0) > tol::trace_one) {
        std::ostringstream msg;
        msg << "DensityOperator: trace " << tr << " not 1 within "
            << tol::trace_one;
        throw ValidationError(msg.str());
    }
}

DensityOperator DensityOperator::pure(const ComplexVector &v) {
    const double n = v.norm();
    if (!(n > 0.0) || !v.allFinite()) {
        throw ValidationError("DensityOperator::pure: vector must be finite and nonzero");
    }
    const ComplexVector u = v / n;
    return DensityOperator(HermitianOperator(u * u.adjoint()));
}

DensityOperator DensityOperator::maximally_mixed(Eigen::Index dim) {
    return DensityOperator(HermitianOperator(
        ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim)));
}

SpectralDecomposition::SpectralDecomposition(RealVector eigenvalues,
                                             ComplexMatrix eigenvectors,
                                             const ComplexMatrix &source)
    : eigenvalues_(std::move(eigenvalues)), eigenvectors_(std::move(eigenvectors)) {
    const Eigen::Index d = eigenvalues_.size();
    if (eigenvectors_.rows() != d || eigenvectors_.cols() != d) {
        throw DimensionError("SpectralDecomposition: shape mismatch");
    }
    for (Eigen::Index k = 1; k < d; ++k) {
        if (eigenvalues_(k) < eigenvalues_(k - 1)) {
            throw ValidationError("SpectralDecomposition: eigenvalues not ascending");
        }
    }
    const ComplexMatrix gram =
        eigenvectors_.adjoint() * eigenvectors_ - ComplexMatrix::Identity(d, d);
    if (max_abs(gram) > tol::orthonormal) {
        throw NumericError("SpectralDecomposition: eigenvectors not orthonormal");
    }
    const ComplexMatrix recon = eigenvectors_ *
                                eigenvalues_.asDiagonal().toDenseMatrix().cast<Complex>() *
                                eigenvectors_.adjoint();
    if (max_abs(ComplexMatrix(recon - source)) > tol::reconstruction) {
        throw NumericError("SpectralDecomposition: reconstruction residual exceeds tolerance");
    }
}

SpectralDecomposition eigh(const HermitianOperator &op) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(op.matrix());
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigh: solver did not converge");
    }
    return SpectralDecomposition(solver.eigenvalues(), solver.eigenvectors(),
                                 op.matrix());
}

double expectation(const DensityOperator &rho, const HermitianOperator &op) {
    if (rho.dim() != op.dim()) {
        throw DimensionError("expectation: dimension mismatch");
    }
    const Complex t = (rho.matrix() * op.matrix()).trace();
    if (std::abs(t.imag()) >= tol::imag_residue) {
        std::ostringstream msg;
        msg << "expectation: imaginary residue " << t.imag();
        throw NumericError(msg.str());
    }
    return t.real();
}

namespace {

double standard_deviation(const DensityOperator &rho, const HermitianOperator &a) {
    const double mean = expectation(rho, a);
    const HermitianOperator squared(ComplexMatrix(a.matrix() * a.matrix()));
    const double var = expectation(rho, squared) - mean * mean;
    return std::sqrt(std::max(var, 0.0));
}

} // namespace

HkrReport hkr_report(const DensityOperator &rho, const HermitianOperator &a,
                     const HermitianOperator &b) {
    if (rho.dim() != a.dim() || a.dim() != b.dim()) {
        throw DimensionError("hkr_report: dimension mismatch");
    }
    HkrReport report;
    report.delta_a = standard_deviation(rho, a);
    report.delta_b = standard_deviation(rho, b);
    const Complex comm_mean =
        (rho.matrix() * commutator(a.matrix(), b.matrix())).trace();
    report.bound = 0.5 * std::abs(comm_mean);
    report.satisfied =
        report.delta_a * report.delta_b >= report.bound - tol::hkr_slack;
    return report;
}

} // namespace qmeas
