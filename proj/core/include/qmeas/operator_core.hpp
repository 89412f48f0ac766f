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
 * Small dense complex-Hermitian linear algebra: validated operator and state
 * types, spectral decomposition, expectation values, and the
 * Heisenberg-Kennard-Robertson report. Design envelope is dimension <= ~64.
 */

#pragma once

#include <Eigen/Dense>
#include <complex>

#include "qmeas/errors.hpp"
#include "qmeas/tolerances.hpp"

namespace qmeas {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Largest absolute entry of a matrix; zero for empty matrices.
double max_abs(const ComplexMatrix &m);
double max_abs(const RealMatrix &m);

/// [A, B]_- = AB - BA.
ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b);

/// A dim x dim complex matrix equal to its adjoint within tol::hermitian.
/// Immutable after construction.
class HermitianOperator {
  public:
    explicit HermitianOperator(ComplexMatrix matrix);

    const ComplexMatrix &matrix() const noexcept { return matrix_; }
    Eigen::Index dim() const noexcept { return matrix_.rows(); }

    double trace() const { return matrix_.trace().real(); }

    static HermitianOperator identity(Eigen::Index dim);
    static HermitianOperator zero(Eigen::Index dim);

    /// Wraps (m + m^dagger)/2. Used where a product of commuting Hermitian
    /// operators is Hermitian in exact arithmetic but carries roundoff.
    static HermitianOperator symmetrized(const ComplexMatrix &m);

    friend HermitianOperator operator+(const HermitianOperator &a,
                                       const HermitianOperator &b);
    friend HermitianOperator operator-(const HermitianOperator &a,
                                       const HermitianOperator &b);
    friend HermitianOperator operator*(double s, const HermitianOperator &a);

  private:
    ComplexMatrix matrix_;
};

/// Positive semidefinite (min eigenvalue >= -tol::psd), unit trace.
class DensityOperator {
  public:
    explicit DensityOperator(HermitianOperator op);

    const HermitianOperator &op() const noexcept { return op_; }
    const ComplexMatrix &matrix() const noexcept { return op_.matrix(); }
    Eigen::Index dim() const noexcept { return op_.dim(); }

    /// |v><v| / <v|v>.
    static DensityOperator pure(const ComplexVector &v);
    /// I / dim.
    static DensityOperator maximally_mixed(Eigen::Index dim);

  private:
    HermitianOperator op_;
};

/// Ascending eigenvalues with orthonormal eigenvector columns. Construction
/// verifies orthonormality and that sum_k e_k |v_k><v_k| reconstructs the
/// source matrix within tol::reconstruction. Within a degenerate eigenspace
/// any orthonormal basis may be returned; callers must not rely on it.
class SpectralDecomposition {
  public:
    SpectralDecomposition(RealVector eigenvalues, ComplexMatrix eigenvectors,
                          const ComplexMatrix &source);

    const RealVector &eigenvalues() const noexcept { return eigenvalues_; }
    /// Column k is the unit eigenvector for eigenvalues()[k].
    const ComplexMatrix &eigenvectors() const noexcept { return eigenvectors_; }
    ComplexVector eigenvector(Eigen::Index k) const { return eigenvectors_.col(k); }
    Eigen::Index dim() const noexcept { return eigenvalues_.size(); }

  private:
    RealVector eigenvalues_;
    ComplexMatrix eigenvectors_;
};

/// Hermitian eigendecomposition. Deterministic for identical input.
SpectralDecomposition eigh(const HermitianOperator &op);

/// Tr(rho * op). Throws NumericError if the imaginary residue of the trace
/// exceeds tol::imag_residue.
double expectation(const DensityOperator &rho, const HermitianOperator &op);

struct HkrReport {
    double delta_a = 0.0;
    double delta_b = 0.0;
    double bound = 0.0; // (1/2)|<[A,B]_->|
    bool satisfied = false;
};

/// Standard-deviation uncertainty product against half the absolute
/// expectation of the commutator.
HkrReport hkr_report(const DensityOperator &rho, const HermitianOperator &a,
                     const HermitianOperator &b);

} // namespace qmeas
