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
 * Non-ideal measurement analysis: stochastic-matrix recovery of the
 * non-ideality relation R_m = sum_m' lambda_mm' M_m', average row-entropy
 * non-ideality measures, the Martens inequality, entropic uncertainty,
 * the combined entropic inequality, and the unbiased variance decomposition.
 *
 * Natural logarithms throughout; 0 ln 0 = 0.
 */

#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "qmeas/operator_core.hpp"
#include "qmeas/povm.hpp"

namespace qmeas {

/// Column-stochastic matrix of conditional outcome probabilities.
/// Entries in [-tol::entry_clamp, 0) are clamped to zero on construction;
/// more negative entries and column-sum drift beyond tol::column_sum are
/// rejected.
class StochasticMatrix {
  public:
    explicit StochasticMatrix(RealMatrix entries);

    const RealMatrix &entries() const noexcept { return entries_; }
    double operator()(Eigen::Index m, Eigen::Index mp) const {
        return entries_(m, mp);
    }
    Eigen::Index rows() const noexcept { return entries_.rows(); }
    Eigen::Index cols() const noexcept { return entries_.cols(); }

    static StochasticMatrix identity(Eigen::Index n);

  private:
    RealMatrix entries_;
};

/// A standard observable A = sum_m a_m M_m: a PVM with one real outcome
/// value per effect.
class ValuedObservable {
  public:
    ValuedObservable(Pvm pvm, std::vector<double> values);

    const Pvm &pvm() const noexcept { return pvm_; }
    const std::vector<double> &values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    Eigen::Index dim() const noexcept { return pvm_.dim(); }

    /// sum_m a_m M_m.
    HermitianOperator to_operator() const;

    /// All effects rank one and all values pairwise distinct.
    bool is_maximal() const;

  private:
    Pvm pvm_;
    std::vector<double> values_;
};

enum class RecoveryMethod {
    Auto,         ///< Closed form when the target is maximal, else least squares.
    ClosedForm,   ///< lambda_mm' = <a_m'|R_m|a_m'>; requires a maximal target.
    LeastSquares, ///< Column-stochastic least squares; any PVM target.
};

/// Result of recovering lambda from R_m = sum_m' lambda_mm' M_m'.
/// `matrix` is empty when the max-entry reconstruction residual reaches
/// tol::infeasible, i.e. R is not a non-ideal measurement of the target.
struct NonidealityRecovery {
    std::optional<StochasticMatrix> matrix;
    double residual = 0.0;

    bool feasible() const noexcept { return matrix.has_value(); }
};

NonidealityRecovery recover_nonideality(const Povm &r, const Pvm &target,
                                        RecoveryMethod method = RecoveryMethod::Auto);

/// Average row entropy J of a square non-ideality matrix:
/// J = -(1/N) sum_mm' lambda_mm' ln(lambda_mm' / sum_m'' lambda_mm'').
/// 0 for the identity, ln N for the uninformative uniform matrix.
double row_entropy(const StochasticMatrix &lambda);

/// -2 ln max_mn |<a_m|b_n>| over the eigenvectors of two maximal standard
/// observables. State independent; zero iff the observables share an
/// eigenvector.
double martens_bound(const ValuedObservable &a, const ValuedObservable &b);

struct NonidealityReport {
    StochasticMatrix lambda;
    StochasticMatrix mu;
    double j_lambda = 0.0;
    double j_mu = 0.0;
    double martens_bound = 0.0;
    bool satisfied = false;
    double residual_lambda = 0.0;
    double residual_mu = 0.0;
};

/// A bivariate POVM whose marginal did not decompose over the target
/// observable within tol::infeasible.
struct JointInfeasible {
    std::string marginal; // "row" or "column"
    double residual = 0.0;
};

/// Recovers both non-ideality matrices from the marginals of `biv`, computes
/// J_(lambda), J_(mu) and the Martens bound, and checks
/// J_(lambda) + J_(mu) >= bound within tol::inequality_slack.
std::variant<NonidealityReport, JointInfeasible>
joint_nonideal_report(const BivariatePovm &biv, const ValuedObservable &a,
                      const ValuedObservable &b);

struct EntropicUrReport {
    double h_a = 0.0;
    double h_b = 0.0;
    double bound = 0.0;
    bool satisfied = false;
};

/// Shannon entropies of the outcome distributions of two maximal observables
/// in state rho against the entropic uncertainty bound.
EntropicUrReport entropic_ur_report(const DensityOperator &rho,
                                    const ValuedObservable &a,
                                    const ValuedObservable &b);

/// True iff sum_m a_m lambda_mm' = a_m' within tol::unbiased for every
/// column m'. Requires a square matrix with values.size() == N.
bool unbiasedness_check(const StochasticMatrix &lambda,
                        const std::vector<double> &values);

struct VarianceDecomposition {
    double var_r = 0.0;       // variance of the non-ideal distribution r = lambda p
    double var_p = 0.0;       // variance of the ideal distribution p
    double noise_term = 0.0;  // sum_m' Delta_m'^2 p_m'
    bool identity_holds = false;
};

/// Splits the non-ideal variance into the ideal variance plus the
/// measurement-noise term. Requires an unbiased channel; throws
/// ValidationError naming the first biased column otherwise.
VarianceDecomposition variance_decomposition(const StochasticMatrix &lambda,
                                             const std::vector<double> &values,
                                             const std::vector<double> &p);

struct GeneralizedHeisenbergReport {
    double lhs = 0.0; // Delta({r_m}) * Delta({s_n})
    double mid = 0.0; // Delta A * Delta B in rho
    double rhs = 0.0; // (1/2)|<[A,B]_->|
    bool satisfied = false;
};

/// Chain Delta({r_m}) Delta({s_n}) >= Delta A Delta B >= (1/2)|<[A,B]_->|
/// for two unbiased non-ideality channels applied to the outcome
/// distributions of A and B in rho.
GeneralizedHeisenbergReport generalized_heisenberg_report(
    const DensityOperator &rho, const StochasticMatrix &lambda_a,
    const std::vector<double> &values_a, const StochasticMatrix &lambda_b,
    const std::vector<double> &values_b, const ValuedObservable &a,
    const ValuedObservable &b);

struct CombinedEntropicReport {
    double sum = 0.0;   // H_A + J_(lambda) + H_B + J_(mu)
    double bound = 0.0; // -4 ln max_mn |<a_m|b_n>|
    bool satisfied = false;
};

/// Entropic uncertainty and Martens inequality added into one bound.
std::variant<CombinedEntropicReport, JointInfeasible>
combined_entropic_report(const DensityOperator &rho, const BivariatePovm &biv,
                         const ValuedObservable &a, const ValuedObservable &b);

} // namespace qmeas
