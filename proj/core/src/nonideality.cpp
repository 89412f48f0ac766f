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

#include "qmeas/nonideality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qmeas {

StochasticMatrix::StochasticMatrix(RealMatrix entries)
    : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.cols() < 1) {
        throw ValidationError("StochasticMatrix: must be nonempty");
    }
    if (!entries_.allFinite()) {
        throw ValidationError("StochasticMatrix: entries must be finite");
    }
    for (Eigen::Index m = 0; m < entries_.rows(); ++m) {
        for (Eigen::Index mp = 0; mp < entries_.cols(); ++mp) {
            double &x = entries_(m, mp);
            if (x < 0.0) {
                if (x < -tol::entry_clamp) {
                    std::ostringstream msg;
                    msg << "StochasticMatrix: entry (" << m << "," << mp
                        << ") = " << x << " is negative";
                    throw ValidationError(msg.str());
                }
                x = 0.0;
            }
        }
    }
    for (Eigen::Index mp = 0; mp < entries_.cols(); ++mp) {
        const double sum = entries_.col(mp).sum();
        if (std::abs(sum - 1.0) > tol::column_sum) {
            std::ostringstream msg;
            msg << "StochasticMatrix: column " << mp << " sums to " << sum;
            throw ValidationError(msg.str());
        }
    }
}

StochasticMatrix StochasticMatrix::identity(Eigen::Index n) {
    return StochasticMatrix(RealMatrix::Identity(n, n));
}

ValuedObservable::ValuedObservable(Pvm pvm, std::vector<double> values)
    : pvm_(std::move(pvm)), values_(std::move(values)) {
    if (values_.size() != pvm_.size()) {
        throw ValidationError(
            "ValuedObservable: value count does not match effect count");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw ValidationError("ValuedObservable: values must be finite");
        }
    }
}

HermitianOperator ValuedObservable::to_operator() const {
    const Eigen::Index d = dim();
    ComplexMatrix op = ComplexMatrix::Zero(d, d);
    for (std::size_t m = 0; m < size(); ++m) {
        op += values_[m] * pvm_.effect(m).matrix();
    }
    return HermitianOperator(std::move(op));
}

bool ValuedObservable::is_maximal() const {
    for (const auto &effect : pvm_.effects()) {
        if (std::abs(effect.trace() - 1.0) > tol::idempotent) {
            return false;
        }
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        for (std::size_t j = i + 1; j < values_.size(); ++j) {
            if (values_[i] == values_[j]) {
                return false;
            }
        }
    }
    return true;
}

namespace {

// Unit eigenvector of a rank-1 projector (the eigenvalue-1 direction).
ComplexVector projector_direction(const HermitianOperator &effect) {
    const SpectralDecomposition decomp = eigh(effect);
    return decomp.eigenvector(decomp.dim() - 1);
}

std::vector<ComplexVector> eigenvector_basis(const Pvm &pvm) {
    std::vector<ComplexVector> vectors;
    vectors.reserve(pvm.size());
    for (const auto &effect : pvm.effects()) {
        vectors.push_back(projector_direction(effect));
    }
    return vectors;
}

bool all_rank_one(const Pvm &pvm) {
    for (const auto &effect : pvm.effects()) {
        if (std::abs(effect.trace() - 1.0) > tol::idempotent) {
            return false;
        }
    }
    return true;
}

// Euclidean projection of v onto the probability simplex.
RealVector project_to_simplex(const RealVector &v) {
    const Eigen::Index n = v.size();
    std::vector<double> sorted(v.data(), v.data() + n);
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        cumulative += sorted[static_cast<std::size_t>(k)];
        const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
        if (sorted[static_cast<std::size_t>(k)] - candidate > 0.0) {
            theta = candidate;
        }
    }
    RealVector out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out(i) = std::max(v(i) - theta, 0.0);
    }
    return out;
}

double reconstruction_residual(const Povm &r, const Pvm &target,
                               const RealMatrix &lambda) {
    const Eigen::Index d = r.dim();
    double residual = 0.0;
    for (std::size_t m = 0; m < r.size(); ++m) {
        ComplexMatrix recon = ComplexMatrix::Zero(d, d);
        for (std::size_t mp = 0; mp < target.size(); ++mp) {
            recon += lambda(static_cast<Eigen::Index>(m),
                            static_cast<Eigen::Index>(mp)) *
                     target.effect(mp).matrix();
        }
        residual = std::max(residual,
                            max_abs(ComplexMatrix(r.effect(m).matrix() - recon)));
    }
    return residual;
}

// Clamp to [0, 1] and renormalize columns whose drift stays below
// tol::column_sum.
void tidy_columns(RealMatrix &lambda) {
    lambda = lambda.cwiseMax(0.0).cwiseMin(1.0);
    for (Eigen::Index mp = 0; mp < lambda.cols(); ++mp) {
        const double sum = lambda.col(mp).sum();
        if (sum > 0.0 && std::abs(sum - 1.0) < tol::column_sum) {
            lambda.col(mp) /= sum;
        }
    }
}

} // namespace

NonidealityRecovery recover_nonideality(const Povm &r, const Pvm &target,
                                        RecoveryMethod method) {
    if (r.dim() != target.dim()) {
        throw DimensionError("recover_nonideality: dimension mismatch");
    }
    const bool maximal = all_rank_one(target);
    if (method == RecoveryMethod::ClosedForm && !maximal) {
        throw ValidationError(
            "recover_nonideality: closed form requires a maximal (rank-1) target");
    }
    const bool use_closed_form =
        method == RecoveryMethod::ClosedForm ||
        (method == RecoveryMethod::Auto && maximal);

    const Eigen::Index rows = static_cast<Eigen::Index>(r.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(target.size());
    RealMatrix lambda(rows, cols);

    if (use_closed_form) {
        const auto basis = eigenvector_basis(target);
        for (Eigen::Index m = 0; m < rows; ++m) {
            const ComplexMatrix &rm = r.effect(static_cast<std::size_t>(m)).matrix();
            for (Eigen::Index mp = 0; mp < cols; ++mp) {
                const ComplexVector &v = basis[static_cast<std::size_t>(mp)];
                lambda(m, mp) = (v.adjoint() * rm * v).value().real();
            }
        }
    } else {
        // The target effects are Frobenius-orthogonal, so the constrained
        // least squares separates into one simplex projection per column of
        // lambda, seeded by the orthogonal-projection coefficients
        // Tr(R_m M_m') / Tr(M_m').
        RealVector ranks(cols);
        for (Eigen::Index mp = 0; mp < cols; ++mp) {
            ranks(mp) = target.effect(static_cast<std::size_t>(mp)).trace();
        }
        RealMatrix coeffs(rows, cols);
        for (Eigen::Index m = 0; m < rows; ++m) {
            const ComplexMatrix &rm = r.effect(static_cast<std::size_t>(m)).matrix();
            for (Eigen::Index mp = 0; mp < cols; ++mp) {
                const ComplexMatrix &t =
                    target.effect(static_cast<std::size_t>(mp)).matrix();
                coeffs(m, mp) = ranks(mp) > 0.5
                                    ? (rm * t).trace().real() / ranks(mp)
                                    : 0.0;
            }
        }
        for (Eigen::Index mp = 0; mp < cols; ++mp) {
            if (ranks(mp) > 0.5) {
                lambda.col(mp) = project_to_simplex(coeffs.col(mp));
            } else {
                // A zero target effect constrains nothing; any stochastic
                // column reconstructs it exactly.
                lambda.col(mp).setConstant(1.0 / static_cast<double>(rows));
            }
        }
    }

    tidy_columns(lambda);
    NonidealityRecovery result;
    result.residual = reconstruction_residual(r, target, lambda);
    if (result.residual < tol::infeasible) {
        result.matrix = StochasticMatrix(lambda);
    }
    return result;
}

double row_entropy(const StochasticMatrix &lambda) {
    if (lambda.rows() != lambda.cols()) {
        throw ValidationError("row_entropy: matrix must be square");
    }
    const Eigen::Index n = lambda.rows();
    double total = 0.0;
    for (Eigen::Index m = 0; m < n; ++m) {
        const double row_sum = lambda.entries().row(m).sum();
        if (row_sum <= 0.0) {
            continue;
        }
        for (Eigen::Index mp = 0; mp < n; ++mp) {
            const double x = lambda(m, mp);
            if (x > 0.0) {
                total += x * std::log(x / row_sum);
            }
        }
    }
    const double j = -total / static_cast<double>(n);
    return j <= 0.0 ? 0.0 : j;
}

double martens_bound(const ValuedObservable &a, const ValuedObservable &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("martens_bound: dimension mismatch");
    }
    if (!a.is_maximal() || !b.is_maximal()) {
        throw ValidationError("martens_bound: both observables must be maximal");
    }
    const auto basis_a = eigenvector_basis(a.pvm());
    const auto basis_b = eigenvector_basis(b.pvm());
    double max_overlap = 0.0;
    for (const auto &va : basis_a) {
        for (const auto &vb : basis_b) {
            max_overlap = std::max(max_overlap, std::abs(va.dot(vb)));
        }
    }
    max_overlap = std::min(max_overlap, 1.0);
    if (max_overlap <= 0.0) {
        throw NumericError("martens_bound: vanishing maximal overlap");
    }
    const double bound = -2.0 * std::log(max_overlap);
    const double d = static_cast<double>(a.dim());
    if (bound < -tol::inequality_slack ||
        bound > 2.0 * std::log(d) + tol::inequality_slack) {
        std::ostringstream msg;
        msg << "martens_bound: value " << bound << " outside [0, ln d^2]";
        throw NumericError(msg.str());
    }
    return bound <= 0.0 ? 0.0 : bound;
}

std::variant<NonidealityReport, JointInfeasible>
joint_nonideal_report(const BivariatePovm &biv, const ValuedObservable &a,
                      const ValuedObservable &b) {
    if (biv.dim() != a.dim() || biv.dim() != b.dim()) {
        throw DimensionError("joint_nonideal_report: dimension mismatch");
    }
    const Marginals margs = marginals(biv);
    const NonidealityRecovery rec_lambda = recover_nonideality(margs.row, a.pvm());
    if (!rec_lambda.feasible()) {
        return JointInfeasible{"row", rec_lambda.residual};
    }
    const NonidealityRecovery rec_mu = recover_nonideality(margs.col, b.pvm());
    if (!rec_mu.feasible()) {
        return JointInfeasible{"column", rec_mu.residual};
    }
    NonidealityReport report{*rec_lambda.matrix, *rec_mu.matrix};
    report.residual_lambda = rec_lambda.residual;
    report.residual_mu = rec_mu.residual;
    report.j_lambda = row_entropy(report.lambda);
    report.j_mu = row_entropy(report.mu);
    report.martens_bound = martens_bound(a, b);
    report.satisfied = report.j_lambda + report.j_mu >=
                       report.martens_bound - tol::inequality_slack;
    return report;
}

namespace {

double shannon_entropy(const std::vector<double> &p) {
    double h = 0.0;
    for (double x : p) {
        if (x > 0.0) {
            h -= x * std::log(x);
        }
    }
    return std::max(h, 0.0);
}

std::vector<double> outcome_distribution(const DensityOperator &rho,
                                         const Pvm &pvm) {
    std::vector<double> p;
    p.reserve(pvm.size());
    for (const auto &effect : pvm.effects()) {
        p.push_back(std::max(expectation(rho, effect), 0.0));
    }
    return p;
}

std::optional<Eigen::Index> first_biased_column(const StochasticMatrix &lambda,
                                                const std::vector<double> &values) {
    for (Eigen::Index mp = 0; mp < lambda.cols(); ++mp) {
        double mean = 0.0;
        for (Eigen::Index m = 0; m < lambda.rows(); ++m) {
            mean += values[static_cast<std::size_t>(m)] * lambda(m, mp);
        }
        if (std::abs(mean - values[static_cast<std::size_t>(mp)]) >= tol::unbiased) {
            return mp;
        }
    }
    return std::nullopt;
}

void check_channel_shape(const StochasticMatrix &lambda,
                         const std::vector<double> &values) {
    if (lambda.rows() != lambda.cols() ||
        values.size() != static_cast<std::size_t>(lambda.rows())) {
        throw DimensionError(
            "unbiasedness_check: shape mismatch (square matrix with one value per outcome required)");
    }
}

double distribution_std(const std::vector<double> &values,
                        const RealVector &dist) {
    double mean = 0.0;
    double second = 0.0;
    for (Eigen::Index m = 0; m < dist.size(); ++m) {
        const double a = values[static_cast<std::size_t>(m)];
        mean += a * dist(m);
        second += a * a * dist(m);
    }
    return std::sqrt(std::max(second - mean * mean, 0.0));
}

} // namespace

bool unbiasedness_check(const StochasticMatrix &lambda,
                        const std::vector<double> &values) {
    check_channel_shape(lambda, values);
    return !first_biased_column(lambda, values).has_value();
}

VarianceDecomposition variance_decomposition(const StochasticMatrix &lambda,
                                             const std::vector<double> &values,
                                             const std::vector<double> &p) {
    check_channel_shape(lambda, values);
    if (p.size() != static_cast<std::size_t>(lambda.cols())) {
        throw DimensionError("variance_decomposition: probability vector shape mismatch");
    }
    if (const auto biased = first_biased_column(lambda, values)) {
        std::ostringstream msg;
        msg << "variance_decomposition: channel is biased in column " << *biased;
        throw ValidationError(msg.str());
    }
    RealVector pv(static_cast<Eigen::Index>(p.size()));
    double p_sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < -tol::entry_clamp) {
            throw ValidationError("variance_decomposition: negative probability");
        }
        pv(static_cast<Eigen::Index>(i)) = std::max(p[i], 0.0);
        p_sum += pv(static_cast<Eigen::Index>(i));
    }
    if (std::abs(p_sum - 1.0) > tol::probability_drift) {
        throw ValidationError("variance_decomposition: probabilities do not sum to 1");
    }

    const RealVector r = lambda.entries() * pv;
    VarianceDecomposition out;
    const double std_r = distribution_std(values, r);
    const double std_p = distribution_std(values, pv);
    out.var_r = std_r * std_r;
    out.var_p = std_p * std_p;
    for (Eigen::Index mp = 0; mp < lambda.cols(); ++mp) {
        double mean = 0.0;
        double second = 0.0;
        for (Eigen::Index m = 0; m < lambda.rows(); ++m) {
            const double a = values[static_cast<std::size_t>(m)];
            mean += a * lambda(m, mp);
            second += a * a * lambda(m, mp);
        }
        out.noise_term += (second - mean * mean) * pv(mp);
    }
    out.identity_holds =
        std::abs(out.var_r - out.var_p - out.noise_term) < tol::inequality_slack;
    if (out.var_r < out.var_p - tol::entry_clamp) {
        throw NumericError("variance_decomposition: var_r < var_p");
    }
    return out;
}

EntropicUrReport entropic_ur_report(const DensityOperator &rho,
                                    const ValuedObservable &a,
                                    const ValuedObservable &b) {
    if (rho.dim() != a.dim() || rho.dim() != b.dim()) {
        throw DimensionError("entropic_ur_report: dimension mismatch");
    }
    EntropicUrReport report;
    report.bound = martens_bound(a, b);
    report.h_a = shannon_entropy(outcome_distribution(rho, a.pvm()));
    report.h_b = shannon_entropy(outcome_distribution(rho, b.pvm()));
    report.satisfied =
        report.h_a + report.h_b >= report.bound - tol::inequality_slack;
    return report;
}

GeneralizedHeisenbergReport generalized_heisenberg_report(
    const DensityOperator &rho, const StochasticMatrix &lambda_a,
    const std::vector<double> &values_a, const StochasticMatrix &lambda_b,
    const std::vector<double> &values_b, const ValuedObservable &a,
    const ValuedObservable &b) {
    if (rho.dim() != a.dim() || rho.dim() != b.dim()) {
        throw DimensionError("generalized_heisenberg_report: dimension mismatch");
    }
    if (static_cast<std::size_t>(lambda_a.cols()) != a.size() ||
        static_cast<std::size_t>(lambda_b.cols()) != b.size()) {
        throw DimensionError(
            "generalized_heisenberg_report: channel does not match observable outcomes");
    }
    if (!unbiasedness_check(lambda_a, values_a)) {
        throw ValidationError("generalized_heisenberg_report: channel A is biased");
    }
    if (!unbiasedness_check(lambda_b, values_b)) {
        throw ValidationError("generalized_heisenberg_report: channel B is biased");
    }

    const auto to_vector = [](const std::vector<double> &p) {
        RealVector v(static_cast<Eigen::Index>(p.size()));
        for (std::size_t i = 0; i < p.size(); ++i) {
            v(static_cast<Eigen::Index>(i)) = p[i];
        }
        return v;
    };
    const RealVector p_a = to_vector(outcome_distribution(rho, a.pvm()));
    const RealVector p_b = to_vector(outcome_distribution(rho, b.pvm()));
    const RealVector r = lambda_a.entries() * p_a;
    const RealVector s = lambda_b.entries() * p_b;

    GeneralizedHeisenbergReport report;
    report.lhs = distribution_std(values_a, r) * distribution_std(values_b, s);
    const HkrReport hkr = hkr_report(rho, a.to_operator(), b.to_operator());
    report.mid = hkr.delta_a * hkr.delta_b;
    report.rhs = hkr.bound;
    report.satisfied = report.lhs >= report.mid - tol::inequality_slack &&
                       report.mid >= report.rhs - tol::inequality_slack;
    return report;
}

std::variant<CombinedEntropicReport, JointInfeasible>
combined_entropic_report(const DensityOperator &rho, const BivariatePovm &biv,
                         const ValuedObservable &a, const ValuedObservable &b) {
    const auto joint = joint_nonideal_report(biv, a, b);
    if (std::holds_alternative<JointInfeasible>(joint)) {
        return std::get<JointInfeasible>(joint);
    }
    const NonidealityReport &report = std::get<NonidealityReport>(joint);
    const EntropicUrReport ur = entropic_ur_report(rho, a, b);
    CombinedEntropicReport out;
    out.sum = ur.h_a + report.j_lambda + ur.h_b + report.j_mu;
    out.bound = 2.0 * report.martens_bound;
    out.satisfied = out.sum >= out.bound - tol::inequality_slack;
    return out;
}

} // namespace qmeas
