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

#include "qmeas/models.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace qmeas::models {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_unit_interval(double a, const char *what) {
    if (!(a >= 0.0 && a <= 1.0)) {
        std::ostringstream msg;
        msg << what << " must lie in [0, 1], got " << a;
        throw ValidationError(msg.str());
    }
}

ComplexMatrix interference_projector_1(double chi) {
    const double c = std::cos(0.5 * chi);
    const double s = std::sin(0.5 * chi);
    const double half_sin = 0.5 * std::sin(chi);
    ComplexMatrix q(2, 2);
    q << c * c, -half_sin, -half_sin, s * s;
    return q;
}

ComplexMatrix interference_projector_2(double chi) {
    const double c = std::cos(0.5 * chi);
    const double s = std::sin(0.5 * chi);
    const double half_sin = 0.5 * std::sin(chi);
    ComplexMatrix q(2, 2);
    q << s * s, half_sin, half_sin, c * c;
    return q;
}

ComplexMatrix path_projector_plus() {
    ComplexMatrix p(2, 2);
    p << 0.5, -0.5 * kI, 0.5 * kI, 0.5;
    return p;
}

ComplexMatrix path_projector_minus() {
    ComplexMatrix p(2, 2);
    p << 0.5, 0.5 * kI, -0.5 * kI, 0.5;
    return p;
}

std::array<ComplexMatrix, 3> neutron_effect_matrices(double chi, double a) {
    const double root_a = std::sqrt(a);
    const ComplexMatrix q1 = interference_projector_1(chi);
    const ComplexMatrix q2 = interference_projector_2(chi);
    const ComplexMatrix p_plus = path_projector_plus();
    const ComplexMatrix p_minus = path_projector_minus();
    return {0.5 * (p_plus + a * p_minus + root_a * (q1 - q2)),
            0.5 * (p_plus + a * p_minus - root_a * (q1 - q2)),
            (1.0 - a) * p_minus};
}

// Fixed input basis covering the real and imaginary off-diagonal directions.
const std::array<std::pair<Complex, Complex>, 6> &operational_basis() {
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    static const std::array<std::pair<Complex, Complex>, 6> basis = {{
        {1.0, 0.0},
        {0.0, 1.0},
        {inv_sqrt2, inv_sqrt2},
        {inv_sqrt2, -inv_sqrt2},
        {inv_sqrt2, kI * inv_sqrt2},
        {inv_sqrt2, -kI * inv_sqrt2},
    }};
    return basis;
}

} // namespace

NeutronConfig::NeutronConfig(Complex alpha, Complex beta, double chi, double a)
    : alpha_(alpha), beta_(beta), chi_(chi), a_(a) {
    if (!std::isfinite(chi)) {
        throw ValidationError("NeutronConfig: chi must be finite");
    }
    require_unit_interval(a, "NeutronConfig: transmission coefficient a");
    const double norm = std::norm(alpha_) + std::norm(beta_);
    if (std::abs(norm - 1.0) > tol::trace_one) {
        std::ostringstream msg;
        msg << "NeutronConfig: |alpha|^2 + |beta|^2 = " << norm << ", expected 1";
        throw ValidationError(msg.str());
    }
}

NeutronOutState neutron_out_state(const NeutronConfig &cfg) {
    const Complex phase = std::sqrt(cfg.a()) * std::exp(kI * cfg.chi());
    const Complex alpha = cfg.alpha();
    const Complex beta = cfg.beta();
    NeutronOutState out;
    out.c1 = 0.5 * (alpha * (-1.0 - phase) + beta * (kI - kI * phase));
    out.c2 = 0.5 * (alpha * (-kI + kI * phase) + beta * (-1.0 - phase));
    out.c_abs = std::sqrt(0.5 * (1.0 - cfg.a())) * (kI * alpha - beta);
    const double total = out.p1() + out.p2() + out.p3();
    if (std::abs(total - 1.0) > tol::probability_drift) {
        throw NumericError("neutron_out_state: outgoing norm not preserved");
    }
    return out;
}

Povm neutron_povm(double chi, double a) {
    if (!std::isfinite(chi)) {
        throw ValidationError("neutron_povm: chi must be finite");
    }
    require_unit_interval(a, "neutron_povm: transmission coefficient a");
    const auto mats = neutron_effect_matrices(chi, a);
    std::vector<HermitianOperator> effects;
    effects.reserve(3);
    for (const auto &m : mats) {
        effects.emplace_back(m);
    }
    Povm povm(std::move(effects), {"detector_1", "detector_2", "absorbed"});

    // Operational cross-check: <in|M_i|in> must reproduce the out-state
    // detection probabilities on a spanning set of input states.
    for (const auto &[alpha, beta] : operational_basis()) {
        const NeutronConfig cfg(alpha, beta, chi, a);
        const NeutronOutState out = neutron_out_state(cfg);
        ComplexVector in(2);
        in << alpha, beta;
        const std::array<double, 3> probs = {out.p1(), out.p2(), out.p3()};
        for (std::size_t m = 0; m < 3; ++m) {
            const double quadratic =
                (in.adjoint() * povm.effect(m).matrix() * in).value().real();
            if (std::abs(quadratic - probs[m]) > tol::cross_check) {
                std::ostringstream msg;
                msg << "neutron_povm: effect " << m
                    << " disagrees with out-state probability by "
                    << std::abs(quadratic - probs[m]);
                throw NumericError(msg.str());
            }
        }
    }
    return povm;
}

NeutronObservables observables(double chi) {
    if (!std::isfinite(chi)) {
        throw ValidationError("observables: chi must be finite");
    }
    Pvm interference(Povm({HermitianOperator(interference_projector_1(chi)),
                           HermitianOperator(interference_projector_2(chi))},
                          {"Q1", "Q2"}));
    Pvm path(Povm({HermitianOperator(path_projector_plus()),
                   HermitianOperator(path_projector_minus())},
                  {"P+", "P-"}));
    return NeutronObservables{
        ValuedObservable(std::move(interference), {1.0, -1.0}),
        ValuedObservable(std::move(path), {1.0, -1.0}),
    };
}

BivariatePovm neutron_bivariate(double chi, double a) {
    const auto mats = neutron_effect_matrices(chi, a);
    std::vector<HermitianOperator> grid;
    grid.reserve(4);
    grid.emplace_back(mats[0]);
    grid.emplace_back(mats[1]);
    grid.emplace_back(0.5 * mats[2]);
    grid.emplace_back(0.5 * mats[2]);
    return BivariatePovm(std::move(grid), 2, 2);
}

std::pair<StochasticMatrix, StochasticMatrix>
neutron_nonideality_closed_form(double a) {
    require_unit_interval(a, "neutron_nonideality_closed_form: a");
    const double root_a = std::sqrt(a);
    RealMatrix lambda(2, 2);
    lambda << 1.0, a, 0.0, 1.0 - a;
    RealMatrix mu(2, 2);
    mu << 0.5 * (1.0 + root_a), 0.5 * (1.0 - root_a), 0.5 * (1.0 - root_a),
        0.5 * (1.0 + root_a);
    return {StochasticMatrix(std::move(lambda)), StochasticMatrix(std::move(mu))};
}

NeutronJPair neutron_j_closed_form(double a) {
    require_unit_interval(a, "neutron_j_closed_form: a");
    const auto xlnx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
    const double root_a = std::sqrt(a);
    NeutronJPair j;
    j.j_lambda = 0.5 * (xlnx(1.0 + a) - xlnx(a));
    j.j_mu = 0.5 * (2.0 * std::log(2.0) - xlnx(1.0 + root_a) - xlnx(1.0 - root_a));
    return j;
}

PhotonChannel::PhotonChannel(double eta, int n_max) : eta_(eta), n_max_(n_max) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        std::ostringstream msg;
        msg << "PhotonChannel: eta must lie in (0, 1], got " << eta;
        throw ValidationError(msg.str());
    }
    if (n_max < 1) {
        throw ValidationError("PhotonChannel: n_max must be >= 1");
    }
}

PhotonModel photon_povm(const PhotonChannel &ch) {
    const int size = ch.n_max() + 1;
    const double eta = ch.eta();
    RealMatrix lambda = RealMatrix::Zero(size, size);
    for (int n = 0; n < size; ++n) {
        // Multiplicative binomial recurrence; every intermediate is an exact
        // integer below 2^53 for the supported n_max range.
        double binom = 1.0;
        for (int m = 0; m <= n; ++m) {
            lambda(m, n) = binom * std::pow(eta, m) * std::pow(1.0 - eta, n - m);
            binom = binom * static_cast<double>(n - m) / static_cast<double>(m + 1);
        }
    }

    const Eigen::Index d = size;
    std::vector<HermitianOperator> effects;
    effects.reserve(static_cast<std::size_t>(size) + 1);
    ComplexMatrix total = ComplexMatrix::Zero(d, d);
    for (int m = 0; m < size; ++m) {
        ComplexMatrix effect = ComplexMatrix::Zero(d, d);
        for (int n = 0; n < size; ++n) {
            effect(n, n) = lambda(m, n);
        }
        total += effect;
        effects.emplace_back(std::move(effect));
    }
    // Remainder keeps the truncated collection exactly complete.
    effects.emplace_back(ComplexMatrix(ComplexMatrix::Identity(d, d) - total));
    return PhotonModel{Povm(std::move(effects)), std::move(lambda)};
}

} // namespace qmeas::models
