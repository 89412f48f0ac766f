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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qmeas/nonideality.hpp"
#include "support/test_matrices.hpp"
#include "support/test_rng.hpp"

using namespace qmeas;
using namespace qmeas::testing;

namespace {

Pvm path_pvm() {
    return Pvm(Povm({HermitianOperator(p_plus_matrix()),
                     HermitianOperator(p_minus_matrix())}));
}

Pvm interference_pvm(double chi) {
    return Pvm(Povm({HermitianOperator(q1_matrix(chi)),
                     HermitianOperator(q2_matrix(chi))}));
}

ValuedObservable path_observable() {
    return ValuedObservable(path_pvm(), {1.0, -1.0});
}

ValuedObservable interference_observable(double chi) {
    return ValuedObservable(interference_pvm(chi), {1.0, -1.0});
}

BivariatePovm neutron_grid(double chi, double a) {
    return BivariatePovm({HermitianOperator(neutron_m1(chi, a)),
                          HermitianOperator(neutron_m2(chi, a)),
                          HermitianOperator(0.5 * neutron_m3(a)),
                          HermitianOperator(0.5 * neutron_m3(a))},
                         2, 2);
}

// Closed forms for the absorber sweep, evaluated independently in the tests.
double j_lambda_closed(double a) {
    const auto xlnx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
    return 0.5 * (xlnx(1.0 + a) - xlnx(a));
}

double j_mu_closed(double a) {
    const auto xlnx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
    const double r = std::sqrt(a);
    return 0.5 * (2.0 * std::log(2.0) - xlnx(1.0 + r) - xlnx(1.0 - r));
}

} // namespace

TEST_CASE("StochasticMatrix clamps and validates", "[nonideality]") {
    RealMatrix ok(2, 2);
    ok << 1.0, 0.3, -1e-13, 0.7;
    const StochasticMatrix m(ok);
    REQUIRE(m(1, 0) == 0.0);

    RealMatrix negative(2, 2);
    negative << 1.0, 0.3, -1e-11, 0.7;
    REQUIRE_THROWS_AS(StochasticMatrix(negative), ValidationError);

    RealMatrix drifting(2, 2);
    drifting << 0.6, 0.3, 0.5, 0.7;
    REQUIRE_THROWS_AS(StochasticMatrix(drifting), ValidationError);
}

TEST_CASE("recover_nonideality of an ideal measurement is the identity",
          "[nonideality]") {
    const Pvm target = interference_pvm(0.3);
    const Povm as_povm = target.povm();
    const auto rec = recover_nonideality(as_povm, target);
    REQUIRE(rec.feasible());
    REQUIRE(rec.residual < 1e-12);
    REQUIRE(max_abs(RealMatrix(rec.matrix->entries() - RealMatrix::Identity(2, 2))) <
            1e-12);
}

TEST_CASE("recover_nonideality reproduces the absorber matrices",
          "[nonideality]") {
    const double chi = M_PI / 2.0;

    SECTION("row marginal at a = 0.5 against the path observable") {
        const double a = 0.5;
        const Povm row_marginal = validate_povm(
            {HermitianOperator(p_plus_matrix() + a * p_minus_matrix()),
             HermitianOperator((1.0 - a) * p_minus_matrix())});
        const auto rec = recover_nonideality(row_marginal, path_pvm());
        REQUIRE(rec.feasible());
        REQUIRE(rec.residual < 1e-9);
        RealMatrix expected(2, 2);
        expected << 1.0, 0.5, 0.0, 0.5;
        REQUIRE(max_abs(RealMatrix(rec.matrix->entries() - expected)) < 1e-12);
    }

    SECTION("column marginal at a = 0.25 against the interference observable") {
        const double a = 0.25;
        const ComplexMatrix tilt =
            0.5 * std::sqrt(a) * (q1_matrix(chi) - q2_matrix(chi));
        const ComplexMatrix half_i = 0.5 * ComplexMatrix::Identity(2, 2);
        const Povm col_marginal =
            validate_povm({HermitianOperator(half_i + tilt),
                           HermitianOperator(half_i - tilt)});
        const auto rec = recover_nonideality(col_marginal, interference_pvm(chi));
        REQUIRE(rec.feasible());
        RealMatrix expected(2, 2);
        expected << 0.75, 0.25, 0.25, 0.75;
        REQUIRE(max_abs(RealMatrix(rec.matrix->entries() - expected)) < 1e-12);
    }
}

TEST_CASE("recover_nonideality reports infeasibility", "[nonideality]") {
    // The path projectors are not a smearing of the interference ones.
    const auto rec =
        recover_nonideality(path_pvm().povm(), interference_pvm(0.0));
    REQUIRE_FALSE(rec.feasible());
    REQUIRE(rec.residual > 0.4);
}

TEST_CASE("closed-form recovery rejects degenerate targets", "[nonideality]") {
    ComplexMatrix p12 = ComplexMatrix::Zero(3, 3);
    p12(0, 0) = 1.0;
    p12(1, 1) = 1.0;
    ComplexMatrix p3 = ComplexMatrix::Zero(3, 3);
    p3(2, 2) = 1.0;
    const Pvm degenerate(
        Povm({HermitianOperator(p12), HermitianOperator(p3)}));
    REQUIRE_THROWS_AS(recover_nonideality(degenerate.povm(), degenerate,
                                          RecoveryMethod::ClosedForm),
                      ValidationError);

    // Auto falls back to least squares and succeeds.
    RealMatrix mix(2, 2);
    mix << 0.3, 0.6, 0.7, 0.4;
    std::vector<HermitianOperator> effects;
    for (Eigen::Index m = 0; m < 2; ++m) {
        effects.emplace_back(ComplexMatrix(mix(m, 0) * p12 + mix(m, 1) * p3));
    }
    const auto rec = recover_nonideality(Povm(std::move(effects)), degenerate);
    REQUIRE(rec.feasible());
    REQUIRE(max_abs(RealMatrix(rec.matrix->entries() - mix)) < 1e-10);
}

TEST_CASE("recovery tolerates a zero effect in the target", "[nonideality]") {
    // {I, O} is a legal PVM; the zero effect constrains nothing.
    const Pvm padded(
        Povm({HermitianOperator::identity(2), HermitianOperator::zero(2)}));
    const Povm r = validate_povm(
        {HermitianOperator(0.5 * ComplexMatrix::Identity(2, 2)),
         HermitianOperator(0.5 * ComplexMatrix::Identity(2, 2))});
    const auto rec = recover_nonideality(r, padded);
    REQUIRE(rec.feasible());
    REQUIRE(rec.residual < 1e-12);
    REQUIRE_THAT((*rec.matrix)(0, 0), Catch::Matchers::WithinAbs(0.5, 1e-12));
}

TEST_CASE("recover_nonideality round trip over random channels",
          "[nonideality][property]") {
    TestRng rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.integer(4));
        const Pvm target = rng.random_rank1_pvm(d);
        const Eigen::Index outcomes =
            d + static_cast<Eigen::Index>(rng.integer(2));
        const StochasticMatrix known = rng.random_stochastic(outcomes, d);
        std::vector<HermitianOperator> effects;
        for (Eigen::Index m = 0; m < outcomes; ++m) {
            ComplexMatrix e = ComplexMatrix::Zero(d, d);
            for (Eigen::Index mp = 0; mp < d; ++mp) {
                e += known(m, mp) * target.effect(static_cast<std::size_t>(mp)).matrix();
            }
            effects.emplace_back(std::move(e));
        }
        const auto rec = recover_nonideality(Povm(std::move(effects)), target);
        REQUIRE(rec.feasible());
        REQUIRE(max_abs(RealMatrix(rec.matrix->entries() - known.entries())) <
                1e-8);
    }
}

TEST_CASE("row_entropy closed values", "[nonideality]") {
    REQUIRE(row_entropy(StochasticMatrix::identity(2)) == 0.0);
    REQUIRE(row_entropy(StochasticMatrix::identity(5)) == 0.0);

    RealMatrix uniform(2, 2);
    uniform.setConstant(0.5);
    REQUIRE_THAT(row_entropy(StochasticMatrix(uniform)),
                 Catch::Matchers::WithinAbs(std::log(2.0), 1e-12));

    RealMatrix lambda_half(2, 2);
    lambda_half << 1.0, 0.5, 0.0, 0.5;
    const double j = row_entropy(StochasticMatrix(lambda_half));
    REQUIRE_THAT(j, Catch::Matchers::WithinAbs(j_lambda_closed(0.5), 1e-12));
    REQUIRE_THAT(j, Catch::Matchers::WithinAbs(0.477386, 1e-5));
}

TEST_CASE("row_entropy rejects non-square matrices", "[nonideality]") {
    RealMatrix rect(3, 2);
    rect << 0.5, 0.1, 0.25, 0.2, 0.25, 0.7;
    REQUIRE_THROWS_AS(row_entropy(StochasticMatrix(rect)), ValidationError);
}

TEST_CASE("row_entropy bounds and identity characterization",
          "[nonideality][property]") {
    TestRng rng(43);
    for (int trial = 0; trial < 60; ++trial) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.integer(5));
        const double j = row_entropy(rng.random_stochastic(n, n));
        REQUIRE(j >= 0.0);
        REQUIRE(j <= std::log(static_cast<double>(n)) + 1e-12);
    }
    // Permutations of the identity have J = 0 exactly.
    RealMatrix perm = RealMatrix::Zero(3, 3);
    perm(0, 2) = 1.0;
    perm(1, 0) = 1.0;
    perm(2, 1) = 1.0;
    REQUIRE(row_entropy(StochasticMatrix(perm)) == 0.0);
    // Anything off a permutation is strictly positive.
    RealMatrix near(2, 2);
    near << 0.999, 0.001, 0.001, 0.999;
    REQUIRE(row_entropy(StochasticMatrix(near)) > 0.0);
}

TEST_CASE("martens_bound hand-checked values", "[nonideality]") {
    const auto path = path_observable();
    REQUIRE_THAT(martens_bound(path, path),
                 Catch::Matchers::WithinAbs(0.0, 1e-12));

    TestRng rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        const double chi = rng.uniform(0.0, 2.0 * M_PI);
        REQUIRE_THAT(martens_bound(path, interference_observable(chi)),
                     Catch::Matchers::WithinAbs(std::log(2.0), 1e-10));
    }
}

TEST_CASE("martens_bound for mutually unbiased qutrit bases", "[nonideality]") {
    // Computational basis vs its Fourier transform: all overlaps 1/sqrt(3).
    const Eigen::Index d = 3;
    ComplexMatrix fourier(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = 0; k < d; ++k) {
            fourier(j, k) = std::exp(kImag * (2.0 * M_PI / 3.0) *
                                     static_cast<double>(j * k)) /
                            std::sqrt(3.0);
        }
    }
    std::vector<HermitianOperator> comp, four;
    for (Eigen::Index k = 0; k < d; ++k) {
        ComplexMatrix e = ComplexMatrix::Zero(d, d);
        e(k, k) = 1.0;
        comp.emplace_back(std::move(e));
        const ComplexVector v = fourier.col(k);
        four.emplace_back(ComplexMatrix(v * v.adjoint()));
    }
    const ValuedObservable a(Pvm(Povm(std::move(comp))), {0.0, 1.0, 2.0});
    const ValuedObservable b(Pvm(Povm(std::move(four))), {0.0, 1.0, 2.0});
    REQUIRE_THAT(martens_bound(a, b),
                 Catch::Matchers::WithinAbs(std::log(3.0), 1e-12));
}

TEST_CASE("martens_bound rejects degenerate observables", "[nonideality]") {
    ComplexMatrix p12 = ComplexMatrix::Zero(3, 3);
    p12(0, 0) = 1.0;
    p12(1, 1) = 1.0;
    ComplexMatrix p3 = ComplexMatrix::Zero(3, 3);
    p3(2, 2) = 1.0;
    const ValuedObservable degenerate_rank(
        Pvm(Povm({HermitianOperator(p12), HermitianOperator(p3)})), {1.0, -1.0});
    TestRng rng(53);
    const ValuedObservable fine = rng.random_maximal_observable(3);
    REQUIRE_THROWS_AS(martens_bound(degenerate_rank, fine), ValidationError);

    const ValuedObservable degenerate_values(rng.random_rank1_pvm(3),
                                             {1.0, 1.0, 0.0});
    REQUIRE_THROWS_AS(martens_bound(degenerate_values, fine), ValidationError);
}

TEST_CASE("martens_bound is invariant under relabeling and phases",
          "[nonideality][property]") {
    TestRng rng(59);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.integer(3));
        const ComplexMatrix u = rng.random_unitary(d);
        const ComplexMatrix w = rng.random_unitary(d);

        std::vector<HermitianOperator> ea, eb, eb_permuted;
        for (Eigen::Index k = 0; k < d; ++k) {
            ea.emplace_back(ComplexMatrix(u.col(k) * u.col(k).adjoint()));
            // A global phase on the eigenvector leaves the projector alone.
            const Complex phase = std::exp(kImag * rng.uniform(0.0, 2.0 * M_PI));
            const ComplexVector v = phase * w.col(k);
            eb.emplace_back(ComplexMatrix(v * v.adjoint()));
        }
        for (Eigen::Index k = 0; k < d; ++k) {
            eb_permuted.push_back(eb[static_cast<std::size_t>(d - 1 - k)]);
        }
        auto values = rng.distinct_values(static_cast<std::size_t>(d));
        std::vector<double> values_reversed(values.rbegin(), values.rend());

        const ValuedObservable a(Pvm(Povm(std::move(ea))), values);
        const ValuedObservable b(Pvm(Povm(std::move(eb))), values);
        const ValuedObservable b_relabeled(Pvm(Povm(std::move(eb_permuted))),
                                           values_reversed);
        REQUIRE_THAT(martens_bound(a, b),
                     Catch::Matchers::WithinAbs(martens_bound(a, b_relabeled),
                                                1e-12));
    }
}

TEST_CASE("joint_nonideal_report at the absorber extremes", "[nonideality]") {
    const double chi = M_PI / 3.0;
    const auto path = path_observable();
    const auto interference = interference_observable(chi);

    SECTION("a = 0: ideal path, uninformative interference") {
        const auto result =
            joint_nonideal_report(neutron_grid(chi, 0.0), path, interference);
        const auto &report = std::get<NonidealityReport>(result);
        REQUIRE_THAT(report.j_lambda, Catch::Matchers::WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(report.j_mu,
                     Catch::Matchers::WithinAbs(std::log(2.0), 1e-12));
        REQUIRE(report.satisfied);
        REQUIRE_THAT(report.j_lambda + report.j_mu - report.martens_bound,
                     Catch::Matchers::WithinAbs(0.0, 1e-9));
    }

    SECTION("a = 1: ideal interference, uninformative path") {
        const auto result =
            joint_nonideal_report(neutron_grid(chi, 1.0), path, interference);
        const auto &report = std::get<NonidealityReport>(result);
        REQUIRE_THAT(report.j_lambda,
                     Catch::Matchers::WithinAbs(std::log(2.0), 1e-12));
        REQUIRE_THAT(report.j_mu, Catch::Matchers::WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(report.j_lambda + report.j_mu - report.martens_bound,
                     Catch::Matchers::WithinAbs(0.0, 1e-9));
    }

    SECTION("a = 0.5: both non-ideal, bound strictly beaten") {
        const auto result =
            joint_nonideal_report(neutron_grid(chi, 0.5), path, interference);
        const auto &report = std::get<NonidealityReport>(result);
        REQUIRE_THAT(report.j_lambda,
                     Catch::Matchers::WithinAbs(j_lambda_closed(0.5), 1e-9));
        REQUIRE_THAT(report.j_mu,
                     Catch::Matchers::WithinAbs(j_mu_closed(0.5), 1e-9));
        REQUIRE_THAT(report.j_lambda, Catch::Matchers::WithinAbs(0.477386, 1e-5));
        REQUIRE_THAT(report.j_mu, Catch::Matchers::WithinAbs(0.416494, 2e-6));
        REQUIRE_THAT(report.j_lambda + report.j_mu,
                     Catch::Matchers::WithinAbs(0.893880, 2e-6));
        REQUIRE(report.satisfied);
        REQUIRE(report.j_lambda + report.j_mu > report.martens_bound + 0.1);
    }
}

TEST_CASE("joint_nonideal_report propagates infeasibility", "[nonideality]") {
    // Marginals of the self-joint path grid cannot decompose over a rotated
    // interference pair.
    const auto path = path_observable();
    const BivariatePovm grid({HermitianOperator(p_plus_matrix()),
                              HermitianOperator::zero(2),
                              HermitianOperator::zero(2),
                              HermitianOperator(p_minus_matrix())},
                             2, 2);
    const auto result =
        joint_nonideal_report(grid, interference_observable(0.7), path);
    REQUIRE(std::holds_alternative<JointInfeasible>(result));
    REQUIRE(std::get<JointInfeasible>(result).marginal == "row");
}

TEST_CASE("Martens inequality survives mixing with uniform noise",
          "[nonideality][property]") {
    TestRng rng(61);
    const auto path = path_observable();
    for (int trial = 0; trial < 40; ++trial) {
        const double chi = rng.uniform(0.0, 2.0 * M_PI);
        const double a = rng.uniform();
        const double noise = rng.uniform(0.0, 0.9);
        const auto interference = interference_observable(chi);
        const BivariatePovm clean = neutron_grid(chi, a);
        std::vector<HermitianOperator> mixed;
        for (const auto &effect : clean.grid()) {
            mixed.emplace_back(ComplexMatrix(
                (1.0 - noise) * effect.matrix() +
                noise * 0.25 * ComplexMatrix::Identity(2, 2)));
        }
        const auto result = joint_nonideal_report(BivariatePovm(mixed, 2, 2),
                                                  path, interference);
        REQUIRE(std::holds_alternative<NonidealityReport>(result));
        REQUIRE(std::get<NonidealityReport>(result).satisfied);
    }
}

TEST_CASE("entropic_ur_report saturation and uniform cases", "[nonideality]") {
    SECTION("eigenstate with a mutually unbiased partner saturates") {
        const ValuedObservable z(
            Pvm(Povm({HermitianOperator(diag2(1.0, 0.0)),
                      HermitianOperator(diag2(0.0, 1.0))})),
            {1.0, -1.0});
        ComplexVector plus(2), minus(2);
        plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
        minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
        const ValuedObservable x(
            Pvm(Povm({HermitianOperator(ComplexMatrix(plus * plus.adjoint())),
                      HermitianOperator(ComplexMatrix(minus * minus.adjoint()))})),
            {1.0, -1.0});
        const DensityOperator rho(HermitianOperator(diag2(1.0, 0.0)));
        const auto report = entropic_ur_report(rho, z, x);
        REQUIRE_THAT(report.h_a, Catch::Matchers::WithinAbs(0.0, 1e-10));
        REQUIRE_THAT(report.h_b,
                     Catch::Matchers::WithinAbs(std::log(2.0), 1e-10));
        REQUIRE_THAT(report.bound,
                     Catch::Matchers::WithinAbs(std::log(2.0), 1e-10));
        REQUIRE_THAT(report.h_a + report.h_b - report.bound,
                     Catch::Matchers::WithinAbs(0.0, 1e-10));
        REQUIRE(report.satisfied);
    }

    SECTION("maximally mixed state maxes both entropies") {
        TestRng rng(67);
        for (const Eigen::Index d : {2, 3, 5}) {
            const auto a = rng.random_maximal_observable(d);
            const auto b = rng.random_maximal_observable(d);
            const auto report =
                entropic_ur_report(DensityOperator::maximally_mixed(d), a, b);
            REQUIRE_THAT(report.h_a, Catch::Matchers::WithinAbs(
                                         std::log(static_cast<double>(d)), 1e-9));
            REQUIRE_THAT(report.h_b, Catch::Matchers::WithinAbs(
                                         std::log(static_cast<double>(d)), 1e-9));
            REQUIRE(report.satisfied);
        }
    }
}

TEST_CASE("entropic_ur_report on random pure qubit states",
          "[nonideality][property]") {
    TestRng rng(71);
    const auto path = path_observable();
    const auto interference = interference_observable(M_PI / 3.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const DensityOperator rho = rng.random_pure(2);
        REQUIRE(entropic_ur_report(rho, path, interference).satisfied);
    }
}

TEST_CASE("unbiasedness_check hand cases", "[nonideality]") {
    REQUIRE(unbiasedness_check(StochasticMatrix::identity(4),
                               {3.0, -1.0, 0.5, 2.0}));

    RealMatrix biased(2, 2);
    biased << 1.0, 0.5, 0.0, 0.5;
    REQUIRE_FALSE(unbiasedness_check(StochasticMatrix(biased), {1.0, -1.0}));

    RealMatrix spreading(3, 3);
    spreading << 1.0, 0.25, 0.0, 0.0, 0.5, 0.0, 0.0, 0.25, 1.0;
    REQUIRE(unbiasedness_check(StochasticMatrix(spreading), {-1.0, 0.0, 1.0}));

    REQUIRE_THROWS_AS(
        unbiasedness_check(StochasticMatrix::identity(3), {1.0, -1.0}),
        DimensionError);
}

TEST_CASE("variance_decomposition hand cases", "[nonideality]") {
    RealMatrix spreading(3, 3);
    spreading << 1.0, 0.25, 0.0, 0.0, 0.5, 0.0, 0.0, 0.25, 1.0;
    const StochasticMatrix channel(spreading);
    const std::vector<double> values = {-1.0, 0.0, 1.0};

    SECTION("identity channel adds no noise") {
        const auto out = variance_decomposition(StochasticMatrix::identity(3),
                                                values, {0.2, 0.5, 0.3});
        REQUIRE_THAT(out.noise_term, Catch::Matchers::WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(out.var_r, Catch::Matchers::WithinAbs(out.var_p, 1e-12));
        REQUIRE(out.identity_holds);
    }

    SECTION("deterministic middle input") {
        // r = (0.25, 0.5, 0.25): var_r = 0.5, var_p = 0, noise = 0.5.
        const auto out = variance_decomposition(channel, values, {0.0, 1.0, 0.0});
        REQUIRE_THAT(out.var_p, Catch::Matchers::WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(out.var_r, Catch::Matchers::WithinAbs(0.5, 1e-12));
        REQUIRE_THAT(out.noise_term, Catch::Matchers::WithinAbs(0.5, 1e-12));
        REQUIRE(out.identity_holds);
    }

    SECTION("deterministic boundary input") {
        const auto out = variance_decomposition(channel, values, {1.0, 0.0, 0.0});
        REQUIRE_THAT(out.var_p, Catch::Matchers::WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(out.var_r, Catch::Matchers::WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(out.noise_term, Catch::Matchers::WithinAbs(0.0, 1e-12));
        REQUIRE(out.identity_holds);
    }

    SECTION("biased channel is rejected with the failing column") {
        RealMatrix biased(2, 2);
        biased << 1.0, 0.5, 0.0, 0.5;
        REQUIRE_THROWS_WITH(
            variance_decomposition(StochasticMatrix(biased), {1.0, -1.0},
                                   {0.5, 0.5}),
            Catch::Matchers::ContainsSubstring("column 1"));
    }
}

TEST_CASE("variance identity over random symmetric-spreading channels",
          "[nonideality][property]") {
    TestRng rng(73);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.integer(2));
        const auto [channel, values] = rng.symmetric_spreading_channel(n);
        const auto p = rng.random_probability_vector(static_cast<std::size_t>(n));
        const auto out = variance_decomposition(channel, values, p);
        REQUIRE(out.identity_holds);
        REQUIRE(out.var_r >= out.var_p - 1e-12);
    }
}

TEST_CASE("generalized_heisenberg_report reduces to the ideal chain",
          "[nonideality]") {
    const auto path = path_observable();
    const auto interference = interference_observable(M_PI / 4.0);
    const StochasticMatrix identity = StochasticMatrix::identity(2);
    const std::vector<double> pm = {1.0, -1.0};

    SECTION("identity channels collapse lhs onto mid") {
        TestRng rng(79);
        const DensityOperator rho = rng.random_density(2);
        const auto report = generalized_heisenberg_report(
            rho, identity, pm, identity, pm, path, interference);
        REQUIRE_THAT(report.lhs, Catch::Matchers::WithinAbs(report.mid, 1e-12));
        REQUIRE(report.satisfied);
    }

    SECTION("saturating state makes the whole chain tight") {
        // sigma_x / sigma_y as valued observables; ground state saturates.
        ComplexVector xp(2), xm(2), yp(2), ym(2);
        xp << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
        xm << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
        yp << 1.0 / std::sqrt(2.0), kImag / std::sqrt(2.0);
        ym << 1.0 / std::sqrt(2.0), -kImag / std::sqrt(2.0);
        const ValuedObservable sx(
            Pvm(Povm({HermitianOperator(ComplexMatrix(xp * xp.adjoint())),
                      HermitianOperator(ComplexMatrix(xm * xm.adjoint()))})),
            pm);
        const ValuedObservable sy(
            Pvm(Povm({HermitianOperator(ComplexMatrix(yp * yp.adjoint())),
                      HermitianOperator(ComplexMatrix(ym * ym.adjoint()))})),
            pm);
        const DensityOperator rho(HermitianOperator(diag2(1.0, 0.0)));
        const auto report =
            generalized_heisenberg_report(rho, identity, pm, identity, pm, sx, sy);
        REQUIRE_THAT(report.lhs, Catch::Matchers::WithinAbs(1.0, 1e-12));
        REQUIRE_THAT(report.mid, Catch::Matchers::WithinAbs(1.0, 1e-12));
        REQUIRE_THAT(report.rhs, Catch::Matchers::WithinAbs(1.0, 1e-12));
        REQUIRE(report.satisfied);
    }

    SECTION("biased channel is rejected") {
        RealMatrix biased(2, 2);
        biased << 1.0, 0.5, 0.0, 0.5;
        REQUIRE_THROWS_AS(
            generalized_heisenberg_report(DensityOperator::maximally_mixed(2),
                                          StochasticMatrix(biased), pm, identity,
                                          pm, path, interference),
            ValidationError);
    }
}

TEST_CASE("generalized chain holds on random qutrit draws",
          "[nonideality][property]") {
    TestRng rng(83);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index d = 3;
        const auto [channel_a, values_a] = rng.symmetric_spreading_channel(d);
        const auto [channel_b, values_b] = rng.symmetric_spreading_channel(d);
        const ValuedObservable a(rng.random_rank1_pvm(d), values_a);
        const ValuedObservable b(rng.random_rank1_pvm(d), values_b);
        const DensityOperator rho = rng.random_density(d);
        const auto report = generalized_heisenberg_report(
            rho, channel_a, values_a, channel_b, values_b, a, b);
        REQUIRE(report.satisfied);
    }
}

TEST_CASE("combined_entropic_report composes the two inequalities",
          "[nonideality]") {
    const double chi = M_PI / 3.0;
    const auto path = path_observable();
    const auto interference = interference_observable(chi);

    SECTION("a = 0 with the maximally mixed state") {
        const auto result = combined_entropic_report(
            DensityOperator::maximally_mixed(2), neutron_grid(chi, 0.0), path,
            interference);
        const auto &report = std::get<CombinedEntropicReport>(result);
        // H_path = ln 2, J_lambda = 0, H_interf = ln 2, J_mu = ln 2.
        REQUIRE_THAT(report.sum,
                     Catch::Matchers::WithinAbs(3.0 * std::log(2.0), 1e-9));
        REQUIRE_THAT(report.bound,
                     Catch::Matchers::WithinAbs(2.0 * std::log(2.0), 1e-9));
        REQUIRE(report.satisfied);
    }

    SECTION("a = 1 with an interference eigenstate saturates") {
        const double c = std::cos(0.5 * chi);
        const double s = std::sin(0.5 * chi);
        ComplexVector q1_dir(2);
        q1_dir << c, -s;
        const auto result = combined_entropic_report(
            DensityOperator::pure(q1_dir), neutron_grid(chi, 1.0), path,
            interference);
        const auto &report = std::get<CombinedEntropicReport>(result);
        REQUIRE_THAT(report.sum,
                     Catch::Matchers::WithinAbs(2.0 * std::log(2.0), 1e-9));
        REQUIRE_THAT(report.sum - report.bound,
                     Catch::Matchers::WithinAbs(0.0, 1e-9));
        REQUIRE(report.satisfied);
    }

    SECTION("random absorber settings always satisfy the combined bound") {
        TestRng rng(89);
        for (int trial = 0; trial < 30; ++trial) {
            const auto result = combined_entropic_report(
                rng.random_density(2), neutron_grid(chi, rng.uniform()), path,
                interference);
            REQUIRE(std::get<CombinedEntropicReport>(result).satisfied);
        }
    }
}
