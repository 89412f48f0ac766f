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
 * Two concrete physical models: a three-slab neutron interferometer with a
 * phase shifter (chi) and a partially transmitting absorber (a) in one path,
 * and an inefficient photon-counting detector with quantum efficiency eta.
 *
 * The neutron model interpolates between a pure interference measurement
 * (a = 1) and a pure which-path measurement (a = 0); in between, detection
 * probabilities are described by a genuine POVM and the experiment is a joint
 * non-ideal measurement of the path and interference observables.
 */

#pragma once

#include <utility>

#include "qmeas/nonideality.hpp"
#include "qmeas/operator_core.hpp"
#include "qmeas/povm.hpp"

namespace qmeas::models {

/// Incoming neutron state alpha|k1> + beta|k2>, phase shift chi (radians),
/// absorber transmission coefficient a in [0, 1].
class NeutronConfig {
  public:
    NeutronConfig(Complex alpha, Complex beta, double chi, double a);

    Complex alpha() const noexcept { return alpha_; }
    Complex beta() const noexcept { return beta_; }
    double chi() const noexcept { return chi_; }
    double a() const noexcept { return a_; }

  private:
    Complex alpha_, beta_;
    double chi_, a_;
};

/// Out-going amplitudes on |k1>, |k2> and the absorbed channel |abs>.
struct NeutronOutState {
    Complex c1;
    Complex c2;
    Complex c_abs;

    double p1() const noexcept { return std::norm(c1); }
    double p2() const noexcept { return std::norm(c2); }
    double p3() const noexcept { return std::norm(c_abs); }
};

/// Propagates the incoming state through the interferometer. Each Bragg
/// reflection contributes a phase factor i; the phase shifter multiplies one
/// partial wave by exp(i chi); the absorber scales its amplitude by sqrt(a).
NeutronOutState neutron_out_state(const NeutronConfig &cfg);

/// The three-effect POVM {M_1, M_2, M_3} of the detection probabilities
/// (detector 1, detector 2, absorption). Cross-checked operationally against
/// |<k_i|out>|^2 on a fixed six-state input basis within tol::cross_check.
Povm neutron_povm(double chi, double a);

struct NeutronObservables {
    ValuedObservable interference; // Q_1(chi), Q_2(chi) with values +1, -1
    ValuedObservable path;         // P_+, P_- with values +1, -1
};

/// The incompatible interference and path observables of the interferometer.
NeutronObservables observables(double chi);

/// The detection POVM ordered as a 2x2 grid (M_1, M_2; M_3/2, M_3/2):
/// rows index path outcomes +,-, columns index interference outcomes 1,2.
BivariatePovm neutron_bivariate(double chi, double a);

/// Non-ideality matrices of the bivariate grid's marginals:
/// lambda = [[1, a], [0, 1-a]] for path,
/// mu = (1/2)[[1+sqrt(a), 1-sqrt(a)], [1-sqrt(a), 1+sqrt(a)]] for
/// interference. Independent of chi.
std::pair<StochasticMatrix, StochasticMatrix>
neutron_nonideality_closed_form(double a);

struct NeutronJPair {
    double j_lambda = 0.0;
    double j_mu = 0.0;
};

/// Row entropies of the closed-form non-ideality matrices:
/// J_(lambda) = (1/2)[(1+a) ln(1+a) - a ln a],
/// J_(mu) = (1/2)[2 ln 2 - (1+sqrt(a)) ln(1+sqrt(a)) - (1-sqrt(a)) ln(1-sqrt(a))].
NeutronJPair neutron_j_closed_form(double a);

/// Detector with quantum efficiency eta acting on a number basis truncated
/// at n_max.
class PhotonChannel {
  public:
    PhotonChannel(double eta, int n_max);

    double eta() const noexcept { return eta_; }
    int n_max() const noexcept { return n_max_; }

  private:
    double eta_;
    int n_max_;
};

struct PhotonModel {
    /// Effects R_m = sum_n lambda_mn |n><n| for m = 0..n_max, plus a final
    /// remainder effect I - sum_m R_m keeping the POVM exactly complete on
    /// the truncated space.
    Povm povm;
    /// Binomial non-ideality matrix lambda_mn = C(n,m) eta^m (1-eta)^(n-m)
    /// for m <= n, zero above the diagonal. Columns sum to one.
    RealMatrix lambda;
};

PhotonModel photon_povm(const PhotonChannel &ch);

} // namespace qmeas::models
