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

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "qmeas/models.hpp"
#include "qmeas/nonideality.hpp"
#include "qmeas/operator_core.hpp"
#include "qmeas/simulate.hpp"

namespace {

using namespace qmeas;

HermitianOperator make_hermitian(Eigen::Index d, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    const auto uniform = [&engine] {
        return static_cast<double>(engine() >> 11) * 0x1.0p-53 - 0.5;
    };
    ComplexMatrix g(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            g(i, j) = Complex(uniform(), uniform());
        }
    }
    return HermitianOperator(0.5 * (g + g.adjoint().eval()));
}

void BM_Eigh(benchmark::State &state) {
    const HermitianOperator op =
        make_hermitian(state.range(0), static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(eigh(op));
    }
}
BENCHMARK(BM_Eigh)->Arg(2)->Arg(8)->Arg(32)->Arg(64);

void BM_NeutronBivariate(benchmark::State &state) {
    double a = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(models::neutron_bivariate(0.7, a));
        a = a < 1.0 ? a + 0.001 : 0.0;
    }
}
BENCHMARK(BM_NeutronBivariate);

void BM_RecoverNonideality(benchmark::State &state) {
    const auto obs = models::observables(M_PI / 2.0);
    const Marginals margs = marginals(models::neutron_bivariate(M_PI / 2.0, 0.5));
    for (auto _ : state) {
        benchmark::DoNotOptimize(recover_nonideality(margs.row, obs.path.pvm()));
    }
}
BENCHMARK(BM_RecoverNonideality);

void BM_SweepPoint(benchmark::State &state) {
    const auto obs = models::observables(M_PI / 2.0);
    double a = 0.25;
    for (auto _ : state) {
        const Marginals margs =
            marginals(models::neutron_bivariate(M_PI / 2.0, a));
        const auto lambda = recover_nonideality(margs.row, obs.path.pvm());
        const auto mu = recover_nonideality(margs.col, obs.interference.pvm());
        benchmark::DoNotOptimize(row_entropy(*lambda.matrix));
        benchmark::DoNotOptimize(row_entropy(*mu.matrix));
        a = a < 1.0 ? a + 0.001 : 0.0;
    }
}
BENCHMARK(BM_SweepPoint);

void BM_SampleOutcomes(benchmark::State &state) {
    const DensityOperator rho = DensityOperator::maximally_mixed(2);
    const BivariatePovm grid = models::neutron_bivariate(M_PI / 2.0, 0.5);
    const auto shots = static_cast<std::uint64_t>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_outcomes(rho, grid, shots, seed++));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            state.range(0));
}
BENCHMARK(BM_SampleOutcomes)->Arg(1000)->Arg(100000);

} // namespace

BENCHMARK_MAIN();
