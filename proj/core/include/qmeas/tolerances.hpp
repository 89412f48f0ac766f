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

#pragma once

namespace qmeas::tol {

// Max absolute entry deviation allowed between a matrix and its adjoint.
inline constexpr double hermitian = 1e-12;

// Effects and states may have eigenvalues down to -psd before rejection.
inline constexpr double psd = 1e-10;

// Spectral reconstruction error bound for eigendecompositions.
inline constexpr double reconstruction = 1e-9;

// Eigenvector orthonormality bound.
inline constexpr double orthonormal = 1e-10;

// |Tr(rho) - 1| bound for density operators.
inline constexpr double trace_one = 1e-10;

// Max entry residual of (sum of effects - I) for a POVM.
inline constexpr double completeness = 1e-10;

// Idempotency and pairwise-product bounds for projection-valued measures.
inline constexpr double idempotent = 1e-9;
inline constexpr double orthogonal = 1e-9;

// Commutativity gate for joint measurability of standard observables.
inline constexpr double commutator = 1e-9;

// Stochastic-matrix column sums must be within this of 1.
inline constexpr double column_sum = 1e-10;

// Entries of probability-like quantities at or above -entry_clamp are
// clamped to zero; anything more negative is rejected.
inline constexpr double entry_clamp = 1e-12;

// A recovered non-ideality relation with a larger max-entry residual is
// reported infeasible rather than attributed to roundoff.
inline constexpr double infeasible = 1e-8;

// Slack used when checking inequality satisfaction.
inline constexpr double inequality_slack = 1e-9;
inline constexpr double hkr_slack = 1e-10;

// Unbiasedness of a non-ideality channel, per column.
inline constexpr double unbiased = 1e-9;

// Imaginary residue allowed in expectation values before they are real-cast.
inline constexpr double imag_residue = 1e-10;

// Total probability drift allowed before sampling renormalizes.
inline constexpr double probability_drift = 1e-9;

// Operational cross-check of model POVMs against out-state probabilities.
inline constexpr double cross_check = 1e-10;

} // namespace qmeas::tol
