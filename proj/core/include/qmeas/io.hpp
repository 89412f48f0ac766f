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
 * Operator-file I/O. The on-disk format is JSON:
 *
 * {
 *   "dim": 2,
 *   "objects": [
 *     {"name": "rho",  "role": "state", "matrix": [[[re,im],...],...]},
 *     {"name": "path", "role": "pvm",   "effects": [M0, M1], "values": [1,-1]},
 *     {"name": "meas", "role": "povm",  "effects": [...]},
 *     {"name": "grid", "role": "bivariate", "shape": [2,2],
 *      "effects": [R00, R01, R10, R11]},
 *     {"name": "op",   "matrix": M}
 *   ]
 * }
 *
 * Matrices are dim x dim nested arrays of [re, im] pairs, row-major; grids
 * list their effects row-major. The role tag is optional; untagged objects
 * are plain Hermitian operators.
 */

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qmeas/nonideality.hpp"
#include "qmeas/operator_core.hpp"
#include "qmeas/povm.hpp"

namespace qmeas::io {

struct OperatorObject {
    std::string name;
    std::string role; // "povm" | "pvm" | "state" | "bivariate" | "" (plain)
    std::vector<ComplexMatrix> matrices;
    Eigen::Index grid_rows = 0; // bivariate only
    Eigen::Index grid_cols = 0;
    std::vector<double> values; // optional outcome values
};

struct OperatorFile {
    Eigen::Index dim = 0;
    std::vector<OperatorObject> objects;
};

/// Parses an operator file. Throws ParseError with the file name and the
/// parser's position on malformed input, and on I/O failure.
OperatorFile load_operator_file(const std::filesystem::path &path);

/// Serializes with stable key order and a trailing newline; doubles use the
/// shortest round-trip representation, so save/load is an identity.
void save_operator_file(const OperatorFile &file,
                        const std::filesystem::path &path);
std::string to_json_string(const OperatorFile &file);

// Conversions into validated domain types. Each throws ValidationError when
// the object's role or shape does not match.
DensityOperator to_state(const OperatorObject &obj);
Povm to_povm(const OperatorObject &obj);
Pvm to_pvm(const OperatorObject &obj);
BivariatePovm to_bivariate(const OperatorObject &obj);
ValuedObservable to_valued_observable(const OperatorObject &obj);

// Builders for export.
OperatorObject from_state(std::string name, const DensityOperator &rho);
OperatorObject from_povm(std::string name, const Povm &povm);
OperatorObject from_pvm(std::string name, const Pvm &pvm,
                        std::vector<double> values = {});
OperatorObject from_bivariate(std::string name, const BivariatePovm &biv);
OperatorObject from_operator(std::string name, const HermitianOperator &op);

} // namespace qmeas::io
