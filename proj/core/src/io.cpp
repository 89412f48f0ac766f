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

#include "qmeas/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qmeas::io {

namespace {

using nlohmann::ordered_json;

const std::set<std::string> kKnownRoles = {"povm", "pvm", "state", "bivariate",
                                           ""};

ordered_json matrix_to_json(const ComplexMatrix &m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const ordered_json &j, Eigen::Index dim,
                               const std::string &context) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim) {
        throw ParseError(context + ": matrix must have " + std::to_string(dim) +
                         " rows");
    }
    ComplexMatrix m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto &row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
            throw ParseError(context + ": row " + std::to_string(i) +
                             " must have " + std::to_string(dim) + " entries");
        }
        for (Eigen::Index k = 0; k < dim; ++k) {
            const auto &entry = row[static_cast<std::size_t>(k)];
            if (!entry.is_array() || entry.size() != 2 ||
                !entry[0].is_number() || !entry[1].is_number()) {
                throw ParseError(context + ": entry (" + std::to_string(i) + "," +
                                 std::to_string(k) + ") must be a [re, im] pair");
            }
            m(i, k) = Complex(entry[0].get<double>(), entry[1].get<double>());
        }
    }
    return m;
}

OperatorObject object_from_json(const ordered_json &j, Eigen::Index dim,
                                std::size_t index) {
    const std::string context = "object " + std::to_string(index);
    if (!j.is_object()) {
        throw ParseError(context + ": must be a JSON object");
    }
    OperatorObject obj;
    if (!j.contains("name") || !j["name"].is_string()) {
        throw ParseError(context + ": missing string field \"name\"");
    }
    obj.name = j["name"].get<std::string>();
    if (j.contains("role")) {
        if (!j["role"].is_string()) {
            throw ParseError(context + ": \"role\" must be a string");
        }
        obj.role = j["role"].get<std::string>();
        if (kKnownRoles.count(obj.role) == 0) {
            throw ParseError(context + ": unknown role \"" + obj.role + "\"");
        }
    }

    const bool wants_effects = obj.role == "povm" || obj.role == "pvm" ||
                               obj.role == "bivariate";
    if (wants_effects) {
        if (!j.contains("effects") || !j["effects"].is_array() ||
            j["effects"].empty()) {
            throw ParseError(context + ": role \"" + obj.role +
                             "\" requires a nonempty \"effects\" array");
        }
        for (std::size_t k = 0; k < j["effects"].size(); ++k) {
            obj.matrices.push_back(matrix_from_json(
                j["effects"][k], dim, context + " effect " + std::to_string(k)));
        }
        if (obj.role == "bivariate") {
            if (!j.contains("shape") || !j["shape"].is_array() ||
                j["shape"].size() != 2) {
                throw ParseError(context +
                                 ": bivariate objects require \"shape\": [rows, cols]");
            }
            obj.grid_rows = j["shape"][0].get<Eigen::Index>();
            obj.grid_cols = j["shape"][1].get<Eigen::Index>();
            if (obj.grid_rows < 1 || obj.grid_cols < 1 ||
                static_cast<std::size_t>(obj.grid_rows * obj.grid_cols) !=
                    obj.matrices.size()) {
                throw ParseError(context + ": shape does not match effect count");
            }
        }
    } else {
        if (!j.contains("matrix")) {
            throw ParseError(context + ": requires a \"matrix\" field");
        }
        obj.matrices.push_back(
            matrix_from_json(j["matrix"], dim, context + " matrix"));
    }

    if (j.contains("values")) {
        if (!j["values"].is_array()) {
            throw ParseError(context + ": \"values\" must be an array of numbers");
        }
        for (const auto &v : j["values"]) {
            if (!v.is_number()) {
                throw ParseError(context + ": \"values\" must be an array of numbers");
            }
            obj.values.push_back(v.get<double>());
        }
    }
    return obj;
}

ordered_json object_to_json(const OperatorObject &obj) {
    ordered_json j;
    j["name"] = obj.name;
    if (!obj.role.empty()) {
        j["role"] = obj.role;
    }
    if (obj.role == "povm" || obj.role == "pvm" || obj.role == "bivariate") {
        if (obj.role == "bivariate") {
            j["shape"] = {obj.grid_rows, obj.grid_cols};
        }
        ordered_json effects = ordered_json::array();
        for (const auto &m : obj.matrices) {
            effects.push_back(matrix_to_json(m));
        }
        j["effects"] = std::move(effects);
    } else {
        j["matrix"] = matrix_to_json(obj.matrices.front());
    }
    if (!obj.values.empty()) {
        j["values"] = obj.values;
    }
    return j;
}

std::vector<HermitianOperator> to_effects(const OperatorObject &obj) {
    std::vector<HermitianOperator> effects;
    effects.reserve(obj.matrices.size());
    for (const auto &m : obj.matrices) {
        effects.emplace_back(m);
    }
    return effects;
}

} // namespace

OperatorFile load_operator_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("dim") ||
        !j["dim"].is_number_integer()) {
        throw ParseError(path.string() +
                         ": top level must be an object with integer \"dim\"");
    }
    OperatorFile file;
    file.dim = j["dim"].get<Eigen::Index>();
    if (file.dim < 1) {
        throw ParseError(path.string() + ": \"dim\" must be >= 1");
    }
    if (!j.contains("objects") || !j["objects"].is_array()) {
        throw ParseError(path.string() + ": missing \"objects\" array");
    }
    for (std::size_t k = 0; k < j["objects"].size(); ++k) {
        try {
            file.objects.push_back(object_from_json(j["objects"][k], file.dim, k));
        } catch (const ParseError &e) {
            throw ParseError(path.string() + ": " + e.what());
        }
    }
    return file;
}

std::string to_json_string(const OperatorFile &file) {
    ordered_json j;
    j["dim"] = file.dim;
    ordered_json objects = ordered_json::array();
    for (const auto &obj : file.objects) {
        objects.push_back(object_to_json(obj));
    }
    j["objects"] = std::move(objects);
    return j.dump(2) + "\n";
}

void save_operator_file(const OperatorFile &file,
                        const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ParseError("cannot open " + path.string() + " for writing");
    }
    out << to_json_string(file);
    if (!out) {
        throw ParseError("write failed: " + path.string());
    }
}

DensityOperator to_state(const OperatorObject &obj) {
    if (obj.role != "state") {
        throw ValidationError("object \"" + obj.name + "\" is not a state");
    }
    return DensityOperator(HermitianOperator(obj.matrices.front()));
}

Povm to_povm(const OperatorObject &obj) {
    if (obj.role != "povm" && obj.role != "pvm") {
        throw ValidationError("object \"" + obj.name + "\" is not a POVM");
    }
    return Povm(to_effects(obj));
}

Pvm to_pvm(const OperatorObject &obj) {
    if (obj.role != "pvm") {
        throw ValidationError("object \"" + obj.name + "\" is not a PVM");
    }
    return Pvm(Povm(to_effects(obj)));
}

BivariatePovm to_bivariate(const OperatorObject &obj) {
    if (obj.role != "bivariate") {
        throw ValidationError("object \"" + obj.name + "\" is not bivariate");
    }
    return BivariatePovm(to_effects(obj), obj.grid_rows, obj.grid_cols);
}

ValuedObservable to_valued_observable(const OperatorObject &obj) {
    if (obj.values.empty()) {
        throw ValidationError("object \"" + obj.name + "\" carries no outcome values");
    }
    return ValuedObservable(to_pvm(obj), obj.values);
}

OperatorObject from_state(std::string name, const DensityOperator &rho) {
    OperatorObject obj;
    obj.name = std::move(name);
    obj.role = "state";
    obj.matrices.push_back(rho.matrix());
    return obj;
}

OperatorObject from_povm(std::string name, const Povm &povm) {
    OperatorObject obj;
    obj.name = std::move(name);
    obj.role = "povm";
    for (const auto &effect : povm.effects()) {
        obj.matrices.push_back(effect.matrix());
    }
    return obj;
}

OperatorObject from_pvm(std::string name, const Pvm &pvm,
                        std::vector<double> values) {
    OperatorObject obj;
    obj.name = std::move(name);
    obj.role = "pvm";
    for (const auto &effect : pvm.effects()) {
        obj.matrices.push_back(effect.matrix());
    }
    obj.values = std::move(values);
    return obj;
}

OperatorObject from_bivariate(std::string name, const BivariatePovm &biv) {
    OperatorObject obj;
    obj.name = std::move(name);
    obj.role = "bivariate";
    obj.grid_rows = biv.rows();
    obj.grid_cols = biv.cols();
    for (const auto &effect : biv.grid()) {
        obj.matrices.push_back(effect.matrix());
    }
    return obj;
}

OperatorObject from_operator(std::string name, const HermitianOperator &op) {
    OperatorObject obj;
    obj.name = std::move(name);
    obj.matrices.push_back(op.matrix());
    return obj;
}

} // namespace qmeas::io
