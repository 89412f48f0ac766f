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

#include "qmeas/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "qmeas/io.hpp"
#include "qmeas/models.hpp"
#include "qmeas/nonideality.hpp"
#include "qmeas/simulate.hpp"

namespace qmeas::cli {

namespace {

using nlohmann::ordered_json;

// 17 significant digits: round-trips every double bit-exactly.
std::string fmt17(double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", x);
    return buffer;
}

ordered_json stochastic_to_json(const StochasticMatrix &m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void emit_json(const ordered_json &j,
               const std::optional<std::filesystem::path> &out_path,
               std::ostream &out) {
    const std::string text = j.dump(2) + "\n";
    out << text;
    if (out_path) {
        std::ofstream file(*out_path, std::ios::binary);
        if (!file) {
            throw ParseError("cannot open " + out_path->string() + " for writing");
        }
        file << text;
    }
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw ParseError("cannot open " + path.string() + " for writing");
    }
    file << text;
    if (!file) {
        throw ParseError("write failed: " + path.string());
    }
}

const io::OperatorObject *find_role(const io::OperatorFile &file,
                                    const std::string &role,
                                    std::size_t skip = 0) {
    for (const auto &obj : file.objects) {
        if (obj.role == role || (role == "measurement" &&
                                 (obj.role == "povm" || obj.role == "pvm"))) {
            if (skip == 0) {
                return &obj;
            }
            --skip;
        }
    }
    return nullptr;
}

const io::OperatorObject *find_valued_pvm(const io::OperatorFile &file,
                                          std::size_t skip) {
    for (const auto &obj : file.objects) {
        if (obj.role == "pvm" && !obj.values.empty()) {
            if (skip == 0) {
                return &obj;
            }
            --skip;
        }
    }
    return nullptr;
}

struct TargetPair {
    ValuedObservable a;
    ValuedObservable b;
};

TargetPair load_observable_pair(const io::OperatorFile &file) {
    const auto *obj_a = find_valued_pvm(file, 0);
    const auto *obj_b = find_valued_pvm(file, 1);
    if (obj_a == nullptr || obj_b == nullptr) {
        throw ValidationError(
            "file must contain two objects with role \"pvm\" and outcome values");
    }
    return TargetPair{io::to_valued_observable(*obj_a),
                      io::to_valued_observable(*obj_b)};
}

int map_error(const std::exception &e, std::ostream &out) {
    if (dynamic_cast<const ParseError *>(&e) != nullptr) {
        out << "error: " << e.what() << "\n";
        return kExitIoError;
    }
    if (dynamic_cast<const NumericError *>(&e) != nullptr) {
        out << "error: " << e.what() << "\n";
        return kExitViolation;
    }
    if (dynamic_cast<const Error *>(&e) != nullptr) {
        out << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    out << "error: " << e.what() << "\n";
    return kExitIoError;
}

double min_eigenvalue_of(const ComplexMatrix &m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

} // namespace

LogLevel log_level() {
    const char *env = std::getenv("QMEAS_LOG");
    if (env == nullptr) {
        return LogLevel::Info;
    }
    const std::string value(env);
    if (value == "quiet") {
        return LogLevel::Quiet;
    }
    if (value == "debug") {
        return LogLevel::Debug;
    }
    return LogLevel::Info;
}

void log_info(const std::string &message) {
    if (log_level() >= LogLevel::Info) {
        std::cerr << "qmeas: " << message << "\n";
    }
}

void log_debug(const std::string &message) {
    if (log_level() >= LogLevel::Debug) {
        std::cerr << "qmeas[debug]: " << message << "\n";
    }
}

int cmd_validate(const std::filesystem::path &file, std::ostream &out) {
    io::OperatorFile parsed;
    try {
        parsed = io::load_operator_file(file);
    } catch (const std::exception &e) {
        out << "error: " << e.what() << "\n";
        return kExitIoError;
    }
    bool all_valid = true;
    for (const auto &obj : parsed.objects) {
        const std::string role = obj.role.empty() ? "operator" : obj.role;
        try {
            if (obj.role == "povm" || obj.role == "pvm") {
                std::vector<HermitianOperator> effects;
                for (const auto &m : obj.matrices) {
                    effects.emplace_back(m);
                }
                const PovmDiagnosis diag = diagnose_povm(effects);
                if (!diag.valid) {
                    throw ValidationError(diag.message);
                }
                if (obj.role == "pvm") {
                    Pvm pvm{Povm(std::move(effects))};
                    if (!obj.values.empty()) {
                        io::to_valued_observable(obj);
                    }
                }
                out << obj.name << ": " << role
                    << " valid (completeness_residual="
                    << fmt17(diag.completeness_residual) << ")\n";
            } else if (obj.role == "state") {
                const double trace = obj.matrices.front().trace().real();
                const double min_eig = min_eigenvalue_of(obj.matrices.front());
                io::to_state(obj);
                out << obj.name << ": state valid (trace=" << fmt17(trace)
                    << ", min_eigenvalue=" << fmt17(min_eig) << ")\n";
            } else if (obj.role == "bivariate") {
                const BivariatePovm biv = io::to_bivariate(obj);
                std::vector<HermitianOperator> grid = biv.grid();
                const PovmDiagnosis diag = diagnose_povm(grid);
                out << obj.name << ": bivariate valid (shape=" << biv.rows() << "x"
                    << biv.cols() << ", completeness_residual="
                    << fmt17(diag.completeness_residual) << ")\n";
            } else {
                HermitianOperator op(obj.matrices.front());
                const double dev =
                    max_abs(ComplexMatrix(op.matrix() - op.matrix().adjoint()));
                out << obj.name << ": operator valid (hermiticity_deviation="
                    << fmt17(dev) << ")\n";
            }
        } catch (const std::exception &e) {
            out << obj.name << ": " << role << " INVALID: " << e.what() << "\n";
            all_valid = false;
        }
    }
    return all_valid ? kExitOk : kExitValidation;
}

int cmd_martens(const std::filesystem::path &file,
                const std::optional<std::filesystem::path> &out_path,
                std::ostream &out) {
    try {
        const io::OperatorFile parsed = io::load_operator_file(file);
        const auto *biv_obj = find_role(parsed, "bivariate");
        if (biv_obj == nullptr) {
            throw ValidationError("file must contain a bivariate POVM");
        }
        const BivariatePovm biv = io::to_bivariate(*biv_obj);
        const TargetPair targets = load_observable_pair(parsed);

        const auto result = joint_nonideal_report(biv, targets.a, targets.b);
        if (std::holds_alternative<JointInfeasible>(result)) {
            const auto &inf = std::get<JointInfeasible>(result);
            ordered_json j;
            j["feasible"] = false;
            j["infeasible_marginal"] = inf.marginal;
            j["residual"] = inf.residual;
            emit_json(j, out_path, out);
            return kExitValidation;
        }
        const NonidealityReport &report = std::get<NonidealityReport>(result);
        ordered_json j;
        j["feasible"] = true;
        j["lambda"] = stochastic_to_json(report.lambda);
        j["mu"] = stochastic_to_json(report.mu);
        j["j_lambda"] = report.j_lambda;
        j["j_mu"] = report.j_mu;
        j["martens_bound"] = report.martens_bound;
        j["residual_lambda"] = report.residual_lambda;
        j["residual_mu"] = report.residual_mu;
        j["satisfied"] = report.satisfied;
        emit_json(j, out_path, out);
        return report.satisfied ? kExitOk : kExitViolation;
    } catch (const std::exception &e) {
        return map_error(e, out);
    }
}

int cmd_neutron_sweep(int a_steps, double chi,
                      const std::filesystem::path &out_path, std::ostream &out) {
    try {
        if (a_steps < 2) {
            throw ValidationError("neutron-sweep: a-steps must be >= 2");
        }
        const models::NeutronObservables obs = models::observables(chi);
        const double bound = martens_bound(obs.path, obs.interference);

        std::ostringstream csv;
        csv << "a,J_lambda,J_mu,bound,sum_minus_bound\n";
        for (int i = 0; i < a_steps; ++i) {
            const double a = static_cast<double>(i) / static_cast<double>(a_steps - 1);
            const BivariatePovm biv = models::neutron_bivariate(chi, a);
            const Marginals margs = marginals(biv);
            const NonidealityRecovery rec_lambda =
                recover_nonideality(margs.row, obs.path.pvm());
            const NonidealityRecovery rec_mu =
                recover_nonideality(margs.col, obs.interference.pvm());
            if (!rec_lambda.feasible() || !rec_mu.feasible()) {
                throw ValidationError("neutron-sweep: marginal decomposition infeasible at a=" +
                                      fmt17(a));
            }
            const double j_lambda = row_entropy(*rec_lambda.matrix);
            const double j_mu = row_entropy(*rec_mu.matrix);

            const auto closed = models::neutron_nonideality_closed_form(a);
            const auto closed_j = models::neutron_j_closed_form(a);
            const double matrix_dev = std::max(
                max_abs(RealMatrix(rec_lambda.matrix->entries() -
                                   closed.first.entries())),
                max_abs(RealMatrix(rec_mu.matrix->entries() -
                                   closed.second.entries())));
            const double j_dev = std::max(std::abs(j_lambda - closed_j.j_lambda),
                                          std::abs(j_mu - closed_j.j_mu));
            if (matrix_dev > tol::infeasible || j_dev > tol::infeasible) {
                throw NumericError(
                    "neutron-sweep: recovered values disagree with closed forms at a=" +
                    fmt17(a) + " (matrix dev " + fmt17(matrix_dev) + ", J dev " +
                    fmt17(j_dev) + ")");
            }

            csv << fmt17(a) << "," << fmt17(j_lambda) << "," << fmt17(j_mu) << ","
                << fmt17(bound) << "," << fmt17(j_lambda + j_mu - bound) << "\n";
        }
        write_text_file(out_path, csv.str());
        log_info("wrote " + out_path.string() + " (" + std::to_string(a_steps) +
                 " rows)");
        return kExitOk;
    } catch (const std::exception &e) {
        return map_error(e, out);
    }
}

int cmd_photon(double eta, int n_max, const std::filesystem::path &out_path,
               std::ostream &out) {
    try {
        const models::PhotonModel model =
            models::photon_povm(models::PhotonChannel(eta, n_max));
        const RealMatrix &lambda = model.lambda;

        for (Eigen::Index n = 0; n < lambda.cols(); ++n) {
            const double sum = lambda.col(n).sum();
            if (std::abs(sum - 1.0) > 1e-12) {
                throw NumericError("photon: column " + std::to_string(n) +
                                   " sums to " + fmt17(sum));
            }
        }

        std::ostringstream csv;
        csv << "m";
        for (Eigen::Index n = 0; n < lambda.cols(); ++n) {
            csv << ",n" << n;
        }
        csv << "\n";
        for (Eigen::Index m = 0; m < lambda.rows(); ++m) {
            csv << m;
            for (Eigen::Index n = 0; n < lambda.cols(); ++n) {
                csv << "," << fmt17(lambda(m, n));
            }
            csv << "\n";
        }
        csv << "mean";
        for (Eigen::Index n = 0; n < lambda.cols(); ++n) {
            double mean = 0.0;
            for (Eigen::Index m = 0; m < lambda.rows(); ++m) {
                mean += static_cast<double>(m) * lambda(m, n);
            }
            csv << "," << fmt17(mean);
        }
        csv << "\n";
        write_text_file(out_path, csv.str());
        log_info("wrote " + out_path.string());
        return kExitOk;
    } catch (const std::exception &e) {
        return map_error(e, out);
    }
}

int cmd_simulate(const std::filesystem::path &file, std::uint64_t shots,
                 std::uint64_t seed,
                 const std::optional<std::filesystem::path> &out_path,
                 std::ostream &out) {
    try {
        const io::OperatorFile parsed = io::load_operator_file(file);
        const auto *state_obj = find_role(parsed, "state");
        if (state_obj == nullptr) {
            throw ValidationError("file must contain an object with role \"state\"");
        }
        const DensityOperator rho = io::to_state(*state_obj);

        OutcomeCounts counts;
        std::vector<double> analytic;
        if (const auto *biv_obj = find_role(parsed, "bivariate")) {
            const BivariatePovm biv = io::to_bivariate(*biv_obj);
            analytic = outcome_probabilities(rho, biv);
            counts = sample_outcomes(rho, biv, shots, seed);
        } else if (const auto *povm_obj = find_role(parsed, "measurement")) {
            const Povm povm = io::to_povm(*povm_obj);
            analytic = outcome_probabilities(rho, povm);
            counts = sample_outcomes(rho, povm, shots, seed);
        } else {
            throw ValidationError("file must contain a povm, pvm, or bivariate object");
        }

        ordered_json j;
        j["shots"] = counts.shots;
        j["seed"] = seed;
        j["shape"] = {counts.rows, counts.cols};
        j["grid"] = counts.is_grid;
        j["counts"] = counts.counts;
        ordered_json freq = ordered_json::array();
        for (const auto c : counts.counts) {
            freq.push_back(shots > 0 ? static_cast<double>(c) /
                                           static_cast<double>(shots)
                                     : 0.0);
        }
        j["frequencies"] = std::move(freq);
        j["analytic"] = analytic;
        if (shots > 0) {
            const EmpiricalReport report = empirical_report(counts, analytic);
            j["max_abs_dev"] = report.max_abs_dev;
            j["chi_square"] = report.chi_square;
            j["dof"] = report.dof;
            j["excluded_cells"] = report.excluded_cells;
            j["excluded_count_total"] = report.excluded_count_total;
        }
        emit_json(j, out_path, out);
        return kExitOk;
    } catch (const std::exception &e) {
        return map_error(e, out);
    }
}

int cmd_entropic_check(const std::filesystem::path &file,
                       const std::optional<std::filesystem::path> &out_path,
                       std::ostream &out) {
    try {
        const io::OperatorFile parsed = io::load_operator_file(file);
        const auto *state_obj = find_role(parsed, "state");
        if (state_obj == nullptr) {
            throw ValidationError("file must contain an object with role \"state\"");
        }
        const DensityOperator rho = io::to_state(*state_obj);
        const TargetPair targets = load_observable_pair(parsed);
        const EntropicUrReport report =
            entropic_ur_report(rho, targets.a, targets.b);

        ordered_json j;
        j["h_a"] = report.h_a;
        j["h_b"] = report.h_b;
        j["bound"] = report.bound;
        j["sum"] = report.h_a + report.h_b;
        j["satisfied"] = report.satisfied;
        emit_json(j, out_path, out);
        return report.satisfied ? kExitOk : kExitViolation;
    } catch (const std::exception &e) {
        return map_error(e, out);
    }
}

int cmd_export(const std::string &model, double a, double chi, double eta,
               int n_max, const std::filesystem::path &out_path,
               std::ostream &out) {
    try {
        io::OperatorFile file;
        if (model == "neutron") {
            file.dim = 2;
            const models::NeutronObservables obs = models::observables(chi);
            file.objects.push_back(io::from_povm("neutron_povm",
                                                 models::neutron_povm(chi, a)));
            file.objects.push_back(io::from_bivariate(
                "neutron_joint", models::neutron_bivariate(chi, a)));
            file.objects.push_back(
                io::from_pvm("path", obs.path.pvm(), obs.path.values()));
            file.objects.push_back(io::from_pvm("interference",
                                                obs.interference.pvm(),
                                                obs.interference.values()));
            file.objects.push_back(
                io::from_state("rho", DensityOperator::maximally_mixed(2)));
        } else if (model == "photon") {
            const models::PhotonModel photon =
                models::photon_povm(models::PhotonChannel(eta, n_max));
            file.dim = n_max + 1;
            file.objects.push_back(io::from_povm("photon_povm", photon.povm));
            file.objects.push_back(io::from_state(
                "rho", DensityOperator::maximally_mixed(n_max + 1)));
        } else {
            throw ValidationError("unknown model \"" + model +
                                  "\" (expected neutron or photon)");
        }
        io::save_operator_file(file, out_path);
        log_info("wrote " + out_path.string());
        return kExitOk;
    } catch (const std::exception &e) {
        return map_error(e, out);
    }
}

} // namespace qmeas::cli
