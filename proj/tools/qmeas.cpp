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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qmeas/cli.hpp"

namespace {

constexpr double kHalfPi = 1.5707963267948966;

std::optional<std::filesystem::path> optional_path(const std::string &s) {
    if (s.empty()) {
        return std::nullopt;
    }
    return std::filesystem::path(s);
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{
        "qmeas - generalized (POVM-based) quantum measurement toolkit.\n"
        "Angles are radians. Exit codes: 0 ok/satisfied, 1 I/O or parse error,\n"
        "2 validation failure or infeasible decomposition, 3 inequality\n"
        "violation or cross-check failure. Set QMEAS_LOG=quiet|info|debug to\n"
        "control logging on stderr."};
    app.require_subcommand(1);

    std::string file;
    std::string out_file;
    int a_steps = 101;
    double chi = kHalfPi;
    double eta = 0.5;
    int n_max = 30;
    std::uint64_t shots = 100000;
    std::uint64_t seed = 1;
    double a = 0.5;
    std::string model = "neutron";

    auto *validate = app.add_subcommand(
        "validate", "Validate every object in an operator file.");
    validate->add_option("file", file, "Operator file (JSON)")->required();

    auto *martens = app.add_subcommand(
        "martens",
        "Joint non-ideality report: recover both non-ideality matrices from a "
        "bivariate POVM's marginals and check the Martens inequality.");
    martens->add_option("file", file, "Operator file with a bivariate POVM and two valued PVMs (row target first)")
        ->required();
    martens->add_option("--out", out_file, "Also write the JSON report here");

    auto *sweep = app.add_subcommand(
        "neutron-sweep",
        "Sweep the absorber transmission a over [0,1] and write "
        "a,J_lambda,J_mu,bound,sum_minus_bound as CSV.");
    sweep->add_option("--a-steps", a_steps, "Grid points over [0,1]")
        ->default_val(101)
        ->check(CLI::Range(2, 1000000));
    sweep->add_option("--chi", chi, "Phase shift in radians")->default_val(kHalfPi);
    sweep->add_option("--out", out_file, "Output CSV path")->required();

    auto *photon = app.add_subcommand(
        "photon",
        "Write the inefficient-detector non-ideality matrix and per-Fock mean "
        "detected counts as CSV.");
    photon->add_option("--eta", eta, "Quantum efficiency in (0,1]")->required();
    photon->add_option("--nmax", n_max, "Number-basis truncation")->default_val(30);
    photon->add_option("--out", out_file, "Output CSV path")->required();

    auto *simulate = app.add_subcommand(
        "simulate",
        "Sample measurement outcomes of the file's state and measurement; "
        "reports counts and empirical statistics (reported, not judged).");
    simulate->add_option("file", file, "Operator file with a state and a povm/pvm/bivariate object")
        ->required();
    simulate->add_option("--shots", shots, "Number of samples")->default_val(100000);
    simulate->add_option("--seed", seed, "Generator seed")->default_val(1);
    simulate->add_option("--out", out_file, "Also write the JSON report here");

    auto *entropic = app.add_subcommand(
        "entropic-check",
        "Entropic uncertainty report for the file's state and its two valued PVMs.");
    entropic->add_option("file", file, "Operator file")->required();
    entropic->add_option("--out", out_file, "Also write the JSON report here");

    auto *exporter = app.add_subcommand(
        "export", "Write a built-in model (neutron or photon) as an operator file.");
    exporter->add_option("--model", model, "neutron | photon")->required();
    exporter->add_option("--a", a, "Neutron absorber transmission in [0,1]")
        ->default_val(0.5);
    exporter->add_option("--chi", chi, "Neutron phase shift in radians")
        ->default_val(kHalfPi);
    exporter->add_option("--eta", eta, "Photon quantum efficiency in (0,1]")
        ->default_val(0.5);
    exporter->add_option("--nmax", n_max, "Photon number-basis truncation")
        ->default_val(30);
    exporter->add_option("--out", out_file, "Output operator file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return qmeas::cli::kExitIoError;
    }

    if (validate->parsed()) {
        return qmeas::cli::cmd_validate(file, std::cout);
    }
    if (martens->parsed()) {
        return qmeas::cli::cmd_martens(file, optional_path(out_file), std::cout);
    }
    if (sweep->parsed()) {
        return qmeas::cli::cmd_neutron_sweep(a_steps, chi, out_file, std::cout);
    }
    if (photon->parsed()) {
        return qmeas::cli::cmd_photon(eta, n_max, out_file, std::cout);
    }
    if (simulate->parsed()) {
        return qmeas::cli::cmd_simulate(file, shots, seed, optional_path(out_file),
                                        std::cout);
    }
    if (entropic->parsed()) {
        return qmeas::cli::cmd_entropic_check(file, optional_path(out_file),
                                              std::cout);
    }
    if (exporter->parsed()) {
        return qmeas::cli::cmd_export(model, a, chi, eta, n_max, out_file,
                                      std::cout);
    }
    return qmeas::cli::kExitIoError;
}
