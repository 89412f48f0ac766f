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
 * Command implementations behind the qmeas binary. Each command returns a
 * process exit code:
 *
 *   0  ok / satisfied
 *   1  I/O or parse error
 *   2  validation failure / infeasible decomposition
 *   3  inequality violation / cross-check failure
 *
 * Reports are JSON on stdout (and --out when given); sweeps are CSV files
 * with a header row, comma separator, '.' decimal, LF line ends, and 17
 * significant digits. All output is deterministic given identical arguments.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace qmeas::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIoError = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitViolation = 3;

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

/// Resolved from QMEAS_LOG (quiet|info|debug); defaults to info.
LogLevel log_level();
void log_info(const std::string &message);
void log_debug(const std::string &message);

/// Validates every object in an operator file, printing one verdict line per
/// object with residuals.
int cmd_validate(const std::filesystem::path &file, std::ostream &out);

/// Joint non-ideality report for the file's bivariate POVM against its first
/// two valued PVMs (row target first).
int cmd_martens(const std::filesystem::path &file,
                const std::optional<std::filesystem::path> &out_path,
                std::ostream &out);

/// Sweeps the absorber transmission a over [0, 1] and writes CSV columns
/// a, J_lambda, J_mu, bound, sum_minus_bound. Recovered values are
/// cross-checked against the closed forms; disagreement beyond 1e-8 aborts.
int cmd_neutron_sweep(int a_steps, double chi,
                      const std::filesystem::path &out_path,
                      std::ostream &out);

/// Writes the photon non-ideality matrix and per-Fock mean detected counts
/// as CSV.
int cmd_photon(double eta, int n_max, const std::filesystem::path &out_path,
               std::ostream &out);

/// Samples the file's measurement in the file's state and reports counts and
/// empirical statistics. Statistics are reported, not judged.
int cmd_simulate(const std::filesystem::path &file, std::uint64_t shots,
                 std::uint64_t seed,
                 const std::optional<std::filesystem::path> &out_path,
                 std::ostream &out);

/// Entropic uncertainty report for the file's state and its first two valued
/// PVMs.
int cmd_entropic_check(const std::filesystem::path &file,
                       const std::optional<std::filesystem::path> &out_path,
                       std::ostream &out);

/// Writes a built-in model as an operator file: "neutron" (POVM, bivariate
/// grid, path/interference PVMs, maximally mixed state) or "photon" (POVM).
int cmd_export(const std::string &model, double a, double chi, double eta,
               int n_max, const std::filesystem::path &out_path,
               std::ostream &out);

} // namespace qmeas::cli
