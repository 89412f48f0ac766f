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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "qmeas/cli.hpp"
#include "qmeas/io.hpp"
#include "qmeas/models.hpp"
#include "support/test_matrices.hpp"

using namespace qmeas;
using namespace qmeas::testing;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("qmeas_cli_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

#ifdef QMEAS_CLI_PATH
int run_cli(const std::string &args) {
    const std::string command =
        std::string(QMEAS_CLI_PATH) + " " + args + " >/dev/null 2>/dev/null";
    const int status = std::system(command.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}
#endif

std::vector<std::vector<std::string>> parse_csv(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

void write_neutron_file(const std::filesystem::path &path, double chi, double a) {
    const auto obs = models::observables(chi);
    io::OperatorFile file;
    file.dim = 2;
    file.objects.push_back(io::from_povm("neutron_povm",
                                         models::neutron_povm(chi, a)));
    file.objects.push_back(
        io::from_bivariate("joint", models::neutron_bivariate(chi, a)));
    file.objects.push_back(
        io::from_pvm("path", obs.path.pvm(), obs.path.values()));
    file.objects.push_back(io::from_pvm("interference", obs.interference.pvm(),
                                        obs.interference.values()));
    file.objects.push_back(
        io::from_state("rho", DensityOperator::maximally_mixed(2)));
    io::save_operator_file(file, path);
}

} // namespace

TEST_CASE("cmd_validate verdicts and exit codes", "[cli]") {
    TempDir dir;

    SECTION("well-formed neutron export validates cleanly") {
        const auto path = dir.path / "neutron.json";
        write_neutron_file(path, M_PI / 2.0, 0.5);
        std::ostringstream out;
        REQUIRE(cli::cmd_validate(path, out) == cli::kExitOk);
        REQUIRE_THAT(out.str(),
                     Catch::Matchers::ContainsSubstring("neutron_povm: povm valid"));
        REQUIRE_THAT(out.str(),
                     Catch::Matchers::ContainsSubstring("rho: state valid"));
    }

    SECTION("an effect with a negative eigenvalue is named") {
        io::OperatorFile file;
        file.dim = 2;
        io::OperatorObject bad;
        bad.name = "broken";
        bad.role = "povm";
        bad.matrices.push_back(diag2(1.1, 0.0));
        bad.matrices.push_back(diag2(-0.1, 1.0));
        file.objects.push_back(bad);
        const auto path = dir.path / "bad.json";
        io::save_operator_file(file, path);
        std::ostringstream out;
        REQUIRE(cli::cmd_validate(path, out) == cli::kExitValidation);
        REQUIRE_THAT(out.str(),
                     Catch::Matchers::ContainsSubstring("broken: povm INVALID"));
        REQUIRE_THAT(out.str(), Catch::Matchers::ContainsSubstring("effect 1"));
    }

    SECTION("unreadable input exits 1") {
        std::ostringstream out;
        REQUIRE(cli::cmd_validate(dir.path / "missing.json", out) ==
                cli::kExitIoError);
    }
}

TEST_CASE("cmd_martens across absorber settings", "[cli]") {
    TempDir dir;
    for (const double a : {0.0, 0.5, 1.0}) {
        const auto path = dir.path / "neutron.json";
        write_neutron_file(path, M_PI / 2.0, a);
        std::ostringstream out;
        REQUIRE(cli::cmd_martens(path, std::nullopt, out) == cli::kExitOk);
        REQUIRE_THAT(out.str(),
                     Catch::Matchers::ContainsSubstring("\"satisfied\": true"));
    }
}

TEST_CASE("cmd_martens on a malformed grid exits 2", "[cli]") {
    TempDir dir;
    const auto path = dir.path / "broken.json";
    const auto obs = models::observables(0.3);
    io::OperatorFile file;
    file.dim = 2;
    io::OperatorObject grid;
    grid.name = "joint";
    grid.role = "bivariate";
    grid.grid_rows = 2;
    grid.grid_cols = 2;
    // Sums to 2I, not I.
    grid.matrices = {diag2(1.0, 0.0), diag2(0.0, 1.0), diag2(1.0, 0.0),
                     diag2(0.0, 1.0)};
    file.objects.push_back(grid);
    file.objects.push_back(io::from_pvm("path", obs.path.pvm(), {1.0, -1.0}));
    file.objects.push_back(
        io::from_pvm("interference", obs.interference.pvm(), {1.0, -1.0}));
    io::save_operator_file(file, path);
    std::ostringstream out;
    REQUIRE(cli::cmd_martens(path, std::nullopt, out) == cli::kExitValidation);
}

TEST_CASE("cmd_neutron_sweep writes the documented CSV", "[cli]") {
    TempDir dir;
    const auto csv_path = dir.path / "sweep.csv";
    std::ostringstream out;
    REQUIRE(cli::cmd_neutron_sweep(3, M_PI / 2.0, csv_path, out) == cli::kExitOk);

    const auto rows = parse_csv(read_file(csv_path));
    REQUIRE(rows.size() == 4);
    REQUIRE(rows[0] ==
            std::vector<std::string>{"a", "J_lambda", "J_mu", "bound",
                                     "sum_minus_bound"});
    REQUIRE(std::stod(rows[1][0]) == 0.0);
    REQUIRE(std::stod(rows[2][0]) == 0.5);
    REQUIRE(std::stod(rows[3][0]) == 1.0);

    const auto j_half = models::neutron_j_closed_form(0.5);
    REQUIRE_THAT(std::stod(rows[2][1]),
                 Catch::Matchers::WithinAbs(j_half.j_lambda, 1e-12));
    REQUIRE_THAT(std::stod(rows[2][2]),
                 Catch::Matchers::WithinAbs(j_half.j_mu, 1e-12));
    for (std::size_t r = 1; r < rows.size(); ++r) {
        REQUIRE_THAT(std::stod(rows[r][3]),
                     Catch::Matchers::WithinAbs(std::log(2.0), 1e-12));
        REQUIRE(std::stod(rows[r][4]) >= -1e-9);
    }

    // Reruns are byte-identical.
    const std::string first = read_file(csv_path);
    std::ostringstream out2;
    REQUIRE(cli::cmd_neutron_sweep(3, M_PI / 2.0, csv_path, out2) == cli::kExitOk);
    REQUIRE(read_file(csv_path) == first);
}

TEST_CASE("cmd_neutron_sweep validates a_steps", "[cli]") {
    TempDir dir;
    std::ostringstream out;
    REQUIRE(cli::cmd_neutron_sweep(1, 0.0, dir.path / "x.csv", out) ==
            cli::kExitValidation);
}

TEST_CASE("cmd_photon emits the channel matrix and means", "[cli]") {
    TempDir dir;
    const auto csv_path = dir.path / "photon.csv";

    SECTION("eta = 1 is the identity channel") {
        std::ostringstream out;
        REQUIRE(cli::cmd_photon(1.0, 3, csv_path, out) == cli::kExitOk);
        const auto rows = parse_csv(read_file(csv_path));
        REQUIRE(rows.size() == 6); // header + 4 matrix rows + mean row
        for (int m = 0; m < 4; ++m) {
            for (int n = 0; n < 4; ++n) {
                REQUIRE(std::stod(rows[static_cast<std::size_t>(m + 1)]
                                      [static_cast<std::size_t>(n + 1)]) ==
                        (m == n ? 1.0 : 0.0));
            }
        }
        REQUIRE(rows[5][0] == "mean");
        REQUIRE(std::stod(rows[5][4]) == 3.0);
    }

    SECTION("minimal truncation matches the binomial") {
        std::ostringstream out;
        REQUIRE(cli::cmd_photon(0.5, 1, csv_path, out) == cli::kExitOk);
        const auto rows = parse_csv(read_file(csv_path));
        REQUIRE(std::stod(rows[1][1]) == 1.0);
        REQUIRE(std::stod(rows[1][2]) == 0.5);
        REQUIRE(std::stod(rows[2][1]) == 0.0);
        REQUIRE(std::stod(rows[2][2]) == 0.5);
    }

    SECTION("invalid efficiency exits 2") {
        std::ostringstream out;
        REQUIRE(cli::cmd_photon(0.0, 3, csv_path, out) == cli::kExitValidation);
    }
}

TEST_CASE("cmd_simulate is deterministic and judges nothing", "[cli]") {
    TempDir dir;
    const auto input = dir.path / "neutron.json";
    write_neutron_file(input, M_PI / 2.0, 0.5);
    const auto out_a = dir.path / "sim_a.json";
    const auto out_b = dir.path / "sim_b.json";

    std::ostringstream console_a, console_b;
    REQUIRE(cli::cmd_simulate(input, 50000, 7, out_a, console_a) == cli::kExitOk);
    REQUIRE(cli::cmd_simulate(input, 50000, 7, out_b, console_b) == cli::kExitOk);
    REQUIRE(read_file(out_a) == read_file(out_b));
    REQUIRE(console_a.str() == console_b.str());
    REQUIRE_THAT(console_a.str(),
                 Catch::Matchers::ContainsSubstring("\"chi_square\""));
}

TEST_CASE("cmd_entropic_check on the exported neutron file", "[cli]") {
    TempDir dir;
    const auto input = dir.path / "neutron.json";
    write_neutron_file(input, M_PI / 3.0, 0.5);
    std::ostringstream out;
    REQUIRE(cli::cmd_entropic_check(input, std::nullopt, out) == cli::kExitOk);
    REQUIRE_THAT(out.str(),
                 Catch::Matchers::ContainsSubstring("\"satisfied\": true"));
}

TEST_CASE("cmd_export round trips through cmd_validate", "[cli]") {
    TempDir dir;
    const auto path = dir.path / "exported.json";
    std::ostringstream out;
    REQUIRE(cli::cmd_export("neutron", 0.5, M_PI / 2.0, 0.5, 30, path, out) ==
            cli::kExitOk);
    std::ostringstream verdicts;
    REQUIRE(cli::cmd_validate(path, verdicts) == cli::kExitOk);

    REQUIRE(cli::cmd_export("photon", 0.5, 0.0, 0.25, 8, path, out) ==
            cli::kExitOk);
    std::ostringstream verdicts2;
    REQUIRE(cli::cmd_validate(path, verdicts2) == cli::kExitOk);

    REQUIRE(cli::cmd_export("bogus", 0.5, 0.0, 0.25, 8, path, out) ==
            cli::kExitValidation);
}

#ifdef QMEAS_CLI_PATH

TEST_CASE("qmeas binary end to end", "[cli][subprocess]") {
    TempDir dir;
    const std::string root = dir.path.string();

    SECTION("exit code contract") {
        REQUIRE(run_cli("export --model neutron --a 0.5 --out " + root +
                        "/n.json") == 0);
        REQUIRE(run_cli("validate " + root + "/n.json") == 0);
        REQUIRE(run_cli("martens " + root + "/n.json") == 0);
        REQUIRE(run_cli("entropic-check " + root + "/n.json") == 0);
        REQUIRE(run_cli("validate " + root + "/does_not_exist.json") == 1);
        REQUIRE(run_cli("frobnicate") == 1);

        std::ofstream garbage(dir.path / "garbage.json");
        garbage << "not json at all";
        garbage.close();
        REQUIRE(run_cli("validate " + root + "/garbage.json") == 1);
    }

    SECTION("sweep and simulate produce byte-identical reruns") {
        REQUIRE(run_cli("neutron-sweep --a-steps 11 --chi 0.7 --out " + root +
                        "/s1.csv") == 0);
        REQUIRE(run_cli("neutron-sweep --a-steps 11 --chi 0.7 --out " + root +
                        "/s2.csv") == 0);
        REQUIRE(read_file(dir.path / "s1.csv") == read_file(dir.path / "s2.csv"));

        REQUIRE(run_cli("export --model neutron --a 0.25 --out " + root +
                        "/n.json") == 0);
        REQUIRE(run_cli("simulate " + root + "/n.json --shots 20000 --seed 5 "
                        "--out " + root + "/r1.json") == 0);
        REQUIRE(run_cli("simulate " + root + "/n.json --shots 20000 --seed 5 "
                        "--out " + root + "/r2.json") == 0);
        REQUIRE(read_file(dir.path / "r1.json") == read_file(dir.path / "r2.json"));
    }

    SECTION("photon subcommand") {
        REQUIRE(run_cli("photon --eta 0.5 --nmax 5 --out " + root +
                        "/photon.csv") == 0);
        const auto rows = parse_csv(read_file(dir.path / "photon.csv"));
        REQUIRE(rows.size() == 8);
    }
}

#endif // QMEAS_CLI_PATH
