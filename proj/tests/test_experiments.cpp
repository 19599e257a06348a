// Copyright 2026 The focksim Authors
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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "focksim/experiments.hpp"
#include "test_support.hpp"

using namespace focksim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Scratch directory, also installed as FOCKSIM_OUT_DIR for the test.
class ExperimentTest : public ::testing::Test {
   protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("focksim_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        setenv("FOCKSIM_OUT_DIR", dir_.c_str(), 1);
    }
    void TearDown() override {
        unsetenv("FOCKSIM_OUT_DIR");
        fs::remove_all(dir_);
    }

    cli::RunResult run(const std::vector<std::string>& args) {
        cli::ExperimentConfig c;
        c.experiment = args.at(0);
        for (std::size_t i = 1; i < args.size(); ++i) cli::apply_override(c, args[i]);
        return cli::run(c);
    }

    fs::path write(const std::string& name, const std::string& text) {
        std::ofstream(dir_ / name) << text;
        return dir_ / name;
    }

    struct Shell {
        int status;
        std::string out, err;
    };
    Shell shell(const std::string& args) {
        const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
        const std::string cmd = std::string(FOCKSIM_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
        const int raw = std::system(cmd.c_str());
        return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
    }

    fs::path dir_;
};

/// Numeric CSV body (header dropped); "inf", "-inf" and "nan" parse as such.
std::vector<std::vector<double>> read_csv(const std::string& text, std::string* header = nullptr) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    if (header) *header = line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::strtod(cell.c_str(), nullptr));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST(ConfigParser, ReadsKeysCommentsAndReservedFields) {
    const auto c = cli::parse_config(
        "# cascade run\n"
        "experiment = cascade\n"
        "  m0 = 0   # start\n"
        "n0=0.70710678\n"
        "seed = 18446744073709551615\n"
        "output = out/c.csv\n");
    EXPECT_EQ(c.experiment, "cascade");
    EXPECT_EQ(c.parameters.at("m0"), "0");
    EXPECT_EQ(c.parameters.at("n0"), "0.70710678");
    EXPECT_EQ(*c.seed, 18446744073709551615ull);
    EXPECT_EQ(*c.output, "out/c.csv");
}

TEST(ConfigParser, ErrorsCarryLineNumbers) {
    auto message = [](const std::string& text) {
        try {
            cli::parse_config(text);
        } catch (const cli::ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message("experiment = cascade\nm0 0\n").find("line 2"), std::string::npos);
    EXPECT_NE(message("m0 = 1\n\nm0 = 2\n").find("line 3"), std::string::npos);
    EXPECT_NE(message("seed = -4\n").find("line 1"), std::string::npos);
    EXPECT_NE(message("seed = 18446744073709551616\n").find("seed"), std::string::npos);
    EXPECT_NE(message("= 4\n").find("line 1"), std::string::npos);
    EXPECT_NE(message("k =\n").find("line 1"), std::string::npos);
}

TEST(ConfigParser, OverridesWin) {
    auto c = cli::parse_config("experiment = cascade\nk = 4\n");
    cli::apply_override(c, "k=7");
    cli::apply_override(c, "seed=9");
    EXPECT_EQ(c.parameters.at("k"), "7");
    EXPECT_EQ(*c.seed, 9u);
    EXPECT_THROW(cli::apply_override(c, "k"), cli::ConfigError);
}

TEST(Resolve, SemanticChecks) {
    auto resolve = [](const std::string& text) { return cli::resolve(cli::parse_config(text)); };
    auto message = [&](const std::string& text) {
        try {
            resolve(text);
        } catch (const cli::ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message("experiment = teleport\n").find("field 'experiment'"), std::string::npos);
    EXPECT_NE(message("m0 = 1\n").find("field 'experiment'"), std::string::npos);
    EXPECT_NE(message("experiment = cascade\nm0 = 0\nn0 = 1\nfoo = 2\n").find("'foo'"), std::string::npos);
    EXPECT_NE(message("experiment = cascade\nm0 = x\nn0 = 1\n").find("'m0'"), std::string::npos);
    EXPECT_NE(message("experiment = cascade\nm0 = 0\nn0 = 1\nk = 2.5\n").find("'k'"), std::string::npos);
    EXPECT_NE(message("experiment = cascade\nm0 = 0\n").find("'n0'"), std::string::npos);
    EXPECT_NE(message("experiment = cascade\nm0 = 0\nn0 = 0\n").find("m0"), std::string::npos);
    EXPECT_NE(message("experiment = ghz-circuit\nsamples = 10\n").find("seed"), std::string::npos);
    EXPECT_NE(message("experiment = ghz-circuit\ntheta = 0.3\n").find("theta"), std::string::npos);
    EXPECT_NE(message("experiment = homodyne-sweep\n").find("m0"), std::string::npos);
    EXPECT_NE(message("experiment = homodyne-sweep\nsource = ghz\ntheta = 0.5\n").find("theta"), std::string::npos);
    EXPECT_NE(message("experiment = mixture\nk = 1,0.5\n").find("'k'"), std::string::npos);
    EXPECT_NE(message("experiment = pdc-weights\ntau = -1\n").find("'tau'"), std::string::npos);
    EXPECT_NE(message("experiment = circuit\ncircuit = /nonexistent\ninput = psi1\n").find("circuit"), std::string::npos);
    EXPECT_NO_THROW(resolve("experiment = ghz-circuit\n"));
    EXPECT_NO_THROW(resolve("experiment = psi-theta\n"));
}

TEST_F(ExperimentTest, CascadeRatiosAndMeta) {
    const auto r = run({"cascade", "m0=0", "n0=0.70710678", "k=10"});
    EXPECT_EQ(r.output, dir_ / "cascade.csv");
    std::string header;
    const auto rows = read_csv(slurp(r.output), &header);
    EXPECT_EQ(header, "k,m_k,n_k,ratio,C_k,step_success_prob,cumulative_prob,fidelity_psi3");
    ASSERT_EQ(rows.size(), 11u);
    const double want[] = {3, 3.0 / 5, 9.0 / 7, 15.0 / 17, 33.0 / 31};
    for (int k = 1; k <= 5; ++k) EXPECT_NEAR(rows[k][3], want[k - 1], 1e-12);
    EXPECT_NEAR(std::abs(rows[10][3] - 1), 2.0 / 1025, 1e-12);
    double cumulative = 1;
    for (const auto& row : rows) {
        EXPECT_NEAR(row[4], 2 * (row[1] * row[1] + row[2] * row[2]), 1e-9 * row[4]);  // C_k
        cumulative *= row[5];
        EXPECT_NEAR(row[6], cumulative, 1e-15);
        EXPECT_LE(row[7], 1 + 1e-12);
    }
    const std::string meta = slurp(r.meta);
    EXPECT_NE(meta.find("experiment = cascade\n"), std::string::npos);
    EXPECT_NE(meta.find("version = "), std::string::npos);
    EXPECT_NE(meta.find("alpha = 1000\n"), std::string::npos);
    EXPECT_NE(meta.find("k = 10\n"), std::string::npos);
}

TEST_F(ExperimentTest, CascadeCapacityNamesParameter) {
    try {
        run({"cascade", "m0=0", "n0=1", "k=31"});
        FAIL();
    } catch (const cli::NumericError& e) {
        EXPECT_NE(std::string(e.what()).find("'k'"), std::string::npos);
    }
}

TEST_F(ExperimentTest, PdcWeightsAtZeroSqueezing) {
    const auto rows = read_csv(slurp(run({"pdc-weights", "tau=0"}).output));
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0], (std::vector<double>{0, 1, 1}));
}

TEST_F(ExperimentTest, PdcWeightsRoundTrip) {
    const auto rows = read_csv(slurp(run({"pdc-weights", "tau=0.5"}).output));
    const SqueezedExpansion want = squeezed_weights(0.5, static_cast<int>(rows.size()) - 1);
    EXPECT_LT(want.truncation_bound(), 1e-17);
    double total = 0;
    for (std::size_t n = 0; n < rows.size(); ++n) {
        EXPECT_EQ(rows[n][1], want.weights[n]);
        EXPECT_EQ(rows[n][2], rows[n][1] * rows[n][1]);
        total += rows[n][2];
    }
    EXPECT_NEAR(total, 1.0, 1e-15);
    EXPECT_EQ(read_csv(slurp(run({"pdc-weights", "tau=0.5", "n_max=3"}).output)).size(), 4u);
}

TEST_F(ExperimentTest, PsiThetaGridRoundTrip) {
    const auto rows = read_csv(slurp(run({"psi-theta"}).output));
    ASSERT_EQ(rows.size(), 20u);
    EXPECT_EQ(rows.front()[0], 0.0);
    EXPECT_NEAR(rows.back()[0], std::numbers::pi / 2, 1e-15);
    for (const auto& row : rows) {
        EXPECT_NEAR(row[1], 4.0 / 81, 1e-12);
        EXPECT_GE(row[4], 1 - 1e-10);
    }
    EXPECT_NEAR(rows.back()[2], 0.5, 1e-10);
    EXPECT_NEAR(rows.back()[3], 0.5, 1e-10);
}

TEST_F(ExperimentTest, GhzCircuitAnalyticAndSampled) {
    const auto exact = read_csv(slurp(run({"ghz-circuit"}).output));
    ASSERT_EQ(exact.size(), 10u);
    EXPECT_NEAR(exact[0][4], 0.5, 1e-12);
    for (const auto& row : exact) EXPECT_GE(row[5], 1 - 1e-9);

    const auto sampled = read_csv(slurp(run({"ghz-circuit", "alpha=1000", "theta=0.1", "seed=42", "samples=10000"}).output));
    for (int i = 0; i < 10; ++i) {
        const long long count = std::llround(sampled[i][4] * 10000);
        EXPECT_TRUE(oracle::within_3sigma(count, 10000, i == 0 ? 0.5 : 1.0 / 18)) << i << ' ' << count;
        EXPECT_GE(sampled[i][5], 1 - 1e-5);
    }
}

TEST_F(ExperimentTest, SampledOutputIsByteIdentical) {
    const std::string first = slurp(run({"symmetry-detect", "m0=0.2", "n0=0.6", "samples=300", "seed=7"}).output);
    const std::string second = slurp(run({"symmetry-detect", "m0=0.2", "n0=0.6", "samples=300", "seed=7"}).output);
    EXPECT_EQ(first, second);
    const std::string other = slurp(run({"symmetry-detect", "m0=0.2", "n0=0.6", "samples=300", "seed=8"}).output);
    EXPECT_NE(first, other);
    EXPECT_EQ(read_csv(first).size(), 300u);
}

TEST_F(ExperimentTest, SymmetryDetectPeakCentres) {
    const std::string text = slurp(run({"symmetry-detect", "m0=0.3", "n0=0.6403124237432849"}).output);
    EXPECT_NE(text.find("0,symmetric,2000,"), std::string::npos);
    EXPECT_NE(text.find("1,asymmetric,"), std::string::npos);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    double total = 0;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        ASSERT_EQ(cells.size(), 6u);
        total += std::stod(cells[3]);
        EXPECT_GE(std::stod(cells[5]), 1 - 1e-6);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST_F(ExperimentTest, HomodyneSweepIntegratesToOne) {
    const auto rows = read_csv(slurp(run({"homodyne-sweep", "m0=0.3", "n0=0.6", "points=2001", "x_min=1980", "x_max=2010"}).output));
    ASSERT_EQ(rows.size(), 2001u);
    double integral = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) integral += (rows[i][0] - rows[i - 1][0]) * (rows[i][1] + rows[i - 1][1]) / 2;
    EXPECT_NEAR(integral, 1.0, 1e-6);
    for (const auto& row : rows) {
        EXPECT_EQ(row[2], row[0] > 1000 * (1 + std::cos(0.1)) ? 1 : 0);
        // Clean near either peak; mixed close to the threshold where the peaks overlap.
        if (std::abs(row[0] - 2000) < 2 || std::abs(row[0] - 2000 * std::cos(0.1)) < 2) {
            EXPECT_GE(row[3], 1 - 1e-6) << row[0];
        }
    }
    const auto dip = std::min_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a[3] < b[3]; });
    EXPECT_NEAR((*dip)[0], 1000 * (1 + std::cos(0.1)), 0.5);
    EXPECT_LT((*dip)[3], 0.5);
    const auto ghz = read_csv(slurp(run({"homodyne-sweep", "source=ghz", "points=50"}).output));
    ASSERT_EQ(ghz.size(), 50u);
    EXPECT_EQ(ghz.front()[2], 0);
    EXPECT_EQ(ghz.back()[2], 9);
}

TEST_F(ExperimentTest, MixtureRows) {
    const auto rows = read_csv(slurp(run({"mixture", "k=1,2,3,10,1000000"}).output));
    ASSERT_EQ(rows.size(), 5u);
    for (const auto& row : rows) EXPECT_NEAR(row[1] * row[1] + row[2] * row[2] + row[3] * row[3], 1.0, 1e-12);
    EXPECT_EQ(rows[0][1], 1.0);
    EXPECT_EQ(rows[1][3], 0.0);
    EXPECT_THROW(run({"mixture", "k=1.5"}), cli::NumericError);
}

TEST_F(ExperimentTest, CircuitExperimentWritesState) {
    const fs::path circuit = write("hom.circuit", "BS50 a b   # one photon per port\n");
    const fs::path state = write("in.state", "# modes: aH aV bH bV\n1 0 : 1 0 1 0\n");
    const auto r = run({"circuit", "circuit=" + circuit.string(), "input=" + state.string(), "output=hom.state"});
    const FockKet out = read_state(slurp(r.output));
    EXPECT_NEAR(std::norm(out.amplitude(make_occupation({2, 0, 0, 0}))), 0.5, 1e-15);
    EXPECT_NEAR(std::norm(out.amplitude(make_occupation({0, 0, 2, 0}))), 0.5, 1e-15);

    const auto builtin = run({"circuit", "circuit=" + circuit.string(), "input=psi2", "output=psi2.state"});
    EXPECT_NEAR(fidelity(read_state(slurp(builtin.output)), psi_n(2)), 1.0, 1e-12);
    EXPECT_THROW(run({"circuit", "circuit=" + circuit.string(), "input=psi6"}), cli::NumericError);
    const fs::path broken = write("bad.circuit", "BS50 a b\nWARP a\n");
    EXPECT_THROW(run({"circuit", "circuit=" + broken.string(), "input=psi1"}), cli::ConfigError);
}

TEST_F(ExperimentTest, ToolListValidateAndExitCodes) {
    const auto list = shell("list");
    EXPECT_EQ(list.status, 0);
    for (const auto& e : cli::experiments()) EXPECT_NE(list.out.find(e.name + ":"), std::string::npos);

    const fs::path good = write("good.cfg", "experiment = ghz-circuit\nalpha = 1000\ntheta = 0.1\n");
    const auto ok = shell("validate " + good.string());
    EXPECT_EQ(ok.status, 0);
    EXPECT_EQ(ok.out, "ok\n");

    const auto wide = shell("validate " + good.string() + " theta=0.3");
    EXPECT_EQ(wide.status, 2);
    EXPECT_NE(wide.err.find("theta"), std::string::npos);
    EXPECT_EQ(std::count(wide.err.begin(), wide.err.end(), '\n'), 1);

    const fs::path bad = write("bad.cfg", "experiment = cascade\nm0 0\n");
    const auto syntax = shell("validate " + bad.string());
    EXPECT_EQ(syntax.status, 2);
    EXPECT_NE(syntax.err.find("line 2"), std::string::npos);

    EXPECT_EQ(shell("validate " + write("x.cfg", "experiment = teleport\n").string()).status, 2);
    EXPECT_EQ(shell("run cascade m0=0 n0=1 k=40").status, 3);
    EXPECT_EQ(shell("run").status, 2);

    const auto run_ok = shell("run " + good.string() + " output=nested/g.csv");
    EXPECT_EQ(run_ok.status, 0);
    EXPECT_TRUE(fs::exists(dir_ / "g.csv"));  // FOCKSIM_OUT_DIR keeps the file name only
    EXPECT_TRUE(fs::exists(dir_ / "g.csv.meta"));
}
