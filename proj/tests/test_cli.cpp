#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "ccdec/analysis.hpp"
#include "ccdec/dem.hpp"

namespace ccdec {
namespace {

std::string cli_path() { return CCDEC_CLI_PATH; }

int run_cli(const std::string& args, const std::string& stdout_path = "/dev/null") {
    std::string cmd = cli_path() + " " + args + " > " + stdout_path + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp_file(const std::string& name) { return testing::TempDir() + "ccdec_" + name; }

TEST(Cli, UsageErrorsExitWithTwo) {
    EXPECT_EQ(run_cli(""), 2);
    EXPECT_EQ(run_cli("simulate --mode bitflip --p 0.05"), 2);  // missing --d
    EXPECT_EQ(run_cli("simulate --mode bitflip --d 3 --p 0.05"), 2);  // missing shots
    EXPECT_EQ(run_cli("simulate --mode bitflip --d 3 --p 0.05 --shots 10 --schedule 1,2,3"), 2);
    EXPECT_EQ(run_cli("simulate --mode nonsense --d 3 --p 0.05 --shots 10"), 2);
    EXPECT_EQ(run_cli("export-dem --d 3 --p 1e-3 --color R"), 2);  // --part missing
}

TEST(Cli, SimulateGridShapeAndReproducibility) {
    std::string a = tmp_file("sweep_a.csv"), b = tmp_file("sweep_b.csv");
    std::string args =
        "simulate --mode bitflip --d 3 --d 5 --p 0.06:0.10:5 --shots 500 --seed 7 --out ";
    ASSERT_EQ(run_cli(args + a), 0);
    ASSERT_EQ(run_cli(args + b), 0);
    std::string ca = slurp(a);
    EXPECT_EQ(ca, slurp(b));
    // Header + column row + 2 distances x 5 probabilities.
    int lines = 0;
    for (char ch : ca) lines += ch == '\n';
    EXPECT_EQ(lines, 2 + 10);
    EXPECT_EQ(ca.rfind("# config=", 0), 0u);
}

TEST(Cli, CircuitModeEmitsBothBases) {
    std::string out = tmp_file("circ.csv");
    ASSERT_EQ(run_cli("simulate --mode circuit --d 3 --T 2 --p 0.003 --shots 300 --seed 3 --out " +
                      out),
              0);
    std::string text = slurp(out);
    EXPECT_NE(text.find(",z,"), std::string::npos);
    EXPECT_NE(text.find(",x,"), std::string::npos);
}

TEST(Cli, BudgetExceededExitsWithFour) {
    // Failure target far beyond what the budget allows at low noise.
    EXPECT_EQ(run_cli("simulate --mode bitflip --d 5 --p 0.001 --target-failures 100000 "
                      "--max-shots 2000 --seed 1"),
              4);
}

TEST(Cli, EnumerateSchedulesLengthSix) {
    std::string out = tmp_file("sched6.txt");
    ASSERT_EQ(run_cli("enumerate-schedules --length 6 --out " + out), 0);
    std::string text = slurp(out);
    // Header only: no valid schedules shorter than 7.
    EXPECT_EQ(text.rfind("# config=", 0), 0u);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
}

TEST(Cli, ExportedDemRoundTripsAndRestrictedPartAvoidsColor) {
    std::string full = tmp_file("full.dem"), restr = tmp_file("restricted.dem");
    ASSERT_EQ(run_cli("export-dem --d 3 --T 2 --p 1e-3 --out " + full), 0);
    ASSERT_EQ(run_cli("export-dem --d 3 --T 2 --p 1e-3 --color R --part restricted --out " + restr),
              0);
    Dem dem = parse_dem(slurp(full).substr(slurp(full).find('\n') + 1));
    EXPECT_GT(dem.mechanisms.size(), 0u);
    EXPECT_EQ(serialize_dem(parse_dem(serialize_dem(dem))), serialize_dem(dem));
    Dem rdem = parse_dem(slurp(restr).substr(slurp(restr).find('\n') + 1));
    for (const Mechanism& m : rdem.mechanisms) {
        EXPECT_TRUE(m.observables.empty());
        for (int d : m.detectors) EXPECT_NE(rdem.detectors[d].color, Color::kRed);
    }
    // Reruns are byte-identical.
    std::string again = tmp_file("full2.dem");
    ASSERT_EQ(run_cli("export-dem --d 3 --T 2 --p 1e-3 --out " + again), 0);
    EXPECT_EQ(slurp(full), slurp(again));
}

TEST(Cli, ExportDemAtZeroNoiseIsEmpty) {
    std::string out = tmp_file("empty.dem");
    ASSERT_EQ(run_cli("export-dem --d 3 --p 0 --out " + out), 0);
    std::string text = slurp(out);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
    EXPECT_EQ(text.rfind("# config=", 0), 0u);
}

TEST(Cli, FitRecoversSyntheticParametersFromCsv) {
    // Exact ansatz pfail/T = alpha (p/p*)^(beta (d - d0) + eta) written in the
    // sweep CSV schema with huge shot counts so rates are exact.
    std::string csv = tmp_file("fit_in.csv"), out = tmp_file("fit_out.json");
    {
        std::ofstream f(csv);
        f << "# config={}\nmode,d,T,p,basis,shots,failures,rate,ci_low,ci_high\n";
        const uint64_t shots = 10000000000000000ull;
        for (int d : {13, 15, 17, 19, 21})
            for (double p : {0.01, 0.015, 0.02, 0.03}) {
                double g = 0.49 * (d - 17) + 8.5;
                double pf = 0.12 * std::pow(p / 0.069, g);
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.17g", p);
                f << "bitflip," << d << ",1," << buf << ",-," << shots << ','
                  << static_cast<uint64_t>(pf * shots) << ",0,0,0\n";
            }
    }
    ASSERT_EQ(run_cli("fit --in " + csv + " --out " + out), 0);
    nlohmann::json report = nlohmann::json::parse(slurp(out));
    EXPECT_EQ(report["d0"], 17);
    EXPECT_NEAR(report["beta"].get<double>(), 0.49, 1e-4);
    EXPECT_NEAR(report["eta"].get<double>(), 8.5, 1e-3);
    EXPECT_NEAR(report["p_star"].get<double>(), 0.069, 1e-4);
    EXPECT_NEAR(report["alpha"].get<double>(), 0.12, 1e-3);
    EXPECT_TRUE(report.contains("beta_ci"));
}

TEST(Cli, FitRejectsBadSchemaAndDegenerateData) {
    std::string csv = tmp_file("bad.csv");
    {
        std::ofstream f(csv);
        f << "d,p,shots\n3,0.01,100\n";
    }
    EXPECT_EQ(run_cli("fit --in " + csv), 2);
    // A single distance cannot be fitted.
    std::string one = tmp_file("one_d.csv");
    {
        std::ofstream f(one);
        f << "mode,d,T,p,shots,failures\n";
        for (double p : {0.01, 0.02, 0.03}) f << "bitflip,3,1," << p << ",1000,10\n";
    }
    EXPECT_EQ(run_cli("fit --in " + one), 3);
    EXPECT_EQ(run_cli("fit --in /nonexistent.csv"), 2);
}

}  // namespace
}  // namespace ccdec
