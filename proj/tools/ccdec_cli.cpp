// Command-line frontend: Monte Carlo sweeps, schedule enumeration, error
// model export, and curve fitting, all with reproducible seeded configs.
//
// Exit codes: 0 success, 2 usage error, 3 infeasible/degenerate input,
// 4 shot budget exceeded before reaching the failure target.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccdec/analysis.hpp"
#include "ccdec/montecarlo.hpp"

using nlohmann::json;
namespace cc = ccdec;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitBudget = 4;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// "v" for a single value, "start:stop:count" for a log-spaced grid.
std::vector<double> parse_p_grid(const std::string& spec) {
    size_t c1 = spec.find(':');
    if (c1 == std::string::npos) return {std::stod(spec)};
    size_t c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos) throw CLI::ValidationError("--p wants v or start:stop:count");
    double start = std::stod(spec.substr(0, c1));
    double stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    int count = std::stoi(spec.substr(c2 + 1));
    if (count < 2 || !(start > 0.0) || !(stop > start))
        throw CLI::ValidationError("--p grid needs 0 < start < stop and count >= 2");
    std::vector<double> out;
    double la = std::log(start), lb = std::log(stop);
    for (int i = 0; i < count; ++i)
        out.push_back(std::exp(la + (lb - la) * i / (count - 1)));
    return out;
}

int worker_count() {
    const char* env = std::getenv("CCDEC_WORKERS");
    if (!env) return 1;
    int n = std::atoi(env);
    if (n < 1) throw CLI::ValidationError("CCDEC_WORKERS must be a positive integer");
    return n;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw CLI::ValidationError("cannot open output file: " + path);
    return file;
}

void write_header(std::ostream& os, const json& config) {
    os << "# config=" << config.dump() << "\n";
}

struct SimulateOpts {
    std::string mode = "bitflip";
    std::vector<int> ds;
    int rounds = 0;  // 0: use T = d
    std::string p_spec;
    std::string schedule = "2,3,6,5,4,1;3,4,7,6,5,2";
    uint64_t shots = 0;
    uint64_t target_failures = 0;
    uint64_t max_shots = 100000000;
    uint64_t seed = 1;
    std::string out;
};

json simulate_config(const SimulateOpts& o) {
    return json{{"command", "simulate"},
                {"mode", o.mode},
                {"d", o.ds},
                {"T", o.rounds},
                {"p", o.p_spec},
                {"schedule", o.schedule},
                {"shots", o.shots},
                {"target_failures", o.target_failures},
                {"max_shots", o.max_shots},
                {"seed", o.seed}};
}

int cmd_simulate(const SimulateOpts& o) {
    worker_count();  // validate CCDEC_WORKERS; results are worker-independent
    std::vector<double> ps = parse_p_grid(o.p_spec);
    if (o.ds.empty()) throw CLI::ValidationError("--d is required");
    if (!o.shots && !o.target_failures)
        throw CLI::ValidationError("one of --shots or --target-failures is required");
    cc::CnotSchedule sched = cc::CnotSchedule::parse(o.schedule);
    std::ofstream file;
    std::ostream& os = open_output(file, o.out);
    write_header(os, simulate_config(o));
    os << "mode,d,T,p,basis,shots,failures,rate,ci_low,ci_high\n";
    bool budget_hit = false;
    uint64_t point = 0;
    auto row = [&](int d, int t, double p, const char* basis, const cc::BinomialEstimate& e) {
        os << o.mode << ',' << d << ',' << t << ',' << fmt17(p) << ',' << basis << ',' << e.shots
           << ',' << e.failures << ',' << fmt17(e.rate()) << ',' << fmt17(e.ci_low()) << ','
           << fmt17(e.ci_high()) << "\n";
    };
    for (int d : o.ds)
        for (double p : ps) {
            // Every grid point gets a private seed so sweeps can be re-run or
            // extended point by point.
            uint64_t point_seed = cc::Rng(o.seed, point++).next_u64();
            if (o.mode == "bitflip") {
                cc::Decoder2d dec(cc::build_triangular(d));
                cc::BinomialEstimate est;
                uint64_t want = o.shots ? o.shots : 10000;
                while (true) {
                    cc::BinomialEstimate b =
                        cc::run_bitflip(dec, p, want - est.shots, point_seed, est.shots);
                    est.shots += b.shots;
                    est.failures += b.failures;
                    if (o.shots || est.failures >= o.target_failures) break;
                    if (est.shots >= o.max_shots) {
                        budget_hit = true;
                        break;
                    }
                    want = std::min(est.shots * 2, o.max_shots);
                }
                row(d, 1, p, "-", est);
            } else {
                int t = o.rounds ? o.rounds : d;
                cc::MonteCarloConfig mc;
                mc.seed = point_seed;
                mc.initial_shots = o.shots ? o.shots : 10000;
                mc.max_shots = o.shots ? o.shots : o.max_shots;
                mc.target_failures = o.shots ? 0 : o.target_failures;
                cc::LogicalErrorEstimate est = cc::estimate_logical_error(d, t, sched, p, mc);
                if (!o.shots && (est.z_basis.failures < o.target_failures ||
                                 est.x_basis.failures < o.target_failures))
                    budget_hit = true;
                row(d, t, p, "z", est.z_basis);
                row(d, t, p, "x", est.x_basis);
            }
        }
    os.flush();
    return budget_hit ? kExitBudget : 0;
}

struct EnumerateOpts {
    int length = 7;
    bool reduce = false;
    std::string out;
};

int cmd_enumerate(const EnumerateOpts& o) {
    std::vector<cc::CnotSchedule> all = cc::enumerate_schedules(o.length);
    if (o.reduce) all = cc::reduce_by_symmetry(all, false);
    std::ofstream file;
    std::ostream& os = open_output(file, o.out);
    write_header(os, json{{"command", "enumerate-schedules"},
                          {"length", o.length},
                          {"reduce", o.reduce},
                          {"count", all.size()}});
    for (const cc::CnotSchedule& s : all) os << s.str() << "\n";
    os.flush();
    return 0;
}

struct ExportDemOpts {
    int d = 3;
    int rounds = 0;
    double p = 1e-3;
    std::string schedule = "2,3,6,5,4,1;3,4,7,6,5,2";
    std::string color;
    std::string part;
    std::string out;
};

int cmd_export_dem(const ExportDemOpts& o) {
    if (o.color.empty() != o.part.empty())
        throw CLI::ValidationError("--color and --part must be given together");
    json config{{"command", "export-dem"}, {"d", o.d},           {"T", o.rounds ? o.rounds : o.d},
                {"p", fmt17(o.p)},         {"schedule", o.schedule}, {"color", o.color},
                {"part", o.part}};
    std::ofstream file;
    std::ostream& os = open_output(file, o.out);
    write_header(os, config);
    if (o.p == 0.0) {  // noiseless: empty model
        os.flush();
        return 0;
    }
    cc::MemoryCircuit circuit = cc::build_memory_circuit(
        cc::build_triangular(o.d), cc::CnotSchedule::parse(o.schedule), o.rounds ? o.rounds : o.d);
    cc::Dem sep = cc::separate_by_type(cc::compress_dem(cc::extract_dem(circuit, o.p)));
    if (o.color.empty()) {
        os << cc::serialize_dem(sep);
    } else {
        cc::Color c;
        if (o.color == "R") c = cc::Color::kRed;
        else if (o.color == "G") c = cc::Color::kGreen;
        else if (o.color == "B") c = cc::Color::kBlue;
        else throw CLI::ValidationError("--color must be R, G or B");
        if (o.part != "restricted" && o.part != "only")
            throw CLI::ValidationError("--part must be restricted or only");
        cc::DecomposedDem dd = cc::decompose_dem(sep, c);
        os << cc::serialize_dem(o.part == "restricted" ? dd.restricted : dd.only);
    }
    os.flush();
    return 0;
}

struct FitOpts {
    std::string in;
    std::string out;
};

int cmd_fit(const FitOpts& o) {
    std::ifstream in(o.in);
    if (!in) throw CLI::ValidationError("cannot open input file: " + o.in);
    std::string line, header;
    std::map<std::string, int> col;
    // Aggregated rate per (d, T, p): circuit rows carry two bases that add.
    std::map<std::tuple<int, int, std::string>, double> rate;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (col.empty()) {
            std::istringstream hs(line);
            std::string name;
            int i = 0;
            while (std::getline(hs, name, ',')) col[name] = i++;
            for (const char* need : {"d", "T", "p", "shots", "failures"})
                if (!col.count(need)) {
                    std::cerr << "missing CSV column: " << need << "\n";
                    return kExitUsage;
                }
            continue;
        }
        std::istringstream ls(line);
        std::vector<std::string> f;
        std::string tok;
        while (std::getline(ls, tok, ',')) f.push_back(tok);
        if (f.size() < col.size()) {
            std::cerr << "short CSV row: " << line << "\n";
            return kExitUsage;
        }
        int d = std::stoi(f[col["d"]]);
        int t = std::stoi(f[col["T"]]);
        double shots = std::stod(f[col["shots"]]);
        double failures = std::stod(f[col["failures"]]);
        if (shots <= 0) continue;
        rate[{d, t, f[col["p"]]}] += failures / shots;
    }
    std::vector<cc::SubthresholdPoint> pts;
    for (const auto& [key, r] : rate) {
        if (r <= 0.0) continue;
        auto [d, t, pstr] = key;
        pts.push_back({d, std::stod(pstr), r / t});
    }
    json report{{"command", "fit"}, {"input", o.in}, {"points", pts.size()}};
    try {
        cc::AnsatzFit fit = cc::fit_subthreshold(pts);
        if (fit.degenerate) {
            std::cerr << "degenerate fit: no distance dependence\n";
            return kExitInfeasible;
        }
        report["d0"] = fit.d0;
        report["beta"] = fit.beta;
        report["beta_ci"] = {fit.g_fit.slope_ci_low, fit.g_fit.slope_ci_high};
        report["eta"] = fit.eta;
        report["p_star"] = fit.p_star;
        report["alpha"] = fit.alpha;
        json per_d = json::object();
        for (const auto& [d, lf] : fit.per_d)
            per_d[std::to_string(d)] = {{"G", lf.slope},
                                        {"G_ci", {lf.slope_ci_low, lf.slope_ci_high}},
                                        {"C", lf.intercept},
                                        {"C_ci", {lf.intercept_ci_low, lf.intercept_ci_high}}};
        report["per_d"] = per_d;
    } catch (const std::invalid_argument& e) {
        std::cerr << "fit failed: " << e.what() << "\n";
        return kExitInfeasible;
    }
    std::ofstream file;
    std::ostream& os = open_output(file, o.out);
    os << report.dump(2) << "\n";
    os.flush();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Triangular color code matching decoder toolkit"};
    app.require_subcommand(1);

    SimulateOpts so;
    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo failure-rate sweep");
    sim->add_option("--mode", so.mode, "bitflip or circuit")
        ->check(CLI::IsMember({"bitflip", "circuit"}));
    sim->add_option("--d", so.ds, "code distances")->required();
    sim->add_option("--T", so.rounds, "measurement rounds (circuit mode; default d)");
    sim->add_option("--p", so.p_spec, "noise strength: v or start:stop:count (log grid)")
        ->required();
    sim->add_option("--schedule", so.schedule, "CNOT schedule");
    sim->add_option("--shots", so.shots, "fixed shots per point");
    sim->add_option("--target-failures", so.target_failures, "adaptive failure target per point");
    sim->add_option("--max-shots", so.max_shots, "adaptive shot budget per point");
    sim->add_option("--seed", so.seed, "master seed");
    sim->add_option("--out", so.out, "output CSV path (default stdout)");

    EnumerateOpts eo;
    CLI::App* en = app.add_subcommand("enumerate-schedules", "List valid CNOT schedules");
    en->add_option("--length", eo.length, "schedule length")->required();
    en->add_flag("--reduce", eo.reduce, "one representative per symmetry orbit");
    en->add_option("--out", eo.out, "output path (default stdout)");

    ExportDemOpts xo;
    CLI::App* xd = app.add_subcommand("export-dem", "Export a detector error model");
    xd->add_option("--d", xo.d, "code distance")->required();
    xd->add_option("--T", xo.rounds, "measurement rounds (default d)");
    xd->add_option("--p", xo.p, "noise strength")->required();
    xd->add_option("--schedule", xo.schedule, "CNOT schedule");
    xd->add_option("--color", xo.color, "decomposition color (R, G or B)");
    xd->add_option("--part", xo.part, "restricted or only");
    xd->add_option("--out", xo.out, "output path (default stdout)");

    FitOpts fo;
    CLI::App* ft = app.add_subcommand("fit", "Sub-threshold ansatz fit of a sweep CSV");
    ft->add_option("--in", fo.in, "input CSV path")->required();
    ft->add_option("--out", fo.out, "output JSON path (default stdout)");

    try {
        app.parse(argc, argv);
        if (*sim) return cmd_simulate(so);
        if (*en) return cmd_enumerate(eo);
        if (*xd) return cmd_export_dem(xo);
        if (*ft) return cmd_fit(fo);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const cc::MatchInfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
