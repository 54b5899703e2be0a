#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "plns/checks.hpp"
#include "plns/config.hpp"
#include "plns/diagnostics.hpp"
#include "plns/errors.hpp"
#include "plns/galerkin.hpp"
#include "plns/snapshot.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace plns;

namespace {

// Exit codes: 0 success, 1 validation error, 2 numerical stop or failed
// check, 3 internal error.
constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kNumerical = 2;
constexpr int kInternal = 3;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write file '" + path.string() + "'");
    out << text;
}

std::string diagnostics_csv(const RunResult& res, const std::vector<double>& dtilde_q) {
    std::ostringstream os;
    const auto cols = diagnostics_columns(dtilde_q);
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << "\n";
    for (const auto& rec : res.records) {
        const auto vals = diagnostics_values(rec);
        for (std::size_t i = 0; i < vals.size(); ++i) os << (i ? "," : "") << fmt17(vals[i]);
        os << "\n";
    }
    return os.str();
}

int run_command(const std::string& cfg_path) {
    json rj;
    rj["status"] = "error";
    fs::path outdir = ".";
    bool have_outdir = false;

    auto fail = [&](const std::string& msg, int code) {
        rj["error"] = msg;
        std::error_code ec;
        if (have_outdir) fs::create_directories(outdir, ec);
        try {
            write_text(outdir / "run.json", rj.dump(2) + "\n");
        } catch (const std::exception&) {
            // run.json is best-effort once writing itself fails
        }
        std::cerr << "error: " << msg << "\n";
        return code;
    };

    std::string text;
    try {
        text = read_file(cfg_path);
    } catch (const InvalidInput& e) {
        return fail(e.what(), kValidation);
    }

    RunConfig rc;
    try {
        rc = parse_config(text);
    } catch (const InvalidInput& e) {
        return fail(e.what(), kValidation);
    }

    outdir = rc.output_dir;
    have_outdir = true;
    {
        json echo;
        for (const auto& [k, v] : rc.echo) echo[k] = v;
        rj["config"] = echo;
    }

    try {
        const SimConfig cfg = build_sim_config(rc);

        const auto t0 = std::chrono::steady_clock::now();
        const RunResult res = run(cfg);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        std::error_code ec;
        fs::create_directories(outdir, ec);
        if (ec) return fail("cannot create output directory '" + outdir.string() + "'",
                            kValidation);

        const std::string csv = diagnostics_csv(res, cfg.dtilde_q);
        write_text(outdir / "diagnostics.csv", csv);

        for (std::size_t i = 0; i < res.trajectory.size(); ++i) {
            const GalerkinState& s = res.trajectory[i];
            Field packed(cfg.grid, 1 + cfg.grid.dim);
            const std::size_t np = cfg.grid.num_points();
            for (std::size_t pt = 0; pt < np; ++pt) {
                packed.at(pt, 0) = s.rho.at(pt, 0);
                for (int a = 0; a < cfg.grid.dim; ++a) packed.at(pt, 1 + a) = s.u.at(pt, a);
            }
            char name[32];
            std::snprintf(name, sizeof name, "snapshot_%06zu.plns", i);
            write_snapshot((outdir / name).string(), packed, s.t);
        }

        const bool completed = res.stop == StopReason::completed;
        rj["status"] = completed ? "completed" : "stopped";
        rj["stop_reason"] = to_string(res.stop);
        rj["stop_detail"] = res.stop_detail;
        rj["final_time"] = res.final_time;
        rj["steps"] = res.steps;
        rj["records"] = res.records.size();
        rj["snapshots"] = res.trajectory.size();
        rj["wall_time_seconds"] = wall;
        rj.erase("error");
        write_text(outdir / "run.json", rj.dump(2) + "\n");

        if (rc.log_level != "quiet") {
            std::cout << "run " << (completed ? "completed" : "stopped (" + to_string(res.stop)
                                    + ")")
                      << " at t=" << fmt17(res.final_time) << " after " << res.steps
                      << " steps; outputs in " << outdir.string() << "\n";
            if (!completed) std::cout << "stop detail: " << res.stop_detail << "\n";
        }
        if (rc.log_level == "debug") std::cout << csv;

        return completed ? kOk : kNumerical;
    } catch (const InvalidInput& e) {
        return fail(e.what(), kValidation);
    } catch (const DensityFloorViolation& e) {
        return fail(e.what(), kNumerical);
    } catch (const NumericalBreakdown& e) {
        return fail(e.what(), kNumerical);
    } catch (const std::exception& e) {
        return fail(std::string("internal error: ") + e.what(), kInternal);
    }
}

int report_result(const CheckReport& report) {
    std::cout << report.to_csv();
    std::cerr << (report.pass() ? "overall: pass" : "overall: fail") << "\n";
    return report.pass() ? kOk : kNumerical;
}

int export_command(const std::string& in_path, const std::string& out_path) {
    const Snapshot snap = read_snapshot(in_path);
    const Field& f = snap.field;
    const PeriodicGrid& g = f.grid();

    std::ostringstream os;
    for (int a = 0; a < g.dim; ++a) os << (a ? "," : "") << "x" << (a + 1);
    for (int c = 0; c < f.ncomp(); ++c) os << ",c" << c;
    os << "\n";
    const std::size_t np = g.num_points();
    for (std::size_t pt = 0; pt < np; ++pt) {
        const auto x = g.point(pt);
        for (int a = 0; a < g.dim; ++a) os << (a ? "," : "") << fmt17(x[a]);
        for (int c = 0; c < f.ncomp(); ++c) os << "," << fmt17(f.at(pt, c));
        os << "\n";
    }

    if (out_path.empty() || out_path == "-")
        std::cout << os.str();
    else
        write_text(out_path, os.str());
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"plns: periodic-domain compressible power-law fluid simulator"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "advance a simulation from a key=value config");
    std::string cfg_path;
    run_cmd->add_option("config", cfg_path, "config file path")->required();

    auto* check_cmd = app.add_subcommand("check", "randomized verification suites");
    check_cmd->require_subcommand(1);

    int pot_samples = 10000;
    std::uint64_t pot_seed = 0;
    std::string p_range = "1,2";
    auto* pot_cmd = check_cmd->add_subcommand(
        "potential", "stress-law inequality batch (CSV report on stdout)");
    pot_cmd->add_option("--samples", pot_samples, "sample count (default 10000)");
    pot_cmd->add_option("--seed", pot_seed, "RNG seed (default 0)");
    pot_cmd->add_option("--p-range", p_range, "exponent range a,b inside (1,2] (default 1,2)");

    int ineq_samples = 100;
    std::uint64_t ineq_seed = 0;
    auto* ineq_cmd = check_cmd->add_subcommand(
        "inequalities", "functional identity and inequality batch (CSV report on stdout)");
    ineq_cmd->add_option("--samples", ineq_samples, "sample count (default 100)");
    ineq_cmd->add_option("--seed", ineq_seed, "RNG seed (default 0)");

    int gron_samples = 20;
    std::uint64_t gron_seed = 0;
    auto* gron_cmd = check_cmd->add_subcommand(
        "gronwall", "superlinear Gronwall bound suite (CSV report on stdout)");
    gron_cmd->add_option("--samples", gron_samples, "random instance count (default 20)");
    gron_cmd->add_option("--seed", gron_seed, "RNG seed (default 0)");

    auto* export_cmd = app.add_subcommand("export", "convert a field snapshot to CSV");
    std::string snap_in, snap_out;
    export_cmd->add_option("snapshot", snap_in, "input .plns snapshot")->required();
    export_cmd->add_option("output", snap_out, "output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*run_cmd) return run_command(cfg_path);
        if (*pot_cmd) {
            double lo = 0.0, hi = 0.0;
            if (std::sscanf(p_range.c_str(), "%lf,%lf", &lo, &hi) != 2)
                throw InvalidInput("--p-range expects two comma-separated numbers");
            return report_result(check_potential_suite(pot_samples, pot_seed, lo, hi));
        }
        if (*ineq_cmd) return report_result(check_inequalities_suite(ineq_samples, ineq_seed));
        if (*gron_cmd) return report_result(check_gronwall_suite(gron_samples, gron_seed));
        if (*export_cmd) return export_command(snap_in, snap_out);
        std::cerr << "error: no subcommand\n";
        return kValidation;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}
