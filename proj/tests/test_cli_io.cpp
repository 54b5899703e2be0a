#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "plns/config.hpp"
#include "plns/snapshot.hpp"

using namespace plns;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
#ifdef PLNS_CLI_PATH
    return PLNS_CLI_PATH;
#else
    const char* p = std::getenv("PLNS_CLI_PATH");
    REQUIRE(p != nullptr);
    return p;
#endif
}

int run_cli(const std::string& args, const std::string& stdout_path,
            const std::string& workdir = "") {
    std::string cmd;
    if (!workdir.empty()) cmd += "cd '" + workdir + "' && ";
    cmd += "'" + cli_path() + "' " + args + " > '" + stdout_path + "' 2>&1";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

const std::string kBaseConfig =
    "dim = 1\n"
    "n = 16\n"
    "dt = 1e-3\n"
    "T_end = 5e-3\n"
    "log_level = quiet\n";

struct TestDir {
    fs::path root;
    explicit TestDir(const std::string& name) : root(name) {
        fs::remove_all(root);
        fs::create_directories(root);
    }
};

} // namespace

TEST_CASE("config parsing: defaults, comments, echo") {
    RunConfig rc = parse_config(
        "# leading comment\n"
        "dim = 1\n"
        "\n"
        "n = 32   # trailing comment\n"
        "dt = 1e-3\n"
        "T_end = 0.01\n");
    CHECK(rc.dim == 1);
    CHECK(rc.n == 32);
    CHECK(rc.dt == 1e-3);
    CHECK(rc.t_end == 0.01);
    CHECK(rc.nmodes == 8);
    CHECK(rc.gamma == 1.5);
    CHECK(rc.delta == 1e-3);
    CHECK(rc.theorem_mode);
    CHECK(rc.integrator == Integrator::explicit_rk2);
    CHECK(rc.transport == TransportScheme::upwind);
    CHECK(rc.p.kind == "constant");
    CHECK(rc.p.constant == 1.8);
    CHECK(rc.rho0.kind == "constant");
    CHECK(rc.u0.kind == "zero");
    CHECK(rc.m0.kind == "none");
    CHECK(rc.output_dir == "out");
    REQUIRE(rc.dtilde_q.size() == 2);
    CHECK(rc.dtilde_q[0] == 2.0);
    CHECK(rc.dtilde_q[1] == 4.0);

    REQUIRE(!rc.echo.empty());
    CHECK(rc.echo[0].first == "dim");
    CHECK(rc.echo[0].second == "1");
    CHECK(rc.echo[1].first == "n");
}

TEST_CASE("config parsing: error messages carry line and key") {
    const std::string base = "dim = 1\nn = 16\ndt = 1e-3\nT_end = 0.01\n";

    // Missing required key.
    try {
        parse_config("dim = 1\nn = 16\ndt = 1e-3\n");
        FAIL("expected an error");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("missing required key 'T_end'") != std::string::npos);
    }

    // Unknown key, with its line number.
    try {
        parse_config(base + "frobz = 3\n");
        FAIL("expected an error");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("unknown key 'frobz'") != std::string::npos);
        CHECK(std::string(e.what()).find("line 5") != std::string::npos);
    }

    // Duplicate key names both lines.
    try {
        parse_config("dim = 1\ndim = 2\nn = 16\ndt = 1e-3\nT_end = 0.01\n");
        FAIL("expected an error");
    } catch (const InvalidInput& e) {
        const std::string msg = e.what();
        CHECK(msg.find("duplicate key 'dim'") != std::string::npos);
        CHECK(msg.find("lines 1 and 2") != std::string::npos);
    }

    // Malformed numeric value.
    try {
        parse_config("dim = banana\nn = 16\ndt = 1e-3\nT_end = 0.01\n");
        FAIL("expected an error");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("cannot parse 'banana'") != std::string::npos);
    }

    // Line without '='.
    CHECK_THROWS_AS(parse_config(base + "what is this\n"), InvalidInput);

    // Bad enum choice.
    CHECK_THROWS_AS(parse_config(base + "integrator = rk9\n"), InvalidInput);

    // gamma guard is a parse-time validation in theorem mode only.
    try {
        parse_config(base + "gamma = 1.2\n");
        FAIL("expected an error");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("gamma below 3/2") != std::string::npos);
    }
    CHECK_NOTHROW(parse_config(base + "gamma = 1.2\nmode = potential\n"));

    // u0 and m0 are mutually exclusive.
    CHECK_THROWS_AS(parse_config(base + "u0.kind = preset\nm0.kind = file\nm0.file = x\n"),
                    InvalidInput);
}

TEST_CASE("config resolution: presets and files become fields") {
    TestDir dir("cli_test_resolve");

    RunConfig rc = parse_config(
        "dim = 1\nn = 16\ndt = 1e-3\nT_end = 0.01\n"
        "rho0.kind = preset\nrho0.base = 1.2\nrho0.amplitude = 0.3\n"
        "u0.kind = preset\nu0.preset = sin_x\nu0.amplitude = 0.05\n"
        "forcing.kind = constant\nforcing.value = 0.25\n");
    SimConfig cfg = build_sim_config(rc);
    REQUIRE(cfg.rho0.has_value());
    REQUIRE(cfg.u0.has_value());
    REQUIRE(static_cast<bool>(cfg.forcing));
    for (std::size_t pt = 0; pt < cfg.grid.num_points(); ++pt) {
        const double x = cfg.grid.point(pt)[0];
        CHECK(cfg.rho0->at(pt, 0) ==
              doctest::Approx(1.2 + 0.3 * std::sin(x)).epsilon(1e-15));
        CHECK(cfg.u0->at(pt, 0) == doctest::Approx(0.05 * std::sin(x)).epsilon(1e-15));
    }
    VectorField f = cfg.forcing(0.0);
    for (double v : f.data()) CHECK(v == 0.25);

    // Random velocities are reproducible from the seed.
    RunConfig rr = parse_config(
        "dim = 1\nn = 16\ndt = 1e-3\nT_end = 0.01\nseed = 42\n"
        "u0.kind = preset\nu0.preset = random\nu0.amplitude = 0.2\n");
    VectorField u1 = *build_sim_config(rr).u0;
    VectorField u2 = *build_sim_config(rr).u0;
    for (std::size_t i = 0; i < u1.data().size(); ++i) CHECK(u1[i] == u2[i]);
    CHECK(u1.max_value() > 0.0);

    // File-based density round-trips through the snapshot format bit-exactly.
    PeriodicGrid g(1, 16);
    ScalarField rho(g, 1);
    rho.fill([](const std::array<double, 3>& x, int) { return 1.4 + 0.2 * std::cos(x[0]); });
    const std::string snap = (dir.root / "rho.plns").string();
    write_snapshot(snap, rho, 0.0);
    RunConfig rf = parse_config("dim = 1\nn = 16\ndt = 1e-3\nT_end = 0.01\n"
                                "rho0.kind = file\nrho0.file = " + snap + "\n");
    SimConfig cf = build_sim_config(rf);
    REQUIRE(cf.rho0.has_value());
    for (std::size_t i = 0; i < rho.data().size(); ++i) CHECK((*cf.rho0)[i] == rho[i]);

    // Shape mismatches are rejected at resolution time.
    RunConfig rbad = parse_config("dim = 1\nn = 32\ndt = 1e-3\nT_end = 0.01\n"
                                  "rho0.kind = file\nrho0.file = " + snap + "\n");
    CHECK_THROWS_AS(build_sim_config(rbad), InvalidInput);
}

TEST_CASE("cli run: completed run writes diagnostics, snapshots and run.json") {
    TestDir dir("cli_test_run");
    const std::string cfg_path = (dir.root / "run.cfg").string();
    spit(cfg_path, kBaseConfig + "output_dir = " + (dir.root / "out").string() + "\n");

    const int code = run_cli("run '" + cfg_path + "'", (dir.root / "stdout.txt").string());
    CHECK(code == 0);

    const auto rj = nlohmann::json::parse(slurp((dir.root / "out/run.json").string()));
    CHECK(rj["status"] == "completed");
    CHECK(rj["stop_reason"] == "completed");
    CHECK(rj["steps"] == 5);
    CHECK(rj["records"] == 6);
    CHECK(rj["config"]["dim"] == "1");
    CHECK(rj["config"]["T_end"] == "0.0050000000000000001");
    CHECK(rj.contains("wall_time_seconds"));

    const std::string csv = slurp((dir.root / "out/diagnostics.csv").string());
    CHECK(csv.rfind("t,mass,kinetic,internal,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);  // header + 6 records

    // Ends-only snapshot policy: initial and final state.
    CHECK(fs::exists(dir.root / "out/snapshot_000000.plns"));
    CHECK(fs::exists(dir.root / "out/snapshot_000001.plns"));
    CHECK_FALSE(fs::exists(dir.root / "out/snapshot_000002.plns"));
    Snapshot s = read_snapshot((dir.root / "out/snapshot_000001.plns").string());
    CHECK(s.field.ncomp() == 2);  // density plus one velocity component
    CHECK(s.t == doctest::Approx(5e-3).epsilon(1e-12));

    // quiet log level keeps stdout empty.
    CHECK(slurp((dir.root / "stdout.txt").string()).empty());
}

TEST_CASE("cli run: validation failures exit 1 and leave an error run.json") {
    TestDir dir("cli_test_fail");

    // Missing config file.
    CHECK(run_cli("run nope.cfg", "o1.txt", dir.root.string()) == 1);

    // Config that parses but fails validation.
    const std::string bad = (dir.root / "bad.cfg").string();
    spit(bad, kBaseConfig + "gamma = 1.2\n");
    const int code = run_cli("run bad.cfg", "o2.txt", dir.root.string());
    CHECK(code == 1);
    const auto rj = nlohmann::json::parse(slurp((dir.root / "run.json").string()));
    CHECK(rj["status"] == "error");
    CHECK(rj["error"].get<std::string>().find("gamma below 3/2") != std::string::npos);
}

TEST_CASE("cli run: identical config and seed give byte-identical diagnostics") {
    TestDir dir("cli_test_determinism");
    const std::string body = kBaseConfig +
                             "seed = 7\nu0.kind = preset\nu0.preset = random\n"
                             "u0.amplitude = 0.2\n";
    for (const char* name : {"a", "b"}) {
        const std::string cfg = (dir.root / (std::string(name) + ".cfg")).string();
        spit(cfg, body + "output_dir = " + (dir.root / name).string() + "\n");
        CHECK(run_cli("run '" + cfg + "'",
                      (dir.root / (std::string(name) + ".txt")).string()) == 0);
    }
    const std::string csv_a = slurp((dir.root / "a/diagnostics.csv").string());
    const std::string csv_b = slurp((dir.root / "b/diagnostics.csv").string());
    CHECK(csv_a == csv_b);
    CHECK(!csv_a.empty());

    // A different seed changes the initial data and hence the diagnostics.
    const std::string cfg_c = (dir.root / "c.cfg").string();
    spit(cfg_c, kBaseConfig + "seed = 8\nu0.kind = preset\nu0.preset = random\n" +
                    "u0.amplitude = 0.2\noutput_dir = " + (dir.root / "c").string() + "\n");
    CHECK(run_cli("run '" + cfg_c + "'", (dir.root / "c.txt").string()) == 0);
    CHECK(slurp((dir.root / "c/diagnostics.csv").string()) != csv_a);
}

TEST_CASE("cli check: suites pass and print reproducible reports") {
    TestDir dir("cli_test_check");

    const std::string g1 = (dir.root / "g1.txt").string();
    const std::string g2 = (dir.root / "g2.txt").string();
    CHECK(run_cli("check gronwall --samples 5 --seed 7", g1) == 0);
    CHECK(run_cli("check gronwall --samples 5 --seed 7", g2) == 0);
    CHECK(slurp(g1) == slurp(g2));
    CHECK(slurp(g1).find("name,samples,skipped,min_ratio,max_ratio,bound,pass,worst") !=
          std::string::npos);
    CHECK(slurp(g1).find("rk4_domination") != std::string::npos);

    const std::string pot = (dir.root / "pot.txt").string();
    CHECK(run_cli("check potential --samples 200 --seed 3", pot) == 0);
    const std::string pot_out = slurp(pot);
    CHECK(pot_out.find("stress_monotonicity") != std::string::npos);
    CHECK(pot_out.find("overall: pass") != std::string::npos);

    // A sub-unit exponent range is outside the supported family.
    CHECK(run_cli("check potential --samples 10 --p-range 0.5,2", (dir.root / "bad.txt").string()) == 1);

    const std::string ineq = (dir.root / "ineq.txt").string();
    CHECK(run_cli("check inequalities --samples 4 --seed 1", ineq) == 0);
    CHECK(slurp(ineq).find("identity_i_vs_g") != std::string::npos);
}

TEST_CASE("cli export: snapshot to CSV with coordinates") {
    TestDir dir("cli_test_export");
    PeriodicGrid g(1, 8);
    Field f(g, 2);
    f.fill([](const std::array<double, 3>& x, int c) {
        return c == 0 ? std::sin(x[0]) : 2.0;
    });
    const std::string snap = (dir.root / "f.plns").string();
    write_snapshot(snap, f, 1.5);

    const std::string out_csv = (dir.root / "f.csv").string();
    CHECK(run_cli("export '" + snap + "' '" + out_csv + "'",
                  (dir.root / "o.txt").string()) == 0);
    const std::string csv = slurp(out_csv);
    CHECK(csv.rfind("x1,c0,c1", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);  // header + 8 points

    // Without an output path the CSV lands on stdout.
    const std::string so = (dir.root / "stdout_export.txt").string();
    CHECK(run_cli("export '" + snap + "'", so) == 0);
    CHECK(slurp(so) == csv);

    // Corrupt snapshots are a validation error.
    const std::string junk = (dir.root / "junk.plns").string();
    spit(junk, "not a snapshot at all");
    CHECK(run_cli("export '" + junk + "'", (dir.root / "junk.txt").string()) == 1);
}
