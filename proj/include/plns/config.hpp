#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "plns/galerkin.hpp"

namespace plns {

// Fully resolved run configuration: every key of the flat key=value config
// file with defaults applied. `echo` lists the effective settings in
// canonical order for the run.json echo (doubles printed with 17 significant
// digits, so the echo round-trips bit-exactly).
struct RunConfig {
    int dim = 0;
    int n = 0;
    double dt = 0.0;
    double t_end = 0.0;

    int nmodes = 8;
    double gamma = 1.5;
    double delta = 1e-3;
    bool theorem_mode = true;
    Integrator integrator = Integrator::explicit_rk2;
    TransportScheme transport = TransportScheme::upwind;
    double cfl_safety = 0.9;
    double blowup1_max = 1e6;
    int snapshot_cadence = 0;
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    std::string log_level = "info";  // quiet | info | debug
    std::vector<double> dtilde_q{2.0, 4.0};

    struct ExponentSpec {
        std::string kind = "constant";  // constant | preset | file
        double constant = 1.8;
        std::string preset = "sin_x";
        double base = 1.7;
        double amplitude = 0.1;
        std::string file;  // comma-separated snapshot frames
    } p;

    struct DensitySpec {
        std::string kind = "constant";  // constant | preset | file
        double constant = 1.0;
        std::string preset = "sin_x";  // base + amplitude*sin(x1)
        double base = 1.0;
        double amplitude = 0.25;
        std::string file;
    } rho0;

    struct VelocitySpec {
        std::string kind = "zero";  // zero | preset | file
        std::string preset = "sin_x";  // sin_x | random
        double amplitude = 0.1;
        std::string file;
    } u0;

    struct MomentumSpec {
        std::string kind = "none";  // none | file
        std::string file;
    } m0;

    struct ForcingSpec {
        std::string kind = "zero";  // zero | constant
        std::array<double, 3> value{0.0, 0.0, 0.0};
    } forcing;

    std::vector<std::pair<std::string, std::string>> echo;
};

// Parses the config text (UTF-8 key=value lines, '#' comments). Errors are
// InvalidInput naming the line and key: unknown key, malformed value,
// duplicate key (both lines named), missing required key (dim, n, dt,
// T_end), and value validation ("gamma below 3/2" in theorem mode, ...).
RunConfig parse_config(const std::string& text);

// Resolves field specs (reading snapshot files where configured) into the
// stepper configuration. File lookups are relative to the caller's cwd.
SimConfig build_sim_config(const RunConfig& rc);

} // namespace plns
