#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "plns/diagnostics.hpp"
#include "plns/exponent.hpp"
#include "plns/field.hpp"

namespace plns {

// Velocity ansatz space: trigonometric vector modes on the grid, pairwise
// L2-orthogonal under the grid quadrature (exactly, for band-limited modes).
// Ordering: the dim constant unit vectors first, then for each wavevector k
// (canonical sign, sorted by |k|^2 then lexicographically, |k_a| <= n/4) and
// each direction a: cos(k.x) e_a, sin(k.x) e_a.
struct GalerkinBasis {
    PeriodicGrid grid;
    int nmodes = 0;
    std::vector<VectorField> modes;
    std::vector<Field> grads;       // centered-difference mode gradients
    std::vector<ScalarField> divs;  // centered-difference mode divergences
    std::vector<double> gram_diag;  // exact L2 norms squared
};

GalerkinBasis build_basis(int dim, int nmodes, const PeriodicGrid& grid);

// u = sum_r c_r phi^r.
VectorField velocity(const GalerkinBasis& basis, const std::vector<double>& coeffs);

// L2 projection coefficients <u, phi^r> / ||phi^r||^2.
std::vector<double> project_velocity(const GalerkinBasis& basis, const VectorField& u);

struct GalerkinState {
    double t = 0.0;
    ScalarField rho;
    std::vector<double> coeffs;
    VectorField u;  // cached sum_r coeffs_r phi^r
};

enum class Integrator { explicit_rk2, semi_implicit };
enum class TransportScheme { upwind, muscl };

struct SimConfig {
    PeriodicGrid grid;
    int nmodes = 8;
    double gamma = 1.5;
    double delta = 1e-3;
    double dt = 1e-3;
    double t_end = 0.1;
    ExponentField exponent = ExponentField::constant(1.8);
    Integrator integrator = Integrator::explicit_rk2;
    TransportScheme transport = TransportScheme::upwind;
    bool theorem_mode = true;
    double cfl_safety = 0.9;
    double blowup1_max = 1e6;
    int snapshot_cadence = 0;  // states kept every k steps; 0 = ends only
    std::vector<double> dtilde_q{2.0, 4.0};
    std::optional<ScalarField> rho0;      // default: 1
    std::optional<VectorField> u0;        // default: 0 (exclusive with m0)
    std::optional<VectorField> m0;        // initial momentum
    std::function<VectorField(double)> forcing;  // null: f = 0

    SimConfig(const PeriodicGrid& g, int n_modes) : grid(g), nmodes(n_modes) {}
};

// M[rho]_rs = <rho phi^r, phi^s>; symmetric positive definite for rho >= delta.
// With delta > 0 the floor and the positivity margin (smallest eigenvalue
// >= delta/2 times the smallest Gram entry) are checked; violations raise
// DensityFloorViolation / NumericalBreakdown.
Eigen::MatrixXd mass_operator(const ScalarField& rho, const GalerkinBasis& basis,
                              double delta = 0.0);

// Weak-form right side, one entry per mode:
//   b_r = int rho f.phi^r + int rho^gamma div phi^r
//       + int [rho u (x) u - (1+|Du|^2)^{(p-2)/2} Du] : grad phi^r.
// No derivative ever lands on the stress. f may be null (no forcing).
Eigen::VectorXd rhs_operator(const ScalarField& rho, const VectorField& u,
                             const GalerkinBasis& basis, const ExponentField& p, double t,
                             const VectorField* f, double gamma);

// One conservative upwind (or MUSCL/minmod) finite-volume update of
// rho_t + div(rho u) = 0. Total mass is conserved exactly (telescoping
// fluxes) and the update is positivity-preserving under the CFL bound
// dt/h * max_x sum_a |u_a| <= cfl_safety (CflViolation otherwise).
struct TransportResult {
    ScalarField rho;
    bool floor_violated = false;  // new density dips below delta somewhere
    double rho_min = 0.0;
};

TransportResult transport_step(const ScalarField& rho, const VectorField& u, double dt,
                               double delta, double cfl_safety = 0.9,
                               TransportScheme scheme = TransportScheme::upwind);

// Strang-split step: half transport with the old velocity, coefficient
// update of M[rho] dc/dt = rhs over dt (explicit Heun or damped fixed-point
// iteration per SimConfig::integrator), half transport with the new velocity.
GalerkinState step(const GalerkinState& state, double dt, const SimConfig& config,
                   const GalerkinBasis& basis);

// du/dt = sum_r (dc_r/dt) phi^r with dc/dt = M[rho]^{-1} rhs at the state.
VectorField coefficient_derivative(const GalerkinState& state, const SimConfig& config,
                                   const GalerkinBasis& basis);

enum class StopReason {
    completed,
    density_floor,
    indicator_overflow,
    nan_detected,
    numerical_breakdown
};

std::string to_string(StopReason r);

struct RunResult {
    std::vector<GalerkinState> trajectory;   // cadence states (ends always kept)
    std::vector<DiagnosticsRecord> records;  // one per accepted step
    StopReason stop = StopReason::completed;
    std::string stop_detail;
    double final_time = 0.0;
    int steps = 0;
};

// Advance to t_end or stop early (density floor, indicator overflow, NaN,
// unresolvable CFL/solver breakdown). Diagnostics are recorded every step;
// partial results are returned with the stop reason on early exit.
RunResult run(const SimConfig& config);

} // namespace plns
