#pragma once

#include <string>
#include <utility>
#include <vector>

#include "plns/exponent.hpp"
#include "plns/field.hpp"
#include "plns/operators.hpp"

namespace plns {

// Per-step monitored quantities. The first block (through poincare_ratio) is
// the advertised CSV column set in order; the second block holds additional
// logged columns appended after it. Skipped/undefined entries are NaN.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double kinetic = 0.0;
    double internal = 0.0;
    double dissipation_rate = 0.0;
    double work_rate = 0.0;
    double i_phi = 0.0;
    double j_phi = 0.0;             // NaN when du/dt is unavailable
    std::vector<double> dtilde_lq;  // one entry per configured q
    double grad_u_l3 = 0.0;
    double rho_linf = 0.0;
    double blowup1 = 0.0;  // running sup ||rho||_inf + running sup ||grad u||_L3
    double blowup2 = 0.0;  // running trapezoid integral of ||grad u||_inf^4
    double gn_ratio = 0.0;
    double poincare_ratio = 0.0;

    double energy_residual = 0.0;
    double rho_min = 0.0;
    double rho_max = 0.0;
    double divu_linf = 0.0;
    double grad_u_linf = 0.0;
    double sqrt_rho_dtu_l2 = 0.0;  // ||sqrt(rho) du/dt||_L2, NaN without du/dt
    double rho_w13p = 0.0;         // ||rho||_{W^{1,3 p_minus}}
    double korn_ratio = 0.0;
    double gij_ratio = 0.0;
    double ine_ratio = 0.0;  // ||u||_{W^{2,3p-/(p-+1)}}^{p-} / (i_phi + 1)
};

// CSV column names matching diagnostics_values(), in order; the dtilde
// columns are named dtilde_l<q> for each configured q.
std::vector<std::string> diagnostics_columns(const std::vector<double>& dtilde_q);
std::vector<double> diagnostics_values(const DiagnosticsRecord& r);

// E = (1/2) int rho |u|^2 + int rho^gamma / (gamma - 1).
double kinetic_energy(const ScalarField& rho, const VectorField& u);
double internal_energy(const ScalarField& rho, double gamma);
double energy_total(const ScalarField& rho, const VectorField& u, double gamma);

// int (1 + |Du|^2)^{(p-2)/2} |Du|^2 dx  (>= 0).
double dissipation_rate(const VectorField& u, const ScalarField& pvals,
                        DerivScheme scheme = DerivScheme::centered);

// int rho f . u dx (0 when f is null).
double work_rate(const ScalarField& rho, const VectorField& u, const VectorField* f);

// Residual of the discrete energy identity across one step:
//   [E(new) - E(old)] / dt + dissipation(new) - work(new).
// Along accepted runs |residual| <= C_scheme (dt + h), and the signed value
// stays below +tolerance (numerical diffusion only removes energy).
double energy_balance(const ScalarField& rho_new, const VectorField& u_new,
                      const ScalarField& rho_old, const VectorField& u_old,
                      const ScalarField& pvals_new, const VectorField* f_new, double gamma,
                      double dt);

// Hessian-contraction functionals of the potential. i_phi contracts against
// all spatial derivatives of Du, j_phi against the time derivative of Du
// (computed as D(du_dt)), g_phi against D(v) for vector v or the axis
// derivatives of v for tensor v. i_phi/j_phi evaluate the contraction through
// the Hessian's closed-form eigenstructure; g_phi goes through the assembled
// fourth-order tensor, so agreement between the two is a two-path check.
double i_phi(const VectorField& u, const ScalarField& pvals,
             DerivScheme scheme = DerivScheme::centered);
double j_phi(const VectorField& u, const VectorField& du_dt, const ScalarField& pvals,
             DerivScheme scheme = DerivScheme::centered);
double g_phi(const VectorField& w, const Field& v, const ScalarField& pvals,
             DerivScheme scheme = DerivScheme::centered);

// Ratios of the functionals to their advertised lower-bound integrals
// (values >= p_minus - 1 for the shipped potential):
//   i: i_phi / int (1+|Du|^2)^{(p-2)/2} |grad Du|^2
//   j: j_phi / int (1+|Du|^2)^{(p-2)/2} |d_t Du|^2
//   g: g_phi(u, v) / int (1+|Du|^2)^{(p-2)/2} |Dv|^2
// Skipped (NaN) when the denominator vanishes or the input is absent.
struct LowerBoundRatios {
    double i_ratio = 0.0, j_ratio = 0.0, g_ratio = 0.0;
    bool i_skipped = true, j_skipped = true, g_skipped = true;
};

LowerBoundRatios lower_bound_ratios(const VectorField& u, const VectorField* du_dt,
                                    const VectorField* v, const ScalarField& pvals,
                                    DerivScheme scheme = DerivScheme::centered);

// Indicators over a trajectory prefix:
//   first  = sup_t ||rho||_inf + sup_t ||grad u||_L3
//   second = trapezoid integral of ||grad u||_inf^4 over the recorded times.
// Both are non-decreasing as the prefix extends.
std::pair<double, double> blowup_indicators(const std::vector<DiagnosticsRecord>& prefix);

// Superlinear-inequality a priori bound: for f' <= h + c0 f^{1+alpha},
//   f(t) <= H(t) (1 - alpha c0 H(t)^alpha t)^{-1/alpha},  H(t) = f0 + int h,
// valid while alpha c0 H(t)^alpha t < 1. `bound` holds +inf past the horizon;
// `horizon` is the largest grid time still inside the validity region.
struct GronwallBound {
    std::vector<double> cumulative;  // H at each grid time
    std::vector<double> bound;
    double horizon = 0.0;
};

GronwallBound gronwall_bound(double f0, double c0, double alpha, const std::vector<double>& h,
                             const std::vector<double>& t_grid);

// ||v||_L2^2 / (||grad v||_L2^2 + (int rho |v|)^2); NaN when v == 0.
double poincare_ratio(const ScalarField& rho, const VectorField& v,
                      DerivScheme scheme = DerivScheme::centered);

// ||Dv||_Lq / [ g_phi(w, v)^{1/2} ||(1+|Dw|^2)^{(2-p_minus)/4}||_{L^{2q/(2-q)}} ]
// for 1 < q <= 2 (the weight norm index is infinity at q = 2); NaN when
// degenerate. Monitored only; the constant is existential.
double gij_ratio(const VectorField& w, const VectorField& v, double q, double p_minus,
                 const ScalarField& pvals, DerivScheme scheme = DerivScheme::centered);

} // namespace plns
