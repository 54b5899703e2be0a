#include "plns/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "plns/errors.hpp"
#include "plns/norms.hpp"
#include "plns/potential.hpp"
#include "plns/sym_tensor.hpp"

namespace plns {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string dtilde_column_name(double q) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "dtilde_l%g", q);
    for (char* c = buf; *c; ++c)
        if (*c == '.') *c = '_';
    return buf;
}

SymTensor sym_at(const Field& f, std::size_t pt, int d) {
    SymTensor b(d);
    for (int j = 0; j < d; ++j)
        for (int k = j; k < d; ++k) b.set(j, k, f.at(pt, j * d + k));
    return b;
}

// Hessian quadratic form via its eigenstructure: the Hessian of the shipped
// potential at B has eigenvalue (1+|B|^2)^{(p-2)/2} orthogonal to B and
// F''(|B|) along B, so <H C, C> = a(|C|^2 - q^2) + F'' q^2 with q = B:C/|B|.
double hessian_quad(const SymTensor& b, const SymTensor& c, double p) {
    const double r2 = b.norm_sq();
    const double c2 = c.norm_sq();
    if (r2 == 0.0) return c2;
    const double a = std::pow(1.0 + r2, 0.5 * (p - 2.0));
    const double fpp = standard_profile().deriv2(std::sqrt(r2), p);
    const double q = contract(b, c) / std::sqrt(r2);
    return a * (c2 - q * q) + fpp * q * q;
}

} // namespace

std::vector<std::string> diagnostics_columns(const std::vector<double>& dtilde_q) {
    std::vector<std::string> cols{"t",        "mass",     "kinetic", "internal",
                                  "dissipation_rate", "work_rate", "i_phi",   "j_phi"};
    for (double q : dtilde_q) cols.push_back(dtilde_column_name(q));
    for (const char* c : {"grad_u_l3", "rho_linf", "blowup1", "blowup2", "gn_ratio",
                          "poincare_ratio", "energy_residual", "rho_min", "rho_max",
                          "divu_linf", "grad_u_linf", "sqrt_rho_dtu_l2", "rho_w13p",
                          "korn_ratio", "gij_ratio", "ine_ratio"})
        cols.push_back(c);
    return cols;
}

std::vector<double> diagnostics_values(const DiagnosticsRecord& r) {
    std::vector<double> v{r.t,        r.mass,     r.kinetic, r.internal,
                          r.dissipation_rate, r.work_rate, r.i_phi,   r.j_phi};
    v.insert(v.end(), r.dtilde_lq.begin(), r.dtilde_lq.end());
    for (double x : {r.grad_u_l3, r.rho_linf, r.blowup1, r.blowup2, r.gn_ratio,
                     r.poincare_ratio, r.energy_residual, r.rho_min, r.rho_max, r.divu_linf,
                     r.grad_u_linf, r.sqrt_rho_dtu_l2, r.rho_w13p, r.korn_ratio, r.gij_ratio,
                     r.ine_ratio})
        v.push_back(x);
    return v;
}

double kinetic_energy(const ScalarField& rho, const VectorField& u) {
    if (!(rho.grid() == u.grid())) throw InvalidInput("kinetic_energy: grid mismatch");
    double s = 0.0;
    const std::size_t np = rho.num_points();
    for (std::size_t pt = 0; pt < np; ++pt) {
        double u2 = 0.0;
        for (int c = 0; c < u.ncomp(); ++c) u2 += u.at(pt, c) * u.at(pt, c);
        s += rho.at(pt, 0) * u2;
    }
    return 0.5 * s * rho.grid().cell_volume();
}

double internal_energy(const ScalarField& rho, double gamma) {
    if (!(gamma > 1.0)) throw InvalidInput("internal_energy: gamma must exceed 1");
    double s = 0.0;
    for (double v : rho.data()) s += std::pow(v, gamma);
    return s * rho.grid().cell_volume() / (gamma - 1.0);
}

double energy_total(const ScalarField& rho, const VectorField& u, double gamma) {
    return kinetic_energy(rho, u) + internal_energy(rho, gamma);
}

double dissipation_rate(const VectorField& u, const ScalarField& pvals, DerivScheme scheme) {
    if (!(u.grid() == pvals.grid())) throw InvalidInput("dissipation_rate: grid mismatch");
    const TensorField du = sym_gradient(u, scheme);
    double s = 0.0;
    const std::size_t np = u.num_points();
    for (std::size_t pt = 0; pt < np; ++pt) {
        double s2 = 0.0;
        for (int c = 0; c < du.ncomp(); ++c) s2 += du.at(pt, c) * du.at(pt, c);
        s += std::pow(1.0 + s2, 0.5 * (pvals.at(pt, 0) - 2.0)) * s2;
    }
    return s * u.grid().cell_volume();
}

double work_rate(const ScalarField& rho, const VectorField& u, const VectorField* f) {
    if (f == nullptr) return 0.0;
    if (!(rho.grid() == u.grid()) || !(u.grid() == f->grid()))
        throw InvalidInput("work_rate: grid mismatch");
    double s = 0.0;
    const std::size_t np = rho.num_points();
    for (std::size_t pt = 0; pt < np; ++pt) {
        double dot = 0.0;
        for (int c = 0; c < u.ncomp(); ++c) dot += f->at(pt, c) * u.at(pt, c);
        s += rho.at(pt, 0) * dot;
    }
    return s * rho.grid().cell_volume();
}

double energy_balance(const ScalarField& rho_new, const VectorField& u_new,
                      const ScalarField& rho_old, const VectorField& u_old,
                      const ScalarField& pvals_new, const VectorField* f_new, double gamma,
                      double dt) {
    if (!(rho_new.grid() == rho_old.grid()) || !(u_new.grid() == u_old.grid()))
        throw InvalidInput("energy_balance: mismatched states");
    if (!(dt > 0.0)) throw InvalidInput("energy_balance: dt must be positive");
    const double e_new = energy_total(rho_new, u_new, gamma);
    const double e_old = energy_total(rho_old, u_old, gamma);
    return (e_new - e_old) / dt + dissipation_rate(u_new, pvals_new) -
           work_rate(rho_new, u_new, f_new);
}

double i_phi(const VectorField& u, const ScalarField& pvals, DerivScheme scheme) {
    const int d = u.grid().dim;
    const TensorField du = sym_gradient(u, scheme);
    std::vector<Field> ddu;
    for (int r = 0; r < d; ++r) ddu.push_back(derivative(du, r, scheme));
    double s = 0.0;
    const std::size_t np = u.num_points();
    for (std::size_t pt = 0; pt < np; ++pt) {
        const SymTensor b = sym_at(du, pt, d);
        const double p = pvals.at(pt, 0);
        for (int r = 0; r < d; ++r) s += hessian_quad(b, sym_at(ddu[r], pt, d), p);
    }
    return s * u.grid().cell_volume();
}

double j_phi(const VectorField& u, const VectorField& du_dt, const ScalarField& pvals,
             DerivScheme scheme) {
    const int d = u.grid().dim;
    const TensorField du = sym_gradient(u, scheme);
    const TensorField dtdu = sym_gradient(du_dt, scheme);  // = d_t(Du)
    double s = 0.0;
    const std::size_t np = u.num_points();
    for (std::size_t pt = 0; pt < np; ++pt)
        s += hessian_quad(sym_at(du, pt, d), sym_at(dtdu, pt, d), pvals.at(pt, 0));
    return s * u.grid().cell_volume();
}

double g_phi(const VectorField& w, const Field& v, const ScalarField& pvals, DerivScheme scheme) {
    const int d = w.grid().dim;
    if (!(w.grid() == v.grid())) throw InvalidInput("g_phi: grid mismatch");
    const TensorField dw = sym_gradient(w, scheme);

    // Second argument: vector -> its symmetric gradient; symmetric tensor ->
    // its axis derivatives, contraction summed over the axis.
    std::vector<Field> args;
    if (v.ncomp() == d) {
        args.push_back(sym_gradient(v, scheme));
    } else if (v.ncomp() == d * d) {
        for (int r = 0; r < d; ++r) args.push_back(derivative(v, r, scheme));
    } else {
        throw InvalidInput("g_phi: second argument must be a vector or rank-2 tensor field");
    }

    double s = 0.0;
    const std::size_t np = w.num_points();
    for (std::size_t pt = 0; pt < np; ++pt) {
        const StressHessian h = stress_hessian(sym_at(dw, pt, d), pvals.at(pt, 0));
        for (const Field& a : args) s += h.contract(sym_at(a, pt, d));
    }
    return s * w.grid().cell_volume();
}

LowerBoundRatios lower_bound_ratios(const VectorField& u, const VectorField* du_dt,
                                    const VectorField* v, const ScalarField& pvals,
                                    DerivScheme scheme) {
    const int d = u.grid().dim;
    const TensorField du = sym_gradient(u, scheme);
    const std::size_t np = u.num_points();
    const double vol = u.grid().cell_volume();

    std::vector<double> weight(np);
    for (std::size_t pt = 0; pt < np; ++pt) {
        double s2 = 0.0;
        for (int c = 0; c < du.ncomp(); ++c) s2 += du.at(pt, c) * du.at(pt, c);
        weight[pt] = std::pow(1.0 + s2, 0.5 * (pvals.at(pt, 0) - 2.0));
    }
    auto weighted_sq = [&](const Field& f) {
        double s = 0.0;
        for (std::size_t pt = 0; pt < np; ++pt) {
            double m = 0.0;
            for (int c = 0; c < f.ncomp(); ++c) m += f.at(pt, c) * f.at(pt, c);
            s += weight[pt] * m;
        }
        return s * vol;
    };

    LowerBoundRatios out;
    out.i_ratio = out.j_ratio = out.g_ratio = kNaN;

    double den_i = 0.0;
    for (int r = 0; r < d; ++r) den_i += weighted_sq(derivative(du, r, scheme));
    if (den_i > 0.0) {
        out.i_ratio = i_phi(u, pvals, scheme) / den_i;
        out.i_skipped = false;
    }
    if (du_dt != nullptr) {
        const double den_j = weighted_sq(sym_gradient(*du_dt, scheme));
        if (den_j > 0.0) {
            out.j_ratio = j_phi(u, *du_dt, pvals, scheme) / den_j;
            out.j_skipped = false;
        }
    }
    if (v != nullptr) {
        const double den_g = weighted_sq(sym_gradient(*v, scheme));
        if (den_g > 0.0) {
            out.g_ratio = g_phi(u, *v, pvals, scheme) / den_g;
            out.g_skipped = false;
        }
    }
    return out;
}

std::pair<double, double> blowup_indicators(const std::vector<DiagnosticsRecord>& prefix) {
    if (prefix.empty()) throw InvalidInput("blowup_indicators: empty trajectory prefix");
    double sup_rho = 0.0, sup_grad = 0.0, integral4 = 0.0;
    for (std::size_t k = 0; k < prefix.size(); ++k) {
        sup_rho = std::max(sup_rho, prefix[k].rho_linf);
        sup_grad = std::max(sup_grad, prefix[k].grad_u_l3);
        if (k > 0) {
            const double g0 = prefix[k - 1].grad_u_linf;
            const double g1 = prefix[k].grad_u_linf;
            integral4 += 0.5 * (g0 * g0 * g0 * g0 + g1 * g1 * g1 * g1) *
                         (prefix[k].t - prefix[k - 1].t);
        }
    }
    return {sup_rho + sup_grad, integral4};
}

GronwallBound gronwall_bound(double f0, double c0, double alpha, const std::vector<double>& h,
                             const std::vector<double>& t_grid) {
    if (!(f0 >= 0.0)) throw InvalidInput("gronwall_bound: f0 must be nonnegative");
    if (!(c0 > 0.0) || !(alpha > 0.0))
        throw InvalidInput("gronwall_bound: c0 and alpha must be positive");
    if (h.size() != t_grid.size() || t_grid.empty())
        throw InvalidInput("gronwall_bound: h and t_grid must have equal nonzero size");
    if (t_grid.front() != 0.0) throw InvalidInput("gronwall_bound: t_grid must start at 0");
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        if (h[k] < 0.0) throw InvalidInput("gronwall_bound: h must be nonnegative");
        if (k > 0 && !(t_grid[k] > t_grid[k - 1]))
            throw InvalidInput("gronwall_bound: t_grid must be strictly increasing");
    }

    GronwallBound out;
    out.cumulative.resize(t_grid.size());
    out.bound.resize(t_grid.size());
    double acc = f0;
    out.horizon = kNaN;
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        if (k > 0) acc += 0.5 * (h[k - 1] + h[k]) * (t_grid[k] - t_grid[k - 1]);
        out.cumulative[k] = acc;
        const double q = alpha * c0 * std::pow(acc, alpha) * t_grid[k];
        if (q < 1.0) {
            out.bound[k] = acc * std::pow(1.0 - q, -1.0 / alpha);
            out.horizon = t_grid[k];
        } else {
            out.bound[k] = std::numeric_limits<double>::infinity();
        }
    }
    return out;
}

double poincare_ratio(const ScalarField& rho, const VectorField& v, DerivScheme scheme) {
    if (!(rho.grid() == v.grid())) throw InvalidInput("poincare_ratio: grid mismatch");
    const std::size_t np = rho.num_points();
    double mass = 0.0, weighted = 0.0;
    for (std::size_t pt = 0; pt < np; ++pt) {
        mass += rho.at(pt, 0);
        weighted += rho.at(pt, 0) * v.magnitude(pt);
    }
    const double vol = rho.grid().cell_volume();
    mass *= vol;
    weighted *= vol;
    if (!(mass > 0.0)) throw InvalidInput("poincare_ratio: density must have positive mass");
    const double num = lq_norm(v, 2.0);
    if (num == 0.0) return kNaN;
    const double gn = lq_norm(gradient(v, scheme), 2.0);
    return num * num / (gn * gn + weighted * weighted);
}

double gij_ratio(const VectorField& w, const VectorField& v, double q, double p_minus,
                 const ScalarField& pvals, DerivScheme scheme) {
    if (!(q > 1.0 && q <= 2.0)) throw InvalidInput("gij_ratio: q must lie in (1, 2]");
    const double num = lq_norm(sym_gradient(v, scheme), q);
    const double g = g_phi(w, v, pvals, scheme);
    if (num == 0.0 || !(g > 0.0)) return kNaN;

    const TensorField dw = sym_gradient(w, scheme);
    ScalarField wfield(w.grid(), 1);
    const std::size_t np = w.num_points();
    for (std::size_t pt = 0; pt < np; ++pt) {
        double s2 = 0.0;
        for (int c = 0; c < dw.ncomp(); ++c) s2 += dw.at(pt, c) * dw.at(pt, c);
        wfield.at(pt, 0) = std::pow(1.0 + s2, 0.25 * (2.0 - p_minus));
    }
    const double s = q == 2.0 ? std::numeric_limits<double>::infinity() : 2.0 * q / (2.0 - q);
    return num / (std::sqrt(g) * lq_norm(wfield, s));
}

} // namespace plns
