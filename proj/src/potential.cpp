#include "plns/potential.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "plns/errors.hpp"

namespace plns {

namespace {

void validate_p(double p) {
    if (!(p > 1.0 && p <= 2.0)) throw InvalidInput("exponent p must lie in (1, 2]");
}

double std_f(double r, double p) { return std::expm1(0.5 * p * std::log1p(r * r)) / p; }
double std_df(double r, double p) { return std::pow(1.0 + r * r, 0.5 * (p - 2.0)) * r; }
double std_d2f(double r, double p) {
    return std::pow(1.0 + r * r, 0.5 * (p - 4.0)) * (1.0 + (p - 1.0) * r * r);
}

} // namespace

const PotentialProfile& standard_profile() {
    static const PotentialProfile prof{std_f, std_df, std_d2f};
    return prof;
}

PotentialParams standard_params(double p_minus) {
    validate_p(p_minus);
    return PotentialParams{p_minus - 1.0, 1.0, 0.0, "standard"};
}

double potential_value(const SymTensor& b, double p) {
    validate_p(p);
    return std_f(b.norm(), p);
}

double potential_value(const SymTensor& b, double p, const PotentialProfile& prof) {
    validate_p(p);
    return prof.value(b.norm(), p);
}

SymTensor stress(const SymTensor& b, double p) {
    validate_p(p);
    const double factor = std::pow(1.0 + b.norm_sq(), 0.5 * (p - 2.0));
    SymTensor s = b;
    s *= factor;
    return s;
}

SymTensor stress(const SymTensor& b, double p, const PotentialProfile& prof) {
    validate_p(p);
    const double r = b.norm();
    SymTensor s = b;
    if (r == 0.0) {
        s *= 0.0;
        return s;
    }
    s *= prof.deriv(r, p) / r;
    return s;
}

StressHessian::StressHessian(int d) : d_(d) {
    if (d < 1 || d > 3) throw InvalidInput("StressHessian: dim must be 1, 2 or 3");
}

SymTensor StressHessian::apply(const SymTensor& c) const {
    SymTensor out(d_);
    for (int j = 0; j < d_; ++j)
        for (int k = j; k < d_; ++k) {
            double s = 0.0;
            for (int l = 0; l < d_; ++l)
                for (int m = 0; m < d_; ++m) s += entry(j, k, l, m) * c.at(l, m);
            out.set(j, k, s);
        }
    return out;
}

double StressHessian::contract(const SymTensor& c) const { return bilinear(c, c); }

double StressHessian::bilinear(const SymTensor& c, const SymTensor& e) const {
    double s = 0.0;
    for (int j = 0; j < d_; ++j)
        for (int k = 0; k < d_; ++k)
            for (int l = 0; l < d_; ++l)
                for (int m = 0; m < d_; ++m) s += entry(j, k, l, m) * c.at(j, k) * e.at(l, m);
    return s;
}

double StressHessian::operator_norm() const {
    // Matrix of H in an orthonormal basis of symmetric tensors:
    // E^(jj), and (E^(jk) + E^(kj))/sqrt(2) for j < k.
    const int m = d_ * (d_ + 1) / 2;
    std::array<SymTensor, 6> basis{SymTensor(d_), SymTensor(d_), SymTensor(d_),
                                   SymTensor(d_), SymTensor(d_), SymTensor(d_)};
    int idx = 0;
    for (int j = 0; j < d_; ++j) basis[idx++].set(j, j, 1.0);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < d_; ++j)
        for (int k = j + 1; k < d_; ++k) basis[idx++].set(j, k, inv_sqrt2);
    Eigen::MatrixXd mat(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) {
            const double v = bilinear(basis[a], basis[b]);
            mat(a, b) = v;
            mat(b, a) = v;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat, Eigen::EigenvaluesOnly);
    double norm = 0.0;
    for (int i = 0; i < m; ++i) norm = std::max(norm, std::fabs(es.eigenvalues()[i]));
    return norm;
}

double StressHessian::frobenius_norm() const {
    double s = 0.0;
    for (int j = 0; j < d_; ++j)
        for (int k = 0; k < d_; ++k)
            for (int l = 0; l < d_; ++l)
                for (int m = 0; m < d_; ++m) {
                    const double v = entry(j, k, l, m);
                    s += v * v;
                }
    return std::sqrt(s);
}

StressHessian sym_identity(int d) {
    StressHessian h(d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l)
                for (int m = 0; m < d; ++m) {
                    const double djl = j == l ? 1.0 : 0.0;
                    const double dkm = k == m ? 1.0 : 0.0;
                    const double djm = j == m ? 1.0 : 0.0;
                    const double dkl = k == l ? 1.0 : 0.0;
                    h.set_entry(j, k, l, m, 0.5 * (djl * dkm + djm * dkl));
                }
    return h;
}

StressHessian stress_hessian(const SymTensor& b, double p) {
    validate_p(p);
    const int d = b.dim();
    const double r2 = b.norm_sq();
    if (r2 == 0.0) return sym_identity(d);
    // H = a (delta_sym - bhat (x) bhat) + F''(R) bhat (x) bhat,
    // a = F'(R)/R = (1+R^2)^{(p-2)/2}; eigenvalues a and F''(R).
    const double a = std::pow(1.0 + r2, 0.5 * (p - 2.0));
    const double fpp = std_d2f(std::sqrt(r2), p);
    StressHessian h = sym_identity(d);
    const double inv_r2 = 1.0 / r2;
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l)
                for (int m = 0; m < d; ++m) {
                    const double rank1 = b.at(j, k) * b.at(l, m) * inv_r2;
                    h.set_entry(j, k, l, m, a * (h.entry(j, k, l, m) - rank1) + fpp * rank1);
                }
    return h;
}

StressRatioReport stress_ratios(const SymTensor& b, const SymTensor& c, double p) {
    validate_p(p);
    const int d = b.dim();
    if (c.dim() != d) throw InvalidInput("stress_ratios: dimension mismatch");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    StressRatioReport rep;

    const SymTensor sb = stress(b, p);
    const SymTensor sc = stress(c, p);
    const SymTensor ds = sb - sc;
    const SymTensor db = b - c;
    const double b2 = b.norm_sq(), c2 = c.norm_sq(), db2 = db.norm_sq();
    const double wbc = std::pow(1.0 + b2 + c2, 0.5 * (p - 2.0));
    const double wb = std::pow(1.0 + b2, 0.5 * (p - 2.0));

    if (db2 == 0.0) {
        rep.monotonicity = rep.continuity = nan;
        rep.monotonicity_skipped = rep.continuity_skipped = true;
    } else {
        rep.monotonicity = contract(ds, db) / (wbc * db2);
        rep.continuity = ds.norm() / (wbc * std::sqrt(db2));
    }
    if (b2 == 0.0) {
        rep.coercivity = rep.growth = nan;
        rep.coercivity_skipped = rep.growth_skipped = true;
    } else {
        rep.coercivity = contract(sb, b) / (wb * b2);
        rep.growth = sb.norm() / (wb * std::sqrt(b2));
    }

    SymTensor zero_stress = stress(SymTensor(d), p);
    rep.s_zero_exact = true;
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
            if (zero_stress.at(j, k) != 0.0) rep.s_zero_exact = false;
    return rep;
}

GrowthBoundReport growth_bound_check(const SymTensor& b, double p,
                                     const std::array<double, 3>& grad_p, double dt_p) {
    validate_p(p);
    GrowthBoundReport rep;
    const double r2 = b.norm_sq();
    const double r = std::sqrt(r2);
    // d S / d p = (1/2) ln(1+R^2) (1+R^2)^{(p-2)/2} B, so the full-tensor
    // magnitude of d_t S (resp. grad_x S) is `common` times |d_t p| (|grad p|).
    const double common = 0.5 * std::log1p(r2) * std::pow(1.0 + r2, 0.5 * (p - 2.0)) * r;
    const double gp =
        std::sqrt(grad_p[0] * grad_p[0] + grad_p[1] * grad_p[1] + grad_p[2] * grad_p[2]);
    rep.dt_term = common * std::fabs(dt_p);
    rep.x_term = common * gp;
    rep.bound = std::pow(1.0 + r2, 0.5 * (p - 1.0)) * std::log1p(r);
    rep.ratio_t = rep.dt_term == 0.0 ? 0.0 : rep.dt_term / rep.bound;
    rep.ratio_x = rep.x_term == 0.0 ? 0.0 : rep.x_term / rep.bound;
    rep.zero_at_origin = r == 0.0 && rep.dt_term == 0.0 && rep.x_term == 0.0;
    return rep;
}

StressDivergenceExpansion stress_divergence_expansion(const VectorField& u,
                                                      const ExponentField& p, double t,
                                                      DerivScheme scheme) {
    const PeriodicGrid& g = u.grid();
    const int d = g.dim;
    if (u.ncomp() != d) throw InvalidInput("stress_divergence_expansion expects a velocity field");
    if (g.n < 4) throw InvalidInput("stress_divergence_expansion: grid too coarse");

    const TensorField du = sym_gradient(u, scheme);
    ScalarField du2(g, 1);
    const std::size_t np = g.num_points();
    for (std::size_t pt = 0; pt < np; ++pt) {
        double s = 0.0;
        for (int c = 0; c < d * d; ++c) s += du.at(pt, c) * du.at(pt, c);
        du2.at(pt, 0) = s;
    }
    const Field grad_du2 = gradient(du2, scheme);
    const VectorField lap = laplacian(u, scheme);
    const VectorField gdiv = grad_div(u, scheme);
    const ScalarField pvals = p.on_grid(g, t);
    const Field gradp = p.grad_on_grid(g, t);

    StressDivergenceExpansion out{VectorField(g, d), VectorField(g, d), VectorField(g, d),
                                  VectorField(g, d)};
    for (std::size_t pt = 0; pt < np; ++pt) {
        const double pv = pvals.at(pt, 0);
        const double s2 = du2.at(pt, 0);
        const double a2 = std::pow(1.0 + s2, 0.5 * (pv - 2.0));
        const double a4 = std::pow(1.0 + s2, 0.5 * (pv - 4.0));
        const double lg = std::log1p(s2);
        for (int i = 0; i < d; ++i) {
            double dot_du2 = 0.0, dot_p = 0.0;
            for (int j = 0; j < d; ++j) {
                dot_du2 += du.at(pt, i * d + j) * grad_du2.at(pt, j);
                dot_p += du.at(pt, i * d + j) * gradp.at(pt, j);
            }
            const double l1 = 0.5 * a2 * (lap.at(pt, i) + gdiv.at(pt, i));
            const double l2 = 0.5 * (pv - 2.0) * a4 * dot_du2;
            const double l3 = 0.5 * a2 * lg * dot_p;
            out.l1.at(pt, i) = l1;
            out.l2.at(pt, i) = l2;
            out.l3.at(pt, i) = l3;
            out.sum.at(pt, i) = l1 + l2 + l3;
        }
    }
    return out;
}

TensorField stress_field(const TensorField& du, const ScalarField& pvals) {
    const PeriodicGrid& g = du.grid();
    const int d = g.dim;
    if (du.ncomp() != d * d) throw InvalidInput("stress_field expects a rank-2 tensor field");
    if (pvals.ncomp() != 1 || !(pvals.grid() == g))
        throw InvalidInput("stress_field: exponent values must be scalar on the same grid");
    TensorField out(g, d * d);
    const std::size_t np = g.num_points();
    for (std::size_t pt = 0; pt < np; ++pt) {
        double s2 = 0.0;
        for (int c = 0; c < d * d; ++c) s2 += du.at(pt, c) * du.at(pt, c);
        const double factor = std::pow(1.0 + s2, 0.5 * (pvals.at(pt, 0) - 2.0));
        for (int c = 0; c < d * d; ++c) out.at(pt, c) = factor * du.at(pt, c);
    }
    return out;
}

} // namespace plns
