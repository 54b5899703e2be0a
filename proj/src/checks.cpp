#include "plns/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "plns/diagnostics.hpp"
#include "plns/errors.hpp"
#include "plns/galerkin.hpp"
#include "plns/norms.hpp"
#include "plns/operators.hpp"
#include "plns/potential.hpp"
#include "plns/rng.hpp"

namespace plns {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

// Accumulates one inequality row. `margin` orders samples (smaller = worse);
// the worst sample's JSON is kept for the report's trailing column.
class Acc {
public:
    Acc(std::string name, std::string bound) {
        row_.name = std::move(name);
        row_.bound = std::move(bound);
        row_.min_ratio = kNan;
        row_.max_ratio = kNan;
    }

    void skip() {
        ++row_.samples;
        ++row_.skipped;
    }

    void add(double ratio, double margin, bool ok, json sample) {
        ++row_.samples;
        if (std::isnan(row_.min_ratio) || ratio < row_.min_ratio) row_.min_ratio = ratio;
        if (std::isnan(row_.max_ratio) || ratio > row_.max_ratio) row_.max_ratio = ratio;
        if (!ok) row_.pass = false;
        if (margin < worst_margin_) {
            worst_margin_ = margin;
            sample["ratio"] = ratio;
            worst_ = std::move(sample);
        }
    }

    CheckRow finish() const {
        CheckRow r = row_;
        r.worst = worst_.is_null() ? "{}" : worst_.dump();
        return r;
    }

private:
    CheckRow row_;
    double worst_margin_ = kInf;
    json worst_;
};

SymTensor random_sym(Rng& rng, int d, double scale) {
    double m[9];
    for (int i = 0; i < d * d; ++i) m[i] = rng.uniform(-scale, scale);
    return SymTensor::from_matrix(d, m);
}

json tensor_json(const SymTensor& b) {
    json rows = json::array();
    for (int j = 0; j < b.dim(); ++j) {
        json row = json::array();
        for (int k = 0; k < b.dim(); ++k) row.push_back(b.at(j, k));
        rows.push_back(row);
    }
    return rows;
}

} // namespace

bool CheckReport::pass() const {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

std::string CheckReport::to_csv() const {
    std::ostringstream os;
    os << "name,samples,skipped,min_ratio,max_ratio,bound,pass,worst\n";
    for (const auto& r : rows)
        os << r.name << ',' << r.samples << ',' << r.skipped << ',' << fmt17(r.min_ratio)
           << ',' << fmt17(r.max_ratio) << ',' << csv_quote(r.bound) << ','
           << (r.pass ? "pass" : "fail") << ',' << csv_quote(r.worst) << '\n';
    return os.str();
}

CheckReport check_potential_suite(int samples, std::uint64_t seed, double p_lo, double p_hi) {
    if (samples < 1) throw InvalidInput("check potential: samples must be positive");
    if (!(p_lo >= 1.0 && p_lo <= p_hi && p_hi <= 2.0 && p_hi > 1.0))
        throw InvalidInput("check potential: p range must satisfy 1 <= a <= b <= 2, b > 1");

    Rng rng(seed);
    const int d = 3;
    const double scales[3] = {0.1, 1.0, 10.0};
    const double slack_lo = 1.0 - 1e-10;   // lower bounds: ratio >= bound * slack_lo
    const double cap = 2.0 + 1e-10;        // upper bounds: ratio <= cap
    const double fd_tol = 1e-6;
    const int fd_samples = std::min(samples, 1000);

    Acc zero("stress_at_zero", "== 0 exactly");
    Acc monotonicity("stress_monotonicity", ">= (p-1)*(1-1e-10)");
    Acc coercivity("stress_coercivity", ">= (p-1)*(1-1e-10)");
    Acc continuity("stress_continuity", "<= 2+1e-10");
    Acc growth("stress_growth", "<= 2+1e-10");
    Acc hlo("hessian_lower", ">= (p-1)*(1-1e-10)");
    Acc hop("hessian_opnorm", "<= 2+1e-10");
    Acc hfd("hessian_vs_fd", "rel err <= 1e-6");
    Acc gbt("growth_envelope_t", "finite (empirical)");
    Acc gbx("growth_envelope_x", "finite (empirical)");

    for (int i = 0; i < samples; ++i) {
        const double scale = scales[i % 3];
        const SymTensor b = random_sym(rng, d, scale);
        const SymTensor c = random_sym(rng, d, scale);
        const double p = p_hi - (p_hi - p_lo) * rng.uniform();
        std::array<double, 3> grad_p{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                                     rng.uniform(-1.0, 1.0)};
        const double dt_p = rng.uniform(-1.0, 1.0);

        json base;
        base["sample"] = i;
        base["p"] = p;
        base["B"] = tensor_json(b);

        const StressRatioReport rep = stress_ratios(b, c, p);

        {
            const SymTensor s0 = stress(SymTensor(d), p);
            double maxabs = 0.0;
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) maxabs = std::max(maxabs, std::fabs(s0.at(j, k)));
            const bool ok = rep.s_zero_exact && maxabs == 0.0;
            zero.add(maxabs, ok ? 0.0 : -1.0 - maxabs, ok, base);
        }

        json bc = base;
        bc["C"] = tensor_json(c);
        if (rep.monotonicity_skipped)
            monotonicity.skip();
        else
            monotonicity.add(rep.monotonicity, rep.monotonicity - (p - 1.0) * slack_lo, rep.monotonicity >= (p - 1.0) * slack_lo, bc);
        if (rep.coercivity_skipped)
            coercivity.skip();
        else
            coercivity.add(rep.coercivity, rep.coercivity - (p - 1.0) * slack_lo, rep.coercivity >= (p - 1.0) * slack_lo,
                    base);
        if (rep.continuity_skipped)
            continuity.skip();
        else
            continuity.add(rep.continuity, cap - rep.continuity, rep.continuity <= cap, bc);
        if (rep.growth_skipped)
            growth.skip();
        else
            growth.add(rep.growth, cap - rep.growth, rep.growth <= cap, base);

        const StressHessian h = stress_hessian(b, p);
        const double w = std::pow(1.0 + b.norm_sq(), 0.5 * (p - 2.0));
        {
            const double cn2 = c.norm_sq();
            if (cn2 == 0.0) {
                hlo.skip();
            } else {
                const double ratio = h.contract(c) / (w * cn2);
                hlo.add(ratio, ratio - (p - 1.0) * slack_lo, ratio >= (p - 1.0) * slack_lo, bc);
            }
            const double opr = h.operator_norm() / w;
            hop.add(opr, cap - opr, opr <= cap, base);
        }

        if (i < fd_samples) {
            const double eps = 1e-5;
            double num = 0.0, den = 0.0;
            for (int l = 0; l < d; ++l)
                for (int m = 0; m < d; ++m) {
                    double mat[9];
                    for (int j = 0; j < d; ++j)
                        for (int k = 0; k < d; ++k) mat[j * d + k] = b.at(j, k);
                    mat[l * d + m] += eps;
                    const SymTensor sp = stress(SymTensor::from_matrix(d, mat), p);
                    mat[l * d + m] -= 2.0 * eps;
                    const SymTensor sm = stress(SymTensor::from_matrix(d, mat), p);
                    for (int j = 0; j < d; ++j)
                        for (int k = 0; k < d; ++k) {
                            const double fd = (sp.at(j, k) - sm.at(j, k)) / (2.0 * eps);
                            const double an = h.entry(j, k, l, m);
                            num += (an - fd) * (an - fd);
                            den += an * an;
                        }
                }
            const double err = std::sqrt(num / den);
            hfd.add(err, fd_tol - err, err <= fd_tol, base);
        }

        {
            const GrowthBoundReport gb = growth_bound_check(b, p, grad_p, dt_p);
            json gj = base;
            gj["grad_p"] = {grad_p[0], grad_p[1], grad_p[2]};
            gj["dt_p"] = dt_p;
            gbt.add(gb.ratio_t, -gb.ratio_t, std::isfinite(gb.ratio_t), gj);
            gbx.add(gb.ratio_x, -gb.ratio_x, std::isfinite(gb.ratio_x), gj);
        }
    }

    CheckReport report;
    report.rows = {zero.finish(), monotonicity.finish(), coercivity.finish(), continuity.finish(), growth.finish(),
                   hlo.finish(), hop.finish(), hfd.finish(), gbt.finish(), gbx.finish()};
    return report;
}

CheckReport check_inequalities_suite(int samples, std::uint64_t seed) {
    if (samples < 1) throw InvalidInput("check inequalities: samples must be positive");

    Rng rng(seed);
    const PeriodicGrid g1(1, 32), g2(2, 16);
    const GalerkinBasis basis1 = build_basis(1, 5, g1);
    const GalerkinBasis basis2 = build_basis(2, 10, g2);

    Acc idg("identity_i_vs_g", "|I-G|/max(1,|I|) <= 1e-12");
    Acc jdg("identity_j_vs_g", "|J-G|/max(1,|J|) <= 1e-12");
    Acc low_i("lower_bound_i", ">= (p_minus-1)*(1-1e-10)");
    Acc low_j("lower_bound_j", ">= (p_minus-1)*(1-1e-10)");
    Acc low_g("lower_bound_g", ">= (p_minus-1)*(1-1e-10)");
    Acc ne_hi("grad2_vs_grad_du", "|grad^2 u| <= 3|grad Du| pointwise");
    Acc ne_lo("grad_du_vs_grad2", "|grad Du| <= 2|grad^2 u| pointwise");
    Acc ibp("integration_by_parts", "residual <= 1e-12");
    Acc gnr("gn_ratio", "finite");
    Acc kor("korn_ratio", "finite");
    Acc poi("poincare_ratio", "finite");

    for (int i = 0; i < samples; ++i) {
        const int d = (i % 2) + 1;
        const GalerkinBasis& basis = d == 1 ? basis1 : basis2;
        const PeriodicGrid& g = basis.grid;

        auto draw_coeffs = [&] {
            std::vector<double> c(basis.nmodes);
            for (double& v : c) v = rng.uniform(-1.0, 1.0);
            return c;
        };
        const VectorField u = velocity(basis, draw_coeffs());
        const VectorField du_dt = velocity(basis, draw_coeffs());
        const VectorField v = velocity(basis, draw_coeffs());

        ExponentField p = (i / 2) % 2 == 0
                              ? ExponentField::constant(rng.uniform(1.45, 2.0))
                              : ExponentField::preset("sin_x", rng.uniform(1.55, 1.9), 0.05);
        const double t = rng.uniform(0.0, 1.0);
        const ScalarField pv = p.on_grid(g, t);
        const double p_minus = pv.min_value();
        const double floor = (p_minus - 1.0) * (1.0 - 1e-10);

        json base;
        base["sample"] = i;
        base["dim"] = d;
        base["p_minus"] = p_minus;

        {
            const TensorField du = sym_gradient(u);
            const double iv = i_phi(u, pv);
            const double gv = g_phi(u, du, pv);
            const double diff = std::fabs(iv - gv) / std::max(1.0, std::fabs(iv));
            json j = base;
            j["i_phi"] = iv;
            j["g_phi"] = gv;
            idg.add(diff, 1e-12 - diff, diff <= 1e-12, j);

            const double jv = j_phi(u, du_dt, pv);
            const double gt = g_phi(u, du_dt, pv);
            const double diff2 = std::fabs(jv - gt) / std::max(1.0, std::fabs(jv));
            json j2 = base;
            j2["j_phi"] = jv;
            j2["g_phi"] = gt;
            jdg.add(diff2, 1e-12 - diff2, diff2 <= 1e-12, j2);
        }

        {
            const LowerBoundRatios lb = lower_bound_ratios(u, &du_dt, &v, pv);
            if (lb.i_skipped)
                low_i.skip();
            else
                low_i.add(lb.i_ratio, lb.i_ratio - floor, lb.i_ratio >= floor, base);
            if (lb.j_skipped)
                low_j.skip();
            else
                low_j.add(lb.j_ratio, lb.j_ratio - floor, lb.j_ratio >= floor, base);
            if (lb.g_skipped)
                low_g.skip();
            else
                low_g.add(lb.g_ratio, lb.g_ratio - floor, lb.g_ratio >= floor, base);
        }

        {
            const Field g2u = gradient(gradient(u));
            const Field gdu = gradient(sym_gradient(u));
            const std::size_t np = g.num_points();
            double hi_ratio = 0.0, lo_ratio = 0.0;
            double hi_margin = kInf, lo_margin = kInf;
            bool hi_ok = true, lo_ok = true;
            for (std::size_t pt = 0; pt < np; ++pt) {
                const double a2 = g2u.magnitude(pt);
                const double adu = gdu.magnitude(pt);
                if (a2 > 3.0 * adu + 1e-12) hi_ok = false;
                if (adu > 2.0 * a2 + 1e-12) lo_ok = false;
                hi_margin = std::min(hi_margin, 3.0 * adu + 1e-12 - a2);
                lo_margin = std::min(lo_margin, 2.0 * a2 + 1e-12 - adu);
                if (adu > 1e-13) hi_ratio = std::max(hi_ratio, a2 / adu);
                if (a2 > 1e-13) lo_ratio = std::max(lo_ratio, adu / a2);
            }
            ne_hi.add(hi_ratio, hi_margin, hi_ok, base);
            ne_lo.add(lo_ratio, lo_margin, lo_ok, base);
        }

        {
            Field tensor(g, d * d);
            Field vec(g, d);
            for (double& x : tensor.data()) x = rng.uniform(-1.0, 1.0);
            for (double& x : vec.data()) x = rng.uniform(-1.0, 1.0);
            const double lhs = inner(divergence(tensor), vec);
            const double rhs = inner(tensor, gradient(vec));
            const double res = std::fabs(lhs + rhs) / (1.0 + std::fabs(lhs) + std::fabs(rhs));
            json j = base;
            j["lhs"] = lhs;
            j["rhs"] = rhs;
            ibp.add(res, 1e-12 - res, res <= 1e-12, j);
        }

        {
            const double q = d == 1 ? kInf : 4.0;
            const double gn = gn_ratio(u, 0, 1, q, 2.0, 2.0, 0.5);
            if (std::isnan(gn))
                gnr.skip();
            else
                gnr.add(gn, -gn, std::isfinite(gn), base);

            const double kr = korn_ratio(u, 2.0);
            if (std::isnan(kr))
                kor.skip();
            else
                kor.add(kr, -kr, std::isfinite(kr), base);

            ScalarField rho(g, 1);
            const double amp = rng.uniform(0.0, 0.5);
            const double phase = rng.uniform(0.0, kTwoPi);
            rho.fill([&](const std::array<double, 3>& x, int) {
                return 1.0 + amp * std::sin(x[0] + phase);
            });
            const double pr = poincare_ratio(rho, u);
            if (std::isnan(pr))
                poi.skip();
            else
                poi.add(pr, -pr, std::isfinite(pr), base);
        }
    }

    CheckReport report;
    report.rows = {idg.finish(),   jdg.finish(),   low_i.finish(), low_j.finish(),
                   low_g.finish(), ne_hi.finish(), ne_lo.finish(), ibp.finish(),
                   gnr.finish(),   kor.finish(),   poi.finish()};
    return report;
}

CheckReport check_gronwall_suite(int samples, std::uint64_t seed) {
    if (samples < 1) throw InvalidInput("check gronwall: samples must be positive");

    Rng rng(seed);
    CheckReport report;

    {
        // h = 0, c0 = alpha = f0 = 1 collapses the bound to 1/(1-t).
        Acc acc("closed_form_inverse", "|bound - 1/(1-t)| <= 1e-9");
        const std::vector<double> ts{0.0, 0.1, 0.5, 0.9};
        const std::vector<double> h(ts.size(), 0.0);
        const GronwallBound gb = gronwall_bound(1.0, 1.0, 1.0, h, ts);
        for (std::size_t i = 1; i < ts.size(); ++i) {
            const double expected = 1.0 / (1.0 - ts[i]);
            const double err = std::fabs(gb.bound[i] - expected);
            json j;
            j["t"] = ts[i];
            j["bound"] = gb.bound[i];
            j["expected"] = expected;
            acc.add(err, 1e-9 - err, err <= 1e-9, j);
        }
        report.rows.push_back(acc.finish());
    }

    {
        // f0 = 0, h = 0: the bound is identically zero with an open horizon.
        Acc acc("zero_data", "bound == 0, full horizon");
        std::vector<double> ts, h;
        for (int i = 0; i <= 100; ++i) {
            ts.push_back(0.01 * i);
            h.push_back(0.0);
        }
        const GronwallBound gb = gronwall_bound(0.0, 1.0, 1.0, h, ts);
        double maxabs = 0.0;
        for (double b : gb.bound) maxabs = std::max(maxabs, std::fabs(b));
        const bool ok = maxabs == 0.0 && gb.horizon == ts.back();
        json j;
        j["max_bound"] = maxabs;
        j["horizon"] = gb.horizon;
        acc.add(maxabs, ok ? 0.0 : -1.0, ok, j);
        report.rows.push_back(acc.finish());
    }

    {
        // Random superlinear instances: RK4-integrate the saturated ODE
        // f' = h(t) + c0 f^{1+alpha} and require f <= bound below the horizon.
        Acc acc("rk4_domination", "f/bound <= 1+1e-6");
        const int nt = 10000;
        const double dt = 1e-4;
        std::vector<double> ts(nt + 1);
        for (int i = 0; i <= nt; ++i) ts[i] = i * dt;

        for (int s = 0; s < samples; ++s) {
            const double c0 = rng.uniform(0.5, 2.0);
            const double alpha = rng.uniform(0.5, 2.0);
            const double f0 = rng.uniform(0.0, 1.0);
            std::array<double, 9> knots{};
            for (double& k : knots) k = rng.uniform(0.0, 1.0);
            // Piecewise-linear h with knots every 1/8: continuous, and the
            // trapezoid cumulative in gronwall_bound integrates it exactly.
            auto hfun = [&](double t) {
                const double span = std::clamp(t, 0.0, 1.0) * 8.0;
                const int j = std::min(7, static_cast<int>(span));
                const double frac = span - j;
                return knots[j] * (1.0 - frac) + knots[j + 1] * frac;
            };
            std::vector<double> h(nt + 1);
            for (int i = 0; i <= nt; ++i) h[i] = hfun(ts[i]);

            const GronwallBound gb = gronwall_bound(f0, c0, alpha, h, ts);

            auto rhs = [&](double t, double f) { return hfun(t) + c0 * std::pow(f, 1.0 + alpha); };
            double f = f0;
            double max_ratio = 0.0;
            json worst;
            for (int i = 0; i < nt; ++i) {
                const double t0 = ts[i];
                if (ts[i + 1] > gb.horizon) break;
                const double k1 = rhs(t0, f);
                const double k2 = rhs(t0 + 0.5 * dt, f + 0.5 * dt * k1);
                const double k3 = rhs(t0 + 0.5 * dt, f + 0.5 * dt * k2);
                const double k4 = rhs(t0 + dt, f + dt * k3);
                f += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                const double bound = gb.bound[i + 1];
                if (!(bound > 0.0) || !std::isfinite(bound)) continue;
                const double ratio = f / bound;
                if (ratio > max_ratio) {
                    max_ratio = ratio;
                    worst = json{{"sample", s}, {"c0", c0},      {"alpha", alpha},
                                 {"f0", f0},   {"t", ts[i + 1]}, {"f", f},
                                 {"bound", bound}};
                }
            }
            acc.add(max_ratio, 1.0 + 1e-6 - max_ratio, max_ratio <= 1.0 + 1e-6,
                    std::move(worst));
        }
        report.rows.push_back(acc.finish());
    }

    return report;
}

} // namespace plns
