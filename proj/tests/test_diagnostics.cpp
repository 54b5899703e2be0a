#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "plns/diagnostics.hpp"
#include "plns/rng.hpp"

using namespace plns;

namespace {
VectorField sin_field(const PeriodicGrid& g, double amp = 1.0) {
    VectorField u(g, g.dim);
    u.fill([amp](const std::array<double, 3>& x, int c) {
        return c == 0 ? amp * std::sin(x[0]) : 0.0;
    });
    return u;
}
} // namespace

TEST_CASE("energy pieces at constant states") {
    PeriodicGrid g(1, 16);
    ScalarField rho(g, 1, 2.0);
    VectorField u(g, 1, 3.0);

    // (1/2) * 2 * 9 * 2pi = 18 pi.
    CHECK(kinetic_energy(rho, u) == doctest::Approx(56.548667764616276).epsilon(1e-13));
    // int 2^{3/2} / (3/2 - 1) = 2pi * 2^{3/2} * 2.
    CHECK(internal_energy(rho, 1.5) == doctest::Approx(35.54306350526693).epsilon(1e-13));
    CHECK(energy_total(rho, u, 1.5) ==
          doctest::Approx(56.548667764616276 + 35.54306350526693).epsilon(1e-13));
    CHECK_THROWS_AS(internal_energy(rho, 1.0), InvalidInput);

    VectorField f(g, 1, 5.0);
    CHECK(work_rate(rho, u, &f) == doctest::Approx(2.0 * 3.0 * 5.0 * kTwoPi).epsilon(1e-13));
    CHECK(work_rate(rho, u, nullptr) == 0.0);
}

TEST_CASE("dissipation rate of a single shear mode") {
    PeriodicGrid g(1, 64);
    VectorField u = sin_field(g);
    ScalarField p2(g, 1, 2.0);
    const double s = std::sin(g.h) / g.h;
    // At p = 2 the weight is one: int |Du|^2 = pi s^2 with the discrete factor.
    CHECK(dissipation_rate(u, p2) == doctest::Approx(kTwoPi / 2 * s * s).epsilon(1e-12));
    CHECK(dissipation_rate(u, p2) >= 0.0);

    // p < 2 shrinks the weight, so the value can only decrease.
    ScalarField p15(g, 1, 1.5);
    CHECK(dissipation_rate(u, p15) < dissipation_rate(u, p2));
    CHECK(dissipation_rate(u, p15) > 0.0);
}

TEST_CASE("hessian functionals: frozen values at p = 2 and the two-path identities") {
    PeriodicGrid g(1, 64);
    VectorField u = sin_field(g);
    ScalarField p2(g, 1, 2.0);
    const double s = std::sin(g.h) / g.h;

    // At p = 2 the Hessian is the identity, so i contracts |grad Du|^2:
    // Du = cos * s, grad Du = -sin * s^2, integral = pi s^4.
    CHECK(i_phi(u, p2) == doctest::Approx(kTwoPi / 2 * s * s * s * s).epsilon(1e-12));

    // j with u = 0 contracts |D du_dt|^2 regardless of p.
    PeriodicGrid g2(1, 32);
    VectorField zero(g2, 1);
    VectorField dudt = sin_field(g2);
    ScalarField p17(g2, 1, 1.7);
    const double s2 = std::sin(g2.h) / g2.h;
    CHECK(j_phi(zero, dudt, p17) == doctest::Approx(kTwoPi / 2 * s2 * s2).epsilon(1e-12));

    // Identities between the eigenstructure path and the assembled-tensor
    // path, on a non-trivial two-dimensional state.
    PeriodicGrid gd(2, 16);
    Rng rng(21);
    VectorField w(gd, 2), v(gd, 2);
    w.fill([](const std::array<double, 3>& x, int c) {
        return c == 0 ? 0.4 * std::sin(x[0]) * std::cos(x[1]) : 0.3 * std::cos(x[0]);
    });
    v.fill([](const std::array<double, 3>& x, int c) {
        return c == 0 ? 0.2 * std::cos(x[1]) : 0.5 * std::sin(x[0]) * std::sin(x[1]);
    });
    ScalarField pv(gd, 1);
    pv.fill([](const std::array<double, 3>& x, int) { return 1.7 + 0.1 * std::sin(x[0]); });

    const double iw = i_phi(w, pv);
    const double ig = g_phi(w, sym_gradient(w), pv);
    CHECK(std::fabs(iw - ig) <= 1e-12 * std::max(1.0, std::fabs(iw)));

    const double jw = j_phi(w, v, pv);
    const double jg = g_phi(w, v, pv);
    CHECK(std::fabs(jw - jg) <= 1e-12 * std::max(1.0, std::fabs(jw)));
}

TEST_CASE("lower-bound ratios: exact at p = 2, skip flags when degenerate") {
    PeriodicGrid g(2, 16);
    VectorField u(g, 2);
    u.fill([](const std::array<double, 3>& x, int c) {
        return c == 0 ? 0.3 * std::sin(x[0] + 0.2) : 0.4 * std::cos(x[1]);
    });
    VectorField dudt(g, 2);
    dudt.fill([](const std::array<double, 3>& x, int c) {
        return c == 1 ? 0.2 * std::sin(x[1]) : 0.1 * std::cos(x[0]);
    });
    ScalarField p2(g, 1, 2.0);

    LowerBoundRatios r = lower_bound_ratios(u, &dudt, &dudt, p2);
    CHECK_FALSE(r.i_skipped);
    CHECK_FALSE(r.j_skipped);
    CHECK_FALSE(r.g_skipped);
    CHECK(r.i_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.j_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.g_ratio == doctest::Approx(1.0).epsilon(1e-12));

    // p < 2: ratios stay within [p_minus - 1, 1] for the shipped potential.
    ScalarField pv(g, 1, 1.6);
    LowerBoundRatios rp = lower_bound_ratios(u, &dudt, &dudt, pv);
    CHECK(rp.i_ratio >= 0.6 * (1.0 - 1e-10));
    CHECK(rp.i_ratio <= 1.0 + 1e-10);
    CHECK(rp.j_ratio >= 0.6 * (1.0 - 1e-10));
    CHECK(rp.g_ratio >= 0.6 * (1.0 - 1e-10));

    // Zero velocity: every denominator vanishes, everything is skipped.
    VectorField zero(g, 2);
    LowerBoundRatios rz = lower_bound_ratios(zero, nullptr, nullptr, p2);
    CHECK(rz.i_skipped);
    CHECK(rz.j_skipped);
    CHECK(rz.g_skipped);
    CHECK(std::isnan(rz.i_ratio));
}

TEST_CASE("blow-up indicators: trapezoid formula and prefix monotonicity") {
    std::vector<DiagnosticsRecord> recs(3);
    recs[0].t = 0.0;
    recs[0].rho_linf = 1.0;
    recs[0].grad_u_l3 = 2.0;
    recs[0].grad_u_linf = 1.0;
    recs[1].t = 0.5;
    recs[1].rho_linf = 3.0;
    recs[1].grad_u_l3 = 1.0;
    recs[1].grad_u_linf = 2.0;
    recs[2].t = 1.0;
    recs[2].rho_linf = 2.0;
    recs[2].grad_u_l3 = 0.5;
    recs[2].grad_u_linf = 0.0;

    auto [b1, b2] = blowup_indicators(recs);
    CHECK(b1 == doctest::Approx(3.0 + 2.0).epsilon(1e-15));
    // 0.5 * (1 + 16)/2 + 0.5 * (16 + 0)/2.
    CHECK(b2 == doctest::Approx(0.25 * 17.0 + 0.25 * 16.0).epsilon(1e-15));

    // Extending the prefix can only grow both indicators.
    double prev1 = 0.0, prev2 = 0.0;
    for (std::size_t k = 1; k <= recs.size(); ++k) {
        std::vector<DiagnosticsRecord> prefix(recs.begin(), recs.begin() + k);
        auto [c1, c2] = blowup_indicators(prefix);
        CHECK(c1 >= prev1);
        CHECK(c2 >= prev2);
        prev1 = c1;
        prev2 = c2;
    }

    CHECK_THROWS_AS(blowup_indicators({}), InvalidInput);
}

TEST_CASE("a priori bound: closed form, zero data, input guards") {
    // h = 0, f0 = c0 = alpha = 1: H = 1 and the bound is 1/(1 - t).
    std::vector<double> t_grid, h;
    for (int i = 0; i <= 90; ++i) {
        t_grid.push_back(0.01 * i);
        h.push_back(0.0);
    }
    GronwallBound gb = gronwall_bound(1.0, 1.0, 1.0, h, t_grid);
    REQUIRE(gb.bound.size() == t_grid.size());
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        CHECK(gb.cumulative[k] == 1.0);
        CHECK(gb.bound[k] == doctest::Approx(1.0 / (1.0 - t_grid[k])).epsilon(1e-12));
    }
    CHECK(gb.horizon == t_grid.back());

    // A grid crossing t = 1 saturates: +inf past the horizon.
    std::vector<double> t2{0.0, 0.5, 0.99, 1.0, 1.5};
    std::vector<double> h2(t2.size(), 0.0);
    GronwallBound gb2 = gronwall_bound(1.0, 1.0, 1.0, h2, t2);
    CHECK(gb2.horizon == 0.99);
    CHECK(std::isinf(gb2.bound[3]));
    CHECK(std::isinf(gb2.bound[4]));
    CHECK(gb2.bound[1] == doctest::Approx(2.0).epsilon(1e-12));

    // Zero initial data and zero source pin the bound at zero forever.
    GronwallBound gz = gronwall_bound(0.0, 1.0, 1.0, h2, t2);
    for (double b : gz.bound) CHECK(b == 0.0);
    CHECK(gz.horizon == t2.back());

    CHECK_THROWS_AS(gronwall_bound(-1.0, 1.0, 1.0, h2, t2), InvalidInput);
    CHECK_THROWS_AS(gronwall_bound(1.0, 0.0, 1.0, h2, t2), InvalidInput);
    CHECK_THROWS_AS(gronwall_bound(1.0, 1.0, -2.0, h2, t2), InvalidInput);
    CHECK_THROWS_AS(gronwall_bound(1.0, 1.0, 1.0, {0.0}, t2), InvalidInput);
    CHECK_THROWS_AS(gronwall_bound(1.0, 1.0, 1.0, h2, {0.5, 1.0, 1.5, 2.0, 2.5}),
                    InvalidInput);
}

TEST_CASE("poincare ratio: constant velocity against unit density") {
    PeriodicGrid g(1, 32);
    ScalarField rho(g, 1, 1.0);
    VectorField v(g, 1, 0.8);
    // ||v||_2^2 / (0 + (int |v|)^2) = 2pi v^2 / (2pi v)^2 = 1/(2pi).
    CHECK(poincare_ratio(rho, v) == doctest::Approx(0.15915494309189535).epsilon(1e-12));

    VectorField zero(g, 1);
    CHECK(std::isnan(poincare_ratio(rho, zero)));

    ScalarField zero_rho(g, 1, 0.0);
    CHECK_THROWS_AS(poincare_ratio(zero_rho, v), InvalidInput);
}

TEST_CASE("energy balance residual vanishes at rest") {
    PeriodicGrid g(1, 16);
    ScalarField rho(g, 1, 1.0);
    VectorField u(g, 1);
    ScalarField pv(g, 1, 1.8);
    CHECK(energy_balance(rho, u, rho, u, pv, nullptr, 1.5, 1e-3) == 0.0);
    CHECK_THROWS_AS(energy_balance(rho, u, rho, u, pv, nullptr, 1.5, 0.0), InvalidInput);
}

TEST_CASE("weighted second-gradient ratio is finite on generic data") {
    PeriodicGrid g(2, 16);
    VectorField w(g, 2), v(g, 2);
    w.fill([](const std::array<double, 3>& x, int c) {
        return c == 0 ? 0.5 * std::sin(x[0]) : 0.2 * std::cos(x[1]);
    });
    v.fill([](const std::array<double, 3>& x, int c) {
        return c == 0 ? 0.3 * std::cos(x[1]) : 0.1 * std::sin(x[0]);
    });
    ScalarField pv(g, 1, 1.7);
    const double r2 = gij_ratio(w, v, 2.0, 1.7, pv);
    CHECK(std::isfinite(r2));
    CHECK(r2 > 0.0);
    const double r_q15 = gij_ratio(w, v, 1.5, 1.7, pv);
    CHECK(std::isfinite(r_q15));
    CHECK_THROWS_AS(gij_ratio(w, v, 3.0, 1.7, pv), InvalidInput);

    VectorField zero(g, 2);
    CHECK(std::isnan(gij_ratio(w, zero, 2.0, 1.7, pv)));
}

TEST_CASE("diagnostics column names match the value layout") {
    std::vector<double> qs{2.0, 4.0};
    std::vector<std::string> cols = diagnostics_columns(qs);
    REQUIRE(cols.size() == 26);
    CHECK(cols[0] == "t");
    CHECK(cols[7] == "j_phi");
    CHECK(cols[8] == "dtilde_l2");
    CHECK(cols[9] == "dtilde_l4");
    CHECK(cols[10] == "grad_u_l3");
    CHECK(cols[12] == "blowup1");
    CHECK(cols[15] == "poincare_ratio");
    CHECK(cols.back() == "ine_ratio");

    DiagnosticsRecord r;
    r.dtilde_lq = {1.0, 2.0};
    CHECK(diagnostics_values(r).size() == cols.size());

    // A half-integer exponent keeps a well-formed column name.
    std::vector<std::string> c2 = diagnostics_columns({2.5});
    CHECK(c2[8] == "dtilde_l2_5");
}
