#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <limits>

#include "plns/errors.hpp"
#include "plns/field.hpp"
#include "plns/norms.hpp"
#include "plns/operators.hpp"
#include "plns/rng.hpp"
#include "plns/snapshot.hpp"

using namespace plns;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

// Centered differences turn sin(kx) derivatives into cos(kx) * sin(kh)/(h)
// exactly; tests against discrete trig identities use this factor.
double diff_factor(double h, int k = 1) { return std::sin(k * h) / h; }
} // namespace

TEST_CASE("grid construction and indexing") {
    PeriodicGrid g(2, 8);
    CHECK(g.num_points() == 64);
    CHECK(g.h == doctest::Approx(kTwoPi / 8).epsilon(1e-15));
    CHECK(g.wrap(-1) == 7);
    CHECK(g.wrap(8) == 0);
    for (std::size_t pt : {std::size_t{0}, std::size_t{13}, std::size_t{63}})
        CHECK(g.index(g.unindex(pt)) == pt);

    CHECK_THROWS_AS(PeriodicGrid(0, 8), InvalidInput);
    CHECK_THROWS_AS(PeriodicGrid(4, 8), InvalidInput);
    CHECK_THROWS_AS(PeriodicGrid(1, 2), InvalidInput);
    CHECK_THROWS_AS(PeriodicGrid(1, 7), InvalidInput);
}

TEST_CASE("centered derivative of sin matches the discrete closed form") {
    PeriodicGrid g(1, 64);
    ScalarField f(g, 1);
    f.fill([](const std::array<double, 3>& x, int) { return std::sin(x[0]); });
    Field d = derivative(f, 0);

    const double s = diff_factor(g.h);
    double max_discrete = 0.0, max_analytic = 0.0;
    for (std::size_t pt = 0; pt < g.num_points(); ++pt) {
        const double x = g.point(pt)[0];
        max_discrete = std::max(max_discrete, std::fabs(d.at(pt, 0) - std::cos(x) * s));
        max_analytic = std::max(max_analytic, std::fabs(d.at(pt, 0) - std::cos(x)));
    }
    CHECK(max_discrete <= 1e-13);
    CHECK(max_analytic <= 0.7 * g.h * g.h);
}

TEST_CASE("spectral derivative is exact on band-limited data") {
    PeriodicGrid g(1, 32);
    ScalarField f(g, 1);
    f.fill([](const std::array<double, 3>& x, int) { return std::sin(3.0 * x[0]); });
    Field d = derivative(f, 0, DerivScheme::spectral);
    for (std::size_t pt = 0; pt < g.num_points(); ++pt)
        CHECK(d.at(pt, 0) == doctest::Approx(3.0 * std::cos(3.0 * g.point(pt)[0])).epsilon(1e-11));
}

TEST_CASE("sym_gradient is exactly symmetric and kills constants") {
    PeriodicGrid g(2, 16);
    VectorField u(g, 2, 1.25);
    TensorField du = sym_gradient(u);
    for (std::size_t pt = 0; pt < g.num_points(); ++pt)
        for (int c = 0; c < 4; ++c) CHECK(du.at(pt, c) == 0.0);

    Rng rng(7);
    for (double& v : u.data()) v = rng.uniform(-1.0, 1.0);
    du = sym_gradient(u);
    for (std::size_t pt = 0; pt < g.num_points(); ++pt) {
        CHECK(du.at(pt, 0 * 2 + 1) == du.at(pt, 1 * 2 + 0));
    }
}

TEST_CASE("divergence of sym_gradient equals half of (laplacian + grad div) exactly") {
    PeriodicGrid g(3, 8);
    VectorField u(g, 3);
    u.fill([](const std::array<double, 3>& x, int c) {
        return c == 0 ? std::sin(x[0]) * std::cos(x[1]) : (c == 1 ? std::cos(x[2]) : 0.0);
    });
    VectorField lhs = divergence(sym_gradient(u));
    VectorField lap = laplacian(u);
    VectorField gd = grad_div(u);
    for (std::size_t pt = 0; pt < g.num_points(); ++pt)
        for (int c = 0; c < 3; ++c)
            CHECK(lhs.at(pt, c) ==
                  doctest::Approx(0.5 * (lap.at(pt, c) + gd.at(pt, c))).epsilon(1e-13));
}

TEST_CASE("discrete integration by parts is exact") {
    PeriodicGrid g(2, 12);
    Rng rng(99);
    Field tensor(g, 4), vec(g, 2);
    for (double& v : tensor.data()) v = rng.uniform(-1.0, 1.0);
    for (double& v : vec.data()) v = rng.uniform(-1.0, 1.0);
    const double lhs = inner(divergence(tensor), vec);
    const double rhs = inner(tensor, gradient(vec));
    CHECK(std::fabs(lhs + rhs) <= 1e-12 * (1.0 + std::fabs(lhs)));
}

TEST_CASE("lq norms: torus measure, trig norms, max norm, homogeneity") {
    PeriodicGrid g(1, 64);
    ScalarField one(g, 1, 1.0);
    CHECK(lq_norm(one, 2.0) == doctest::Approx(2.5066282746310002).epsilon(1e-12));

    ScalarField s(g, 1);
    s.fill([](const std::array<double, 3>& x, int) { return std::sin(x[0]); });
    CHECK(lq_norm(s, 2.0) == doctest::Approx(1.7724538509055159).epsilon(1e-12));
    CHECK(lq_norm(s, kInf) == doctest::Approx(1.0).epsilon(1e-15));

    ScalarField s3 = s;
    s3 *= -3.0;
    CHECK(lq_norm(s3, 2.0) == doctest::Approx(3.0 * lq_norm(s, 2.0)).epsilon(1e-14));

    CHECK_THROWS_AS(lq_norm(s, 0.5), InvalidInput);
}

TEST_CASE("w1q norm of a constant reduces to the plain lq norm") {
    PeriodicGrid g(2, 8);
    ScalarField f(g, 1, 2.0);
    const double measure = kTwoPi * kTwoPi;
    CHECK(w1q_norm(f, 3.0) == doctest::Approx(2.0 * std::pow(measure, 1.0 / 3.0)).epsilon(1e-13));
    CHECK(w1q_norm(f, kInf) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("dtilde of the zero field is one everywhere") {
    PeriodicGrid g(2, 8);
    VectorField u(g, 2);
    ScalarField d = dtilde(u);
    for (double v : d.data()) CHECK(v == 1.0);
    CHECK(lq_norm(d, 4.0) == doctest::Approx(std::pow(kTwoPi * kTwoPi, 0.25)).epsilon(1e-13));
}

TEST_CASE("dtilde is at least one for random fields") {
    PeriodicGrid g(1, 32);
    Rng rng(4);
    VectorField u(g, 1);
    for (double& v : u.data()) v = rng.uniform(-2.0, 2.0);
    ScalarField d = dtilde(u);
    for (double v : d.data()) CHECK(v >= 1.0);
}

TEST_CASE("interpolation ratio on sin matches its closed form") {
    PeriodicGrid g(1, 64);
    VectorField u(g, 1);
    u.fill([](const std::array<double, 3>& x, int) { return std::sin(x[0]); });

    // ||u||_inf = 1 on this grid (n divisible by 4), ||u||_2 = sqrt(pi), and
    // the discrete gradient norm is sqrt(pi) * sin(h)/h, so the ratio is
    // pi^{-1/2} / sqrt(sin(h)/h).
    const double r = gn_ratio(u, 0, 1, kInf, 2.0, 2.0, 0.5);
    const double s = diff_factor(g.h);
    CHECK(r == doctest::Approx(0.5641895835477563 / std::sqrt(s)).epsilon(1e-12));
    CHECK(r == doctest::Approx(0.5641895835477563).epsilon(2e-3));

    // Exponent relation violated -> error naming the residual.
    CHECK_THROWS_AS(gn_ratio(u, 0, 1, 4.0, 2.0, 2.0, 0.5), InvalidInput);
    // Zero field -> 0/0 -> NaN.
    VectorField z(g, 1);
    CHECK(std::isnan(gn_ratio(z, 0, 1, kInf, 2.0, 2.0, 0.5)));
}

TEST_CASE("korn ratio is one in one dimension") {
    PeriodicGrid g(1, 32);
    VectorField u(g, 1);
    u.fill([](const std::array<double, 3>& x, int) { return std::sin(x[0]); });
    CHECK(korn_ratio(u, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
    VectorField z(g, 1);
    CHECK(std::isnan(korn_ratio(z, 2.0)));
}

TEST_CASE("snapshot files round-trip bit-exactly") {
    PeriodicGrid g(2, 8);
    Rng rng(31);
    Field f(g, 3);
    for (double& v : f.data()) v = rng.uniform(-10.0, 10.0);

    const std::string path = "test_snapshot_roundtrip.plns";
    write_snapshot(path, f, 0.625);
    Snapshot back = read_snapshot(path);
    CHECK(back.t == 0.625);
    CHECK(back.field.grid() == g);
    CHECK(back.field.ncomp() == 3);
    for (std::size_t i = 0; i < f.data().size(); ++i) CHECK(back.field[i] == f[i]);
    std::remove(path.c_str());

    CHECK_THROWS_AS(read_snapshot("does_not_exist.plns"), InvalidInput);
}
