#include "plns/norms.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace plns {

double lq_norm(const Field& f, double q) {
    if (!(q >= 1.0)) throw InvalidInput("lq_norm: q must be >= 1 (or infinity)");
    const std::size_t np = f.num_points();
    if (std::isinf(q)) {
        double m = 0.0;
        for (std::size_t pt = 0; pt < np; ++pt) m = std::max(m, f.magnitude(pt));
        return m;
    }
    double s = 0.0;
    for (std::size_t pt = 0; pt < np; ++pt) s += std::pow(f.magnitude(pt), q);
    return std::pow(f.grid().cell_volume() * s, 1.0 / q);
}

double w1q_norm(const Field& f, double q, DerivScheme scheme) {
    const double nf = lq_norm(f, q);
    const double ng = lq_norm(gradient(f, scheme), q);
    if (std::isinf(q)) return std::max(nf, ng);
    return std::pow(std::pow(nf, q) + std::pow(ng, q), 1.0 / q);
}

ScalarField dtilde(const VectorField& u, DerivScheme scheme) {
    TensorField du = sym_gradient(u, scheme);
    ScalarField out(u.grid(), 1);
    const std::size_t np = u.num_points();
    for (std::size_t pt = 0; pt < np; ++pt) {
        double s2 = 0.0;
        for (int c = 0; c < du.ncomp(); ++c) s2 += du.at(pt, c) * du.at(pt, c);
        out.at(pt, 0) = std::sqrt(1.0 + s2);
    }
    return out;
}

namespace {

Field iterated_gradient(const Field& f, int order, DerivScheme scheme) {
    Field g = f;
    for (int i = 0; i < order; ++i) g = gradient(g, scheme);
    return g;
}

} // namespace

double gn_ratio(const VectorField& u, int j, int k, double q, double p, double r,
                double theta, DerivScheme scheme) {
    if (j >= k) throw InvalidInput("gn_ratio: requires j < k");
    if (theta < 0.0 || theta > 1.0) throw InvalidInput("gn_ratio: theta must lie in [0, 1]");
    const double d = static_cast<double>(u.grid().dim);
    auto inv = [](double e) { return std::isinf(e) ? 0.0 : 1.0 / e; };
    const double residual =
        inv(q) - (j / d + theta * (inv(p) - k / d) + (1.0 - theta) * inv(r));
    if (std::fabs(residual) > 1e-12) {
        std::ostringstream os;
        os << "gn_ratio: exponent relation violated, residual " << residual;
        throw InvalidInput(os.str());
    }
    const double num = lq_norm(iterated_gradient(u, j, scheme), q);
    const double den = std::pow(lq_norm(iterated_gradient(u, k, scheme), p), theta) *
                       std::pow(lq_norm(u, r), 1.0 - theta);
    if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return num / den;
}

double korn_ratio(const VectorField& u, double q, DerivScheme scheme) {
    const double num = lq_norm(gradient(u, scheme), q);
    const double den = lq_norm(sym_gradient(u, scheme), q);
    if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return num / den;
}

} // namespace plns
