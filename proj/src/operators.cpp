#include "plns/operators.hpp"

#include <cmath>
#include <vector>

namespace plns {

namespace {

// Strides of the row-major point indexing, per axis.
std::array<std::size_t, 3> axis_strides(const PeriodicGrid& g) {
    std::array<std::size_t, 3> s{0, 0, 0};
    std::size_t cur = 1;
    for (int a = g.dim - 1; a >= 0; --a) {
        s[a] = cur;
        cur *= static_cast<std::size_t>(g.n);
    }
    return s;
}

Field derivative_centered(const Field& f, int axis) {
    const PeriodicGrid& g = f.grid();
    Field out(g, f.ncomp());
    const auto strides = axis_strides(g);
    const std::size_t stride = strides[axis];
    const std::size_t n = static_cast<std::size_t>(g.n);
    const std::size_t np = g.num_points();
    const double inv2h = 1.0 / (2.0 * g.h);
    const int nc = f.ncomp();
    for (std::size_t pt = 0; pt < np; ++pt) {
        const std::size_t pos = (pt / stride) % n;  // index along `axis`
        const std::size_t fwd = (pos + 1 == n) ? pt - (n - 1) * stride : pt + stride;
        const std::size_t bwd = (pos == 0) ? pt + (n - 1) * stride : pt - stride;
        for (int c = 0; c < nc; ++c)
            out.at(pt, c) = (f.at(fwd, c) - f.at(bwd, c)) * inv2h;
    }
    return out;
}

// Exact Fourier derivative along one axis, evaluated by direct summation per
// grid line (desk-scale grids only; no FFT dependency).
Field derivative_spectral(const Field& f, int axis) {
    const PeriodicGrid& g = f.grid();
    Field out(g, f.ncomp());
    const int n = g.n;
    const auto strides = axis_strides(g);
    const std::size_t stride = strides[axis];
    const std::size_t np = g.num_points();
    const int nc = f.ncomp();

    // Precompute the differentiation matrix D such that (Df)(x_i) is the
    // derivative of the trig interpolant: D_ij = 0.5*(-1)^(i-j)/tan((i-j)h/2).
    std::vector<double> D(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            int k = i - j;
            double sign = (k % 2 == 0) ? 1.0 : -1.0;
            D[static_cast<std::size_t>(i) * n + j] = 0.5 * sign / std::tan(0.5 * k * g.h);
        }

    // Iterate over all lines along `axis`.
    for (std::size_t base = 0; base < np; ++base) {
        if ((base / stride) % static_cast<std::size_t>(n) != 0) continue;  // not a line start
        for (int c = 0; c < nc; ++c) {
            for (int i = 0; i < n; ++i) {
                double s = 0.0;
                for (int j = 0; j < n; ++j)
                    s += D[static_cast<std::size_t>(i) * n + j] * f.at(base + j * stride, c);
                out.at(base + i * stride, c) = s;
            }
        }
    }
    return out;
}

} // namespace

Field derivative(const Field& f, int axis, DerivScheme scheme) {
    if (axis < 0 || axis >= f.grid().dim) throw InvalidInput("derivative axis out of range");
    return scheme == DerivScheme::centered ? derivative_centered(f, axis)
                                           : derivative_spectral(f, axis);
}

Field gradient(const Field& f, DerivScheme scheme) {
    const int d = f.grid().dim;
    Field out(f.grid(), f.ncomp() * d);
    for (int a = 0; a < d; ++a) {
        Field da = derivative(f, a, scheme);
        const std::size_t np = f.num_points();
        for (std::size_t pt = 0; pt < np; ++pt)
            for (int c = 0; c < f.ncomp(); ++c)
                out.at(pt, c * d + a) = da.at(pt, c);
    }
    return out;
}

TensorField sym_gradient(const VectorField& u, DerivScheme scheme) {
    const int d = u.grid().dim;
    if (u.ncomp() != d) throw InvalidInput("sym_gradient expects a velocity field");
    Field gu = gradient(u, scheme);  // (i,j) -> d_j u_i at comp i*d + j
    TensorField out(u.grid(), d * d);
    const std::size_t np = u.num_points();
    for (std::size_t pt = 0; pt < np; ++pt)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                out.at(pt, i * d + j) = 0.5 * (gu.at(pt, i * d + j) + gu.at(pt, j * d + i));
    return out;
}

VectorField divergence(const TensorField& t, DerivScheme scheme) {
    const int d = t.grid().dim;
    if (t.ncomp() != d * d) throw InvalidInput("divergence expects a rank-2 tensor field");
    VectorField out(t.grid(), d);
    for (int j = 0; j < d; ++j) {
        Field dj = derivative(t, j, scheme);
        const std::size_t np = t.num_points();
        for (std::size_t pt = 0; pt < np; ++pt)
            for (int i = 0; i < d; ++i)
                out.at(pt, i) += dj.at(pt, i * d + j);
    }
    return out;
}

ScalarField divergence_vec(const VectorField& u, DerivScheme scheme) {
    const int d = u.grid().dim;
    if (u.ncomp() != d) throw InvalidInput("divergence_vec expects a velocity field");
    ScalarField out(u.grid(), 1);
    for (int j = 0; j < d; ++j) {
        Field dj = derivative(u, j, scheme);
        const std::size_t np = u.num_points();
        for (std::size_t pt = 0; pt < np; ++pt) out.at(pt, 0) += dj.at(pt, j);
    }
    return out;
}

Field laplacian(const Field& f, DerivScheme scheme) {
    Field out(f.grid(), f.ncomp());
    for (int a = 0; a < f.grid().dim; ++a) {
        Field d2 = derivative(derivative(f, a, scheme), a, scheme);
        out += d2;
    }
    return out;
}

VectorField grad_div(const VectorField& u, DerivScheme scheme) {
    ScalarField div = divergence_vec(u, scheme);
    const int d = u.grid().dim;
    VectorField out(u.grid(), d);
    for (int a = 0; a < d; ++a) {
        Field da = derivative(div, a, scheme);
        const std::size_t np = u.num_points();
        for (std::size_t pt = 0; pt < np; ++pt) out.at(pt, a) = da.at(pt, 0);
    }
    return out;
}

} // namespace plns
