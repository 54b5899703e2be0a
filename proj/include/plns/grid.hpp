#pragma once

#include <array>
#include <cstddef>

#include "plns/errors.hpp"

namespace plns {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Uniform periodic grid on [0, 2*pi)^dim with n points per axis.
// n must be even and >= 4 so that centered differences and the trig basis
// behave (no unpaired Nyquist mode in the quadrature identities we rely on).
struct PeriodicGrid {
    int dim = 0;
    int n = 0;
    double h = 0.0;

    PeriodicGrid(int dim_, int n_) : dim(dim_), n(n_), h(kTwoPi / n_) {
        if (dim < 1 || dim > 3) throw InvalidInput("grid dim must be 1, 2 or 3");
        if (n < 4) throw InvalidInput("grid needs at least 4 points per axis");
        if (n % 2 != 0) throw InvalidInput("grid points per axis must be even");
    }

    std::size_t num_points() const {
        std::size_t m = 1;
        for (int a = 0; a < dim; ++a) m *= static_cast<std::size_t>(n);
        return m;
    }

    int wrap(int i) const {
        i %= n;
        return i < 0 ? i + n : i;
    }

    // Row-major linear index; unused trailing axes must be zero.
    std::size_t index(const std::array<int, 3>& idx) const {
        std::size_t lin = 0;
        for (int a = 0; a < dim; ++a) lin = lin * n + static_cast<std::size_t>(wrap(idx[a]));
        return lin;
    }

    std::array<int, 3> unindex(std::size_t lin) const {
        std::array<int, 3> idx{0, 0, 0};
        for (int a = dim - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(lin % n);
            lin /= n;
        }
        return idx;
    }

    std::array<double, 3> point(std::size_t lin) const {
        auto idx = unindex(lin);
        return {idx[0] * h, idx[1] * h, idx[2] * h};
    }

    // Quadrature weight of one point (midpoint rule; exact for band-limited
    // trig polynomials on a periodic grid).
    double cell_volume() const {
        double v = 1.0;
        for (int a = 0; a < dim; ++a) v *= h;
        return v;
    }

    bool operator==(const PeriodicGrid&) const = default;
};

} // namespace plns
