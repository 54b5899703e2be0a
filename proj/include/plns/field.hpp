#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "plns/grid.hpp"

namespace plns {

// Discrete field on a periodic grid with ncomp values per point, stored
// point-major with components fastest (the snapshot file layout).
//
// A scalar field has ncomp = 1, a velocity field ncomp = dim, a (symmetric)
// rank-2 tensor field ncomp = dim*dim. Higher derivative stacks
// (e.g. grad of a tensor) are just fields with ncomp = dim^k.
class Field {
public:
    Field(const PeriodicGrid& grid, int ncomp, double init = 0.0)
        : grid_(grid), ncomp_(ncomp), data_(grid.num_points() * static_cast<std::size_t>(ncomp), init) {
        if (ncomp < 1) throw InvalidInput("field needs at least one component");
    }

    const PeriodicGrid& grid() const { return grid_; }
    int ncomp() const { return ncomp_; }
    std::size_t num_points() const { return grid_.num_points(); }

    double& at(std::size_t pt, int c) { return data_[pt * ncomp_ + c]; }
    double at(std::size_t pt, int c) const { return data_[pt * ncomp_ + c]; }

    double& operator[](std::size_t flat) { return data_[flat]; }
    double operator[](std::size_t flat) const { return data_[flat]; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    // Euclidean magnitude across components at one point (Frobenius norm
    // for tensor-valued fields, |.| for vectors, abs for scalars).
    double magnitude(std::size_t pt) const {
        double s = 0.0;
        for (int c = 0; c < ncomp_; ++c) {
            double v = at(pt, c);
            s += v * v;
        }
        return std::sqrt(s);
    }

    double min_value() const {
        double m = data_.empty() ? 0.0 : data_[0];
        for (double v : data_) m = v < m ? v : m;
        return m;
    }

    double max_value() const {
        double m = data_.empty() ? 0.0 : data_[0];
        for (double v : data_) m = v > m ? v : m;
        return m;
    }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    Field& operator+=(const Field& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }

    Field& operator-=(const Field& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }

    Field& operator*=(double a) {
        for (double& v : data_) v *= a;
        return *this;
    }

    void check_same_shape(const Field& o) const {
        if (!(grid_ == o.grid_) || ncomp_ != o.ncomp_)
            throw InvalidInput("field shape mismatch");
    }

    // Fill from a pointwise function of the grid coordinates.
    void fill(const std::function<double(const std::array<double, 3>&, int c)>& f) {
        const std::size_t np = num_points();
        for (std::size_t pt = 0; pt < np; ++pt) {
            auto x = grid_.point(pt);
            for (int c = 0; c < ncomp_; ++c) at(pt, c) = f(x, c);
        }
    }

private:
    PeriodicGrid grid_;
    int ncomp_;
    std::vector<double> data_;
};

using ScalarField = Field;  // ncomp = 1
using VectorField = Field;  // ncomp = dim
using TensorField = Field;  // ncomp = dim*dim, symmetric by construction

inline Field operator+(Field a, const Field& b) { return a += b; }
inline Field operator-(Field a, const Field& b) { return a -= b; }
inline Field operator*(double s, Field a) { return a *= s; }

// Discrete inner product <f, g> = h^d * sum over points and components.
inline double inner(const Field& a, const Field& b) {
    a.check_same_shape(b);
    double s = 0.0;
    const auto& da = a.data();
    const auto& db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) s += da[i] * db[i];
    return s * a.grid().cell_volume();
}

// h^d * sum of a scalar field (its integral over the torus).
inline double integral(const ScalarField& f) {
    if (f.ncomp() != 1) throw InvalidInput("integral expects a scalar field");
    double s = 0.0;
    for (double v : f.data()) s += v;
    return s * f.grid().cell_volume();
}

} // namespace plns
