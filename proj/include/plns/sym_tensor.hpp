#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "plns/errors.hpp"

namespace plns {

// Symmetric d x d tensor value (d in {1,2,3}); entries t_jk == t_kj exactly.
class SymTensor {
public:
    explicit SymTensor(int d) : d_(d) {
        if (d < 1 || d > 3) throw InvalidInput("SymTensor: dim must be 1, 2 or 3");
        a_.fill(0.0);
    }

    // Symmetrize a full row-major matrix: entries (M + M^T)/2.
    static SymTensor from_matrix(int d, const double* m) {
        SymTensor t(d);
        for (int j = 0; j < d; ++j)
            for (int k = j; k < d; ++k) t.set(j, k, 0.5 * (m[j * d + k] + m[k * d + j]));
        return t;
    }

    static SymTensor diag(int d, double v0, double v1 = 0.0, double v2 = 0.0) {
        SymTensor t(d);
        const double v[3] = {v0, v1, v2};
        for (int j = 0; j < d; ++j) t.set(j, j, v[j]);
        return t;
    }

    int dim() const { return d_; }

    double at(int j, int k) const { return a_[static_cast<std::size_t>(j) * d_ + k]; }

    // Writes both (j,k) and (k,j) so symmetry is structural.
    void set(int j, int k, double v) {
        a_[static_cast<std::size_t>(j) * d_ + k] = v;
        a_[static_cast<std::size_t>(k) * d_ + j] = v;
    }

    // Frobenius magnitude |B| = (sum_jk B_jk^2)^{1/2}.
    double norm() const {
        double s = 0.0;
        for (int j = 0; j < d_; ++j)
            for (int k = 0; k < d_; ++k) s += at(j, k) * at(j, k);
        return std::sqrt(s);
    }

    double norm_sq() const {
        double s = 0.0;
        for (int j = 0; j < d_; ++j)
            for (int k = 0; k < d_; ++k) s += at(j, k) * at(j, k);
        return s;
    }

    bool all_finite() const {
        for (double v : a_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    SymTensor& operator+=(const SymTensor& o) {
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    SymTensor& operator-=(const SymTensor& o) {
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    SymTensor& operator*=(double s) {
        for (double& v : a_) v *= s;
        return *this;
    }

    friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
    friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
    friend SymTensor operator*(double s, SymTensor a) { return a *= s; }

private:
    int d_;
    std::array<double, 9> a_{};
};

// Double contraction A : B = sum_jk A_jk B_jk.
inline double contract(const SymTensor& a, const SymTensor& b) {
    double s = 0.0;
    for (int j = 0; j < a.dim(); ++j)
        for (int k = 0; k < a.dim(); ++k) s += a.at(j, k) * b.at(j, k);
    return s;
}

} // namespace plns
