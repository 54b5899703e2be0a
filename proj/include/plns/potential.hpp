#pragma once

#include <array>
#include <functional>
#include <string>

#include "plns/exponent.hpp"
#include "plns/field.hpp"
#include "plns/operators.hpp"
#include "plns/sym_tensor.hpp"

namespace plns {

// Scalar profile of an isotropic potential Phi(B) = F(|B|) with stress
// S(B) = F'(|B|) B/|B|. Extension point for non-standard potentials; only
// the shear-thinning power-law profile ships.
struct PotentialProfile {
    std::function<double(double R, double p)> value;   // F(R, p)
    std::function<double(double R, double p)> deriv;   // F'(R, p)
    std::function<double(double R, double p)> deriv2;  // F''(R, p)
};

// F(R) = ((1+R^2)^{p/2} - 1)/p, the antiderivative matching the power-law
// stress: F'(R) = (1+R^2)^{(p-2)/2} R, F''(R) = (1+R^2)^{(p-4)/2}(1+(p-1)R^2).
const PotentialProfile& standard_profile();

// Ellipticity/growth constants. For the standard profile the Hessian
// eigenvalues at strain magnitude R are (1+R^2)^{(p-2)/2} (multiplicity
// d(d+1)/2 - 1) and F''(R); their ratio to (1+R^2)^{(p-2)/2} spans exactly
// [p-1, 1] for 1 < p <= 2, so gamma1 = p-1 and gamma2 = 1 are sharp (the
// operator norm on symmetric tensors; gamma2 <= 2 is the asserted slack
// bound). gamma3 has no closed form and is reported empirically.
struct PotentialParams {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma3 = 0.0;
    std::string potential_kind = "standard";
};

PotentialParams standard_params(double p_minus);

// Phi(B) = ((1+|B|^2)^{p/2} - 1)/p; requires 1 < p <= 2; Phi(0) = 0, Phi >= 0.
double potential_value(const SymTensor& b, double p);
double potential_value(const SymTensor& b, double p, const PotentialProfile& prof);

// S(B) = (1+|B|^2)^{(p-2)/2} B; S(0) = 0 exactly; identity map at p = 2.
SymTensor stress(const SymTensor& b, double p);
SymTensor stress(const SymTensor& b, double p, const PotentialProfile& prof);

// Fourth-order Hessian H_{jk,lm} of Phi at one point, acting on symmetric
// tensors. Symmetric under (jk)<->(lm), (j<->k) and (l<->m).
class StressHessian {
public:
    explicit StressHessian(int d);

    int dim() const { return d_; }

    double entry(int j, int k, int l, int m) const { return h_[flat(j, k, l, m)]; }
    void set_entry(int j, int k, int l, int m, double v) { h_[flat(j, k, l, m)] = v; }

    // (H C)_jk = sum_lm H_{jk,lm} C_lm.
    SymTensor apply(const SymTensor& c) const;

    // sum_{jk,lm} H_{jk,lm} C_jk C_lm = <H C, C>.
    double contract(const SymTensor& c) const;

    double bilinear(const SymTensor& c, const SymTensor& e) const;

    // Largest |eigenvalue| of H as a linear map on symmetric tensors.
    double operator_norm() const;

    // (sum over all d^4 entries squared)^{1/2}.
    double frobenius_norm() const;

private:
    std::size_t flat(int j, int k, int l, int m) const {
        return static_cast<std::size_t>(((j * d_ + k) * d_ + l) * d_ + m);
    }

    int d_;
    std::array<double, 81> h_{};
};

// H = F'(R) (delta_sym/R - B (x) B / R^3) + F''(R) B (x) B / R^2 with the
// analytic limit delta_sym at B = 0 (the 1/R singularities are removable).
StressHessian stress_hessian(const SymTensor& b, double p);

// delta_sym_{jk,lm} = (delta_jl delta_km + delta_jm delta_kl)/2 — the
// identity on symmetric tensors and the B = 0 Hessian.
StressHessian sym_identity(int d);

// Monotonicity/growth ratios of the stress, constants stripped:
//   monotonicity = (S(B)-S(C)):(B-C) / [(1+|B|^2+|C|^2)^{(p-2)/2} |B-C|^2]
//   coercivity   = S(B):B            / [(1+|B|^2)^{(p-2)/2} |B|^2]
//   continuity   = |S(B)-S(C)|       / [(1+|B|^2+|C|^2)^{(p-2)/2} |B-C|]
//   growth       = |S(B)|            / [(1+|B|^2)^{(p-2)/2} |B|]
// Degenerate denominators (B = C, B = 0) are flagged skipped (value NaN).
// s_zero_exact records that the stress of the zero tensor is exactly zero.
struct StressRatioReport {
    double monotonicity = 0.0, coercivity = 0.0, continuity = 0.0, growth = 0.0;
    bool monotonicity_skipped = false, coercivity_skipped = false, continuity_skipped = false, growth_skipped = false;
    bool s_zero_exact = false;
};

StressRatioReport stress_ratios(const SymTensor& b, const SymTensor& c, double p);

// Growth of the stress under parameter variation: with S = (1+R^2)^{(p-2)/2}B
// and p = p(t,x), the chain rule gives
//   |d_t S| = (1/2) ln(1+R^2) (1+R^2)^{(p-2)/2} R |d_t p|,
// and the same factor times |grad p| for the spatial derivative. Both are
// compared to the envelope (1+R^2)^{(p-1)/2} ln(1+R) (the gamma3-free bound).
struct GrowthBoundReport {
    double dt_term = 0.0;   // |d_t grad Phi|
    double x_term = 0.0;    // |grad_x grad Phi| (Frobenius over all entries)
    double bound = 0.0;     // (1+R^2)^{(p-1)/2} ln(1+R)
    double ratio_t = 0.0;   // dt_term / bound; 0 when dt_term == 0
    double ratio_x = 0.0;
    bool zero_at_origin = false;  // terms vanish exactly when B = 0
};

GrowthBoundReport growth_bound_check(const SymTensor& b, double p,
                                     const std::array<double, 3>& grad_p, double dt_p);

// div S(Du) split into the three advertised terms:
//   l1 = (1/2)(1+|Du|^2)^{(p-2)/2} (lap u + grad div u)
//   l2 = (p-2)/2 (1+|Du|^2)^{(p-4)/2} [grad(|Du|^2)] Du
//   l3 = (1/2)(1+|Du|^2)^{(p-2)/2} ln(1+|Du|^2) [grad p] Du
// sum agrees with the direct discrete divergence of S(Du) up to
// discretization error (2nd order in h for smooth data).
struct StressDivergenceExpansion {
    VectorField l1, l2, l3, sum;
};

StressDivergenceExpansion stress_divergence_expansion(const VectorField& u,
                                                      const ExponentField& p, double t,
                                                      DerivScheme scheme = DerivScheme::centered);

// Pointwise S(Du) over the grid; pvals holds p at the same points.
TensorField stress_field(const TensorField& du, const ScalarField& pvals);

} // namespace plns
