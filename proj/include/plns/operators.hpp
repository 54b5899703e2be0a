#pragma once

#include "plns/field.hpp"

namespace plns {

// Derivative discretization. Centered differences are the default: on a
// periodic grid they admit an exact summation-by-parts identity, which the
// Galerkin weak form and the integration-by-parts property tests rely on.
// Spectral derivatives are provided for convergence studies.
enum class DerivScheme { centered, spectral };

// d/dx_axis applied to every component. Centered: (f(x+h) - f(x-h)) / (2h).
Field derivative(const Field& f, int axis, DerivScheme scheme = DerivScheme::centered);

// Gradient stack: output component c*dim + a holds d f_c / d x_a.
Field gradient(const Field& f, DerivScheme scheme = DerivScheme::centered);

// Symmetric velocity gradient (Du)_ij = (d_j u_i + d_i u_j) / 2,
// stored as the full dim x dim tensor (exactly symmetric by construction).
TensorField sym_gradient(const VectorField& u, DerivScheme scheme = DerivScheme::centered);

// Row-wise divergence of a rank-2 tensor field: out_i = sum_j d_j T_ij.
VectorField divergence(const TensorField& t, DerivScheme scheme = DerivScheme::centered);

// Divergence of a vector field: sum_j d_j u_j.
ScalarField divergence_vec(const VectorField& u, DerivScheme scheme = DerivScheme::centered);

// Componentwise Laplacian via iterated centered first differences, so that
// laplacian(u) == divergence(gradient(u)) holds exactly.
Field laplacian(const Field& f, DerivScheme scheme = DerivScheme::centered);

// grad(div u), needed by the stress divergence expansion.
VectorField grad_div(const VectorField& u, DerivScheme scheme = DerivScheme::centered);

} // namespace plns
