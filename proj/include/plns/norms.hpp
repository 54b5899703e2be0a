#pragma once

#include "plns/field.hpp"
#include "plns/operators.hpp"

namespace plns {

// Quadrature L^q norm of the pointwise magnitude, (h^d sum |f|^q)^{1/q}.
// q may be infinity (grid max). q < 1 -> InvalidInput.
double lq_norm(const Field& f, double q);

// W^{1,q} norm: (||f||_q^q + ||grad f||_q^q)^{1/q} (max of the two for q = inf).
double w1q_norm(const Field& f, double q, DerivScheme scheme = DerivScheme::centered);

// dtilde(u) = (1 + |Du|^2)^{1/2} with Du the symmetric gradient; >= 1 pointwise.
ScalarField dtilde(const VectorField& u, DerivScheme scheme = DerivScheme::centered);

// Interpolation-inequality ratio ||grad^j u||_q / (||grad^k u||_p^theta ||u||_r^{1-theta}).
// Requires j < k and the exponent relation
//   1/q = j/d + theta*(1/p - k/d) + (1-theta)/r
// to hold within 1e-12 (InvalidInput naming the residual otherwise).
// Returns NaN for the degenerate 0/0 case (u = 0).
double gn_ratio(const VectorField& u, int j, int k, double q, double p, double r,
                double theta, DerivScheme scheme = DerivScheme::centered);

// Monitored ratio ||grad u||_q / ||Du||_q (finite whenever Du != 0); NaN if 0/0.
double korn_ratio(const VectorField& u, double q, DerivScheme scheme = DerivScheme::centered);

} // namespace plns
