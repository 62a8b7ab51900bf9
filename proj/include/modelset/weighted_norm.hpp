#pragma once

#include "modelset/lattice.hpp"
#include "modelset/test_function.hpp"

namespace modelset {

/// Weight exp(alpha * |x|_1); the l1 norm is taken over every coordinate, so
/// the metric on G x H is d_G + d_H with l1 metrics on each factor.
struct WeightedNormParams {
  double alpha = 1.0;
  double C = 0.0;            // (sum_gamma exp(-alpha |gamma|_1 / 2))^(1/2)
  double radius = 0.0;       // l1 radius at which the partial sums settled
  double last_increment = 0.0;
};

/// Grows the l1 radius until the partial-sum increment is <= tol.
WeightedNormParams weighted_norm_params(const LatticeBasis& gamma, double alpha, double tol = 1e-8);

/// (int |f|^2 exp(alpha |x|_1) dx)^(1/2). With `factorize` the integral is
/// split into products of 1D integrals per pair of terms; otherwise direct
/// adaptive quadrature is used (dimension <= 2).
double weighted_norm(const TestFunction& f, double alpha, bool factorize = true);

}  // namespace modelset
