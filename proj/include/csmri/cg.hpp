#pragma once

#include "csmri/types.hpp"

#include <cstdint>
#include <functional>

namespace csmri {

using CoeffOperator = std::function<WaveletCoeffs(WaveletCoeffs const &)>;

struct CgReport
{
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Conjugate gradients for a Hermitian positive definite operator. `x` holds the
/// starting guess on entry and the solution on exit. Stops when ||r|| / ||rhs|| <= tol.
CgReport conjugate_gradient(CoeffOperator const &op, WaveletCoeffs const &rhs, WaveletCoeffs &x, int max_iters,
                            double tol);

/// Largest eigenvalue of a Hermitian positive semidefinite operator by power iteration
/// from a seeded random start. Applied to E^H E it estimates ||E||^2.
double power_iteration(CoeffOperator const &op, std::size_t rows, std::size_t cols, int levels, int iters,
                       std::uint64_t seed);

} // namespace csmri
