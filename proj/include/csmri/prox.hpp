#pragma once

#include "csmri/types.hpp"

namespace csmri {

struct Problem;

/// Weight lambda of the l_p penalty and the step eta that scales it inside the prox.
struct ProxParams
{
  double lambda = 0.0;
  double p = 1.0;
  double eta = 1.0;

  double weight() const { return eta * lambda; }
  /// Throws ParameterError unless p in (0, 1], lambda >= 0, eta > 0.
  void validate() const;
};

/// Scalar objective weight*x^p + (x - mag)^2 / 2 for x >= 0.
double lp_prox_objective(double x, double mag, double weight, double p);

/// Global minimizer over x >= 0 of weight*x^p + (x - mag)^2 / 2 for mag >= 0.
///
/// p = 1 is soft thresholding. For p < 1 the first-order condition
/// weight*p*x^(p-1) + x - mag = 0 is convex in x with its minimum at
/// x* = (weight*p*(1-p))^(1/(2-p)); the larger root on (x*, mag) is found by
/// Newton from mag with a bisection fallback, then compared against x = 0.
/// Ties go to 0.
double prox_lp_magnitude(double mag, double weight, double p);

/// argmin_x eta*lambda*|x|^p + |x - v|^2 / 2; shrinks |v| and keeps the phase of v.
cplx prox_lp_scalar(cplx v, ProxParams const &params);

/// Elementwise prox_lp_scalar.
WaveletCoeffs prox_lp(WaveletCoeffs const &v, ProxParams const &params);

/// sum_i |a_i|^p
double lp_penalty(WaveletCoeffs const &a, double p);

/// Data term f(alpha) = ||P F A alpha - y||^2 / 2 with y zero-filled on the grid.
double fidelity_value(WaveletCoeffs const &alpha, Problem const &problem);

/// grad f(alpha) = A^T F^H P^T (P F A alpha - y).
WaveletCoeffs grad_f(WaveletCoeffs const &alpha, Problem const &problem);

} // namespace csmri
