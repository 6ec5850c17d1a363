#include "csmri/prox.hpp"

#include "csmri/fft.hpp"
#include "csmri/kernels.hpp"
#include "csmri/problem.hpp"

#include <cmath>

namespace csmri {

void ProxParams::validate() const
{
  if (!(p > 0.0 && p <= 1.0)) { throw ParameterError("p must lie in (0, 1]"); }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) { throw ParameterError("lambda must be finite and >= 0"); }
  if (!(eta > 0.0) || !std::isfinite(eta)) { throw ParameterError("eta must be finite and > 0"); }
}

double lp_prox_objective(double x, double mag, double weight, double p)
{
  double const penalty = x == 0.0 ? 0.0 : (p == 1.0 ? x : std::pow(x, p));
  return weight * penalty + 0.5 * (x - mag) * (x - mag);
}

double prox_lp_magnitude(double mag, double weight, double p)
{
  if (mag == 0.0 || weight == 0.0) { return mag; }
  if (p == 1.0) { return mag > weight ? mag - weight : 0.0; }

  double const wp = weight * p;
  double const x_min = std::pow(wp * (1.0 - p), 1.0 / (2.0 - p));
  if (x_min >= mag) { return 0.0; }
  auto const h = [&](double x) { return wp * std::pow(x, p - 1.0) + x - mag; };
  auto const dh = [&](double x) { return 1.0 + wp * (p - 1.0) * std::pow(x, p - 2.0); };
  if (h(x_min) >= 0.0) { return 0.0; }

  // h is convex, negative at x_min and positive at mag: bracket the larger root.
  double lo = x_min, hi = mag, x = mag;
  constexpr double tol = 1e-12;
  for (int it = 0; it < 100; ++it) {
    double const hx = h(x);
    if (hx > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    double next = x - hx / dh(x);
    if (!(next > lo && next < hi)) { next = 0.5 * (lo + hi); }
    bool const done = std::abs(next - x) <= tol * mag;
    x = next;
    if (done || hi - lo <= tol * mag) { break; }
  }
  return lp_prox_objective(x, mag, weight, p) < lp_prox_objective(0.0, mag, weight, p) ? x : 0.0;
}

cplx prox_lp_scalar(cplx v, ProxParams const &params)
{
  params.validate();
  double const mag = std::abs(v);
  if (mag == 0.0) { return {}; }
  double const shrunk = prox_lp_magnitude(mag, params.weight(), params.p);
  return shrunk == mag ? v : v * (shrunk / mag);
}

WaveletCoeffs prox_lp(WaveletCoeffs const &v, ProxParams const &params)
{
  params.validate();
  WaveletCoeffs out(v.rows, v.cols, v.levels);
  kernels::prox_lp(v.span(), params.weight(), params.p, out.span());
  return out;
}

double lp_penalty(WaveletCoeffs const &a, double p) { return kernels::lp_sum(a.span(), p); }

double fidelity_value(WaveletCoeffs const &alpha, Problem const &problem)
{
  ComplexImage const residual = forward_operator(alpha, problem) - problem.y;
  return 0.5 * norm_sq(residual);
}

WaveletCoeffs grad_f(WaveletCoeffs const &alpha, Problem const &problem)
{
  // y is zero off the mask, so P^T(P F A alpha - y) = mask(F A alpha) - y.
  return adjoint_operator(forward_operator(alpha, problem) - problem.y, problem);
}

} // namespace csmri
