#include "csmri/cg.hpp"

#include "csmri/random.hpp"

#include <cmath>

namespace csmri {

CgReport conjugate_gradient(CoeffOperator const &op, WaveletCoeffs const &rhs, WaveletCoeffs &x, int max_iters,
                            double tol)
{
  require_same_shape(rhs, x, "conjugate_gradient");
  double const rhs_norm = norm(rhs);
  CgReport report;
  if (rhs_norm == 0.0) {
    x = 0.0 * rhs;
    return report;
  }
  WaveletCoeffs r = rhs - op(x);
  WaveletCoeffs p = r;
  double rr = norm_sq(r);
  for (int it = 0; it < max_iters; ++it) {
    report.relative_residual = std::sqrt(rr) / rhs_norm;
    if (report.relative_residual <= tol) { break; }
    WaveletCoeffs const q = op(p);
    double const alpha = rr / dot(p, q);
    x = combine(1.0, x, alpha, p);
    r = combine(1.0, r, -alpha, q);
    double const rr_new = norm_sq(r);
    p = combine(1.0, r, rr_new / rr, p);
    rr = rr_new;
    report.iterations = it + 1;
  }
  report.relative_residual = std::sqrt(rr) / rhs_norm;
  return report;
}

double power_iteration(CoeffOperator const &op, std::size_t rows, std::size_t cols, int levels, int iters,
                       std::uint64_t seed)
{
  Rng rng(seed);
  WaveletCoeffs v(rows, cols, levels);
  for (auto &c : v.data) { c = {rng.normal(), rng.normal()}; }
  v = (1.0 / norm(v)) * v;
  double estimate = 0.0;
  for (int it = 0; it < iters; ++it) {
    WaveletCoeffs const w = op(v);
    estimate = dot(v, w);
    double const n = norm(w);
    if (n == 0.0) { return 0.0; }
    v = (1.0 / n) * w;
  }
  return estimate;
}

} // namespace csmri
