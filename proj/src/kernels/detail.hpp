#pragma once

// Per-element and per-line bodies shared by the serial and OpenMP kernels so the
// two produce bit-identical results.

#include "csmri/prox.hpp"
#include "csmri/types.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace csmri::kernels::detail {

inline constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

inline cplx prox_element(cplx v, double weight, double p)
{
  double const mag = std::abs(v);
  if (mag == 0.0) { return {}; }
  double const shrunk = prox_lp_magnitude(mag, weight, p);
  if (shrunk == mag) { return v; }
  return v * (shrunk / mag);
}

inline double soft(double x, double tau)
{
  if (x > tau) { return x - tau; }
  if (x < -tau) { return x + tau; }
  return 0.0;
}

inline cplx soft_parts(cplx v, double tau) { return {soft(v.real(), tau), soft(v.imag(), tau)}; }

// Analysis along one line of length w, elements at base + i*step.
inline void haar_line_forward(cplx *base, std::size_t step, std::size_t w, std::vector<cplx> &tmp)
{
  std::size_t const half = w / 2;
  tmp.resize(w);
  for (std::size_t j = 0; j < half; ++j) {
    cplx const a = base[(2 * j) * step];
    cplx const b = base[(2 * j + 1) * step];
    tmp[j] = (a + b) * inv_sqrt2;
    tmp[half + j] = (a - b) * inv_sqrt2;
  }
  for (std::size_t j = 0; j < w; ++j) { base[j * step] = tmp[j]; }
}

inline void haar_line_inverse(cplx *base, std::size_t step, std::size_t w, std::vector<cplx> &tmp)
{
  std::size_t const half = w / 2;
  tmp.resize(w);
  for (std::size_t j = 0; j < half; ++j) {
    cplx const a = base[j * step];
    cplx const d = base[(half + j) * step];
    tmp[2 * j] = (a + d) * inv_sqrt2;
    tmp[2 * j + 1] = (a - d) * inv_sqrt2;
  }
  for (std::size_t j = 0; j < w; ++j) { base[j * step] = tmp[j]; }
}

} // namespace csmri::kernels::detail
