#pragma once

// Reference computations for the tests. Nothing here calls the library's FFT,
// wavelet, CG or prox code.

#include "csmri/random.hpp"
#include "csmri/types.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace oracle {

using csmri::cplx;
using Vec = std::vector<cplx>;

inline Vec random_vec(std::size_t n, csmri::Rng &rng)
{
  Vec v(n);
  for (auto &x : v) { x = {rng.normal(), rng.normal()}; }
  return v;
}

inline csmri::ComplexImage random_image(std::size_t rows, std::size_t cols, csmri::Rng &rng)
{
  csmri::ComplexImage img(rows, cols);
  img.data = random_vec(rows * cols, rng);
  return img;
}

inline csmri::WaveletCoeffs random_coeffs(std::size_t rows, std::size_t cols, int levels, csmri::Rng &rng)
{
  csmri::WaveletCoeffs c(rows, cols, levels);
  c.data = random_vec(rows * cols, rng);
  return c;
}

inline double vnorm(Vec const &a)
{
  double s = 0.0;
  for (auto const &x : a) { s += std::norm(x); }
  return std::sqrt(s);
}

inline double vdot(Vec const &a, Vec const &b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) { s += (std::conj(a[i]) * b[i]).real(); }
  return s;
}

inline double rel_diff(Vec const &a, Vec const &b)
{
  Vec d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) { d[i] = a[i] - b[i]; }
  double const ref = vnorm(b);
  return ref == 0.0 ? vnorm(d) : vnorm(d) / ref;
}

/// Centered unitary DFT by the defining sum, one axis at a time.
inline Vec naive_dft2_centered(Vec const &x, std::size_t rows, std::size_t cols, int sign = -1)
{
  auto axis = [sign](std::size_t n, std::size_t out_idx, std::size_t in_idx) {
    double const k = static_cast<double>(out_idx) - static_cast<double>(n / 2);
    double const t = static_cast<double>(in_idx) - static_cast<double>(n / 2);
    double const ang = sign * 2.0 * std::numbers::pi * k * t / static_cast<double>(n);
    return cplx(std::cos(ang), std::sin(ang)) / std::sqrt(static_cast<double>(n));
  };
  Vec tmp(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t kc = 0; kc < cols; ++kc) {
      cplx s{};
      for (std::size_t c = 0; c < cols; ++c) { s += axis(cols, kc, c) * x[r * cols + c]; }
      tmp[r * cols + kc] = s;
    }
  }
  Vec out(rows * cols);
  for (std::size_t kc = 0; kc < cols; ++kc) {
    for (std::size_t kr = 0; kr < rows; ++kr) {
      cplx s{};
      for (std::size_t r = 0; r < rows; ++r) { s += axis(rows, kr, r) * tmp[r * cols + kc]; }
      out[kr * cols + kc] = s;
    }
  }
  return out;
}

/// One-level orthonormal Haar analysis matrix of size n (averages first, then details).
inline std::vector<double> haar_matrix(std::size_t n)
{
  std::vector<double> h(n * n, 0.0);
  double const s = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n / 2; ++i) {
    h[i * n + 2 * i] = s;
    h[i * n + 2 * i + 1] = s;
    h[(n / 2 + i) * n + 2 * i] = s;
    h[(n / 2 + i) * n + 2 * i + 1] = -s;
  }
  return h;
}

/// Multi-level Haar analysis written as explicit matrix products on the top-left block.
inline Vec naive_haar2(Vec x, std::size_t rows, std::size_t cols, int levels)
{
  for (int l = 0; l < levels; ++l) {
    std::size_t const h = rows >> l;
    std::size_t const w = cols >> l;
    std::vector<double> const hr = haar_matrix(h);
    std::vector<double> const hc = haar_matrix(w);
    Vec block(h * w);
    for (std::size_t i = 0; i < h; ++i) {
      for (std::size_t j = 0; j < w; ++j) {
        cplx s{};
        for (std::size_t a = 0; a < h; ++a) {
          for (std::size_t b = 0; b < w; ++b) { s += hr[i * h + a] * x[a * cols + b] * hc[j * w + b]; }
        }
        block[i * w + j] = s;
      }
    }
    for (std::size_t i = 0; i < h; ++i) {
      for (std::size_t j = 0; j < w; ++j) { x[i * cols + j] = block[i * w + j]; }
    }
  }
  return x;
}

/// Plain conjugate gradients on a Hermitian positive definite operator.
inline Vec cg(std::function<Vec(Vec const &)> const &op, Vec const &b, int max_iters, double tol)
{
  Vec x(b.size());
  Vec r = b;
  Vec p = r;
  double rr = vdot(r, r);
  double const stop = tol * tol * vdot(b, b);
  for (int it = 0; it < max_iters && rr > stop; ++it) {
    Vec const q = op(p);
    double const a = rr / vdot(p, q);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += a * p[i];
      r[i] -= a * q[i];
    }
    double const rr_new = vdot(r, r);
    for (std::size_t i = 0; i < p.size(); ++i) { p[i] = r[i] + (rr_new / rr) * p[i]; }
    rr = rr_new;
  }
  return x;
}

/// Central difference of f along d, step h.
template <typename F, typename T>
double directional_derivative(F const &f, T const &x, T const &d, double h = 1e-6)
{
  T plus = x;
  T minus = x;
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    plus.data[i] += h * d.data[i];
    minus.data[i] -= h * d.data[i];
  }
  return (f(plus) - f(minus)) / (2.0 * h);
}

inline double lp_objective(double x, double mag, double weight, double p)
{
  return weight * (x == 0.0 ? 0.0 : std::pow(x, p)) + 0.5 * (x - mag) * (x - mag);
}

/// Brute-force prox magnitude: coarse grid on [0, mag], a 1e-6 grid around the best
/// interior point, golden-section refinement, then the better of that and 0.
inline double prox_magnitude(double mag, double weight, double p)
{
  if (mag == 0.0) { return 0.0; }
  auto const f = [&](double x) { return lp_objective(x, mag, weight, p); };
  std::size_t const coarse = 4000;
  double best_x = mag;
  double best_f = f(mag);
  for (std::size_t i = 1; i <= coarse; ++i) {
    double const x = mag * static_cast<double>(i) / coarse;
    if (f(x) < best_f) {
      best_f = f(x);
      best_x = x;
    }
  }
  double const span = mag / coarse;
  double lo = std::max(0.0, best_x - span);
  double hi = std::min(mag, best_x + span);
  for (double x = lo; x <= hi; x += 1e-6) {
    if (f(x) < best_f) {
      best_f = f(x);
      best_x = x;
    }
  }
  lo = std::max(0.0, best_x - 1e-6);
  hi = std::min(mag, best_x + 1e-6);
  double const g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    double const a = hi - g * (hi - lo);
    double const b = lo + g * (hi - lo);
    if (f(a) < f(b)) {
      hi = b;
    } else {
      lo = a;
    }
  }
  double const interior = 0.5 * (lo + hi);
  return f(interior) < f(0.0) ? interior : 0.0;
}

} // namespace oracle
