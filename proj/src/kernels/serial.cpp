#include "csmri/kernels.hpp"

#include "detail.hpp"

#include <cmath>

namespace csmri::kernels::serial {

void combine(double a, std::span<cplx const> x, double b, std::span<cplx const> y, std::span<cplx> out)
{
  for (std::size_t i = 0; i < out.size(); ++i) { out[i] = a * x[i] + b * y[i]; }
}

void mask_multiply(std::span<cplx const> in, std::span<std::uint8_t const> keep, std::span<cplx> out)
{
  for (std::size_t i = 0; i < out.size(); ++i) { out[i] = keep[i] ? in[i] : cplx{}; }
}

void fidelity_merge(std::span<cplx const> k, std::span<cplx const> y, std::span<std::uint8_t const> keep,
                    double rho, std::span<cplx> out)
{
  double const inv = 1.0 / (1.0 + rho);
  for (std::size_t i = 0; i < out.size(); ++i) { out[i] = keep[i] ? (y[i] + rho * k[i]) * inv : k[i]; }
}

void prox_lp(std::span<cplx const> in, double weight, double p, std::span<cplx> out)
{
  for (std::size_t i = 0; i < out.size(); ++i) { out[i] = detail::prox_element(in[i], weight, p); }
}

void soft_threshold_parts(std::span<cplx const> in, double tau, std::span<cplx> out)
{
  for (std::size_t i = 0; i < out.size(); ++i) { out[i] = detail::soft_parts(in[i], tau); }
}

void haar_rows_forward(std::span<cplx> data, std::size_t stride, std::size_t h, std::size_t w)
{
  std::vector<cplx> tmp;
  for (std::size_t r = 0; r < h; ++r) { detail::haar_line_forward(data.data() + r * stride, 1, w, tmp); }
}

void haar_cols_forward(std::span<cplx> data, std::size_t stride, std::size_t h, std::size_t w)
{
  std::vector<cplx> tmp;
  for (std::size_t c = 0; c < w; ++c) { detail::haar_line_forward(data.data() + c, stride, h, tmp); }
}

void haar_rows_inverse(std::span<cplx> data, std::size_t stride, std::size_t h, std::size_t w)
{
  std::vector<cplx> tmp;
  for (std::size_t r = 0; r < h; ++r) { detail::haar_line_inverse(data.data() + r * stride, 1, w, tmp); }
}

void haar_cols_inverse(std::span<cplx> data, std::size_t stride, std::size_t h, std::size_t w)
{
  std::vector<cplx> tmp;
  for (std::size_t c = 0; c < w; ++c) { detail::haar_line_inverse(data.data() + c, stride, h, tmp); }
}

double dot_re(std::span<cplx const> a, std::span<cplx const> b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) { s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag(); }
  return s;
}

double norm_sq(std::span<cplx const> a)
{
  double s = 0.0;
  for (auto const &v : a) { s += v.real() * v.real() + v.imag() * v.imag(); }
  return s;
}

double lp_sum(std::span<cplx const> a, double p)
{
  double s = 0.0;
  for (auto const &v : a) {
    double const m = std::abs(v);
    s += (p == 1.0) ? m : std::pow(m, p);
  }
  return s;
}

} // namespace csmri::kernels::serial
