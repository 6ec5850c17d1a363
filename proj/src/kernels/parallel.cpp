#include "csmri/kernels.hpp"

#include "detail.hpp"

#include <cmath>

namespace csmri::kernels {

namespace {

using index_t = std::ptrdiff_t;

// Sum of body(i) over [0, n) in fixed blocks; partials are added in block order.
template <typename Body>
double blocked_sum(std::size_t n, Body body)
{
  index_t const blocks = static_cast<index_t>((n + reduction_block - 1) / reduction_block);
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static)
  for (index_t b = 0; b < blocks; ++b) {
    std::size_t const lo = static_cast<std::size_t>(b) * reduction_block;
    std::size_t const hi = std::min(n, lo + reduction_block);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) { s += body(i); }
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double s : partial) { total += s; }
  return total;
}

} // namespace

void combine(double a, std::span<cplx const> x, double b, std::span<cplx const> y, std::span<cplx> out)
{
  index_t const n = static_cast<index_t>(out.size());
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < n; ++i) { out[i] = a * x[i] + b * y[i]; }
}

void mask_multiply(std::span<cplx const> in, std::span<std::uint8_t const> keep, std::span<cplx> out)
{
  index_t const n = static_cast<index_t>(out.size());
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < n; ++i) { out[i] = keep[i] ? in[i] : cplx{}; }
}

void fidelity_merge(std::span<cplx const> k, std::span<cplx const> y, std::span<std::uint8_t const> keep,
                    double rho, std::span<cplx> out)
{
  double const inv = 1.0 / (1.0 + rho);
  index_t const n = static_cast<index_t>(out.size());
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < n; ++i) { out[i] = keep[i] ? (y[i] + rho * k[i]) * inv : k[i]; }
}

void prox_lp(std::span<cplx const> in, double weight, double p, std::span<cplx> out)
{
  index_t const n = static_cast<index_t>(out.size());
  // Newton iterations make per-element cost uneven.
#pragma omp parallel for schedule(dynamic, 1024)
  for (index_t i = 0; i < n; ++i) { out[i] = detail::prox_element(in[i], weight, p); }
}

void soft_threshold_parts(std::span<cplx const> in, double tau, std::span<cplx> out)
{
  index_t const n = static_cast<index_t>(out.size());
#pragma omp parallel for schedule(static)
  for (index_t i = 0; i < n; ++i) { out[i] = detail::soft_parts(in[i], tau); }
}

void haar_rows_forward(std::span<cplx> data, std::size_t stride, std::size_t h, std::size_t w)
{
#pragma omp parallel
  {
    std::vector<cplx> tmp;
#pragma omp for schedule(static)
    for (index_t r = 0; r < static_cast<index_t>(h); ++r) {
      detail::haar_line_forward(data.data() + static_cast<std::size_t>(r) * stride, 1, w, tmp);
    }
  }
}

void haar_cols_forward(std::span<cplx> data, std::size_t stride, std::size_t h, std::size_t w)
{
#pragma omp parallel
  {
    std::vector<cplx> tmp;
#pragma omp for schedule(static)
    for (index_t c = 0; c < static_cast<index_t>(w); ++c) {
      detail::haar_line_forward(data.data() + c, stride, h, tmp);
    }
  }
}

void haar_rows_inverse(std::span<cplx> data, std::size_t stride, std::size_t h, std::size_t w)
{
#pragma omp parallel
  {
    std::vector<cplx> tmp;
#pragma omp for schedule(static)
    for (index_t r = 0; r < static_cast<index_t>(h); ++r) {
      detail::haar_line_inverse(data.data() + static_cast<std::size_t>(r) * stride, 1, w, tmp);
    }
  }
}

void haar_cols_inverse(std::span<cplx> data, std::size_t stride, std::size_t h, std::size_t w)
{
#pragma omp parallel
  {
    std::vector<cplx> tmp;
#pragma omp for schedule(static)
    for (index_t c = 0; c < static_cast<index_t>(w); ++c) {
      detail::haar_line_inverse(data.data() + c, stride, h, tmp);
    }
  }
}

double dot_re(std::span<cplx const> a, std::span<cplx const> b)
{
  return blocked_sum(a.size(), [&](std::size_t i) {
    return a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  });
}

double norm_sq(std::span<cplx const> a)
{
  return blocked_sum(a.size(), [&](std::size_t i) {
    return a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  });
}

double lp_sum(std::span<cplx const> a, double p)
{
  return blocked_sum(a.size(), [&](std::size_t i) {
    double const m = std::abs(a[i]);
    return (p == 1.0) ? m : std::pow(m, p);
  });
}

} // namespace csmri::kernels
