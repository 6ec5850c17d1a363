#include "csmri/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace csmri {

namespace {

std::vector<double> magnitudes(ComplexImage const &img)
{
  std::vector<double> out(img.data.size());
  std::transform(img.data.begin(), img.data.end(), out.begin(), [](cplx v) { return std::abs(v); });
  return out;
}

constexpr std::size_t window = 11;
constexpr double window_sigma = 1.5;

std::vector<double> gaussian_window()
{
  std::vector<double> w(window * window);
  double const c = static_cast<double>(window / 2);
  double total = 0.0;
  for (std::size_t r = 0; r < window; ++r) {
    for (std::size_t col = 0; col < window; ++col) {
      double const dr = static_cast<double>(r) - c;
      double const dc = static_cast<double>(col) - c;
      w[r * window + col] = std::exp(-(dr * dr + dc * dc) / (2.0 * window_sigma * window_sigma));
      total += w[r * window + col];
    }
  }
  for (auto &v : w) { v /= total; }
  return w;
}

struct Moments
{
  double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
};

double ssim_index(Moments const &m, double c1, double c2)
{
  return ((2.0 * m.mx * m.my + c1) * (2.0 * m.sxy + c2)) /
         ((m.mx * m.mx + m.my * m.my + c1) * (m.sxx + m.syy + c2));
}

} // namespace

double psnr(ComplexImage const &ref, ComplexImage const &test)
{
  require_same_shape(ref, test, "psnr");
  double const peak = max_magnitude(ref);
  if (!(peak > 0.0)) { throw ParameterError("psnr: reference image is zero"); }
  double sum = 0.0;
  for (std::size_t i = 0; i < ref.data.size(); ++i) {
    double const d = std::abs(test.data[i]) - std::abs(ref.data[i]);
    sum += d * d;
  }
  double const mse = sum / static_cast<double>(ref.data.size());
  if (mse == 0.0) { return psnr_cap; }
  return std::min(psnr_cap, 10.0 * std::log10(peak * peak / mse));
}

double rlne(ComplexImage const &ref, ComplexImage const &test)
{
  require_same_shape(ref, test, "rlne");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < ref.data.size(); ++i) {
    double const r = std::abs(ref.data[i]);
    double const d = std::abs(test.data[i]) - r;
    num += d * d;
    den += r * r;
  }
  if (!(den > 0.0)) { throw ParameterError("rlne: reference image is zero"); }
  return std::sqrt(num / den);
}

double ssim(ComplexImage const &ref, ComplexImage const &test)
{
  require_same_shape(ref, test, "ssim");
  std::vector<double> const x = magnitudes(ref);
  std::vector<double> const y = magnitudes(test);
  double const range = max_magnitude(ref);
  double const c1 = (0.01 * range) * (0.01 * range);
  double const c2 = (0.03 * range) * (0.03 * range);

  if (ref.rows < window || ref.cols < window) {
    double const n = static_cast<double>(x.size());
    Moments m;
    for (std::size_t i = 0; i < x.size(); ++i) {
      m.mx += x[i] / n;
      m.my += y[i] / n;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      double const dx = x[i] - m.mx;
      double const dy = y[i] - m.my;
      m.sxx += dx * dx / n;
      m.syy += dy * dy / n;
      m.sxy += dx * dy / n;
    }
    return ssim_index(m, c1, c2);
  }

  static std::vector<double> const w = gaussian_window();
  std::size_t const nr = ref.rows - window + 1;
  std::size_t const nc = ref.cols - window + 1;
  double total = 0.0;
  for (std::size_t r0 = 0; r0 < nr; ++r0) {
    for (std::size_t c0 = 0; c0 < nc; ++c0) {
      double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
      for (std::size_t r = 0; r < window; ++r) {
        std::size_t const base = (r0 + r) * ref.cols + c0;
        for (std::size_t c = 0; c < window; ++c) {
          double const wt = w[r * window + c];
          double const a = x[base + c];
          double const b = y[base + c];
          sx += wt * a;
          sy += wt * b;
          sxx += wt * a * a;
          syy += wt * b * b;
          sxy += wt * a * b;
        }
      }
      Moments m{sx, sy, sxx - sx * sx, syy - sy * sy, sxy - sx * sy};
      total += ssim_index(m, c1, c2);
    }
  }
  return total / static_cast<double>(nr * nc);
}

MetricReport evaluate(ComplexImage const &ref, ComplexImage const &test)
{
  return {psnr(ref, test), rlne(ref, test), ssim(ref, test)};
}

} // namespace csmri
