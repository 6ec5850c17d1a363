#include "csmri/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace csmri {

namespace {

struct Ellipse
{
  double value, a, b, x0, y0, degrees;
};

// Toft's modified intensities.
constexpr std::array<Ellipse, 10> ellipses{{
  {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
  {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
  {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
  {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
  {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
  {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
  {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
  {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
  {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
  {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
}};

} // namespace

ComplexImage shepp_logan(std::size_t rows, std::size_t cols)
{
  if (rows != cols || !is_power_of_two(rows)) {
    throw DimensionError("shepp_logan: size must be square and a power of two");
  }
  ComplexImage img(rows, cols);
  double peak = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    double const y = (static_cast<double>(rows) - 2.0 * static_cast<double>(r) - 1.0) / static_cast<double>(rows);
    for (std::size_t c = 0; c < cols; ++c) {
      double const x = (2.0 * static_cast<double>(c) + 1.0 - static_cast<double>(cols)) / static_cast<double>(cols);
      double v = 0.0;
      for (auto const &e : ellipses) {
        double const t = e.degrees * std::numbers::pi / 180.0;
        double const dx = x - e.x0;
        double const dy = y - e.y0;
        double const xr = dx * std::cos(t) + dy * std::sin(t);
        double const yr = -dx * std::sin(t) + dy * std::cos(t);
        if ((xr * xr) / (e.a * e.a) + (yr * yr) / (e.b * e.b) <= 1.0) { v += e.value; }
      }
      v = std::clamp(v, 0.0, 1.0);
      img(r, c) = v;
      peak = std::max(peak, v);
    }
  }
  if (peak > 0.0 && peak != 1.0) {
    for (auto &v : img.data) { v /= peak; }
  }
  return img;
}

} // namespace csmri
