#pragma once

#include "csmri/types.hpp"

namespace csmri {

/// Reported for identical images instead of +inf.
inline constexpr double psnr_cap = 99.0;

struct MetricReport
{
  double psnr = 0.0;
  double rlne = 0.0;
  double ssim = 0.0;
};

// All metrics compare magnitude images, so a common global phase does not matter.

/// 10 log10(max|ref|^2 / MSE), capped at psnr_cap.
double psnr(ComplexImage const &ref, ComplexImage const &test);

/// || |test| - |ref| ||_2 / || |ref| ||_2.
double rlne(ComplexImage const &ref, ComplexImage const &test);

/// Mean SSIM over 11x11 Gaussian windows (sigma 1.5, valid positions only),
/// K1 = 0.01, K2 = 0.03, dynamic range max|ref|. Images smaller than the window
/// use a single global window.
double ssim(ComplexImage const &ref, ComplexImage const &test);

MetricReport evaluate(ComplexImage const &ref, ComplexImage const &test);

/// Modified (Toft) 10-ellipse Shepp-Logan phantom, real, peak 1.
/// Throws DimensionError unless square and power-of-two.
ComplexImage shepp_logan(std::size_t rows, std::size_t cols);

} // namespace csmri
