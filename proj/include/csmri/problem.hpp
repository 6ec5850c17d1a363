#pragma once

#include "csmri/mask.hpp"
#include "csmri/types.hpp"
#include "csmri/wavelet.hpp"

namespace csmri {

/// Single-coil observation y = P F x stored zero-filled on the full k-space grid.
struct Problem
{
  ComplexImage y;
  SamplingMask mask;
  int levels = default_wavelet_levels;

  /// Shapes agree, grid is power-of-two and wavelet-divisible, y vanishes off the mask.
  void validate() const;

  std::size_t rows() const { return y.rows; }
  std::size_t cols() const { return y.cols; }
};

/// y = P F x for a ground-truth image.
Problem simulate_problem(ComplexImage const &truth, SamplingMask const &mask, int levels = default_wavelet_levels);

/// E alpha = P F A alpha on the full grid.
ComplexImage forward_operator(WaveletCoeffs const &alpha, Problem const &problem);
/// E^H k = A^T F^H P^T k.
WaveletCoeffs adjoint_operator(ComplexImage const &k, Problem const &problem);

/// A^T F^H P^T y, the zero-filling start point.
WaveletCoeffs zero_filled_coeffs(Problem const &problem);
ComplexImage zero_filled_image(Problem const &problem);

} // namespace csmri
