#include "csmri/problem.hpp"

#include "csmri/fft.hpp"

namespace csmri {

void Problem::validate() const
{
  require_same_shape(y, mask, "problem");
  if (!is_power_of_two(y.rows) || !is_power_of_two(y.cols)) {
    throw DimensionError("problem grid must be power-of-two");
  }
  require_wavelet_compatible(y.rows, y.cols, levels);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!mask.keep[i] && y.data[i] != cplx{}) {
      throw DimensionError("observation y must be zero at unsampled k-space positions");
    }
  }
}

Problem simulate_problem(ComplexImage const &truth, SamplingMask const &mask, int levels)
{
  Problem problem{apply_mask(fft2_centered(truth), mask), mask, levels};
  problem.validate();
  return problem;
}

ComplexImage forward_operator(WaveletCoeffs const &alpha, Problem const &problem)
{
  return apply_mask(fft2_centered(idwt2(alpha)), problem.mask);
}

WaveletCoeffs adjoint_operator(ComplexImage const &k, Problem const &problem)
{
  return dwt2(ifft2_centered(apply_mask(k, problem.mask)), problem.levels);
}

WaveletCoeffs zero_filled_coeffs(Problem const &problem) { return adjoint_operator(problem.y, problem); }

ComplexImage zero_filled_image(Problem const &problem) { return ifft2_centered(problem.y); }

} // namespace csmri
