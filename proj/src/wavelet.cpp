#include "csmri/wavelet.hpp"

#include "csmri/kernels.hpp"

#include <string>

namespace csmri {

void require_wavelet_compatible(std::size_t rows, std::size_t cols, int levels)
{
  if (levels < 1 || levels > 30) { throw DimensionError("wavelet levels must be in [1, 30]"); }
  std::size_t const block = std::size_t{1} << levels;
  if (rows == 0 || cols == 0 || rows % block != 0 || cols % block != 0) {
    throw DimensionError("dimensions " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " not divisible by 2^" + std::to_string(levels));
  }
}

bool is_approximation(std::size_t rows, std::size_t cols, int levels, std::size_t r, std::size_t c)
{
  return r < (rows >> levels) && c < (cols >> levels);
}

WaveletCoeffs dwt2(ComplexImage const &img, int levels)
{
  require_wavelet_compatible(img.rows, img.cols, levels);
  WaveletCoeffs out(img.rows, img.cols, levels);
  out.data = img.data;
  std::size_t h = img.rows, w = img.cols;
  for (int l = 0; l < levels; ++l) {
    kernels::haar_rows_forward(out.span(), img.cols, h, w);
    kernels::haar_cols_forward(out.span(), img.cols, h, w);
    h /= 2;
    w /= 2;
  }
  return out;
}

ComplexImage idwt2(WaveletCoeffs const &coeffs)
{
  require_wavelet_compatible(coeffs.rows, coeffs.cols, coeffs.levels);
  ComplexImage out(coeffs.rows, coeffs.cols);
  out.data = coeffs.data;
  for (int l = coeffs.levels - 1; l >= 0; --l) {
    std::size_t const h = coeffs.rows >> l, w = coeffs.cols >> l;
    kernels::haar_cols_inverse(out.span(), coeffs.cols, h, w);
    kernels::haar_rows_inverse(out.span(), coeffs.cols, h, w);
  }
  return out;
}

} // namespace csmri
