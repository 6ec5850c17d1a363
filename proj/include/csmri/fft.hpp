#pragma once

#include "csmri/types.hpp"

namespace csmri {

/// Unitary 2-D DFT with the zero frequency at (rows/2, cols/2).
/// Throws DimensionError unless rows and cols are powers of two.
ComplexImage fft2_centered(ComplexImage const &img);
ComplexImage ifft2_centered(ComplexImage const &k);

// Plain unnormalized transforms with the origin at (0, 0); used for circular convolution.
ComplexImage fft2_raw(ComplexImage const &img);
ComplexImage ifft2_raw(ComplexImage const &k);

} // namespace csmri
