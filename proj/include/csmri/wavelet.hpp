#pragma once

#include "csmri/types.hpp"

namespace csmri {

inline constexpr int default_wavelet_levels = 3;

/// Orthonormal multi-level 2-D Haar analysis (the adjoint A^T of the synthesis basis).
/// Level l transforms the top-left (rows >> (l-1)) x (cols >> (l-1)) block, so the
/// coarsest approximation band sits in the top-left (rows >> levels) x (cols >> levels) corner.
/// Throws DimensionError unless rows and cols are divisible by 2^levels.
WaveletCoeffs dwt2(ComplexImage const &img, int levels = default_wavelet_levels);

/// Synthesis A, inverse and adjoint of dwt2.
ComplexImage idwt2(WaveletCoeffs const &coeffs);

/// True for indices inside the coarsest approximation band.
bool is_approximation(std::size_t rows, std::size_t cols, int levels, std::size_t r, std::size_t c);

void require_wavelet_compatible(std::size_t rows, std::size_t cols, int levels);

} // namespace csmri
