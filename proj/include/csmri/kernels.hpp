#pragma once

// Data-parallel inner loops. `csmri::kernels` holds the OpenMP versions used by
// the library; `csmri::kernels::serial` holds plain loops kept as the reference
// the parallel ones are tested and benchmarked against.
//
// Elementwise kernels are bit-identical between the two. Reductions are split
// into fixed-size blocks whose partial sums are added in block order, so the
// parallel result does not depend on the thread count; it can differ from the
// serial left-to-right sum by rounding only.

#include "csmri/types.hpp"

#include <cstdint>
#include <span>

namespace csmri::kernels {

inline constexpr std::size_t reduction_block = 4096;

/// out = a*x + b*y
void combine(double a, std::span<cplx const> x, double b, std::span<cplx const> y, std::span<cplx> out);
/// out[i] = keep[i] ? in[i] : 0
void mask_multiply(std::span<cplx const> in, std::span<std::uint8_t const> keep, std::span<cplx> out);
/// Closed-form proximal fidelity update on the full k-space grid:
/// sampled bins (y + rho*k)/(1 + rho), unsampled bins k.
void fidelity_merge(std::span<cplx const> k, std::span<cplx const> y, std::span<std::uint8_t const> keep,
                    double rho, std::span<cplx> out);
/// Elementwise prox of weight*|.|^p, magnitude shrinkage with phase kept.
void prox_lp(std::span<cplx const> in, double weight, double p, std::span<cplx> out);
/// Soft threshold applied to real and imaginary parts separately.
void soft_threshold_parts(std::span<cplx const> in, double tau, std::span<cplx> out);

/// One orthonormal Haar analysis step along the rows of the top-left h x w block
/// of a row-major array with `stride` columns.
void haar_rows_forward(std::span<cplx> data, std::size_t stride, std::size_t h, std::size_t w);
void haar_cols_forward(std::span<cplx> data, std::size_t stride, std::size_t h, std::size_t w);
void haar_rows_inverse(std::span<cplx> data, std::size_t stride, std::size_t h, std::size_t w);
void haar_cols_inverse(std::span<cplx> data, std::size_t stride, std::size_t h, std::size_t w);

double dot_re(std::span<cplx const> a, std::span<cplx const> b);
double norm_sq(std::span<cplx const> a);
/// sum |a_i|^p
double lp_sum(std::span<cplx const> a, double p);

namespace serial {

void combine(double a, std::span<cplx const> x, double b, std::span<cplx const> y, std::span<cplx> out);
void mask_multiply(std::span<cplx const> in, std::span<std::uint8_t const> keep, std::span<cplx> out);
void fidelity_merge(std::span<cplx const> k, std::span<cplx const> y, std::span<std::uint8_t const> keep,
                    double rho, std::span<cplx> out);
void prox_lp(std::span<cplx const> in, double weight, double p, std::span<cplx> out);
void soft_threshold_parts(std::span<cplx const> in, double tau, std::span<cplx> out);
void haar_rows_forward(std::span<cplx> data, std::size_t stride, std::size_t h, std::size_t w);
void haar_cols_forward(std::span<cplx> data, std::size_t stride, std::size_t h, std::size_t w);
void haar_rows_inverse(std::span<cplx> data, std::size_t stride, std::size_t h, std::size_t w);
void haar_cols_inverse(std::span<cplx> data, std::size_t stride, std::size_t h, std::size_t w);
double dot_re(std::span<cplx const> a, std::span<cplx const> b);
double norm_sq(std::span<cplx const> a);
double lp_sum(std::span<cplx const> a, double p);

} // namespace serial

} // namespace csmri::kernels
