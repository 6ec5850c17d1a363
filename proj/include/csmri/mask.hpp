#pragma once

#include "csmri/types.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace csmri {

enum class MaskKind
{
  cartesian,
  radial,
  gaussian,
  full,
  custom ///< loaded from file; generation kind unknown
};

std::string to_string(MaskKind kind);
MaskKind parse_mask_kind(std::string_view name);

/// Binary k-space selection on the centered grid (DC at rows/2, cols/2).
struct SamplingMask
{
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> keep;
  MaskKind kind = MaskKind::custom;
  double ratio = 0.0; ///< count / (rows*cols)

  SamplingMask() = default;
  SamplingMask(std::size_t rows, std::size_t cols, MaskKind kind, bool fill);

  bool operator()(std::size_t r, std::size_t c) const { return keep[r * cols + c] != 0; }
  std::size_t count() const;
  void update_ratio();
  std::size_t dc_index() const { return (rows / 2) * cols + cols / 2; }
};

/// Generates a deterministic pattern for (kind, rows, cols, ratio, seed).
///  - cartesian: full phase-encode rows; a centered band of about a quarter of the
///    lines plus uniformly drawn others, round(ratio*rows) lines in total.
///  - radial: rasterized spokes through the center at uniformly spaced angles; the
///    spoke count is bisected to reach the target, then the outermost surplus samples
///    are dropped so exactly round(ratio*N) points remain.
///  - gaussian: weighted draw without replacement, weight exp(-r^2 / 2 sigma^2) with
///    sigma = rows/6 (cols/6 horizontally), exactly round(ratio*N) points.
///  - full: every point; ratio must be 1.
/// Throws ParameterError for ratio outside (0, 1].
SamplingMask make_mask(MaskKind kind, std::size_t rows, std::size_t cols, double ratio, std::uint64_t seed);

/// Keeps k where the mask is set and zeroes it elsewhere (P^T P on the full grid).
ComplexImage apply_mask(ComplexImage const &k, SamplingMask const &m);

void require_same_shape(ComplexImage const &img, SamplingMask const &m, char const *what);

} // namespace csmri
