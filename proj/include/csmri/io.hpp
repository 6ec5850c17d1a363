#pragma once

// Binary containers, all little-endian:
//   CIMG  "CIMG" u32 rows u32 cols u8 flag, then f32 samples (flag 0 real, 1 complex interleaved)
//   CMSK  "CMSK" u32 rows u32 cols, then row-major bits packed MSB-first, last byte zero-padded
//   CPIM  "CPIM" u32 coils, then one full CIMG record per coil

#include "csmri/mask.hpp"
#include "csmri/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace csmri {

/// Writes flag 0 when every imaginary part is zero.
void write_cimg(std::ostream &os, ComplexImage const &img);
ComplexImage read_cimg(std::istream &is);
void write_cimg(std::filesystem::path const &path, ComplexImage const &img);
ComplexImage read_cimg(std::filesystem::path const &path);

void write_mask(std::filesystem::path const &path, SamplingMask const &mask);
/// The loaded mask has kind custom and its ratio recomputed.
SamplingMask read_mask(std::filesystem::path const &path);

void write_cpim(std::filesystem::path const &path, std::vector<ComplexImage> const &coils);
std::vector<ComplexImage> read_cpim(std::filesystem::path const &path);

/// 8-bit P5 preview of |img| scaled by its maximum; log_scale maps through log(1 + m).
void write_pgm(std::filesystem::path const &path, ComplexImage const &img, bool log_scale = false);
void write_pgm(std::filesystem::path const &path, SamplingMask const &mask);

} // namespace csmri
