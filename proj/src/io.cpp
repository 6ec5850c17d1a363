#include "csmri/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace csmri {

namespace {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

constexpr std::uint32_t max_dim = 1u << 16;

void write_bytes(std::ostream &os, void const *p, std::size_t n)
{
  os.write(static_cast<char const *>(p), static_cast<std::streamsize>(n));
  if (!os) { throw FormatError("write failed"); }
}

void read_bytes(std::istream &is, void *p, std::size_t n, char const *what)
{
  is.read(static_cast<char *>(p), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(is.gcount()) != n) { throw FormatError(std::string("truncated ") + what); }
}

void write_u32(std::ostream &os, std::uint32_t v) { write_bytes(os, &v, 4); }

std::uint32_t read_u32(std::istream &is, char const *what)
{
  std::uint32_t v = 0;
  read_bytes(is, &v, 4, what);
  return v;
}

void expect_magic(std::istream &is, char const *magic)
{
  std::array<char, 4> got{};
  read_bytes(is, got.data(), 4, magic);
  if (std::memcmp(got.data(), magic, 4) != 0) { throw FormatError(std::string("not a ") + magic + " file"); }
}

std::uint32_t checked_dim(std::size_t n)
{
  if (n == 0 || n > max_dim) { throw DimensionError("image dimension out of range for the file format"); }
  return static_cast<std::uint32_t>(n);
}

void read_dims(std::istream &is, char const *what, std::uint32_t &rows, std::uint32_t &cols)
{
  rows = read_u32(is, what);
  cols = read_u32(is, what);
  if (rows == 0 || cols == 0 || rows > max_dim || cols > max_dim) {
    throw FormatError(std::string("bad dimensions in ") + what);
  }
}

std::ofstream open_out(std::filesystem::path const &path)
{
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) { throw FormatError("cannot open '" + path.string() + "' for writing"); }
  return os;
}

std::ifstream open_in(std::filesystem::path const &path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is) { throw FormatError("cannot open '" + path.string() + "'"); }
  return is;
}

void expect_end(std::istream &is, std::filesystem::path const &path)
{
  if (is.peek() != std::char_traits<char>::eof()) { throw FormatError("trailing bytes in '" + path.string() + "'"); }
}

} // namespace

void write_cimg(std::ostream &os, ComplexImage const &img)
{
  write_bytes(os, "CIMG", 4);
  write_u32(os, checked_dim(img.rows));
  write_u32(os, checked_dim(img.cols));
  bool const real = img.is_real();
  std::uint8_t const flag = real ? 0 : 1;
  write_bytes(os, &flag, 1);
  std::vector<float> buf;
  buf.reserve(img.data.size() * (real ? 1 : 2));
  for (auto const &v : img.data) {
    buf.push_back(static_cast<float>(v.real()));
    if (!real) { buf.push_back(static_cast<float>(v.imag())); }
  }
  write_bytes(os, buf.data(), buf.size() * sizeof(float));
}

ComplexImage read_cimg(std::istream &is)
{
  expect_magic(is, "CIMG");
  std::uint32_t rows = 0, cols = 0;
  read_dims(is, "CIMG", rows, cols);
  std::uint8_t flag = 0;
  read_bytes(is, &flag, 1, "CIMG");
  if (flag > 1) { throw FormatError("unknown CIMG flag"); }
  std::size_t const n = static_cast<std::size_t>(rows) * cols;
  std::vector<float> buf(n * (flag == 1 ? 2 : 1));
  read_bytes(is, buf.data(), buf.size() * sizeof(float), "CIMG payload");
  ComplexImage img(rows, cols);
  for (std::size_t i = 0; i < n; ++i) {
    img.data[i] = flag == 1 ? cplx(buf[2 * i], buf[2 * i + 1]) : cplx(buf[i], 0.0);
  }
  return img;
}

void write_cimg(std::filesystem::path const &path, ComplexImage const &img)
{
  auto os = open_out(path);
  write_cimg(os, img);
}

ComplexImage read_cimg(std::filesystem::path const &path)
{
  auto is = open_in(path);
  ComplexImage img = read_cimg(is);
  expect_end(is, path);
  return img;
}

void write_mask(std::filesystem::path const &path, SamplingMask const &mask)
{
  auto os = open_out(path);
  write_bytes(os, "CMSK", 4);
  write_u32(os, checked_dim(mask.rows));
  write_u32(os, checked_dim(mask.cols));
  std::vector<std::uint8_t> packed((mask.keep.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < mask.keep.size(); ++i) {
    if (mask.keep[i]) { packed[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8)); }
  }
  write_bytes(os, packed.data(), packed.size());
}

SamplingMask read_mask(std::filesystem::path const &path)
{
  auto is = open_in(path);
  expect_magic(is, "CMSK");
  std::uint32_t rows = 0, cols = 0;
  read_dims(is, "CMSK", rows, cols);
  SamplingMask mask(rows, cols, MaskKind::custom, false);
  std::vector<std::uint8_t> packed((mask.keep.size() + 7) / 8);
  read_bytes(is, packed.data(), packed.size(), "CMSK payload");
  expect_end(is, path);
  for (std::size_t i = 0; i < mask.keep.size(); ++i) { mask.keep[i] = (packed[i / 8] >> (7 - i % 8)) & 1u; }
  mask.update_ratio();
  return mask;
}

void write_cpim(std::filesystem::path const &path, std::vector<ComplexImage> const &coils)
{
  if (coils.empty()) { throw ParameterError("CPIM needs at least one coil"); }
  auto os = open_out(path);
  write_bytes(os, "CPIM", 4);
  write_u32(os, static_cast<std::uint32_t>(coils.size()));
  for (auto const &c : coils) {
    if (!c.same_shape(coils.front())) { throw DimensionError("CPIM coils differ in shape"); }
    write_cimg(os, c);
  }
}

std::vector<ComplexImage> read_cpim(std::filesystem::path const &path)
{
  auto is = open_in(path);
  expect_magic(is, "CPIM");
  std::uint32_t const n = read_u32(is, "CPIM");
  if (n == 0 || n > 4096) { throw FormatError("bad coil count in CPIM"); }
  std::vector<ComplexImage> coils;
  for (std::uint32_t l = 0; l < n; ++l) {
    coils.push_back(read_cimg(is));
    if (!coils.back().same_shape(coils.front())) { throw FormatError("CPIM coils differ in shape"); }
  }
  expect_end(is, path);
  return coils;
}

void write_pgm(std::filesystem::path const &path, ComplexImage const &img, bool log_scale)
{
  std::vector<double> m(img.data.size());
  std::transform(img.data.begin(), img.data.end(), m.begin(), [&](cplx v) {
    return log_scale ? std::log1p(std::abs(v)) : std::abs(v);
  });
  double const peak = m.empty() ? 0.0 : *std::max_element(m.begin(), m.end());
  std::vector<std::uint8_t> px(m.size(), 0);
  if (peak > 0.0) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      px[i] = static_cast<std::uint8_t>(std::lround(std::clamp(255.0 * m[i] / peak, 0.0, 255.0)));
    }
  }
  auto os = open_out(path);
  std::string const header = "P5\n" + std::to_string(img.cols) + " " + std::to_string(img.rows) + "\n255\n";
  write_bytes(os, header.data(), header.size());
  write_bytes(os, px.data(), px.size());
}

void write_pgm(std::filesystem::path const &path, SamplingMask const &mask)
{
  ComplexImage img(mask.rows, mask.cols);
  for (std::size_t i = 0; i < mask.keep.size(); ++i) { img.data[i] = mask.keep[i] ? 1.0 : 0.0; }
  write_pgm(path, img);
}

} // namespace csmri
