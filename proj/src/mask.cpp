#include "csmri/mask.hpp"

#include "csmri/kernels.hpp"
#include "csmri/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace csmri {

std::string to_string(MaskKind kind)
{
  switch (kind) {
  case MaskKind::cartesian: return "cartesian";
  case MaskKind::radial: return "radial";
  case MaskKind::gaussian: return "gaussian";
  case MaskKind::full: return "full";
  case MaskKind::custom: return "custom";
  }
  return "custom";
}

MaskKind parse_mask_kind(std::string_view name)
{
  if (name == "cartesian") { return MaskKind::cartesian; }
  if (name == "radial") { return MaskKind::radial; }
  if (name == "gaussian") { return MaskKind::gaussian; }
  if (name == "full") { return MaskKind::full; }
  if (name == "custom") { return MaskKind::custom; }
  throw ParameterError("unknown mask kind '" + std::string(name) + "'");
}

SamplingMask::SamplingMask(std::size_t rows_, std::size_t cols_, MaskKind kind_, bool fill)
  : rows(rows_)
  , cols(cols_)
  , keep(rows_ * cols_, fill ? 1 : 0)
  , kind(kind_)
{
  if (rows == 0 || cols == 0) { throw DimensionError("mask dimensions must be positive"); }
  update_ratio();
}

std::size_t SamplingMask::count() const
{
  return static_cast<std::size_t>(std::count_if(keep.begin(), keep.end(), [](std::uint8_t b) { return b != 0; }));
}

void SamplingMask::update_ratio() { ratio = static_cast<double>(count()) / static_cast<double>(keep.size()); }

namespace {

std::size_t target_count(double ratio, std::size_t n)
{
  auto t = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
  return std::clamp<std::size_t>(t, 1, n);
}

SamplingMask cartesian(std::size_t rows, std::size_t cols, double ratio, Rng &rng)
{
  SamplingMask m(rows, cols, MaskKind::cartesian, false);
  std::size_t const lines = target_count(ratio, rows);
  std::size_t const band = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(lines / 4.0)), 1, lines);
  std::size_t const start = rows / 2 - band / 2;

  std::vector<std::uint8_t> chosen(rows, 0);
  for (std::size_t r = start; r < start + band; ++r) { chosen[r] = 1; }

  std::vector<std::size_t> others;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!chosen[r]) { others.push_back(r); }
  }
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < lines - band; ++i) {
    std::size_t const j = i + rng.index(others.size() - i);
    std::swap(others[i], others[j]);
    chosen[others[i]] = 1;
  }
  for (std::size_t r = 0; r < rows; ++r) {
    if (chosen[r]) { std::fill_n(m.keep.begin() + static_cast<std::ptrdiff_t>(r * cols), cols, 1); }
  }
  return m;
}

double centre_distance_sq(std::size_t rows, std::size_t cols, std::size_t idx)
{
  double const dr = static_cast<double>(idx / cols) - static_cast<double>(rows / 2);
  double const dc = static_cast<double>(idx % cols) - static_cast<double>(cols / 2);
  return dr * dr + dc * dc;
}

void rasterize_spoke(SamplingMask &m, double theta)
{
  auto const cr = static_cast<long long>(m.rows / 2), cc = static_cast<long long>(m.cols / 2);
  auto const rows = static_cast<long long>(m.rows), cols = static_cast<long long>(m.cols);
  double const dr = -std::sin(theta), dc = std::cos(theta);
  if (std::abs(dc) >= std::abs(dr)) {
    for (long long x = -cc; x < cols - cc; ++x) {
      long long const r = cr + std::llround(static_cast<double>(x) * dr / dc);
      if (r >= 0 && r < rows) { m.keep[static_cast<std::size_t>(r * cols + cc + x)] = 1; }
    }
  } else {
    for (long long y = -cr; y < rows - cr; ++y) {
      long long const c = cc + std::llround(static_cast<double>(y) * dc / dr);
      if (c >= 0 && c < cols) { m.keep[static_cast<std::size_t>((cr + y) * cols + c)] = 1; }
    }
  }
}

SamplingMask spokes(std::size_t rows, std::size_t cols, std::size_t n, double phase)
{
  SamplingMask m(rows, cols, MaskKind::radial, false);
  for (std::size_t i = 0; i < n; ++i) {
    rasterize_spoke(m, (static_cast<double>(i) + phase) * std::numbers::pi / static_cast<double>(n));
  }
  return m;
}

// Adds or drops samples so exactly `target` remain. Drops the farthest from the
// centre first and adds the nearest first; ties break on linear index.
void settle_count(SamplingMask &m, std::size_t target)
{
  std::size_t count = m.count();
  if (count == target) { return; }
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < m.keep.size(); ++i) {
    if ((m.keep[i] != 0) == (count > target)) { idx.push_back(i); }
  }
  auto far_first = [&](std::size_t a, std::size_t b) {
    double const da = centre_distance_sq(m.rows, m.cols, a), db = centre_distance_sq(m.rows, m.cols, b);
    return da != db ? da > db : a > b;
  };
  if (count > target) {
    std::sort(idx.begin(), idx.end(), far_first);
    for (std::size_t i = 0; i < count - target; ++i) { m.keep[idx[i]] = 0; }
  } else {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return far_first(b, a); });
    for (std::size_t i = 0; i < target - count; ++i) { m.keep[idx[i]] = 1; }
  }
}

SamplingMask radial(std::size_t rows, std::size_t cols, double ratio, Rng &rng)
{
  std::size_t const target = target_count(ratio, rows * cols);
  double const phase = rng.uniform();
  std::size_t const n_max = 8 * std::max(rows, cols);

  std::size_t hi = 1;
  while (hi < n_max && spokes(rows, cols, hi, phase).count() < target) { hi *= 2; }
  hi = std::min(hi, n_max);
  std::size_t lo = hi / 2;
  // Smallest spoke count in (lo, hi] reaching the target.
  while (hi - lo > 1) {
    std::size_t const mid = lo + (hi - lo) / 2;
    if (spokes(rows, cols, mid, phase).count() >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  SamplingMask m = spokes(rows, cols, std::max<std::size_t>(hi, 1), phase);
  settle_count(m, target);
  return m;
}

SamplingMask gaussian(std::size_t rows, std::size_t cols, double ratio, Rng &rng)
{
  std::size_t const n = rows * cols;
  std::size_t const target = target_count(ratio, n);
  double const sr = static_cast<double>(rows) / 6.0, sc = static_cast<double>(cols) / 6.0;

  SamplingMask m(rows, cols, MaskKind::gaussian, false);
  // Efraimidis-Spirakis: the top-k keys log(u)/w are a weighted sample without replacement.
  std::vector<double> key(n);
  for (std::size_t i = 0; i < n; ++i) {
    double const dr = static_cast<double>(i / cols) - static_cast<double>(rows / 2);
    double const dc = static_cast<double>(i % cols) - static_cast<double>(cols / 2);
    double const w = std::exp(-0.5 * (dr * dr / (sr * sr) + dc * dc / (sc * sc)));
    double const u = rng.uniform_open0();
    key[i] = w > 0.0 ? std::log(u) / w : -std::numeric_limits<double>::infinity();
  }
  key[m.dc_index()] = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto const by_key = [&](std::size_t a, std::size_t b) { return key[a] != key[b] ? key[a] > key[b] : a < b; };
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(target - 1), order.end(), by_key);
  for (std::size_t i = 0; i < target; ++i) { m.keep[order[i]] = 1; }
  return m;
}

} // namespace

SamplingMask make_mask(MaskKind kind, std::size_t rows, std::size_t cols, double ratio, std::uint64_t seed)
{
  if (!(ratio > 0.0 && ratio <= 1.0)) { throw ParameterError("sampling ratio must lie in (0, 1]"); }
  if (rows == 0 || cols == 0) { throw DimensionError("mask dimensions must be positive"); }
  Rng rng(seed);
  SamplingMask m;
  switch (kind) {
  case MaskKind::full:
    if (ratio != 1.0) { throw ParameterError("a full mask has ratio 1"); }
    m = SamplingMask(rows, cols, MaskKind::full, true);
    break;
  case MaskKind::cartesian: m = cartesian(rows, cols, ratio, rng); break;
  case MaskKind::radial: m = radial(rows, cols, ratio, rng); break;
  case MaskKind::gaussian: m = gaussian(rows, cols, ratio, rng); break;
  case MaskKind::custom: throw ParameterError("custom masks cannot be generated");
  }
  m.update_ratio();
  return m;
}

void require_same_shape(ComplexImage const &img, SamplingMask const &m, char const *what)
{
  if (img.rows != m.rows || img.cols != m.cols) {
    throw DimensionError(std::string(what) + ": image " + std::to_string(img.rows) + "x" + std::to_string(img.cols) +
                         " vs mask " + std::to_string(m.rows) + "x" + std::to_string(m.cols));
  }
}

ComplexImage apply_mask(ComplexImage const &k, SamplingMask const &m)
{
  require_same_shape(k, m, "apply_mask");
  ComplexImage out(k.rows, k.cols);
  kernels::mask_multiply(k.span(), m.keep, out.span());
  return out;
}

} // namespace csmri
