#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csmri/cg.hpp"
#include "csmri/fft.hpp"
#include "csmri/mask.hpp"
#include "csmri/problem.hpp"
#include "csmri/wavelet.hpp"
#include "support/oracles.hpp"

using namespace csmri;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace

TEST_CASE("fft of a constant concentrates at the center bin")
{
  ComplexImage img(4, 4, 1.0);
  ComplexImage const k = fft2_centered(img);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      double const expected = (r == 2 && c == 2) ? 4.0 : 0.0;
      CHECK(std::abs(k(r, c)) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("fft matches the defining sum")
{
  Rng rng(5);
  for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{8, 8}, {4, 16}, {16, 2}}) {
    ComplexImage const img = oracle::random_image(rows, cols, rng);
    auto const expected = oracle::naive_dft2_centered(img.data, rows, cols);
    CHECK(oracle::rel_diff(fft2_centered(img).data, expected) < 1e-12);
    auto const back = oracle::naive_dft2_centered(img.data, rows, cols, +1);
    CHECK(oracle::rel_diff(ifft2_centered(img).data, back) < 1e-12);
  }
}

TEST_CASE("fft is unitary and inverts, 100 random cases")
{
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t const rows = std::size_t{1} << (1 + rng.index(5));
    std::size_t const cols = std::size_t{1} << (1 + rng.index(5));
    ComplexImage const a = oracle::random_image(rows, cols, rng);
    ComplexImage const b = oracle::random_image(rows, cols, rng);
    ComplexImage const fa = fft2_centered(a);
    CHECK(rel(norm(fa), norm(a)) < 1e-12);
    CHECK(distance(ifft2_centered(fa), a) / norm(a) < 1e-12);
    CHECK(rel(dot(fa, b), dot(a, ifft2_centered(b))) < 1e-10);
  }
}

TEST_CASE("fft round trip on 32x32")
{
  Rng rng(2);
  ComplexImage const img = oracle::random_image(32, 32, rng);
  CHECK(distance(ifft2_centered(fft2_centered(img)), img) / norm(img) < 1e-12);
}

TEST_CASE("fft rejects non power of two grids")
{
  CHECK_THROWS_AS(fft2_centered(ComplexImage(6, 8)), DimensionError);
  CHECK_THROWS_AS(ifft2_centered(ComplexImage(8, 12)), DimensionError);
}

TEST_CASE("raw fft matches the uncentered sum")
{
  Rng rng(3);
  ComplexImage const img = oracle::random_image(4, 8, rng);
  ComplexImage const k = fft2_raw(img);
  for (std::size_t kr = 0; kr < 4; ++kr) {
    for (std::size_t kc = 0; kc < 8; ++kc) {
      cplx s{};
      for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 8; ++c) {
          double const ang = -2.0 * std::numbers::pi * (double(kr * r) / 4.0 + double(kc * c) / 8.0);
          s += img(r, c) * cplx(std::cos(ang), std::sin(ang));
        }
      }
      CHECK(std::abs(k(kr, kc) - s) < 1e-12);
    }
  }
  ComplexImage back = ifft2_raw(k);
  CHECK(distance((1.0 / 32.0) * back, img) < 1e-12);
}

TEST_CASE("haar transform matches explicit matrices")
{
  Rng rng(4);
  for (int levels : {1, 2, 3}) {
    ComplexImage const img = oracle::random_image(16, 8, rng);
    auto const expected = oracle::naive_haar2(img.data, 16, 8, levels);
    CHECK(oracle::rel_diff(dwt2(img, levels).data, expected) < 1e-12);
  }
}

TEST_CASE("haar is orthonormal, 100 random cases")
{
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    int const levels = 1 + static_cast<int>(rng.index(3));
    std::size_t const rows = (std::size_t{1} << levels) * (1 + rng.index(6));
    std::size_t const cols = (std::size_t{1} << levels) * (1 + rng.index(6));
    ComplexImage const a = oracle::random_image(rows, cols, rng);
    WaveletCoeffs const b = oracle::random_coeffs(rows, cols, levels, rng);
    WaveletCoeffs const ca = dwt2(a, levels);
    CHECK(rel(norm(ca), norm(a)) < 1e-10);
    CHECK(distance(idwt2(ca), a) / norm(a) < 1e-10);
    CHECK(rel(dot(ca, b), dot(a, idwt2(b))) < 1e-10);
    CHECK(distance(dwt2(idwt2(b), levels), b) / norm(b) < 1e-10);
  }
}

TEST_CASE("constant image has no detail coefficients")
{
  ComplexImage img(32, 32, cplx(0.7, -0.2));
  WaveletCoeffs const c = dwt2(img, 3);
  double approx = 0.0;
  for (std::size_t r = 0; r < 32; ++r) {
    for (std::size_t col = 0; col < 32; ++col) {
      cplx const v = c.data[r * 32 + col];
      if (is_approximation(32, 32, 3, r, col)) {
        approx += std::norm(v);
      } else {
        CHECK(std::abs(v) < 1e-12);
      }
    }
  }
  CHECK(approx == doctest::Approx(norm_sq(img)).epsilon(1e-12));
}

TEST_CASE("impulse round trip")
{
  ComplexImage img(32, 32);
  img(13, 22) = 1.0;
  CHECK(distance(idwt2(dwt2(img, 3)), img) < 1e-10);
}

TEST_CASE("wavelet rejects indivisible grids")
{
  CHECK_THROWS_AS(dwt2(ComplexImage(12, 16), 3), DimensionError);
  CHECK_THROWS_AS(dwt2(ComplexImage(16, 16), 0), DimensionError);
}

TEST_CASE("full mask is the identity")
{
  Rng rng(1);
  SamplingMask const m = make_mask(MaskKind::full, 16, 16, 1.0, 0);
  CHECK(m.count() == 256);
  ComplexImage const k = oracle::random_image(16, 16, rng);
  CHECK(apply_mask(k, m).data == k.data);
  CHECK_THROWS_AS(make_mask(MaskKind::full, 16, 16, 0.5, 0), ParameterError);
}

TEST_CASE("mask with only DC keeps only DC")
{
  Rng rng(1);
  SamplingMask m(8, 8, MaskKind::custom, false);
  m.keep[m.dc_index()] = 1;
  ComplexImage const k = oracle::random_image(8, 8, rng);
  ComplexImage const out = apply_mask(k, m);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i == m.dc_index()) {
      CHECK(out.data[i] == k.data[i]);
    } else {
      CHECK(out.data[i] == cplx{});
    }
  }
}

TEST_CASE("masking keeps exactly the sampled count and is idempotent and self adjoint")
{
  Rng rng(9);
  for (MaskKind kind : {MaskKind::cartesian, MaskKind::radial, MaskKind::gaussian}) {
    SamplingMask const m = make_mask(kind, 32, 32, 0.3, 4);
    ComplexImage const k = oracle::random_image(32, 32, rng);
    ComplexImage const b = oracle::random_image(32, 32, rng);
    ComplexImage const once = apply_mask(k, m);
    std::size_t nonzero = 0;
    for (auto const &v : once.data) { nonzero += v != cplx{}; }
    CHECK(nonzero == m.count());
    CHECK(apply_mask(once, m).data == once.data);
    CHECK(rel(dot(once, b), dot(k, apply_mask(b, m))) < 1e-12);
  }
  CHECK_THROWS_AS(apply_mask(ComplexImage(16, 16), make_mask(MaskKind::full, 8, 8, 1.0, 0)), DimensionError);
}

TEST_CASE("cartesian 256x256 at 0.3 keeps 77 full rows including the center")
{
  SamplingMask const m = make_mask(MaskKind::cartesian, 256, 256, 0.3, 1);
  std::size_t rows_kept = 0;
  for (std::size_t r = 0; r < 256; ++r) {
    std::size_t n = 0;
    for (std::size_t c = 0; c < 256; ++c) { n += m(r, c); }
    CHECK((n == 0 || n == 256));
    rows_kept += n == 256;
  }
  CHECK(rows_kept == 77);
  for (std::size_t r = 124; r <= 132; ++r) { CHECK(m(r, 0)); }
}

TEST_CASE("masks honor the ratio and always keep DC")
{
  for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{64, 64}, {32, 64}, {128, 128}}) {
    for (double ratio : {0.05, 0.2, 0.3, 0.5, 0.9}) {
      for (std::uint64_t seed : {1u, 2u, 3u}) {
        SamplingMask const cart = make_mask(MaskKind::cartesian, rows, cols, ratio, seed);
        double const n = double(rows * cols);
        CHECK(std::abs(double(cart.count()) - ratio * n) <= double(cols));
        for (MaskKind kind : {MaskKind::radial, MaskKind::gaussian}) {
          SamplingMask const m = make_mask(kind, rows, cols, ratio, seed);
          CHECK(std::abs(double(m.count()) - ratio * n) <= 1.0);
          CHECK(m.keep[m.dc_index()] == 1);
          CHECK(m.ratio == doctest::Approx(double(m.count()) / n));
        }
        CHECK(cart.keep[cart.dc_index()] == 1);
      }
    }
  }
}

TEST_CASE("masks are deterministic in their seed")
{
  for (MaskKind kind : {MaskKind::cartesian, MaskKind::radial, MaskKind::gaussian}) {
    CHECK(make_mask(kind, 64, 64, 0.3, 7).keep == make_mask(kind, 64, 64, 0.3, 7).keep);
  }
  CHECK(make_mask(MaskKind::cartesian, 64, 64, 0.3, 7).keep != make_mask(MaskKind::cartesian, 64, 64, 0.3, 8).keep);
  CHECK(make_mask(MaskKind::gaussian, 64, 64, 0.3, 7).keep != make_mask(MaskKind::gaussian, 64, 64, 0.3, 8).keep);
}

TEST_CASE("gaussian masks are denser near the center")
{
  SamplingMask const m = make_mask(MaskKind::gaussian, 64, 64, 0.3, 3);
  std::size_t inner = 0;
  std::size_t inner_total = 0;
  std::size_t outer = 0;
  std::size_t outer_total = 0;
  for (std::size_t r = 0; r < 64; ++r) {
    for (std::size_t c = 0; c < 64; ++c) {
      double const d = std::hypot(double(r) - 32.0, double(c) - 32.0);
      if (d < 12.0) {
        inner += m(r, c);
        ++inner_total;
      } else if (d > 24.0) {
        outer += m(r, c);
        ++outer_total;
      }
    }
  }
  CHECK(double(inner) / double(inner_total) > 3.0 * double(outer) / double(outer_total));
}

TEST_CASE("radial masks are symmetric through the center")
{
  SamplingMask const m = make_mask(MaskKind::radial, 64, 64, 0.5, 1);
  std::size_t mirrored = 0;
  for (std::size_t r = 1; r < 64; ++r) {
    for (std::size_t c = 1; c < 64; ++c) {
      if (m(r, c) && m(64 - r, 64 - c)) { ++mirrored; }
    }
  }
  CHECK(double(mirrored) > 0.9 * double(m.count()));
}

TEST_CASE("mask parameters are validated")
{
  CHECK_THROWS_AS(make_mask(MaskKind::radial, 32, 32, 0.0, 1), ParameterError);
  CHECK_THROWS_AS(make_mask(MaskKind::radial, 32, 32, 1.5, 1), ParameterError);
  CHECK_THROWS_AS(make_mask(MaskKind::cartesian, 32, 32, -0.1, 1), ParameterError);
  CHECK_THROWS_AS(parse_mask_kind("spiral"), ParameterError);
  for (MaskKind kind : {MaskKind::cartesian, MaskKind::radial, MaskKind::gaussian, MaskKind::full}) {
    CHECK(parse_mask_kind(to_string(kind)) == kind);
  }
}

TEST_CASE("composite operator has norm at most one, 100 random problems")
{
  Rng rng(21);
  MaskKind const kinds[] = {MaskKind::cartesian, MaskKind::radial, MaskKind::gaussian, MaskKind::full};
  for (int trial = 0; trial < 100; ++trial) {
    MaskKind const kind = kinds[trial % 4];
    double const ratio = kind == MaskKind::full ? 1.0 : rng.uniform(0.1, 0.9);
    Problem problem;
    problem.mask = make_mask(kind, 32, 32, ratio, rng.bits());
    problem.y = ComplexImage(32, 32);
    problem.levels = 3;
    auto const normal = [&](WaveletCoeffs const &a) { return adjoint_operator(forward_operator(a, problem), problem); };
    double const estimate = power_iteration(normal, 32, 32, 3, 30, rng.bits());
    CHECK(estimate <= 1.0 + 1e-8);
    if (kind == MaskKind::full) { CHECK(estimate == doctest::Approx(1.0).epsilon(1e-10)); }
  }
}

TEST_CASE("forward and adjoint operators are consistent")
{
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    Problem problem;
    problem.mask = make_mask(MaskKind::radial, 16, 16, rng.uniform(0.1, 0.9), rng.bits());
    problem.y = ComplexImage(16, 16);
    problem.levels = 2;
    WaveletCoeffs const a = oracle::random_coeffs(16, 16, 2, rng);
    ComplexImage const k = oracle::random_image(16, 16, rng);
    CHECK(rel(dot(forward_operator(a, problem), k), dot(a, adjoint_operator(k, problem))) < 1e-10);
  }
}

TEST_CASE("simulated data vanishes off the mask and zero filling is its adjoint image")
{
  Rng rng(8);
  ComplexImage const truth = oracle::random_image(32, 32, rng);
  SamplingMask const m = make_mask(MaskKind::radial, 32, 32, 0.3, 2);
  Problem const p = simulate_problem(truth, m, 3);
  CHECK_NOTHROW(p.validate());
  for (std::size_t i = 0; i < p.y.size(); ++i) {
    if (!m.keep[i]) { CHECK(p.y.data[i] == cplx{}); }
  }
  CHECK(distance(zero_filled_image(p), idwt2(zero_filled_coeffs(p))) < 1e-12);
  CHECK(distance(zero_filled_image(p), ifft2_centered(p.y)) < 1e-12);

  Problem bad = p;
  bad.y.data[0] = 1.0;
  bad.mask.keep[0] = 0;
  CHECK_THROWS(bad.validate());
}
