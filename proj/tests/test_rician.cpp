#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csmri/denoisers.hpp"
#include "csmri/fft.hpp"
#include "csmri/metrics.hpp"
#include "csmri/problem.hpp"
#include "csmri/rician.hpp"
#include "support/oracles.hpp"

using namespace csmri;

namespace {

double const sigma20 = 20.0 / 255.0;

ComplexImage real_field(std::size_t rows, std::size_t cols, Rng &rng, double lo, double hi)
{
  ComplexImage img(rows, cols);
  for (auto &v : img.data) { v = rng.uniform(lo, hi); }
  return img;
}

ComplexImage offset_phantom(std::size_t n)
{
  ComplexImage x = shepp_logan(n, n);
  for (auto &v : x.data) { v += 0.5; }
  return x;
}

/// 0.5 ||mask(F z) - y||^2 + rho1/2 ||z - z_prev||^2 with the naive DFT.
double z_objective(ComplexImage const &z, ComplexImage const &y, SamplingMask const &mask, ComplexImage const &z_prev,
                   double rho1)
{
  oracle::Vec const k = oracle::naive_dft2_centered(z.data, z.rows, z.cols);
  double s = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (mask.keep[i]) { s += std::norm(k[i] - y.data[i]); }
  }
  return 0.5 * s + 0.5 * rho1 * norm_sq(z - z_prev);
}

double x_objective(ComplexImage const &x, ComplexImage const &z, ComplexImage const &n1, ComplexImage const &n2)
{
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double const model = std::sqrt(std::norm(x.data[i] + n1.data[i]) + std::norm(n2.data[i]));
    s += std::pow(model - std::abs(z.data[i]), 2);
  }
  return 0.5 * s;
}

void check_monotone(IterateTrace const &t)
{
  double prev = t.phi_initial;
  for (auto const &r : t.records) {
    CHECK(r.phi_alpha <= prev + 1e-9);
    CHECK(r.phi_alpha <= r.phi_w + 1e-9);
    prev = r.phi_alpha;
  }
}

} // namespace

TEST_CASE("noise-free forward model is the magnitude")
{
  Rng rng(1);
  ComplexImage const x = oracle::random_image(16, 16, rng);
  RicianSample const s = rician_forward(x, 0.0, 3);
  CHECK(s.z.data == magnitude(x).data);
  for (auto const &v : s.n1.data) { CHECK(v == cplx{}); }
  CHECK_THROWS_AS(rician_forward(x, -1.0, 3), ParameterError);
}

TEST_CASE("pure noise has the Rayleigh mean")
{
  double const sigma = 0.3;
  RicianSample const s = rician_forward(ComplexImage(1024, 1024), sigma, 17);
  double mean = 0.0;
  for (auto const &v : s.z.data) { mean += v.real(); }
  mean /= double(s.z.size());
  CHECK(std::abs(mean - sigma * std::sqrt(std::numbers::pi / 2.0)) < 0.01 * sigma * std::sqrt(std::numbers::pi / 2.0));
}

TEST_CASE("forward model is seeded and follows the formula")
{
  ComplexImage const x = shepp_logan(32, 32);
  RicianSample const a = rician_forward(x, sigma20, 5);
  RicianSample const b = rician_forward(x, sigma20, 5);
  CHECK(a.z.data == b.z.data);
  CHECK(a.n1.data == b.n1.data);
  CHECK(a.z.data != rician_forward(x, sigma20, 6).z.data);
  CHECK(a.z.is_real());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double const expected = std::sqrt(std::pow(x.data[i].real() + a.n1.data[i].real(), 2) + std::norm(a.n2.data[i]));
    CHECK(a.z.data[i].real() == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("z fidelity returns the truth on consistent fully sampled data")
{
  ComplexImage const truth = shepp_logan(32, 32);
  SamplingMask const full = make_mask(MaskKind::full, 32, 32, 1.0, 0);
  ComplexImage const y = fft2_centered(truth);
  CHECK(distance(rician_z_fidelity(truth, truth, y, full, 0.01, 0.01), truth) < 1e-10);
}

TEST_CASE("z fidelity matches conjugate gradients on random 32x32 problems")
{
  Rng rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    SamplingMask const mask = make_mask(MaskKind::radial, 32, 32, rng.uniform(0.1, 0.6), rng.bits());
    ComplexImage const y = apply_mask(oracle::random_image(32, 32, rng), mask);
    ComplexImage const z_prev = oracle::random_image(32, 32, rng);
    ComplexImage const x_prev = oracle::random_image(32, 32, rng);
    double const rho1 = rng.uniform(0.01, 1.0);
    double const rho2 = rng.uniform(0.01, 1.0);

    auto const op = [&](oracle::Vec const &v) {
      oracle::Vec k = oracle::naive_dft2_centered(v, 32, 32);
      for (std::size_t i = 0; i < k.size(); ++i) {
        if (!mask.keep[i]) { k[i] = 0.0; }
      }
      oracle::Vec out = oracle::naive_dft2_centered(k, 32, 32, +1);
      for (std::size_t i = 0; i < out.size(); ++i) { out[i] += (rho1 + rho2) * v[i]; }
      return out;
    };
    oracle::Vec rhs = oracle::naive_dft2_centered(y.data, 32, 32, +1);
    for (std::size_t i = 0; i < rhs.size(); ++i) { rhs[i] += rho1 * z_prev.data[i] + rho2 * x_prev.data[i]; }
    oracle::Vec const expected = oracle::cg(op, rhs, 200, 1e-12);
    CHECK(oracle::rel_diff(rician_z_fidelity(z_prev, x_prev, y, mask, rho1, rho2).data, expected) < 1e-8);
  }
}

TEST_CASE("z fidelity tends to the two-term solve as rho2 vanishes")
{
  Rng rng(3);
  SamplingMask const mask = make_mask(MaskKind::radial, 32, 32, 0.3, 4);
  ComplexImage const y = apply_mask(oracle::random_image(32, 32, rng), mask);
  ComplexImage const z = oracle::random_image(32, 32, rng);
  ComplexImage const x = oracle::random_image(32, 32, rng);
  double const rho1 = 1.0;
  ComplexImage k = fft2_centered(z);
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (mask.keep[i]) { k.data[i] = (y.data[i] + rho1 * k.data[i]) / (1.0 + rho1); }
  }
  ComplexImage const two_term = ifft2_centered(k);
  CHECK(distance(rician_z_fidelity(z, x, y, mask, rho1, 1e-8), two_term) / norm(two_term) < 1e-7);
}

TEST_CASE("z gradient vanishes at consistent data and matches central differences")
{
  Rng rng(4);
  SamplingMask const full = make_mask(MaskKind::full, 16, 16, 1.0, 0);
  ComplexImage const z0 = oracle::random_image(16, 16, rng);
  CHECK(norm(rician_z_grad(z0, fft2_centered(z0), full, z0, 0.3)) < 1e-12);

  for (int trial = 0; trial < 10; ++trial) {
    SamplingMask const mask = make_mask(MaskKind::gaussian, 16, 16, rng.uniform(0.2, 0.8), rng.bits());
    ComplexImage const y = apply_mask(oracle::random_image(16, 16, rng), mask);
    ComplexImage const z_prev = oracle::random_image(16, 16, rng);
    ComplexImage const z = oracle::random_image(16, 16, rng);
    ComplexImage const d = oracle::random_image(16, 16, rng);
    double const rho1 = rng.uniform(0.0, 1.0);
    auto const f = [&](ComplexImage const &v) { return z_objective(v, y, mask, z_prev, rho1); };
    double const fd = oracle::directional_derivative(f, z, d);
    double const analytic = dot(rician_z_grad(z, y, mask, z_prev, rho1), d);
    CHECK(std::abs(fd - analytic) <= 1e-6 * std::max(1.0, std::abs(analytic)));
  }
}

TEST_CASE("z gradient has Lipschitz constant one plus rho1")
{
  Rng rng(5);
  SamplingMask const mask = make_mask(MaskKind::radial, 16, 16, 0.4, 1);
  ComplexImage const y = apply_mask(oracle::random_image(16, 16, rng), mask);
  ComplexImage const z_prev = oracle::random_image(16, 16, rng);
  for (int trial = 0; trial < 50; ++trial) {
    ComplexImage const a = oracle::random_image(16, 16, rng);
    ComplexImage const b = oracle::random_image(16, 16, rng);
    double const diff = distance(rician_z_grad(a, y, mask, z_prev, 0.01), rician_z_grad(b, y, mask, z_prev, 0.01));
    CHECK(diff <= (1.01 + 1e-8) * distance(a, b));
  }
}

TEST_CASE("exact noise fields invert the forward model")
{
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ComplexImage const x = offset_phantom(64);
    RicianSample const s = rician_forward(x, sigma20, seed);
    for (std::size_t i = 0; i < x.size(); ++i) { REQUIRE(x.data[i].real() + s.n1.data[i].real() >= 0.0); }
    CHECK(distance(rician_x_fidelity(s.z, s.n1, s.n2), x) < 1e-10);
  }
}

TEST_CASE("a reference picks the right root where x + n1 is negative")
{
  ComplexImage const x = shepp_logan(64, 64);
  RicianSample const s = rician_forward(x, sigma20, 3);
  std::size_t negative = 0;
  for (std::size_t i = 0; i < x.size(); ++i) { negative += x.data[i].real() + s.n1.data[i].real() < 0.0; }
  CHECK(negative > 0);
  CHECK(distance(rician_x_fidelity(s.z, s.n1, s.n2, &x), x) < 1e-10);
  CHECK(distance(rician_x_fidelity(s.z, s.n1, s.n2), x) > 1e-3);
}

TEST_CASE("zero noise fields return z")
{
  Rng rng(6);
  ComplexImage const z = real_field(16, 16, rng, 0.0, 2.0);
  ComplexImage const zero(16, 16);
  CHECK(distance(rician_x_fidelity(z, zero, zero), z) < 1e-15);
}

TEST_CASE("removing the quadrature noise improves the magnitude image")
{
  // Stage one with the true n2 and no n1 correction: the Rician bias goes, the in-phase noise stays.
  ComplexImage const x = shepp_logan(64, 64);
  double gain = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RicianSample const s = rician_forward(x, sigma20, seed);
    ComplexImage const zero(64, 64);
    ComplexImage const stage1 = rician_x_fidelity(s.z, zero, s.n2);
    gain += psnr(x, stage1) - psnr(x, s.z);
    CHECK(psnr(x, rician_x_fidelity(s.z, s.n1, s.n2, &x)) - psnr(x, s.z) >= 1.0);
  }
  gain /= 10.0;
  MESSAGE("mean stage-one gain: " << gain << " dB");
  CHECK(gain >= 1.0);
}

TEST_CASE("x gradient formula cases")
{
  Rng rng(7);
  ComplexImage const x = real_field(16, 16, rng, -1.0, 1.0);
  ComplexImage const n1 = real_field(16, 16, rng, -0.2, 0.2);
  ComplexImage const n2 = real_field(16, 16, rng, 0.1, 0.3);
  ComplexImage z(16, 16);
  for (std::size_t i = 0; i < z.size(); ++i) {
    z.data[i] = std::sqrt(std::norm(x.data[i] + n1.data[i]) + std::norm(n2.data[i]));
  }
  CHECK(norm(rician_x_grad(x, z, n1, n2)) < 1e-14);

  ComplexImage const zero(16, 16);
  CHECK(distance(rician_x_grad(x, zero, n1, zero), x + n1) < 1e-15);
}

TEST_CASE("x gradient matches central differences away from the singular set")
{
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    bool const complex_dir = trial % 2 == 1;
    ComplexImage const x = real_field(16, 16, rng, -1.0, 1.0);
    ComplexImage const n1 = real_field(16, 16, rng, -0.1, 0.1);
    ComplexImage const n2 = real_field(16, 16, rng, 0.1, 0.3);
    ComplexImage const z = real_field(16, 16, rng, 0.0, 1.5);
    ComplexImage d = complex_dir ? oracle::random_image(16, 16, rng) : real_field(16, 16, rng, -1.0, 1.0);
    auto const f = [&](ComplexImage const &v) { return x_objective(v, z, n1, n2); };
    double const fd = oracle::directional_derivative(f, x, d);
    double const analytic = dot(rician_x_grad(x, z, n1, n2), d);
    CHECK(std::abs(fd - analytic) <= 1e-5 * std::max(1.0, std::abs(analytic)));
  }
}

TEST_CASE("consistency and curvature diagnostics")
{
  ComplexImage const x = offset_phantom(32);
  RicianSample const s = rician_forward(x, sigma20, 2);
  CHECK(rician_consistency(s.z, x, s.n1, s.n2) < 1e-12);
  CHECK(rician_consistency(s.z, s.z, s.n1, s.n2) > 0.0);
  double const c = rician_x_curvature(x, s.z, s.n1, s.n2);
  CHECK(c >= 1.0);
  CHECK(std::isfinite(c));
}

TEST_CASE("config and names")
{
  RicianConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.effective_lambda(1.0) == doctest::Approx(std::pow(255.0, -1.2)));
  c.rho2 = 0.0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  RicianConfig d;
  d.outer_iters = 0;
  CHECK_THROWS_AS(d.validate(), ParameterError);
  CHECK(parse_noise_mode("blind") == NoiseMode::blind);
  CHECK(parse_noise_mode(to_string(NoiseMode::oracle)) == NoiseMode::oracle);
  CHECK_THROWS_AS(parse_noise_mode("guess"), ParameterError);

  ComplexImage const y(16, 16);
  SamplingMask const m = make_mask(MaskKind::full, 16, 16, 1.0, 0);
  IdentityDenoiser id;
  CHECK_THROWS_AS(rician_reconstruct(y, m, RicianConfig{}, id), ParameterError);
}

TEST_CASE("noise-free pipeline collapses to the plain reconstruction")
{
  ComplexImage const truth = shepp_logan(32, 32);
  SamplingMask const full = make_mask(MaskKind::full, 32, 32, 1.0, 0);
  RicianSample const s = rician_forward(truth, 0.0, 1);
  ComplexImage const y = apply_mask(fft2_centered(s.z), full);
  RicianConfig c;
  c.lambda1 = 0.0;
  c.lambda2 = 0.0;
  ShrinkDenoiser shrink;
  RicianResult const r = rician_reconstruct(y, full, c, shrink, &s);

  SolverConfig plain;
  plain.lambda = 0.0;
  Problem const problem = simulate_problem(truth, full, 3);
  ShrinkDenoiser shrink2;
  Reconstruction const ref = reconstruct(problem, plain, shrink2);
  CHECK(distance(r.x, ref.image) < 1e-8);
  CHECK(distance(r.x, truth) < 1e-8);
}

TEST_CASE("oracle pipeline beats the magnitude baseline with monotone subproblems")
{
  ComplexImage const truth = shepp_logan(64, 64);
  SamplingMask const mask = make_mask(MaskKind::radial, 64, 64, 0.3, 1);
  RicianSample const s = rician_forward(truth, sigma20, 11);
  ComplexImage const y = apply_mask(fft2_centered(s.z), mask);
  ShrinkDenoiser shrink;
  RicianResult const r = rician_reconstruct(y, mask, RicianConfig{}, shrink, &s);
  double const base = psnr(truth, rician_baseline(y));
  double const ours = psnr(truth, r.x);
  MESSAGE("baseline " << base << " dB, oracle pipeline " << ours << " dB");
  CHECK(ours > base);
  REQUIRE_FALSE(r.outer.empty());
  for (auto const &rec : r.outer) {
    check_monotone(rec.z_trace);
    check_monotone(rec.x_trace);
    CHECK(rec.x_trace.metadata.count("curvature_at_start") == 1);
  }
  CHECK(r.x.all_finite());
}

TEST_CASE("blind pipeline runs and is reproducible")
{
  ComplexImage const truth = shepp_logan(32, 32);
  SamplingMask const mask = make_mask(MaskKind::radial, 32, 32, 0.3, 1);
  RicianSample const s = rician_forward(truth, sigma20, 4);
  ComplexImage const y = apply_mask(fft2_centered(s.z), mask);
  RicianConfig c;
  c.noise = NoiseMode::blind;
  c.outer_iters = 4;
  ShrinkDenoiser a;
  ShrinkDenoiser b;
  RicianResult const r1 = rician_reconstruct(y, mask, c, a);
  RicianResult const r2 = rician_reconstruct(y, mask, c, b);
  CHECK(r1.x.data == r2.x.data);
  CHECK(r1.x.all_finite());
  for (auto const &rec : r1.outer) {
    check_monotone(rec.z_trace);
    check_monotone(rec.x_trace);
  }
  for (auto const &v : r1.n1.data) { CHECK(v == cplx{}); }
}
