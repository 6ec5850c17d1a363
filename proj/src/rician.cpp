#include "csmri/rician.hpp"

#include "csmri/fft.hpp"
#include "csmri/random.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace csmri {

namespace {

constexpr double radius_floor = 1e-12;

void require_positive(double v, char const *name)
{
  if (!(v > 0.0) || !std::isfinite(v)) { throw ParameterError(std::string(name) + " must be > 0"); }
}

} // namespace

RicianSample rician_forward(ComplexImage const &x, double sigma, std::uint64_t seed)
{
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) { throw ParameterError("sigma must be finite and >= 0"); }
  RicianSample s{ComplexImage(x.rows, x.cols), ComplexImage(x.rows, x.cols), ComplexImage(x.rows, x.cols)};
  Rng rng(seed);
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    double const a = sigma == 0.0 ? 0.0 : sigma * rng.normal();
    double const b = sigma == 0.0 ? 0.0 : sigma * rng.normal();
    s.n1.data[i] = a;
    s.n2.data[i] = b;
    s.z.data[i] = std::abs(x.data[i] + cplx(a, b));
  }
  return s;
}

ComplexImage rician_z_fidelity(ComplexImage const &z_prev, ComplexImage const &x_prev, ComplexImage const &y,
                               SamplingMask const &mask, double rho1, double rho2)
{
  require_positive(rho1, "rho1");
  require_positive(rho2, "rho2");
  require_same_shape(z_prev, x_prev, "rician_z_fidelity");
  require_same_shape(z_prev, y, "rician_z_fidelity");
  require_same_shape(y, mask, "rician_z_fidelity");
  ComplexImage const kz = fft2_centered(z_prev);
  ComplexImage const kx = fft2_centered(x_prev);
  ComplexImage k(y.rows, y.cols);
  for (std::size_t i = 0; i < k.data.size(); ++i) {
    cplx const pull = rho1 * kz.data[i] + rho2 * kx.data[i];
    k.data[i] = mask.keep[i] ? (y.data[i] + pull) / (1.0 + rho1 + rho2) : pull / (rho1 + rho2);
  }
  return ifft2_centered(k);
}

ComplexImage rician_z_grad(ComplexImage const &z, ComplexImage const &y, SamplingMask const &mask,
                           ComplexImage const &z_prev, double rho1)
{
  require_same_shape(z, y, "rician_z_grad");
  require_same_shape(z, z_prev, "rician_z_grad");
  require_same_shape(y, mask, "rician_z_grad");
  ComplexImage const residual = apply_mask(apply_mask(fft2_centered(z), mask) - y, mask);
  return combine(1.0, ifft2_centered(residual), rho1, z - z_prev);
}

ComplexImage rician_x_fidelity(ComplexImage const &z_new, ComplexImage const &n1, ComplexImage const &n2,
                               ComplexImage const *x_ref)
{
  require_same_shape(z_new, n1, "rician_x_fidelity");
  require_same_shape(z_new, n2, "rician_x_fidelity");
  if (x_ref) { require_same_shape(z_new, *x_ref, "rician_x_fidelity"); }
  ComplexImage out(z_new.rows, z_new.cols);
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    double const stage1 = std::max(std::norm(z_new.data[i]) - std::norm(n2.data[i]), 0.0);
    double root = std::sqrt(stage1);
    if (x_ref) {
      double const target = (x_ref->data[i] + n1.data[i]).real();
      if (std::abs(-root - target) < std::abs(root - target)) { root = -root; }
    }
    out.data[i] = root - n1.data[i];
  }
  return out;
}

ComplexImage rician_x_grad(ComplexImage const &x, ComplexImage const &z_new, ComplexImage const &n1,
                           ComplexImage const &n2)
{
  require_same_shape(x, z_new, "rician_x_grad");
  require_same_shape(x, n1, "rician_x_grad");
  require_same_shape(x, n2, "rician_x_grad");
  ComplexImage g(x.rows, x.cols);
  for (std::size_t i = 0; i < g.data.size(); ++i) {
    cplx const t = x.data[i] + n1.data[i];
    double const r = std::sqrt(std::norm(t) + std::norm(n2.data[i]));
    g.data[i] = t * (1.0 - std::abs(z_new.data[i]) / std::max(r, radius_floor));
  }
  return g;
}

double rician_consistency(ComplexImage const &z, ComplexImage const &x, ComplexImage const &n1,
                          ComplexImage const &n2)
{
  require_same_shape(z, x, "rician_consistency");
  double sum = 0.0;
  for (std::size_t i = 0; i < z.data.size(); ++i) {
    double const r = std::sqrt(std::norm(x.data[i] + n1.data[i]) + std::norm(n2.data[i]));
    double const d = std::abs(z.data[i]) - r;
    sum += d * d;
  }
  return std::sqrt(sum);
}

double rician_x_curvature(ComplexImage const &x, ComplexImage const &z, ComplexImage const &n1,
                          ComplexImage const &n2)
{
  double worst = 1.0;
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    double const r = std::max(std::sqrt(std::norm(x.data[i] + n1.data[i]) + std::norm(n2.data[i])), radius_floor);
    double const zm = std::abs(z.data[i]);
    double const radial = 1.0 - zm * std::norm(n2.data[i]) / (r * r * r);
    double const tangential = 1.0 - zm / r;
    worst = std::max({worst, std::abs(radial), std::abs(tangential)});
  }
  return worst;
}

std::string to_string(NoiseMode mode) { return mode == NoiseMode::oracle ? "oracle" : "blind"; }

NoiseMode parse_noise_mode(std::string const &name)
{
  if (name == "oracle") { return NoiseMode::oracle; }
  if (name == "blind") { return NoiseMode::blind; }
  throw ParameterError("unknown noise mode '" + name + "' (oracle | blind)");
}

RicianZModel::RicianZModel(ComplexImage const &y, SamplingMask const &mask, ComplexImage z_outer,
                           ComplexImage x_outer, double rho1, double rho2, int levels)
  : y_(y)
  , mask_(mask)
  , z_outer_(std::move(z_outer))
  , x_outer_(std::move(x_outer))
  , rho1_(rho1)
  , rho2_(rho2)
  , levels_(levels)
{
  require_positive(rho1_, "rho1");
  require_positive(rho2_, "rho2");
  require_same_shape(y_, mask_, "RicianZModel");
  require_same_shape(y_, z_outer_, "RicianZModel");
  require_same_shape(y_, x_outer_, "RicianZModel");
}

double RicianZModel::value(WaveletCoeffs const &alpha) const
{
  ComplexImage const z = idwt2(alpha);
  return 0.5 * norm_sq(apply_mask(fft2_centered(z), mask_) - y_) + 0.5 * rho1_ * norm_sq(z - z_outer_);
}

WaveletCoeffs RicianZModel::gradient(WaveletCoeffs const &alpha) const
{
  return dwt2(rician_z_grad(idwt2(alpha), y_, mask_, z_outer_, rho1_), levels_);
}

WaveletCoeffs RicianZModel::solve(WaveletCoeffs const &alpha, double) const
{
  return dwt2(rician_z_fidelity(idwt2(alpha), x_outer_, y_, mask_, rho1_, rho2_), levels_);
}

RicianXModel::RicianXModel(ComplexImage z, ComplexImage n1, ComplexImage n2, ComplexImage x_start, int levels)
  : z_(std::move(z))
  , n1_(std::move(n1))
  , n2_(std::move(n2))
  , x_start_(std::move(x_start))
  , levels_(levels)
  , lipschitz_(1.0)
{
  require_same_shape(z_, n1_, "RicianXModel");
  require_same_shape(z_, n2_, "RicianXModel");
  require_same_shape(z_, x_start_, "RicianXModel");
}

double RicianXModel::value(WaveletCoeffs const &alpha) const
{
  ComplexImage const x = idwt2(alpha);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    double const r = std::sqrt(std::norm(x.data[i] + n1_.data[i]) + std::norm(n2_.data[i]));
    double const d = r - std::abs(z_.data[i]);
    sum += d * d;
  }
  return 0.5 * sum;
}

WaveletCoeffs RicianXModel::gradient(WaveletCoeffs const &alpha) const
{
  return dwt2(rician_x_grad(idwt2(alpha), z_, n1_, n2_), levels_);
}

WaveletCoeffs RicianXModel::solve(WaveletCoeffs const &alpha, double) const
{
  ComplexImage const current = idwt2(alpha);
  return dwt2(rician_x_fidelity(z_, n1_, n2_, &current), levels_);
}

void RicianConfig::validate() const
{
  inner.validate();
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) { throw ParameterError("lambda1, lambda2 must be >= 0"); }
  require_positive(rho1, "rho1");
  require_positive(rho2, "rho2");
  if (outer_iters < 1) { throw ParameterError("outer_iters must be >= 1"); }
  require_positive(stop_tol, "stop_tol");
}

double RicianConfig::effective_lambda(double lambda) const { return lambda * std::pow(255.0, inner.p - 2.0); }

ComplexImage rician_baseline(ComplexImage const &y) { return magnitude(ifft2_centered(y)); }

RicianResult rician_reconstruct(ComplexImage const &y, SamplingMask const &mask, RicianConfig const &config,
                                DenoiserPlugin &denoiser, RicianSample const *truth_noise)
{
  config.validate();
  require_same_shape(y, mask, "rician_reconstruct");
  if (config.noise == NoiseMode::oracle) {
    if (!truth_noise) { throw ParameterError("oracle noise mode needs the simulated noise fields"); }
    require_same_shape(y, truth_noise->n1, "rician_reconstruct");
    require_same_shape(y, truth_noise->n2, "rician_reconstruct");
  }
  Problem const check{y, mask, config.levels};
  check.validate();

  SolverConfig z_cfg = config.inner;
  z_cfg.lambda = config.effective_lambda(config.lambda1);
  SolverConfig x_cfg = config.inner;
  x_cfg.lambda = config.effective_lambda(config.lambda2);

  RicianResult result;
  ComplexImage z = ifft2_centered(y);
  ComplexImage x = magnitude(z);
  ComplexImage n1(y.rows, y.cols);
  ComplexImage n2(y.rows, y.cols);

  for (int t = 0; t < config.outer_iters; ++t) {
    RicianOuterRecord rec;
    rec.outer = t + 1;

    RicianZModel const z_model(y, mask, z, x, config.rho1, config.rho2, config.levels);
    Reconstruction rz = run_framework(z_model, z_cfg, denoiser);
    ComplexImage z_new = std::move(rz.image);

    if (config.noise == NoiseMode::oracle) {
      n1 = truth_noise->n1;
      n2 = truth_noise->n2;
    } else {
      for (std::size_t i = 0; i < n2.data.size(); ++i) {
        n1.data[i] = 0.0;
        n2.data[i] = std::sqrt(std::max(std::norm(z_new.data[i]) - std::norm(x.data[i]), 0.0) / 2.0);
      }
    }

    ComplexImage const z_mag = magnitude(z_new);
    RicianXModel const x_model(z_mag, n1, n2, x, config.levels);
    Reconstruction rx = run_framework(x_model, x_cfg, denoiser);
    {
      std::ostringstream s;
      s << std::setprecision(17) << rician_x_curvature(x, z_mag, n1, n2);
      rx.trace.metadata["curvature_at_start"] = s.str();
    }
    ComplexImage x_new = std::move(rx.image);

    double const before = std::sqrt(norm_sq(z) + norm_sq(x));
    double const change = std::sqrt(norm_sq(z_new - z) + norm_sq(x_new - x));
    rec.rel_change = before > 0.0 ? change / before : change;
    rec.consistency = rician_consistency(z_new, x_new, n1, n2);
    rec.z_trace = std::move(rz.trace);
    rec.x_trace = std::move(rx.trace);
    result.outer.push_back(std::move(rec));

    z = std::move(z_new);
    x = std::move(x_new);
    if (result.outer.back().rel_change <= config.stop_tol) {
      result.converged = true;
      break;
    }
  }
  result.x = std::move(x);
  result.z = std::move(z);
  result.n1 = std::move(n1);
  result.n2 = std::move(n2);
  return result;
}

} // namespace csmri
