#include "csmri/parallel_imaging.hpp"

#include "csmri/cg.hpp"
#include "csmri/fft.hpp"
#include "csmri/kernels.hpp"
#include "csmri/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace csmri {

namespace {

ComplexImage multiply(ComplexImage const &s, ComplexImage const &x)
{
  ComplexImage out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.data.size(); ++i) { out.data[i] = s.data[i] * x.data[i]; }
  return out;
}

ComplexImage multiply_conj(ComplexImage const &s, ComplexImage const &x)
{
  ComplexImage out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.data.size(); ++i) { out.data[i] = std::conj(s.data[i]) * x.data[i]; }
  return out;
}

// Runs `per_coil` for every coil (in parallel) and adds the images in coil order.
template <typename Fn>
ComplexImage coil_sum(PIProblem const &problem, Fn const &per_coil)
{
  std::size_t const n = problem.coils();
  std::vector<ComplexImage> parts(n);
  std::ptrdiff_t const count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t l = 0; l < count; ++l) { parts[l] = per_coil(static_cast<std::size_t>(l)); }
  ComplexImage total(problem.rows(), problem.cols());
  for (auto const &part : parts) {
    for (std::size_t i = 0; i < total.data.size(); ++i) { total.data[i] += part.data[i]; }
  }
  return total;
}

void require_coeff_shape(WaveletCoeffs const &alpha, PIProblem const &problem, char const *what)
{
  if (alpha.rows != problem.rows() || alpha.cols != problem.cols()) {
    throw DimensionError(std::string(what) + ": coefficient and problem shapes differ");
  }
}

} // namespace

void SensitivityMaps::validate() const
{
  if (maps.empty()) { throw ParameterError("sensitivity maps need at least one coil"); }
  for (auto const &m : maps) {
    if (!m.same_shape(maps.front())) { throw DimensionError("sensitivity maps differ in shape"); }
    if (!m.all_finite()) { throw ParameterError("sensitivity maps contain non-finite values"); }
  }
  for (double s : sum_of_squares()) {
    if (!(s > 0.0)) { throw ParameterError("sensitivity maps vanish at a pixel"); }
  }
}

std::vector<double> SensitivityMaps::sum_of_squares() const
{
  std::vector<double> sos(rows() * cols(), 0.0);
  for (auto const &m : maps) {
    for (std::size_t i = 0; i < sos.size(); ++i) { sos[i] += std::norm(m.data[i]); }
  }
  return sos;
}

SensitivityMaps identity_maps(std::size_t rows, std::size_t cols, std::size_t coils)
{
  SensitivityMaps out;
  out.maps.assign(coils, ComplexImage(rows, cols, 1.0));
  return out;
}

SensitivityMaps synth_sensitivity_maps(std::size_t rows, std::size_t cols, std::size_t coils, std::uint64_t seed)
{
  if (coils == 0) { throw ParameterError("coils must be >= 1"); }
  if (rows == 0 || cols == 0) { throw DimensionError("sensitivity maps need a non-empty grid"); }
  if (coils == 1) { return identity_maps(rows, cols, 1); }
  Rng rng(seed);
  constexpr double width = 0.35;
  SensitivityMaps out;
  for (std::size_t l = 0; l < coils; ++l) {
    double const theta = 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(coils);
    double const cy = 0.5 * std::sin(theta);
    double const cx = 0.5 * std::cos(theta);
    double const dir = rng.uniform(0.0, 2.0 * std::numbers::pi);
    double const slope = rng.uniform(-std::numbers::pi, std::numbers::pi);
    double const offset = rng.uniform(0.0, 2.0 * std::numbers::pi);
    ComplexImage m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      double const yn = (static_cast<double>(r) + 0.5) / static_cast<double>(rows) - 0.5;
      for (std::size_t c = 0; c < cols; ++c) {
        double const xn = (static_cast<double>(c) + 0.5) / static_cast<double>(cols) - 0.5;
        double const d2 = (xn - cx) * (xn - cx) + (yn - cy) * (yn - cy);
        double const mag = std::exp(-d2 / (2.0 * width * width));
        double const phase = offset + slope * (xn * std::cos(dir) + yn * std::sin(dir));
        m(r, c) = std::polar(mag, phase);
      }
    }
    out.maps.push_back(std::move(m));
  }
  std::vector<double> const sos = out.sum_of_squares();
  for (auto &m : out.maps) {
    for (std::size_t i = 0; i < sos.size(); ++i) { m.data[i] /= std::sqrt(sos[i]); }
  }
  return out;
}

void PIProblem::validate() const
{
  if (y.empty()) { throw ParameterError("parallel imaging problem needs at least one coil"); }
  maps.validate();
  if (maps.coils() != y.size()) { throw DimensionError("number of maps and coil observations differ"); }
  if (maps.rows() != mask.rows || maps.cols() != mask.cols) { throw DimensionError("maps and mask differ in shape"); }
  if (!is_power_of_two(mask.rows) || !is_power_of_two(mask.cols)) {
    throw DimensionError("problem grid must be power-of-two");
  }
  require_wavelet_compatible(mask.rows, mask.cols, levels);
  for (auto const &yl : y) {
    require_same_shape(yl, mask, "coil observation");
    for (std::size_t i = 0; i < yl.size(); ++i) {
      if (!mask.keep[i] && yl.data[i] != cplx{}) {
        throw DimensionError("coil observations must be zero at unsampled k-space positions");
      }
    }
  }
}

PIProblem simulate_pi_problem(ComplexImage const &truth, SamplingMask const &mask, SensitivityMaps const &maps,
                              int levels)
{
  maps.validate();
  require_same_shape(truth, mask, "simulate_pi_problem");
  PIProblem problem{{}, mask, maps, levels};
  for (auto const &s : maps.maps) { problem.y.push_back(apply_mask(fft2_centered(multiply(s, truth)), mask)); }
  problem.validate();
  return problem;
}

ComplexImage pi_forward_coil(WaveletCoeffs const &alpha, PIProblem const &problem, std::size_t coil)
{
  require_coeff_shape(alpha, problem, "pi_forward_coil");
  return apply_mask(fft2_centered(multiply(problem.maps.maps.at(coil), idwt2(alpha))), problem.mask);
}

WaveletCoeffs pi_adjoint_coil(ComplexImage const &k, PIProblem const &problem, std::size_t coil)
{
  require_same_shape(k, problem.mask, "pi_adjoint_coil");
  return dwt2(multiply_conj(problem.maps.maps.at(coil), ifft2_centered(apply_mask(k, problem.mask))), problem.levels);
}

double pi_fidelity_value(WaveletCoeffs const &alpha, PIProblem const &problem)
{
  require_coeff_shape(alpha, problem, "pi_fidelity_value");
  ComplexImage const x = idwt2(alpha);
  std::size_t const n = problem.coils();
  std::vector<double> parts(n);
  std::ptrdiff_t const count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t l = 0; l < count; ++l) {
    ComplexImage const k = apply_mask(fft2_centered(multiply(problem.maps.maps[l], x)), problem.mask);
    parts[l] = 0.5 * norm_sq(k - problem.y[l]);
  }
  double total = 0.0;
  for (double v : parts) { total += v; }
  return total;
}

WaveletCoeffs pi_grad_f(WaveletCoeffs const &alpha, PIProblem const &problem)
{
  require_coeff_shape(alpha, problem, "pi_grad_f");
  ComplexImage const x = idwt2(alpha);
  ComplexImage const g = coil_sum(problem, [&](std::size_t l) {
    ComplexImage const k = apply_mask(fft2_centered(multiply(problem.maps.maps[l], x)), problem.mask);
    return multiply_conj(problem.maps.maps[l], ifft2_centered(apply_mask(k - problem.y[l], problem.mask)));
  });
  return dwt2(g, alpha.levels);
}

std::string to_string(PIFidelityMode mode) { return mode == PIFidelityMode::printed ? "printed" : "exact"; }

PIFidelityMode parse_pi_mode(std::string const &name)
{
  if (name == "printed") { return PIFidelityMode::printed; }
  if (name == "exact") { return PIFidelityMode::exact; }
  throw ParameterError("unknown fidelity mode '" + name + "' (printed | exact)");
}

WaveletCoeffs pi_fidelity_solve(WaveletCoeffs const &alpha, PIProblem const &problem, double rho)
{
  if (!(rho > 0.0) || !std::isfinite(rho)) { throw ParameterError("rho must be > 0"); }
  if (problem.coils() == 0) { throw ParameterError("parallel imaging problem needs at least one coil"); }
  require_coeff_shape(alpha, problem, "pi_fidelity_solve");
  ComplexImage const x = idwt2(alpha);
  ComplexImage const u = coil_sum(problem, [&](std::size_t l) {
    ComplexImage const k = fft2_centered(multiply(problem.maps.maps[l], x));
    ComplexImage merged(k.rows, k.cols);
    // Unsampled bins: rho F S_l A alpha / rho.
    kernels::fidelity_merge(k.span(), problem.y[l].span(), problem.mask.keep, rho, merged.span());
    return multiply_conj(problem.maps.maps[l], ifft2_centered(merged));
  });
  return dwt2(u, alpha.levels);
}

WaveletCoeffs pi_fidelity_solve_exact(WaveletCoeffs const &alpha, PIProblem const &problem, double rho, double tol,
                                      int max_iters)
{
  if (!(rho > 0.0) || !std::isfinite(rho)) { throw ParameterError("rho must be > 0"); }
  require_coeff_shape(alpha, problem, "pi_fidelity_solve_exact");
  auto const normal = [&](WaveletCoeffs const &a) {
    ComplexImage const x = idwt2(a);
    ComplexImage const g = coil_sum(problem, [&](std::size_t l) {
      ComplexImage const k = apply_mask(fft2_centered(multiply(problem.maps.maps[l], x)), problem.mask);
      return multiply_conj(problem.maps.maps[l], ifft2_centered(k));
    });
    return combine(1.0, dwt2(g, a.levels), rho, a);
  };
  WaveletCoeffs const rhs = combine(1.0, pi_zero_filled_coeffs(problem), rho, alpha);
  WaveletCoeffs u = pi_fidelity_solve(alpha, problem, rho);
  conjugate_gradient(normal, rhs, u, max_iters, tol);
  return u;
}

double pi_lipschitz_bound(SensitivityMaps const &maps)
{
  std::vector<double> const sos = maps.sum_of_squares();
  return sos.empty() ? 0.0 : *std::max_element(sos.begin(), sos.end());
}

double pi_estimate_lipschitz(PIProblem const &problem, int iters, std::uint64_t seed)
{
  auto const normal = [&](WaveletCoeffs const &a) {
    WaveletCoeffs g(a.rows, a.cols, a.levels);
    for (std::size_t l = 0; l < problem.coils(); ++l) {
      g = g + pi_adjoint_coil(pi_forward_coil(a, problem, l), problem, l);
    }
    return g;
  };
  return power_iteration(normal, problem.rows(), problem.cols(), problem.levels, iters, seed);
}

WaveletCoeffs pi_zero_filled_coeffs(PIProblem const &problem)
{
  ComplexImage const x = coil_sum(problem, [&](std::size_t l) {
    return multiply_conj(problem.maps.maps[l], ifft2_centered(problem.y[l]));
  });
  return dwt2(x, problem.levels);
}

ComplexImage zero_filled_sos(PIProblem const &problem)
{
  ComplexImage out(problem.rows(), problem.cols());
  for (auto const &yl : problem.y) {
    ComplexImage const img = ifft2_centered(yl);
    for (std::size_t i = 0; i < out.data.size(); ++i) { out.data[i] += std::norm(img.data[i]); }
  }
  for (auto &v : out.data) { v = std::sqrt(v.real()); }
  return out;
}

PIModel::PIModel(PIProblem const &problem, PIFidelityMode mode)
  : problem_(problem)
  , mode_(mode)
{
  problem_.validate();
  lipschitz_ = pi_lipschitz_bound(problem_.maps);
}

double PIModel::value(WaveletCoeffs const &alpha) const { return pi_fidelity_value(alpha, problem_); }
WaveletCoeffs PIModel::gradient(WaveletCoeffs const &alpha) const { return pi_grad_f(alpha, problem_); }
WaveletCoeffs PIModel::solve(WaveletCoeffs const &alpha, double rho) const
{
  return mode_ == PIFidelityMode::printed ? pi_fidelity_solve(alpha, problem_, rho)
                                          : pi_fidelity_solve_exact(alpha, problem_, rho);
}
WaveletCoeffs PIModel::initial_coeffs() const { return pi_zero_filled_coeffs(problem_); }

Reconstruction pi_reconstruct(PIProblem const &problem, SolverConfig const &config, DenoiserPlugin &denoiser,
                              RunOptions const &options, PIFidelityMode mode)
{
  config.validate();
  PIModel const model(problem, mode);
  Reconstruction out = run_framework(model, config, denoiser, options);
  out.trace.metadata["coils"] = std::to_string(problem.coils());
  out.trace.metadata["pi_fidelity"] = to_string(mode);
  return out;
}

} // namespace csmri
