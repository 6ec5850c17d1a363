#include "csmri/solver.hpp"

#include "csmri/cg.hpp"
#include "csmri/fft.hpp"
#include "csmri/kernels.hpp"
#include "csmri/metrics.hpp"
#include "csmri/prox.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

namespace csmri {

std::string to_string(ErrorCondition c) { return c == ErrorCondition::proximal ? "proximal" : "printed"; }

ErrorCondition parse_error_condition(std::string const &name)
{
  if (name == "proximal" || name == "proof") { return ErrorCondition::proximal; }
  if (name == "printed" || name == "eq11") { return ErrorCondition::printed; }
  throw ParameterError("unknown error condition '" + name + "' (proximal | printed)");
}

namespace {

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

double base_margin(SolverConfig const &c) { return 1.0 / (2.0 * c.eta1) - c.lipschitz / 2.0; }

} // namespace

void SolverConfig::validate() const
{
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) { throw ParameterError("lambda must be finite and >= 0"); }
  if (!(p > 0.0 && p <= 1.0)) { throw ParameterError("p must lie in (0, 1]"); }
  if (!positive_finite(rho)) { throw ParameterError("rho must be > 0"); }
  if (!positive_finite(eta1) || !positive_finite(eta2)) { throw ParameterError("step sizes must be > 0"); }
  if (!positive_finite(lipschitz)) { throw ParameterError("L_f must be > 0"); }
  if (max_iters < 1) { throw ParameterError("max_iters must be >= 1"); }
  if (!positive_finite(stop_tol)) { throw ParameterError("stop_tol must be > 0"); }
  if (!(noise_hi >= 0.0) || !(noise_lo >= 0.0)) { throw ParameterError("noise levels must be >= 0"); }
  if (epsilon && !positive_finite(*epsilon)) { throw ParameterError("epsilon must be > 0"); }
  if (!epsilon && !(eps_fraction > 0.0 && eps_fraction < 1.0)) {
    throw ParameterError("eps_fraction must lie in (0, 1)");
  }
  if (unsafe_steps) {
    if (!epsilon && base_margin(*this) <= 0.0) {
      throw ParameterError("eta1 >= 1/L_f leaves no admissible default epsilon; set epsilon explicitly");
    }
    return;
  }
  if (!(eta2 * lipschitz < 1.0)) { throw ParameterError("eta2 must be < 1/L_f"); }
  if (!(base_margin(*this) > 0.0)) { throw ParameterError("eta1 must be < 1/L_f for C^k > 0"); }
  if (!(descent_constant(0) > 0.0)) { throw ParameterError("epsilon too large: C^k = 1/(2 eta1) - L_f/2 - (L_f + |rho - 1/eta1|) eps <= 0"); }
}

double SolverConfig::epsilon_at(int) const
{
  if (epsilon) { return *epsilon; }
  return eps_fraction * base_margin(*this) / (lipschitz + std::abs(rho - 1.0 / eta1));
}

double SolverConfig::descent_constant(int k) const
{
  return base_margin(*this) - (lipschitz + std::abs(rho - 1.0 / eta1)) * epsilon_at(k);
}

double SolverConfig::prior_constant() const { return 1.0 / (2.0 * eta2) - lipschitz / 2.0; }

double SolverConfig::noise_sigma(int k) const
{
  double level = noise_hi;
  if (max_iters > 1) {
    double const t = std::clamp(static_cast<double>(k) / static_cast<double>(max_iters - 1), 0.0, 1.0);
    level = noise_hi + (noise_lo - noise_hi) * t;
  }
  return level / 255.0;
}

SolverConfig SolverConfig::rescaled_for(double L) const
{
  SolverConfig out = *this;
  if (L > lipschitz) {
    double const s = lipschitz / L;
    out.eta1 *= s;
    out.eta2 *= s;
    out.lipschitz = L;
  }
  return out;
}

SingleCoilModel::SingleCoilModel(Problem const &problem)
  : problem_(problem)
{
  problem_.validate();
}

double SingleCoilModel::value(WaveletCoeffs const &alpha) const { return fidelity_value(alpha, problem_); }
WaveletCoeffs SingleCoilModel::gradient(WaveletCoeffs const &alpha) const { return grad_f(alpha, problem_); }
WaveletCoeffs SingleCoilModel::solve(WaveletCoeffs const &alpha, double rho) const
{
  return fidelity_solve(alpha, problem_, rho);
}
WaveletCoeffs SingleCoilModel::initial_coeffs() const { return zero_filled_coeffs(problem_); }

WaveletCoeffs fidelity_solve(WaveletCoeffs const &alpha, Problem const &problem, double rho)
{
  if (!positive_finite(rho)) { throw ParameterError("rho must be > 0"); }
  if (alpha.rows != problem.rows() || alpha.cols != problem.cols()) {
    throw DimensionError("fidelity_solve: coefficient and problem shapes differ");
  }
  ComplexImage const k = fft2_centered(idwt2(alpha));
  ComplexImage merged(k.rows, k.cols);
  kernels::fidelity_merge(k.span(), problem.y.span(), problem.mask.keep, rho, merged.span());
  return dwt2(ifft2_centered(merged), alpha.levels);
}

double estimate_lipschitz(Problem const &problem, int iters, std::uint64_t seed)
{
  auto const normal = [&](WaveletCoeffs const &a) { return adjoint_operator(forward_operator(a, problem), problem); };
  return power_iteration(normal, problem.rows(), problem.cols(), problem.levels, iters, seed);
}

double objective(WaveletCoeffs const &alpha, FidelityModel const &model, SolverConfig const &config)
{
  double const penalty = config.lambda == 0.0 ? 0.0 : config.lambda * lp_penalty(alpha, config.p);
  return model.value(alpha) + penalty;
}

double objective(WaveletCoeffs const &alpha, Problem const &problem, SolverConfig const &config)
{
  return objective(alpha, SingleCoilModel(problem), config);
}

Selection check_and_select(WaveletCoeffs const &v, WaveletCoeffs const &alpha_prev, FidelityModel const &model,
                           SolverConfig const &config, int k)
{
  require_same_shape(v, alpha_prev, "check_and_select");
  double const eta = config.eta1;
  // v - eta1 (grad f(v) + rho (v - alpha))
  WaveletCoeffs const pulled = combine(1.0 - eta * config.rho, v, eta * config.rho, alpha_prev);
  WaveletCoeffs const point = combine(1.0, pulled, -eta, model.gradient(v));

  Selection sel;
  sel.beta = prox_lp(point, ProxParams{config.lambda, config.p, eta});
  double const eps = config.epsilon_at(k);
  if (config.condition == ErrorCondition::proximal) {
    sel.lhs = distance(v, alpha_prev);
    sel.rhs = eps * distance(sel.beta, alpha_prev);
  } else {
    sel.lhs = distance(v, sel.beta);
    sel.rhs = eps * distance(alpha_prev, sel.beta);
  }
  sel.accepted = sel.lhs <= sel.rhs;
  sel.w = sel.accepted ? sel.beta : alpha_prev;
  return sel;
}

Selection check_and_select(WaveletCoeffs const &v, WaveletCoeffs const &alpha_prev, Problem const &problem,
                           SolverConfig const &config, int k)
{
  return check_and_select(v, alpha_prev, SingleCoilModel(problem), config, k);
}

WaveletCoeffs prior_step(WaveletCoeffs const &w, FidelityModel const &model, SolverConfig const &config)
{
  WaveletCoeffs const point = combine(1.0, w, -config.eta2, model.gradient(w));
  return prox_lp(point, ProxParams{config.lambda, config.p, config.eta2});
}

WaveletCoeffs prior_step(WaveletCoeffs const &w, Problem const &problem, SolverConfig const &config)
{
  return prior_step(w, SingleCoilModel(problem), config);
}

double criticality_residual(WaveletCoeffs const &alpha, FidelityModel const &model, SolverConfig const &config)
{
  return distance(alpha, prior_step(alpha, model, config)) / std::max(1.0, norm(alpha));
}

std::size_t IterateTrace::accepted_count() const
{
  return static_cast<std::size_t>(
    std::count_if(records.begin(), records.end(), [](IterateRecord const &r) { return r.accepted; }));
}

double IterateTrace::acceptance_rate() const
{
  return records.empty() ? 0.0 : static_cast<double>(accepted_count()) / static_cast<double>(records.size());
}

void IterateTrace::write_csv(std::ostream &os) const
{
  auto const opt = [](std::optional<double> const &v) {
    if (!v) { return std::string(); }
    std::ostringstream s;
    s << std::setprecision(17) << *v;
    return s.str();
  };
  os << "k,phi_alpha,phi_w,accepted,step_norm,sq_step,C_k,psnr,rlne\n";
  os << std::setprecision(17);
  for (auto const &r : records) {
    os << r.k << ',' << r.phi_alpha << ',' << r.phi_w << ',' << (r.accepted ? 1 : 0) << ',' << r.step_norm << ','
       << r.sq_step << ',' << r.c_k << ',' << opt(r.psnr) << ',' << opt(r.rlne) << '\n';
  }
}

namespace {

constexpr int max_backtracks = 60;

double slack(double phi) { return 1e-12 * std::max(1.0, std::abs(phi)); }

} // namespace

Reconstruction run_framework(FidelityModel const &model, SolverConfig const &config, DenoiserPlugin &denoiser,
                             RunOptions const &options)
{
  return run_framework(model, model.initial_coeffs(), config, denoiser, options);
}

Reconstruction run_framework(FidelityModel const &model, WaveletCoeffs const &alpha0, SolverConfig const &config,
                             DenoiserPlugin &denoiser, RunOptions const &options)
{
  config.validate();
  double L = std::max(config.lipschitz, model.lipschitz());
  SolverConfig cfg = config.rescaled_for(L);
  bool const backtrack = !model.globally_lipschitz();
  if (cfg.unsafe_steps && (cfg.eta2 * cfg.lipschitz >= 1.0 || cfg.descent_constant(0) <= 0.0)) {
    std::cerr << "warning: step sizes violate eta2 < 1/L_f or C^k > 0; descent guarantees do not apply\n";
  }

  Reconstruction result;
  IterateTrace &trace = result.trace;
  trace.metadata["intensity_normalization"] = "ground truth scaled to peak magnitude 1";
  trace.metadata["psnr_peak"] = "max |reference|";
  trace.metadata["error_condition"] = to_string(cfg.condition);
  trace.metadata["denoiser"] = denoiser.name();
  {
    std::ostringstream s;
    s << std::setprecision(17) << cfg.lipschitz;
    trace.metadata["lipschitz"] = s.str();
  }

  WaveletCoeffs alpha = alpha0;
  double phi = objective(alpha, model, cfg);
  trace.phi_initial = phi;
  trace.stop_reason = "max_iters";

  for (int k = 0; k < cfg.max_iters; ++k) {
    double const sigma = cfg.noise_sigma(k);
    WaveletCoeffs u = model.solve(alpha, cfg.rho);
    WaveletCoeffs v = apply_denoiser(denoiser, u, sigma);

    Selection sel = check_and_select(v, alpha, model, cfg, k);
    double phi_beta = objective(sel.beta, model, cfg);
    if (backtrack) {
      int tries = 0;
      while (sel.accepted && phi_beta > phi - cfg.descent_constant(k) * norm_sq(sel.beta - alpha) + slack(phi)) {
        if (++tries > max_backtracks) {
          sel.accepted = false;
          sel.w = alpha;
          break;
        }
        L *= 2.0;
        cfg = config.rescaled_for(L);
        ++trace.backtracks;
        sel = check_and_select(v, alpha, model, cfg, k);
        phi_beta = objective(sel.beta, model, cfg);
      }
    }
    double const phi_w = sel.accepted ? phi_beta : phi;

    WaveletCoeffs next = prior_step(sel.w, model, cfg);
    double phi_next = objective(next, model, cfg);
    double sq_step = norm_sq(next - sel.w);
    if (backtrack) {
      int tries = 0;
      while (phi_next > phi_w - cfg.prior_constant() * sq_step + slack(phi_w) && tries++ < max_backtracks) {
        L *= 2.0;
        cfg = config.rescaled_for(L);
        ++trace.backtracks;
        next = prior_step(sel.w, model, cfg);
        phi_next = objective(next, model, cfg);
        sq_step = norm_sq(next - sel.w);
      }
    }

    IterateRecord rec;
    rec.k = k + 1;
    rec.phi_prev = phi;
    rec.phi_beta = phi_beta;
    rec.phi_w = phi_w;
    rec.phi_alpha = phi_next;
    rec.accepted = sel.accepted;
    rec.step_norm = distance(sel.beta, alpha);
    rec.sq_step = sq_step;
    rec.c_k = cfg.descent_constant(k);
    rec.prior_constant = cfg.prior_constant();
    rec.epsilon = cfg.epsilon_at(k);
    rec.lipschitz = cfg.lipschitz;
    rec.sigma = sigma;
    // A is orthonormal, so the coefficient change equals the image-domain change.
    double const ref = norm(alpha);
    double const change = distance(next, alpha);
    rec.rel_change = ref > 0.0 ? change / ref : (change == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());

    if (options.observer) {
      IterateState state{k, alpha, std::move(u), std::move(v), sel.beta, sel.w, next, sel.accepted};
      options.observer(state);
    }

    alpha = std::move(next);
    if (options.ground_truth) {
      ComplexImage const x = model.synthesize(alpha);
      rec.psnr = psnr(*options.ground_truth, x);
      rec.rlne = rlne(*options.ground_truth, x);
    }
    trace.records.push_back(rec);

    if (phi_next > phi + 1e-9) {
      trace.stop_reason = "objective_increase";
      break;
    }
    phi = phi_next;
    if (rec.rel_change <= cfg.stop_tol) {
      trace.converged = true;
      trace.stop_reason = "tolerance";
      break;
    }
  }

  trace.criticality = criticality_residual(alpha, model, cfg);
  result.image = model.synthesize(alpha);
  result.coeffs = std::move(alpha);
  return result;
}

Reconstruction reconstruct(Problem const &problem, SolverConfig const &config, DenoiserPlugin &denoiser,
                           RunOptions const &options)
{
  config.validate();
  SingleCoilModel const model(problem);
  return run_framework(model, config, denoiser, options);
}

} // namespace csmri
