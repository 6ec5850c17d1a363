#pragma once

// The four-module iteration: fidelity solve (F), denoiser (N), optimality check (C)
// and l_p proximal-gradient prior step (P), minimizing
//
//   Phi(alpha) = f(alpha) + lambda * sum_i |alpha_i|^p
//
// over wavelet coefficients. Module C accepts the denoised candidate only when the
// momentum proximal-gradient point beta it induces is close enough to the previous
// iterate; together with a step eta2 < 1/L_f in module P this makes Phi(alpha^k)
// nonincreasing whatever the denoiser returns.

#include "csmri/denoisers.hpp"
#include "csmri/problem.hpp"
#include "csmri/types.hpp"

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace csmri {

/// Which distance test module C applies.
enum class ErrorCondition
{
  /// ||v - alpha^k|| <= eps ||beta - alpha^k||, the form the descent bound is proven for.
  proximal,
  /// ||v - beta|| <= eps ||alpha^k - beta||, the alternative printed form.
  printed
};

std::string to_string(ErrorCondition c);
ErrorCondition parse_error_condition(std::string const &name);

struct SolverConfig
{
  double lambda = 1e-2;
  double p = 0.8;
  double rho = 5.0;
  double eta1 = 0.2;
  double eta2 = 0.9;
  double lipschitz = 1.0; ///< L_f the step sizes are paired with
  ErrorCondition condition = ErrorCondition::proximal;
  /// eps^k = eps_fraction * (1/(2 eta1) - L_f/2) / (L_f + |rho - 1/eta1|) unless `epsilon` is set.
  double eps_fraction = 0.9;
  std::optional<double> epsilon;
  int max_iters = 50;
  double stop_tol = 1e-4;
  /// Denoiser noise levels on the 8-bit scale, decayed linearly over max_iters.
  double noise_hi = 49.0;
  double noise_lo = 3.0;
  /// Accept step sizes outside the convergence hypotheses (warns once per run).
  bool unsafe_steps = false;

  /// Throws ParameterError on invalid scalars or when eta2 >= 1/L_f or C^k <= 0
  /// (unless unsafe_steps).
  void validate() const;

  double epsilon_at(int k) const;
  /// C^k = 1/(2 eta1) - L_f/2 - (L_f + |rho - 1/eta1|) eps^k
  double descent_constant(int k) const;
  /// 1/(2 eta2) - L_f/2
  double prior_constant() const;
  /// Denoiser sigma for iteration k in intensity units (level / 255).
  double noise_sigma(int k) const;

  /// Same config for a larger Lipschitz bound: eta1 and eta2 shrink by lipschitz / L.
  SolverConfig rescaled_for(double L) const;
};

/// Smooth part f of the objective together with the pieces modules F, C and P need.
class FidelityModel
{
public:
  virtual ~FidelityModel() = default;

  virtual double value(WaveletCoeffs const &alpha) const = 0;
  virtual WaveletCoeffs gradient(WaveletCoeffs const &alpha) const = 0;
  /// Module F: argmin_u f(u) + rho/2 ||u - alpha||^2 (or the model's closed form for it).
  virtual WaveletCoeffs solve(WaveletCoeffs const &alpha, double rho) const = 0;
  /// Lipschitz bound for the gradient.
  virtual double lipschitz() const = 0;
  /// False when lipschitz() is only a local estimate; the solver then backtracks.
  virtual bool globally_lipschitz() const { return true; }
  virtual WaveletCoeffs initial_coeffs() const = 0;
  virtual ComplexImage synthesize(WaveletCoeffs const &alpha) const { return idwt2(alpha); }
};

class SingleCoilModel final : public FidelityModel
{
public:
  explicit SingleCoilModel(Problem const &problem);

  double value(WaveletCoeffs const &alpha) const override;
  WaveletCoeffs gradient(WaveletCoeffs const &alpha) const override;
  WaveletCoeffs solve(WaveletCoeffs const &alpha, double rho) const override;
  double lipschitz() const override { return 1.0; }
  WaveletCoeffs initial_coeffs() const override;

private:
  Problem const &problem_;
};

/// u = A^T F^H (P^T P + rho I)^-1 (P^T y + rho F A alpha), evaluated bin by bin.
WaveletCoeffs fidelity_solve(WaveletCoeffs const &alpha, Problem const &problem, double rho);

/// Power-iteration estimate of ||P F A||^2.
double estimate_lipschitz(Problem const &problem, int iters = 50, std::uint64_t seed = 7);

double objective(WaveletCoeffs const &alpha, FidelityModel const &model, SolverConfig const &config);
double objective(WaveletCoeffs const &alpha, Problem const &problem, SolverConfig const &config);

struct Selection
{
  WaveletCoeffs w;
  WaveletCoeffs beta;
  bool accepted = false;
  double lhs = 0.0; ///< left side of the distance test
  double rhs = 0.0; ///< right side, eps^k times the reference distance
};

/// Module C at iteration k.
Selection check_and_select(WaveletCoeffs const &v, WaveletCoeffs const &alpha_prev, FidelityModel const &model,
                           SolverConfig const &config, int k = 0);
Selection check_and_select(WaveletCoeffs const &v, WaveletCoeffs const &alpha_prev, Problem const &problem,
                           SolverConfig const &config, int k = 0);

/// Module P: prox_{eta2 lambda |.|^p}(w - eta2 grad f(w)).
WaveletCoeffs prior_step(WaveletCoeffs const &w, FidelityModel const &model, SolverConfig const &config);
WaveletCoeffs prior_step(WaveletCoeffs const &w, Problem const &problem, SolverConfig const &config);

/// ||alpha - prior_step(alpha)|| / max(1, ||alpha||), zero exactly at fixed points.
double criticality_residual(WaveletCoeffs const &alpha, FidelityModel const &model, SolverConfig const &config);

struct IterateState
{
  int k = 0;
  WaveletCoeffs alpha; ///< alpha^k
  WaveletCoeffs u;     ///< u^{k+1}
  WaveletCoeffs v;     ///< v^{k+1}
  WaveletCoeffs beta;  ///< beta^{k+1}
  WaveletCoeffs w;     ///< w^{k+1}
  WaveletCoeffs alpha_next;
  bool accepted = false;
};

struct IterateRecord
{
  int k = 0;                ///< 1-based; the row describes alpha^{k-1} -> alpha^k
  double phi_prev = 0.0;    ///< Phi(alpha^{k-1})
  double phi_beta = 0.0;    ///< Phi(beta^k)
  double phi_w = 0.0;       ///< Phi(w^k)
  double phi_alpha = 0.0;   ///< Phi(alpha^k)
  bool accepted = false;
  double step_norm = 0.0;   ///< ||beta^k - alpha^{k-1}||
  double sq_step = 0.0;     ///< ||alpha^k - w^k||^2
  double c_k = 0.0;
  double prior_constant = 0.0;
  double epsilon = 0.0;
  double lipschitz = 0.0;
  double sigma = 0.0;
  double rel_change = 0.0;
  std::optional<double> psnr;
  std::optional<double> rlne;
};

struct IterateTrace
{
  double phi_initial = 0.0;
  std::vector<IterateRecord> records;
  std::map<std::string, std::string> metadata;
  bool converged = false;
  std::string stop_reason;
  double criticality = 0.0;
  /// Lipschitz raises made by backtracking (only for locally Lipschitz models).
  int backtracks = 0;

  double phi_final() const { return records.empty() ? phi_initial : records.back().phi_alpha; }
  std::size_t accepted_count() const;
  double acceptance_rate() const;

  /// Header k,phi_alpha,phi_w,accepted,step_norm,sq_step,C_k,psnr,rlne; psnr/rlne empty when absent.
  void write_csv(std::ostream &os) const;
};

struct RunOptions
{
  ComplexImage const *ground_truth = nullptr;
  std::function<void(IterateState const &)> observer;
};

struct Reconstruction
{
  ComplexImage image;
  WaveletCoeffs coeffs;
  IterateTrace trace;
};

/// Runs the iteration from model.initial_coeffs() until the relative change of
/// x = A alpha drops to stop_tol or max_iters is reached.
Reconstruction run_framework(FidelityModel const &model, SolverConfig const &config, DenoiserPlugin &denoiser,
                             RunOptions const &options = {});
Reconstruction run_framework(FidelityModel const &model, WaveletCoeffs const &alpha0, SolverConfig const &config,
                             DenoiserPlugin &denoiser, RunOptions const &options = {});

/// Single-coil reconstruction started from zero filling.
Reconstruction reconstruct(Problem const &problem, SolverConfig const &config, DenoiserPlugin &denoiser,
                           RunOptions const &options = {});

} // namespace csmri
