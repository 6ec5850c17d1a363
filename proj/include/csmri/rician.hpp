#pragma once

// Reconstruction from k-space of a Rician-corrupted magnitude image
//
//   z = sqrt((x + n1)^2 + n2^2),  y = P F z,
//
// by alternating two runs of the solver: one on the noisy image z (data term plus a
// proximity pull towards the previous z) and one on the clean image x (magnitude
// consistency with the new z given noise fields n1, n2).

#include "csmri/mask.hpp"
#include "csmri/solver.hpp"
#include "csmri/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace csmri {

struct RicianSample
{
  ComplexImage z;
  ComplexImage n1;
  ComplexImage n2;
};

/// n1, n2 iid N(0, sigma^2) per pixel from the seed; z = |x + n1 + i n2| (for real x,
/// sqrt((x + n1)^2 + n2^2)). sigma = 0 gives z = |x|.
RicianSample rician_forward(ComplexImage const &x, double sigma, std::uint64_t seed);

/// Image-domain closed form of the z fidelity module: in k-space, sampled bins
/// (y + rho1 F z + rho2 F x) / (1 + rho1 + rho2), unsampled (rho1 F z + rho2 F x) / (rho1 + rho2).
ComplexImage rician_z_fidelity(ComplexImage const &z_prev, ComplexImage const &x_prev, ComplexImage const &y,
                               SamplingMask const &mask, double rho1, double rho2);

/// F^H (P^T P F z - P^T y) + rho1 (z - z_prev). Lipschitz constant 1 + rho1.
ComplexImage rician_z_grad(ComplexImage const &z, ComplexImage const &y, SamplingMask const &mask,
                           ComplexImage const &z_prev, double rho1);

/// Two-stage algebraic inversion: s = max(|z|^2 - n2^2, 0), result sqrt(s) - n1.
/// Exact when x + n1 >= 0. With `x_ref` the sign of sqrt(s) is chosen per pixel to
/// land closest to x_ref, which also inverts pixels where x + n1 < 0.
ComplexImage rician_x_fidelity(ComplexImage const &z_new, ComplexImage const &n1, ComplexImage const &n2,
                               ComplexImage const *x_ref = nullptr);

/// (x + n1)(1 - |z| / max(sqrt(|x + n1|^2 + n2^2), 1e-12)).
ComplexImage rician_x_grad(ComplexImage const &x, ComplexImage const &z_new, ComplexImage const &n1,
                           ComplexImage const &n2);

/// || |z| - sqrt(|x + n1|^2 + n2^2) ||
double rician_consistency(ComplexImage const &z, ComplexImage const &x, ComplexImage const &n1,
                          ComplexImage const &n2);

enum class NoiseMode
{
  oracle, ///< the simulator's n1, n2
  blind   ///< n1 = 0, n2^2 = max(|z|^2 - |x|^2, 0) / 2 from the current estimates
};

std::string to_string(NoiseMode mode);
NoiseMode parse_noise_mode(std::string const &name);

/// z subproblem: f(z) = ||P F z - y||^2 / 2 + rho1/2 ||z - z_outer||^2 over wavelet
/// coefficients. Module F pulls towards the current inner iterate (rho1) and x_outer (rho2).
class RicianZModel final : public FidelityModel
{
public:
  RicianZModel(ComplexImage const &y, SamplingMask const &mask, ComplexImage z_outer, ComplexImage x_outer,
               double rho1, double rho2, int levels);

  double value(WaveletCoeffs const &alpha) const override;
  WaveletCoeffs gradient(WaveletCoeffs const &alpha) const override;
  WaveletCoeffs solve(WaveletCoeffs const &alpha, double rho) const override;
  double lipschitz() const override { return 1.0 + rho1_; }
  WaveletCoeffs initial_coeffs() const override { return dwt2(z_outer_, levels_); }

private:
  ComplexImage const &y_;
  SamplingMask const &mask_;
  ComplexImage z_outer_;
  ComplexImage x_outer_;
  double rho1_;
  double rho2_;
  int levels_;
};

/// x subproblem: f(x) = || sqrt(|x + n1|^2 + n2^2) - |z| ||^2 / 2. Module F is the
/// two-stage inversion. The gradient is only locally Lipschitz; lipschitz() is the
/// largest curvature at the start point and the solver backtracks from there.
class RicianXModel final : public FidelityModel
{
public:
  RicianXModel(ComplexImage z, ComplexImage n1, ComplexImage n2, ComplexImage x_start, int levels);

  double value(WaveletCoeffs const &alpha) const override;
  WaveletCoeffs gradient(WaveletCoeffs const &alpha) const override;
  WaveletCoeffs solve(WaveletCoeffs const &alpha, double rho) const override;
  double lipschitz() const override { return lipschitz_; }
  bool globally_lipschitz() const override { return false; }
  WaveletCoeffs initial_coeffs() const override { return dwt2(x_start_, levels_); }

private:
  ComplexImage z_;
  ComplexImage n1_;
  ComplexImage n2_;
  ComplexImage x_start_;
  int levels_;
  double lipschitz_;
};

/// Largest |eigenvalue| of the pointwise Hessian of the x-subproblem fidelity at x, at least 1.
double rician_x_curvature(ComplexImage const &x, ComplexImage const &z, ComplexImage const &n1,
                          ComplexImage const &n2);

struct RicianConfig
{
  /// Inner solver settings shared by both subproblems (lambda is replaced per subproblem).
  SolverConfig inner = [] {
    SolverConfig c;
    c.max_iters = 20;
    return c;
  }();
  /// Prior weights on the 8-bit intensity scale; see effective_lambda.
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double rho1 = 0.01;
  double rho2 = 0.01;
  int outer_iters = 10;
  double stop_tol = 1e-4;
  NoiseMode noise = NoiseMode::oracle;
  int levels = 3;

  void validate() const;
  /// lambda * 255^(p - 2): the same prior for images with peak 1 instead of 255.
  double effective_lambda(double lambda) const;
};

struct RicianOuterRecord
{
  int outer = 0;
  double rel_change = 0.0;
  double consistency = 0.0;
  IterateTrace z_trace;
  IterateTrace x_trace;
};

struct RicianResult
{
  ComplexImage x;
  ComplexImage z;
  ComplexImage n1;
  ComplexImage n2;
  std::vector<RicianOuterRecord> outer;
  bool converged = false;
};

/// Oracle noise fields come from `truth_noise` (required in oracle mode).
RicianResult rician_reconstruct(ComplexImage const &y, SamplingMask const &mask, RicianConfig const &config,
                                DenoiserPlugin &denoiser, RicianSample const *truth_noise = nullptr);

/// |F^H y|, the zero-filling-then-magnitude baseline.
ComplexImage rician_baseline(ComplexImage const &y);

} // namespace csmri
