#pragma once

// Multi-coil reconstruction. Coil l observes y_l = P F S_l x with a shared mask;
// the solver loop is unchanged, only the fidelity model differs.

#include "csmri/mask.hpp"
#include "csmri/solver.hpp"
#include "csmri/types.hpp"
#include "csmri/wavelet.hpp"

#include <cstdint>
#include <vector>

namespace csmri {

struct SensitivityMaps
{
  std::vector<ComplexImage> maps;

  std::size_t coils() const { return maps.size(); }
  std::size_t rows() const { return maps.empty() ? 0 : maps.front().rows; }
  std::size_t cols() const { return maps.empty() ? 0 : maps.front().cols; }
  /// At least one coil, equal shapes, finite values, sum of squares > 0 at every pixel.
  void validate() const;
  /// sum_l |S_l|^2 per pixel.
  std::vector<double> sum_of_squares() const;
};

/// L unit maps, the single-coil case written as a multi-coil problem.
SensitivityMaps identity_maps(std::size_t rows, std::size_t cols, std::size_t coils = 1);

/// Smooth complex maps: Gaussian lobes centred at evenly spaced points on the image
/// border, each with a seeded linear phase, normalized so sum_l |S_l|^2 = 1.
/// coils = 1 gives the constant map 1.
SensitivityMaps synth_sensitivity_maps(std::size_t rows, std::size_t cols, std::size_t coils, std::uint64_t seed);

struct PIProblem
{
  std::vector<ComplexImage> y; ///< per-coil zero-filled k-space
  SamplingMask mask;
  SensitivityMaps maps;
  int levels = default_wavelet_levels;

  void validate() const;
  std::size_t coils() const { return y.size(); }
  std::size_t rows() const { return mask.rows; }
  std::size_t cols() const { return mask.cols; }
};

PIProblem simulate_pi_problem(ComplexImage const &truth, SamplingMask const &mask, SensitivityMaps const &maps,
                              int levels = default_wavelet_levels);

/// E_l alpha = P F S_l A alpha.
ComplexImage pi_forward_coil(WaveletCoeffs const &alpha, PIProblem const &problem, std::size_t coil);
/// E_l^H k = A^T S_l^H F^H P^T k.
WaveletCoeffs pi_adjoint_coil(ComplexImage const &k, PIProblem const &problem, std::size_t coil);

/// sum_l ||E_l alpha - y_l||^2 / 2
double pi_fidelity_value(WaveletCoeffs const &alpha, PIProblem const &problem);
/// sum_l A^T S_l^H F^H P^T (P F S_l A alpha - y_l)
WaveletCoeffs pi_grad_f(WaveletCoeffs const &alpha, PIProblem const &problem);

enum class PIFidelityMode
{
  /// Per-coil quotient sum_l A^T S_l^H F^H [(P^T y_l + rho F S_l A alpha) / (P^T P + rho I)].
  printed,
  /// argmin_u f(u) + rho/2 ||u - alpha||^2 by conjugate gradients.
  exact
};

std::string to_string(PIFidelityMode mode);
PIFidelityMode parse_pi_mode(std::string const &name);

WaveletCoeffs pi_fidelity_solve(WaveletCoeffs const &alpha, PIProblem const &problem, double rho);
WaveletCoeffs pi_fidelity_solve_exact(WaveletCoeffs const &alpha, PIProblem const &problem, double rho,
                                      double tol = 1e-13, int max_iters = 500);

/// max over pixels of sum_l |S_l|^2, an upper bound on ||sum_l E_l^H E_l||.
double pi_lipschitz_bound(SensitivityMaps const &maps);
/// Power-iteration estimate of ||sum_l E_l^H E_l||.
double pi_estimate_lipschitz(PIProblem const &problem, int iters = 50, std::uint64_t seed = 7);

/// sum_l E_l^H y_l, the start point of the iteration.
WaveletCoeffs pi_zero_filled_coeffs(PIProblem const &problem);
/// sqrt(sum_l |F^H y_l|^2), the sum-of-squares baseline.
ComplexImage zero_filled_sos(PIProblem const &problem);

class PIModel final : public FidelityModel
{
public:
  explicit PIModel(PIProblem const &problem, PIFidelityMode mode = PIFidelityMode::printed);

  double value(WaveletCoeffs const &alpha) const override;
  WaveletCoeffs gradient(WaveletCoeffs const &alpha) const override;
  WaveletCoeffs solve(WaveletCoeffs const &alpha, double rho) const override;
  double lipschitz() const override { return lipschitz_; }
  WaveletCoeffs initial_coeffs() const override;

private:
  PIProblem const &problem_;
  PIFidelityMode mode_;
  double lipschitz_;
};

Reconstruction pi_reconstruct(PIProblem const &problem, SolverConfig const &config, DenoiserPlugin &denoiser,
                              RunOptions const &options = {}, PIFidelityMode mode = PIFidelityMode::printed);

} // namespace csmri
