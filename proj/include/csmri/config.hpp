#pragma once

#include "csmri/parallel_imaging.hpp"
#include "csmri/rician.hpp"
#include "csmri/solver.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

namespace csmri {

inline constexpr char const *version_string = "csmri 0.1.0";

/// Everything a reconstruction command can be configured with.
struct Settings
{
  SolverConfig solver;
  std::string denoiser = "shrink";
  DenoiserOptions denoiser_options;
  PIFidelityMode pi_mode = PIFidelityMode::printed;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double rho1 = 0.01;
  double rho2 = 0.01;
  int outer_iters = 10;
  int inner_iters = 20;
  NoiseMode noise_mode = NoiseMode::oracle;

  RicianConfig rician() const;
};

using KeyValues = std::map<std::string, std::string>;

/// key = value lines; '#' starts a comment, blank lines are skipped.
/// Throws ParameterError on malformed lines or repeated keys.
KeyValues parse_key_values(std::istream &is);
KeyValues read_config_file(std::filesystem::path const &path);

/// Applies known keys over `settings`; ParameterError on unknown keys or bad values.
///   lambda p rho eta1 eta2 lipschitz eps_mode epsilon eps_fraction max_iters stop_tol
///   denoiser noise_hi noise_lo unsafe_steps levels gaussian_ppu shrink_factor
///   pi_mode lambda1 lambda2 rho1 rho2 outer_iters inner_iters noise_mode
void apply_settings(KeyValues const &values, Settings &settings);

/// The resolved settings as key/value pairs (round-trips through apply_settings).
KeyValues settings_to_values(Settings const &settings);

} // namespace csmri
