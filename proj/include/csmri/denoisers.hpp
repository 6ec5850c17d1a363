#pragma once

#include "csmri/types.hpp"
#include "csmri/wavelet.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace csmri {

/// The data-driven module. Plugins work in the image domain; the solver feeds them
/// A u and maps the result back with A^T. `sigma` is a noise level in intensity
/// units of a peak-1 image. Implementations must keep the shape, return finite
/// values for finite input and be deterministic for a given call sequence.
class DenoiserPlugin
{
public:
  virtual ~DenoiserPlugin() = default;
  virtual std::string name() const = 0;
  virtual ComplexImage denoise(ComplexImage const &img, double sigma) = 0;
};

/// v = A^T plugin(A u).
WaveletCoeffs apply_denoiser(DenoiserPlugin &plugin, WaveletCoeffs const &u, double sigma);

ComplexImage denoise_identity(ComplexImage const &img, double sigma);

/// Normalized Gaussian kernel with stddev `pixels_per_unit * sigma` pixels, truncated to
/// the disc of radius 3*stddev and applied by FFT circular convolution. Real and
/// imaginary parts are filtered independently (the kernel is real, so this is the
/// complex convolution). sigma = 0 returns the input.
ComplexImage denoise_gaussian(ComplexImage const &img, double sigma, double pixels_per_unit = 10.0);

/// The truncated, renormalized kernel used by denoise_gaussian, centred at (0, 0) with
/// circular wrap. Empty image (rows == 0) when the kernel collapses to a delta.
ComplexImage gaussian_kernel(std::size_t rows, std::size_t cols, double stddev);

/// Soft-thresholds the Haar detail coefficients at tau = factor * sigma, real and
/// imaginary parts separately; the approximation band passes through.
ComplexImage denoise_wavelet_shrink(ComplexImage const &img, double sigma, int levels = default_wavelet_levels,
                                    double factor = 1.0);

/// img plus seeded uniform noise on [-10 sigma, 10 sigma] in both real and imaginary parts.
ComplexImage denoise_adversarial(ComplexImage const &img, double sigma, std::uint64_t seed);

struct DenoiserOptions
{
  int levels = default_wavelet_levels;
  double gaussian_pixels_per_unit = 10.0;
  double shrink_factor = 1.0;
  std::uint64_t seed = 0;
};

class IdentityDenoiser final : public DenoiserPlugin
{
public:
  std::string name() const override { return "identity"; }
  ComplexImage denoise(ComplexImage const &img, double sigma) override { return denoise_identity(img, sigma); }
};

class GaussianDenoiser final : public DenoiserPlugin
{
public:
  explicit GaussianDenoiser(double pixels_per_unit = 10.0)
    : pixels_per_unit_(pixels_per_unit)
  {
  }
  std::string name() const override { return "gaussian"; }
  ComplexImage denoise(ComplexImage const &img, double sigma) override
  {
    return denoise_gaussian(img, sigma, pixels_per_unit_);
  }

private:
  double pixels_per_unit_;
};

class ShrinkDenoiser final : public DenoiserPlugin
{
public:
  explicit ShrinkDenoiser(int levels = default_wavelet_levels, double factor = 1.0)
    : levels_(levels)
    , factor_(factor)
  {
  }
  std::string name() const override { return "shrink"; }
  ComplexImage denoise(ComplexImage const &img, double sigma) override
  {
    return denoise_wavelet_shrink(img, sigma, levels_, factor_);
  }

private:
  int levels_;
  double factor_;
};

/// Deliberately harmful plugin. Call i uses seed + i, so a run is reproducible.
class AdversarialDenoiser final : public DenoiserPlugin
{
public:
  explicit AdversarialDenoiser(std::uint64_t seed)
    : seed_(seed)
  {
  }
  std::string name() const override { return "adversarial"; }
  ComplexImage denoise(ComplexImage const &img, double sigma) override
  {
    return denoise_adversarial(img, sigma, seed_ + calls_++);
  }

private:
  std::uint64_t seed_;
  std::uint64_t calls_ = 0;
};

std::vector<std::string> denoiser_names();

/// identity | gaussian | shrink | adversarial; ParameterError otherwise.
std::unique_ptr<DenoiserPlugin> make_denoiser(std::string_view name, DenoiserOptions const &options = {});

} // namespace csmri
