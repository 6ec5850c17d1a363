#include "csmri/denoisers.hpp"

#include "csmri/fft.hpp"
#include "csmri/kernels.hpp"
#include "csmri/random.hpp"

#include <cmath>

namespace csmri {

WaveletCoeffs apply_denoiser(DenoiserPlugin &plugin, WaveletCoeffs const &u, double sigma)
{
  ComplexImage const in = idwt2(u);
  ComplexImage const out = plugin.denoise(in, sigma);
  if (!out.same_shape(in)) { throw DimensionError("denoiser '" + plugin.name() + "' changed the image shape"); }
  return dwt2(out, u.levels);
}

ComplexImage denoise_identity(ComplexImage const &img, double) { return img; }

ComplexImage gaussian_kernel(std::size_t rows, std::size_t cols, double stddev)
{
  if (!(stddev > 1e-3)) { return {}; }
  ComplexImage k(rows, cols);
  double const radius_sq = 9.0 * stddev * stddev;
  double total = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    double const dr = static_cast<double>(std::min(r, rows - r));
    for (std::size_t c = 0; c < cols; ++c) {
      double const dc = static_cast<double>(std::min(c, cols - c));
      double const d2 = dr * dr + dc * dc;
      if (d2 > radius_sq) { continue; }
      double const w = std::exp(-d2 / (2.0 * stddev * stddev));
      k(r, c) = w;
      total += w;
    }
  }
  for (auto &v : k.data) { v /= total; }
  return k;
}

ComplexImage denoise_gaussian(ComplexImage const &img, double sigma, double pixels_per_unit)
{
  if (sigma < 0.0 || !std::isfinite(sigma)) { throw ParameterError("sigma must be finite and >= 0"); }
  ComplexImage const kernel = gaussian_kernel(img.rows, img.cols, pixels_per_unit * sigma);
  if (kernel.rows == 0) { return img; }
  ComplexImage spectrum = fft2_raw(img);
  ComplexImage const response = fft2_raw(kernel);
  for (std::size_t i = 0; i < spectrum.data.size(); ++i) { spectrum.data[i] *= response.data[i]; }
  ComplexImage out = ifft2_raw(spectrum);
  double const scale = 1.0 / static_cast<double>(out.data.size());
  for (auto &v : out.data) { v *= scale; }
  return out;
}

ComplexImage denoise_wavelet_shrink(ComplexImage const &img, double sigma, int levels, double factor)
{
  if (sigma < 0.0 || !std::isfinite(sigma)) { throw ParameterError("sigma must be finite and >= 0"); }
  WaveletCoeffs c = dwt2(img, levels);
  double const tau = factor * sigma;
  if (tau <= 0.0) { return img; }
  std::size_t const ar = c.rows >> levels;
  std::size_t const ac = c.cols >> levels;
  std::vector<cplx> approx(ar * ac);
  for (std::size_t r = 0; r < ar; ++r) {
    for (std::size_t col = 0; col < ac; ++col) { approx[r * ac + col] = c.data[r * c.cols + col]; }
  }
  kernels::soft_threshold_parts(c.span(), tau, c.span());
  for (std::size_t r = 0; r < ar; ++r) {
    for (std::size_t col = 0; col < ac; ++col) { c.data[r * c.cols + col] = approx[r * ac + col]; }
  }
  return idwt2(c);
}

ComplexImage denoise_adversarial(ComplexImage const &img, double sigma, std::uint64_t seed)
{
  Rng rng(seed);
  double const a = 10.0 * sigma;
  ComplexImage out = img;
  for (auto &v : out.data) {
    double const re = rng.uniform(-a, a);
    double const im = rng.uniform(-a, a);
    v += cplx(re, im);
  }
  return out;
}

std::vector<std::string> denoiser_names() { return {"identity", "gaussian", "shrink", "adversarial"}; }

std::unique_ptr<DenoiserPlugin> make_denoiser(std::string_view name, DenoiserOptions const &options)
{
  if (name == "identity") { return std::make_unique<IdentityDenoiser>(); }
  if (name == "gaussian") { return std::make_unique<GaussianDenoiser>(options.gaussian_pixels_per_unit); }
  if (name == "shrink") { return std::make_unique<ShrinkDenoiser>(options.levels, options.shrink_factor); }
  if (name == "adversarial") { return std::make_unique<AdversarialDenoiser>(options.seed); }
  throw ParameterError("unknown denoiser '" + std::string(name) + "' (identity | gaussian | shrink | adversarial)");
}

} // namespace csmri
