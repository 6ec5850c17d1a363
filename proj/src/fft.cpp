#include "csmri/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace csmri {

namespace {

// FFTW planning is not thread-safe, execution is. Plans are made once per
// (rows, cols, sign) under a lock and reused through the new-array interface.
class PlanCache
{
public:
  static PlanCache &instance()
  {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t rows, std::size_t cols, int sign)
  {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(rows, cols, sign);
    if (auto it = plans_.find(key); it != plans_.end()) { return it->second; }
    std::vector<cplx> in(rows * cols), out(rows * cols);
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols),
                                      reinterpret_cast<fftw_complex *>(in.data()),
                                      reinterpret_cast<fftw_complex *>(out.data()), sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(PlanCache const &) = delete;
  PlanCache &operator=(PlanCache const &) = delete;

private:
  PlanCache() = default;
  ~PlanCache()
  {
    for (auto &[key, plan] : plans_) { fftw_destroy_plan(plan); }
  }

  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

void require_pow2(ComplexImage const &img)
{
  if (!is_power_of_two(img.rows) || !is_power_of_two(img.cols)) {
    throw DimensionError("FFT requires power-of-two dimensions, got " + std::to_string(img.rows) + "x" +
                         std::to_string(img.cols));
  }
}

ComplexImage execute(ComplexImage const &in, int sign)
{
  ComplexImage out(in.rows, in.cols);
  fftw_plan plan = PlanCache::instance().get(in.rows, in.cols, sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex *>(const_cast<cplx *>(in.data.data())),
                   reinterpret_cast<fftw_complex *>(out.data.data()));
  return out;
}

// Swap quadrants; for even sizes fftshift and ifftshift coincide.
ComplexImage shift(ComplexImage const &img)
{
  ComplexImage out(img.rows, img.cols);
  std::size_t const hr = img.rows / 2, hc = img.cols / 2;
  for (std::size_t r = 0; r < img.rows; ++r) {
    std::size_t const rr = (r + hr) % img.rows;
    for (std::size_t c = 0; c < img.cols; ++c) { out(rr, (c + hc) % img.cols) = img(r, c); }
  }
  return out;
}

ComplexImage centered(ComplexImage const &img, int sign)
{
  require_pow2(img);
  ComplexImage out = shift(execute(shift(img), sign));
  double const scale = 1.0 / std::sqrt(static_cast<double>(img.size()));
  for (auto &v : out.data) { v *= scale; }
  return out;
}

} // namespace

ComplexImage fft2_centered(ComplexImage const &img) { return centered(img, FFTW_FORWARD); }
ComplexImage ifft2_centered(ComplexImage const &k) { return centered(k, FFTW_BACKWARD); }

ComplexImage fft2_raw(ComplexImage const &img)
{
  require_pow2(img);
  return execute(img, FFTW_FORWARD);
}

ComplexImage ifft2_raw(ComplexImage const &k)
{
  require_pow2(k);
  return execute(k, FFTW_BACKWARD);
}

} // namespace csmri
