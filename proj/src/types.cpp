#include "csmri/types.hpp"

#include "csmri/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace csmri {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace {

void require_positive(std::size_t rows, std::size_t cols)
{
  if (rows == 0 || cols == 0) { throw DimensionError("image dimensions must be positive"); }
}

bool finite(std::span<cplx const> v)
{
  return std::all_of(v.begin(), v.end(), [](cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

} // namespace

ComplexImage::ComplexImage(std::size_t rows_, std::size_t cols_, cplx fill)
  : rows(rows_)
  , cols(cols_)
{
  require_positive(rows, cols);
  data.assign(rows * cols, fill);
}

bool ComplexImage::all_finite() const { return finite(data); }

bool ComplexImage::is_real() const
{
  return std::all_of(data.begin(), data.end(), [](cplx c) { return c.imag() == 0.0; });
}

ComplexImage ComplexImage::from_real(std::size_t rows, std::size_t cols, std::span<double const> values)
{
  if (values.size() != rows * cols) { throw DimensionError("value count does not match rows*cols"); }
  ComplexImage img(rows, cols);
  std::transform(values.begin(), values.end(), img.data.begin(), [](double v) { return cplx{v, 0.0}; });
  return img;
}

WaveletCoeffs::WaveletCoeffs(std::size_t rows_, std::size_t cols_, int levels_, cplx fill)
  : rows(rows_)
  , cols(cols_)
  , levels(levels_)
{
  require_positive(rows, cols);
  if (levels < 1) { throw DimensionError("wavelet levels must be >= 1"); }
  data.assign(rows * cols, fill);
}

bool WaveletCoeffs::all_finite() const { return finite(data); }

void require_same_shape(ComplexImage const &a, ComplexImage const &b, char const *what)
{
  if (!a.same_shape(b)) {
    std::ostringstream os;
    os << what << ": shape " << a.rows << "x" << a.cols << " vs " << b.rows << "x" << b.cols;
    throw DimensionError(os.str());
  }
}

void require_same_shape(WaveletCoeffs const &a, WaveletCoeffs const &b, char const *what)
{
  if (!a.same_shape(b)) {
    std::ostringstream os;
    os << what << ": coefficient shape " << a.rows << "x" << a.cols << "/L" << a.levels << " vs " << b.rows << "x"
       << b.cols << "/L" << b.levels;
    throw DimensionError(os.str());
  }
}

double dot(WaveletCoeffs const &a, WaveletCoeffs const &b)
{
  require_same_shape(a, b, "dot");
  return kernels::dot_re(a.span(), b.span());
}

double norm_sq(WaveletCoeffs const &a) { return kernels::norm_sq(a.span()); }
double norm(WaveletCoeffs const &a) { return std::sqrt(norm_sq(a)); }
double distance(WaveletCoeffs const &a, WaveletCoeffs const &b) { return norm(a - b); }

WaveletCoeffs combine(double a, WaveletCoeffs const &x, double b, WaveletCoeffs const &y)
{
  require_same_shape(x, y, "combine");
  WaveletCoeffs out(x.rows, x.cols, x.levels);
  kernels::combine(a, x.span(), b, y.span(), out.span());
  return out;
}

WaveletCoeffs operator+(WaveletCoeffs const &a, WaveletCoeffs const &b) { return combine(1.0, a, 1.0, b); }
WaveletCoeffs operator-(WaveletCoeffs const &a, WaveletCoeffs const &b) { return combine(1.0, a, -1.0, b); }
WaveletCoeffs operator*(double s, WaveletCoeffs const &a) { return combine(s, a, 0.0, a); }

double dot(ComplexImage const &a, ComplexImage const &b)
{
  require_same_shape(a, b, "dot");
  return kernels::dot_re(a.span(), b.span());
}

double norm_sq(ComplexImage const &a) { return kernels::norm_sq(a.span()); }
double norm(ComplexImage const &a) { return std::sqrt(norm_sq(a)); }
double distance(ComplexImage const &a, ComplexImage const &b) { return norm(a - b); }

ComplexImage combine(double a, ComplexImage const &x, double b, ComplexImage const &y)
{
  require_same_shape(x, y, "combine");
  ComplexImage out(x.rows, x.cols);
  kernels::combine(a, x.span(), b, y.span(), out.span());
  return out;
}

ComplexImage operator+(ComplexImage const &a, ComplexImage const &b) { return combine(1.0, a, 1.0, b); }
ComplexImage operator-(ComplexImage const &a, ComplexImage const &b) { return combine(1.0, a, -1.0, b); }
ComplexImage operator*(double s, ComplexImage const &a) { return combine(s, a, 0.0, a); }

ComplexImage magnitude(ComplexImage const &img)
{
  ComplexImage out(img.rows, img.cols);
  std::transform(img.data.begin(), img.data.end(), out.data.begin(), [](cplx v) { return cplx{std::abs(v), 0.0}; });
  return out;
}

double max_magnitude(ComplexImage const &img)
{
  double m = 0.0;
  for (auto const &v : img.data) { m = std::max(m, std::abs(v)); }
  return m;
}

} // namespace csmri
