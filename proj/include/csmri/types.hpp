#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace csmri {

using cplx = std::complex<double>;

/// Shape or size mismatch between operands, or a grid the operator cannot handle.
class DimensionError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Out-of-range scalar parameter (ratio, step size, regularization weight, ...).
class ParameterError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or truncated file.
class FormatError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

bool is_power_of_two(std::size_t n);

/// Row-major 2-D complex array. Carries images and full-grid k-space alike.
struct ComplexImage
{
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<cplx> data;

  ComplexImage() = default;
  ComplexImage(std::size_t rows, std::size_t cols, cplx fill = {});

  std::size_t size() const { return data.size(); }
  cplx &operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  cplx const &operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::span<cplx> span() { return data; }
  std::span<cplx const> span() const { return data; }

  bool same_shape(ComplexImage const &other) const
  {
    return rows == other.rows && cols == other.cols;
  }
  bool all_finite() const;
  bool is_real() const;

  static ComplexImage from_real(std::size_t rows, std::size_t cols, std::span<double const> values);
};

/// Coefficients of the orthonormal multi-level Haar basis, Mallat layout on the image grid.
struct WaveletCoeffs
{
  std::size_t rows = 0;
  std::size_t cols = 0;
  int levels = 1;
  std::vector<cplx> data;

  WaveletCoeffs() = default;
  WaveletCoeffs(std::size_t rows, std::size_t cols, int levels, cplx fill = {});

  std::size_t size() const { return data.size(); }
  std::span<cplx> span() { return data; }
  std::span<cplx const> span() const { return data; }

  bool same_shape(WaveletCoeffs const &other) const
  {
    return rows == other.rows && cols == other.cols && levels == other.levels;
  }
  bool all_finite() const;
};

void require_same_shape(ComplexImage const &a, ComplexImage const &b, char const *what);
void require_same_shape(WaveletCoeffs const &a, WaveletCoeffs const &b, char const *what);

// Vector algebra on coefficient arrays. Inner products are real parts of <a, b>,
// the Euclidean inner product on C^N viewed as R^2N.
double dot(WaveletCoeffs const &a, WaveletCoeffs const &b);
double norm(WaveletCoeffs const &a);
double norm_sq(WaveletCoeffs const &a);
double distance(WaveletCoeffs const &a, WaveletCoeffs const &b);
WaveletCoeffs operator+(WaveletCoeffs const &a, WaveletCoeffs const &b);
WaveletCoeffs operator-(WaveletCoeffs const &a, WaveletCoeffs const &b);
WaveletCoeffs operator*(double s, WaveletCoeffs const &a);
/// a*x + b*y
WaveletCoeffs combine(double a, WaveletCoeffs const &x, double b, WaveletCoeffs const &y);

double dot(ComplexImage const &a, ComplexImage const &b);
double norm(ComplexImage const &a);
double norm_sq(ComplexImage const &a);
double distance(ComplexImage const &a, ComplexImage const &b);
ComplexImage operator+(ComplexImage const &a, ComplexImage const &b);
ComplexImage operator-(ComplexImage const &a, ComplexImage const &b);
ComplexImage operator*(double s, ComplexImage const &a);
ComplexImage combine(double a, ComplexImage const &x, double b, ComplexImage const &y);

ComplexImage magnitude(ComplexImage const &img);
double max_magnitude(ComplexImage const &img);

} // namespace csmri
