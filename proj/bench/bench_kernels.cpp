// Serial reference loops against the OpenMP kernels on a 512x512 grid.

#include "csmri/fft.hpp"
#include "csmri/kernels.hpp"
#include "csmri/random.hpp"
#include "csmri/wavelet.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace k = csmri::kernels;
using csmri::cplx;

namespace {

constexpr std::size_t side = 512;
constexpr std::size_t count = side * side;

struct Data
{
  std::vector<cplx> a, b, out;
  std::vector<std::uint8_t> keep;

  Data()
    : a(count)
    , b(count)
    , out(count)
    , keep(count)
  {
    csmri::Rng rng(1);
    for (std::size_t i = 0; i < count; ++i) {
      a[i] = {rng.normal(), rng.normal()};
      b[i] = {rng.normal(), rng.normal()};
      keep[i] = rng.uniform(0.0, 1.0) < 0.3;
    }
  }
};

Data &data()
{
  static Data d;
  return d;
}

template <bool Parallel>
void BM_combine(benchmark::State &state)
{
  Data &d = data();
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::combine(0.9, d.a, -0.3, d.b, d.out);
    } else {
      k::serial::combine(0.9, d.a, -0.3, d.b, d.out);
    }
    benchmark::DoNotOptimize(d.out.data());
  }
  state.SetItemsProcessed(state.iterations() * count);
}

template <bool Parallel>
void BM_fidelity_merge(benchmark::State &state)
{
  Data &d = data();
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::fidelity_merge(d.a, d.b, d.keep, 5.0, d.out);
    } else {
      k::serial::fidelity_merge(d.a, d.b, d.keep, 5.0, d.out);
    }
    benchmark::DoNotOptimize(d.out.data());
  }
  state.SetItemsProcessed(state.iterations() * count);
}

template <bool Parallel>
void BM_prox_lp(benchmark::State &state)
{
  Data &d = data();
  double const p = state.range(0) / 10.0;
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::prox_lp(d.a, 0.05, p, d.out);
    } else {
      k::serial::prox_lp(d.a, 0.05, p, d.out);
    }
    benchmark::DoNotOptimize(d.out.data());
  }
  state.SetItemsProcessed(state.iterations() * count);
}

template <bool Parallel>
void BM_soft_threshold(benchmark::State &state)
{
  Data &d = data();
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::soft_threshold_parts(d.a, 0.3, d.out);
    } else {
      k::serial::soft_threshold_parts(d.a, 0.3, d.out);
    }
    benchmark::DoNotOptimize(d.out.data());
  }
  state.SetItemsProcessed(state.iterations() * count);
}

template <bool Parallel>
void BM_haar_level(benchmark::State &state)
{
  Data &d = data();
  for (auto _ : state) {
    d.out = d.a;
    if constexpr (Parallel) {
      k::haar_rows_forward(d.out, side, side, side);
      k::haar_cols_forward(d.out, side, side, side);
      k::haar_cols_inverse(d.out, side, side, side);
      k::haar_rows_inverse(d.out, side, side, side);
    } else {
      k::serial::haar_rows_forward(d.out, side, side, side);
      k::serial::haar_cols_forward(d.out, side, side, side);
      k::serial::haar_cols_inverse(d.out, side, side, side);
      k::serial::haar_rows_inverse(d.out, side, side, side);
    }
    benchmark::DoNotOptimize(d.out.data());
  }
  state.SetItemsProcessed(state.iterations() * count);
}

template <bool Parallel>
void BM_norm_sq(benchmark::State &state)
{
  Data &d = data();
  for (auto _ : state) {
    double const s = Parallel ? k::norm_sq(d.a) : k::serial::norm_sq(d.a);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * count);
}

template <bool Parallel>
void BM_lp_sum(benchmark::State &state)
{
  Data &d = data();
  for (auto _ : state) {
    double const s = Parallel ? k::lp_sum(d.a, 0.8) : k::serial::lp_sum(d.a, 0.8);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * count);
}

// Library-level transforms for context; these run on the parallel kernels and FFTW.
void BM_dwt2_roundtrip(benchmark::State &state)
{
  Data &d = data();
  csmri::ComplexImage img(side, side);
  img.data = d.a;
  for (auto _ : state) {
    csmri::ComplexImage const back = csmri::idwt2(csmri::dwt2(img, 3));
    benchmark::DoNotOptimize(back.data.data());
  }
}

void BM_fft2_centered(benchmark::State &state)
{
  Data &d = data();
  csmri::ComplexImage img(side, side);
  img.data = d.a;
  for (auto _ : state) {
    csmri::ComplexImage const f = csmri::fft2_centered(img);
    benchmark::DoNotOptimize(f.data.data());
  }
}

} // namespace

BENCHMARK(BM_combine<false>)->Name("combine/serial");
BENCHMARK(BM_combine<true>)->Name("combine/openmp");
BENCHMARK(BM_fidelity_merge<false>)->Name("fidelity_merge/serial");
BENCHMARK(BM_fidelity_merge<true>)->Name("fidelity_merge/openmp");
BENCHMARK(BM_prox_lp<false>)->Name("prox_lp/serial")->Arg(5)->Arg(8)->Arg(10);
BENCHMARK(BM_prox_lp<true>)->Name("prox_lp/openmp")->Arg(5)->Arg(8)->Arg(10);
BENCHMARK(BM_soft_threshold<false>)->Name("soft_threshold/serial");
BENCHMARK(BM_soft_threshold<true>)->Name("soft_threshold/openmp");
BENCHMARK(BM_haar_level<false>)->Name("haar_level/serial");
BENCHMARK(BM_haar_level<true>)->Name("haar_level/openmp");
BENCHMARK(BM_norm_sq<false>)->Name("norm_sq/serial");
BENCHMARK(BM_norm_sq<true>)->Name("norm_sq/openmp");
BENCHMARK(BM_lp_sum<false>)->Name("lp_sum/serial");
BENCHMARK(BM_lp_sum<true>)->Name("lp_sum/openmp");
BENCHMARK(BM_dwt2_roundtrip)->Name("dwt2_roundtrip");
BENCHMARK(BM_fft2_centered)->Name("fft2_centered");

BENCHMARK_MAIN();
