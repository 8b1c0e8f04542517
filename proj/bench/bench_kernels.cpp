// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "odt/kernels/gradient_kernels.hpp"
#include "odt/kernels/projection_kernels.hpp"
#include "odt/kernels/ssim_kernels.hpp"
#include "odt/phantom.hpp"

namespace {

odt::RIVolume bench_volume(int n) {
  return odt::bead_phantom(odt::Grid3::cube(n, 0.1), 0.25 * n * 0.1, 1.46, 1.337);
}

std::vector<double> angles(int count) {
  std::vector<double> a;
  for (int k = 0; k < count; ++k) a.push_back(k * 360.0 / count);
  return a;
}

template <bool Parallel>
void BM_Project(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto v = bench_volume(n);
  const auto layout = odt::kernels::plane_layout(v.grid(), odt::Axis::Y);
  const auto a = angles(32);
  std::vector<odt::Frame> frames(a.size());
  for (auto _ : state) {
    if constexpr (Parallel)
      odt::kernels::parallel::project(v.values(), layout, a, frames);
    else
      odt::kernels::serial::project(v.values(), layout, a, frames);
    benchmark::DoNotOptimize(frames.data());
  }
}

template <bool Parallel>
void BM_Backproject(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto v = bench_volume(n);
  const auto layout = odt::kernels::plane_layout(v.grid(), odt::Axis::Y);
  const auto a = angles(32);
  std::vector<odt::Frame> frames(a.size());
  odt::kernels::serial::project(v.values(), layout, a, frames);
  odt::RealField out(v.grid());
  for (auto _ : state) {
    if constexpr (Parallel)
      odt::kernels::parallel::backproject(frames, a, layout, 0.1, out.values());
    else
      odt::kernels::serial::backproject(frames, a, layout, 0.1, out.values());
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_Gradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto v = bench_volume(n);
  odt::kernels::Gradient3<double> d(v.grid());
  for (auto _ : state) {
    if constexpr (Parallel)
      odt::kernels::parallel::grad3<double>(v, d);
    else
      odt::kernels::serial::grad3<double>(v, d);
    benchmark::DoNotOptimize(d.x.data());
  }
}

template <bool Parallel>
void BM_Ssim(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = bench_volume(n);
  const auto b = odt::bead_phantom(a.grid(), 0.22 * n * 0.1, 1.44, 1.337);
  const auto taps = odt::kernels::gaussian_taps(11, 1.5);
  for (auto _ : state) {
    double s;
    if constexpr (Parallel)
      s = odt::kernels::parallel::ssim_mean(a, b, taps, 1e-6, 1e-5);
    else
      s = odt::kernels::serial::ssim_mean(a, b, taps, 1e-6, 1e-5);
    benchmark::DoNotOptimize(s);
  }
}

}  // namespace

BENCHMARK(BM_Project<false>)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Project<true>)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Backproject<false>)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Backproject<true>)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gradient<false>)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gradient<true>)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Ssim<false>)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Ssim<true>)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
