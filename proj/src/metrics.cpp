#include "odt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "odt/error.hpp"
#include "odt/kernels/ssim_kernels.hpp"

namespace odt {

namespace {

void check_same_grid(const RealField& a, const RealField& b) {
  if (!(a.grid() == b.grid()) || a.size() != b.size())
    throw ValidationError("metrics: volumes are on different grids");
  if (a.size() == 0) throw ValidationError("metrics: empty volume");
}

double dynamic_range(const RealField& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

}  // namespace

double mse(const RealField& a, const RealField& b) {
  check_same_grid(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s / static_cast<double>(a.size());
}

double psnr(const RealField& test, const RealField& reference) {
  const double e = mse(test, reference);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  const double peak = dynamic_range(reference);
  return 10.0 * std::log10(peak * peak / e);
}

double ssim(const RealField& test, const RealField& reference, const SsimParams& p) {
  check_same_grid(test, reference);
  const auto taps = kernels::gaussian_taps(p.window, p.sigma);
  const double range = dynamic_range(reference);
  const double c1 = (p.k1 * range) * (p.k1 * range);
  const double c2 = (p.k2 * range) * (p.k2 * range);
  if (c1 == 0.0 && c2 == 0.0) {
    // Constant reference: the ratio is only defined for identical inputs.
    return mse(test, reference) == 0.0 ? 1.0 : 0.0;
  }
  return kernels::parallel::ssim_mean(test, reference, taps, c1, c2);
}

std::vector<std::size_t> ri_histogram(const RealField& v, int bins, double lo, double hi) {
  if (bins < 1) throw ValidationError("histogram needs at least one bin");
  if (!(hi > lo)) throw ValidationError("histogram range must satisfy lo < hi");
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  const double scale = bins / (hi - lo);
  for (double x : v) {
    long b = 0;
    if (x >= hi)
      b = bins - 1;
    else if (x > lo)
      b = std::min<long>(static_cast<long>((x - lo) * scale), bins - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  return counts;
}

std::vector<double> line_profile(const RealField& v, Axis axis, int a, int b) {
  const Grid3& g = v.grid();
  auto in = [](int c, int n) { return c >= 0 && c < n; };
  std::vector<double> out;
  switch (axis) {
    case Axis::X:
      if (!in(a, g.nz) || !in(b, g.ny)) throw ValidationError("line_profile: coords out of range");
      for (int x = 0; x < g.nx; ++x) out.push_back(v(a, b, x));
      break;
    case Axis::Y:
      if (!in(a, g.nz) || !in(b, g.nx)) throw ValidationError("line_profile: coords out of range");
      for (int y = 0; y < g.ny; ++y) out.push_back(v(a, y, b));
      break;
    case Axis::Z:
      if (!in(a, g.ny) || !in(b, g.nx)) throw ValidationError("line_profile: coords out of range");
      for (int z = 0; z < g.nz; ++z) out.push_back(v(z, a, b));
      break;
  }
  return out;
}

std::vector<double> line_profile(const RealField& v, Axis axis) {
  const Grid3& g = v.grid();
  switch (axis) {
    case Axis::X: return line_profile(v, axis, g.nz / 2, g.ny / 2);
    case Axis::Y: return line_profile(v, axis, g.nz / 2, g.nx / 2);
    case Axis::Z: return line_profile(v, axis, g.ny / 2, g.nx / 2);
  }
  return {};
}

double fwhm(const std::vector<double>& p, double background) {
  if (p.size() < 3) throw ValidationError("fwhm: profile too short");
  const auto peak_it = std::max_element(p.begin(), p.end());
  const double half = background + 0.5 * (*peak_it - background);
  const long peak = peak_it - p.begin();
  if (!(*peak_it > background)) return 0.0;

  long l = peak;
  while (l > 0 && p[static_cast<std::size_t>(l - 1)] >= half) --l;
  long r = peak;
  const long n = static_cast<long>(p.size());
  while (r < n - 1 && p[static_cast<std::size_t>(r + 1)] >= half) ++r;
  if (l == 0 || r == n - 1) throw RuntimeError("fwhm: profile does not fall below half maximum");

  auto cross = [&](long inside, long outside) {
    const double a = p[static_cast<std::size_t>(inside)], b = p[static_cast<std::size_t>(outside)];
    return inside + (outside - inside) * (a - half) / (a - b);
  };
  return cross(r, r + 1) - cross(l, l - 1);
}

double mask_occupancy(const std::vector<std::uint8_t>& mask,
                      const std::vector<std::uint8_t>& region) {
  if (mask.size() != region.size()) throw ValidationError("mask_occupancy: size mismatch");
  std::size_t inside = 0, hit = 0;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (region[i]) {
      ++inside;
      if (mask[i]) ++hit;
    }
  if (inside == 0) throw ValidationError("mask_occupancy: empty region");
  return static_cast<double>(hit) / static_cast<double>(inside);
}

double region_energy(const ComplexField& spectrum, const std::vector<std::uint8_t>& region) {
  if (region.size() != spectrum.size()) throw ValidationError("region_energy: size mismatch");
  double e = 0.0;
  for (std::size_t i = 0; i < spectrum.size(); ++i)
    if (region[i]) e += std::norm(spectrum[i]);
  return e;
}

double energy_fraction(const ComplexField& spectrum, const std::vector<std::uint8_t>& region,
                       const std::vector<std::uint8_t>& support) {
  if (region.size() != spectrum.size() || support.size() != spectrum.size())
    throw ValidationError("energy_fraction: size mismatch");
  double in = 0.0, total = 0.0;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const double e = std::norm(spectrum[i]);
    if (support[i]) total += e;
    if (region[i]) in += e;
  }
  return total > 0.0 ? in / total : 0.0;
}

}  // namespace odt
