#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "odt/error.hpp"
#include "odt/kernels/ssim_kernels.hpp"
#include "odt/metrics.hpp"
#include "odt/phantom.hpp"
#include "support.hpp"

using namespace odt;

namespace {

// Per-voxel SSIM with an explicit 3D window truncated at the border.
double direct_ssim(const RealField& x, const RealField& y, int window, double sigma, double k1,
                   double k2) {
  const Grid3& g = x.grid();
  const int r = window / 2;
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double c1 = std::pow(k1 * (*hi - *lo), 2), c2 = std::pow(k2 * (*hi - *lo), 2);
  double total = 0.0;
  for (int z = 0; z < g.nz; ++z)
    for (int yy = 0; yy < g.ny; ++yy)
      for (int xx = 0; xx < g.nx; ++xx) {
        double w_sum = 0.0, mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
        for (int dz = -r; dz <= r; ++dz)
          for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx) {
              const int pz = z + dz, py = yy + dy, px = xx + dx;
              if (pz < 0 || pz >= g.nz || py < 0 || py >= g.ny || px < 0 || px >= g.nx) continue;
              const double w = std::exp(-0.5 * (dx * dx + dy * dy + dz * dz) / (sigma * sigma));
              const double a = x(pz, py, px), b = y(pz, py, px);
              w_sum += w;
              mx += w * a;
              my += w * b;
              sxx += w * a * a;
              syy += w * b * b;
              sxy += w * a * b;
            }
        mx /= w_sum;
        my /= w_sum;
        const double vx = sxx / w_sum - mx * mx, vy = syy / w_sum - my * my,
                     cov = sxy / w_sum - mx * my;
        total += ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      }
  return total / static_cast<double>(x.size());
}

}  // namespace

TEST_CASE("psnr closed form and sentinel") {
  const Grid3 g = Grid3::cube(8, 0.1);
  RealField ref(g, 0.0);
  ref[0] = 1.0;  // range 1
  RealField test = ref;
  for (auto& v : test) v += 0.1;  // MSE 0.01
  CHECK(psnr(test, ref) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(psnr(ref, ref) == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(psnr(ref, RealField(Grid3::cube(4, 0.1))), ValidationError);
}

TEST_CASE("mse matches a scalar loop") {
  const Grid3 g = Grid3::cube(16, 0.1);
  const RealField a = test::random_real(g, 1), b = test::random_real(g, 2);
  long double s = 0.0L;
  for (int z = 0; z < 16; ++z)
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) s += std::pow(static_cast<long double>(a(z, y, x) - b(z, y, x)), 2);
  CHECK(std::abs(mse(a, b) - static_cast<double>(s / a.size())) <= 1e-12);
}

TEST_CASE("psnr is invariant to a common shift") {
  const Grid3 g = Grid3::cube(8, 0.1);
  const RealField a = test::random_real(g, 3), b = test::random_real(g, 4);
  RealField as = a, bs = b;
  for (auto& v : as) v += 2.0;
  for (auto& v : bs) v += 2.0;
  CHECK(psnr(as, bs) == doctest::Approx(psnr(a, b)).epsilon(1e-10));
}

TEST_CASE("ssim basics") {
  const Grid3 g = Grid3::cube(12, 0.1);
  const RealField a = test::random_real(g, 5);
  CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  RealField shifted = a;
  for (auto& v : shifted) v += 100.0;
  CHECK(ssim(shifted, a) < 0.01);
  const RealField b = test::random_real(g, 6);
  const double s = ssim(b, a);
  CHECK(s >= -1.0);
  CHECK(s <= 1.0);
  CHECK_THROWS_AS(ssim(a, RealField(Grid3::cube(8, 0.1))), ValidationError);
  CHECK_THROWS_AS(ssim(a, a, SsimParams{10, 1.5, 0.01, 0.03}), ValidationError);
}

TEST_CASE("ssim matches a direct windowed implementation") {
  const Grid3 g = Grid3::cube(8, 0.1);
  const RealField a = test::random_real(g, 7);
  RealField b = a;
  const RealField n = test::random_real(g, 8, -0.3, 0.3);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] += n[i];
  CHECK(std::abs(ssim(b, a) - direct_ssim(b, a, 11, 1.5, 0.01, 0.03)) < 1e-6);
  CHECK(std::abs(ssim(b, a, SsimParams{5, 1.0, 0.02, 0.05}) - direct_ssim(b, a, 5, 1.0, 0.02, 0.05)) < 1e-6);
}

TEST_CASE("serial and parallel SSIM agree bitwise") {
  const Grid3 g = Grid3::cube(24, 0.1);
  const RealField a = test::random_real(g, 9), b = test::random_real(g, 10);
  const auto taps = kernels::gaussian_taps(11, 1.5);
  CHECK(kernels::serial::ssim_mean(a, b, taps, 1e-4, 9e-4) ==
        kernels::parallel::ssim_mean(a, b, taps, 1e-4, 9e-4));
  RealField fa(g), fb(g);
  kernels::serial::gaussian_filter3(a, taps, fa);
  kernels::parallel::gaussian_filter3(a, taps, fb);
  CHECK(std::equal(fa.begin(), fa.end(), fb.begin()));
}

TEST_CASE("histogram") {
  const Grid3 g = Grid3::cube(8, 0.1);
  const auto uniform = ri_histogram(RealField(g, 1.40), 10, 1.33, 1.50);
  CHECK(std::count_if(uniform.begin(), uniform.end(), [](std::size_t c) { return c > 0; }) == 1);

  const RIVolume bead = bead_phantom(Grid3::cube(32, 0.1), 1.2, 1.46, 1.337);
  const auto counts = ri_histogram(bead, 50, 1.33, 1.50);
  CHECK(std::accumulate(counts.begin(), counts.end(), std::size_t{0}) == bead.size());
  // Background dominates; the mode over the bead range sits at 1.46.
  const std::size_t lo_bin = static_cast<std::size_t>((1.40 - 1.33) / (0.17 / 50));
  const auto mode = std::max_element(counts.begin() + lo_bin, counts.end()) - counts.begin();
  const double centre = 1.33 + (mode + 0.5) * 0.17 / 50;
  CHECK(std::abs(centre - 1.46) <= 0.17 / 50);

  // Out-of-range values land in the edge bins.
  RealField v(g, 1.0);
  v[1] = 2.0;
  const auto edge = ri_histogram(v, 4, 1.3, 1.5);
  CHECK(edge[0] == v.size() - 1);
  CHECK(edge[3] == 1);

  // Invariant under voxel shuffles.
  RealField r = test::random_real(g, 11, 1.3, 1.5);
  const auto before = ri_histogram(r, 7, 1.3, 1.5);
  std::reverse(r.begin(), r.end());
  CHECK(ri_histogram(r, 7, 1.3, 1.5) == before);

  CHECK_THROWS_AS(ri_histogram(v, 0, 1.3, 1.5), ValidationError);
}

TEST_CASE("line profiles") {
  const Grid3 g = Grid3::cube(32, 0.1);
  const RIVolume bead = bead_phantom(g, 1.0, 1.46, 1.337);
  for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
    const auto p = line_profile(bead, axis);
    REQUIRE(p.size() == 32);
    CHECK(p[16] == 1.46);
    CHECK(p[12] == 1.46);
    CHECK(p[20] == 1.46);
    for (int d = 1; d < 16; ++d) CHECK(std::abs(p[16 + d] - p[16 - d]) <= 1e-3);
  }
  const auto flat = line_profile(RealField(Grid3{10, 12, 14, 0.1}, 1.4), Axis::Y, 3, 5);
  CHECK(flat.size() == 12);
  for (double v : flat) CHECK(v == 1.4);

  RealField idx(Grid3{6, 5, 4, 0.1});
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<double>(i);
  const auto px = line_profile(idx, Axis::X, 2, 3);
  CHECK(px.front() == idx(2, 3, 0));
  const auto pz = line_profile(idx, Axis::Z, 1, 4);
  CHECK(pz.size() == 4);
  CHECK(pz[3] == idx(3, 1, 4));
  CHECK_THROWS_AS(line_profile(idx, Axis::X, 4, 0), ValidationError);
  CHECK_THROWS_AS(line_profile(idx, Axis::Y, 0, -1), ValidationError);
}

TEST_CASE("fwhm") {
  // Triangle of height 2 on background 1: width at 2.0 is exactly 4 samples.
  const std::vector<double> tri = {1, 1, 1.5, 2, 2.5, 3, 2.5, 2, 1.5, 1, 1};
  CHECK(fwhm(tri, 1.0) == doctest::Approx(4.0).epsilon(1e-12));

  std::vector<double> gauss(101);
  const double sigma = 6.0;
  for (int i = 0; i <= 100; ++i) gauss[i] = 0.3 + std::exp(-0.5 * (i - 50) * (i - 50) / (sigma * sigma));
  CHECK(fwhm(gauss, 0.3) == doctest::Approx(2.0 * std::sqrt(2.0 * std::log(2.0)) * sigma).epsilon(2e-3));

  CHECK(fwhm(std::vector<double>(9, 1.0), 1.0) == 0.0);
  CHECK_THROWS_AS(fwhm({1, 2, 3, 3, 3}, 1.0), RuntimeError);
}

TEST_CASE("mask occupancy and spectral energy") {
  const std::vector<std::uint8_t> mask = {1, 0, 1, 1, 0, 0};
  const std::vector<std::uint8_t> region = {1, 1, 0, 1, 0, 1};
  CHECK(mask_occupancy(mask, region) == doctest::Approx(0.5));
  CHECK_THROWS_AS(mask_occupancy(mask, std::vector<std::uint8_t>(6, 0)), ValidationError);

  ComplexField s(Grid3{1, 2, 3, 0.1});
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = {double(i), 1.0};
  CHECK(region_energy(s, region) == doctest::Approx(1 + 2 + 10 + 26));
  const std::vector<std::uint8_t> all(6, 1);
  CHECK(energy_fraction(s, region, all) == doctest::Approx(39.0 / (39.0 + 5 + 17)));
}
