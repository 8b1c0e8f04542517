#include <doctest.h>

#include <algorithm>

#include "odt/error.hpp"
#include "odt/forward_model.hpp"
#include "odt/gp.hpp"
#include "odt/metrics.hpp"
#include "odt/phantom.hpp"
#include "support.hpp"

using namespace odt;

namespace {

const Optics kOptics{};

KSpaceVolume bead_measurement(const RIVolume& bead) {
  const IlluminationSet s = circular_illumination(49, 45.0, kOptics);
  const HologramSet h = simulate_holograms(ri_to_potential(bead, kOptics.wavelength_um), s, 45.0);
  return grid_kspace(h, bead.grid());
}

}  // namespace

TEST_CASE("nonnegativity projection") {
  const Grid3 g = Grid3::cube(8, 0.1);
  const RealField pos = test::random_real(g, 1, 0.0, 2.0);
  const ScatteringPotential same = nonneg_project(pos);
  CHECK(std::equal(same.begin(), same.end(), pos.begin()));

  const ScatteringPotential zero = nonneg_project(RealField(g, -1.0));
  for (double v : zero) CHECK(v == 0.0);

  const RealField x = test::random_real(g, 2);
  const ScatteringPotential once = nonneg_project(x);
  const ScatteringPotential twice = nonneg_project(static_cast<const RealField&>(once));
  CHECK(std::equal(once.begin(), once.end(), twice.begin()));

  ComplexField c(g);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = {x[i], 5.0};
  const ScatteringPotential from_complex = nonneg_project(c);
  CHECK(std::equal(from_complex.begin(), from_complex.end(), once.begin()));
}

TEST_CASE("complete data converges to the projected truth in one iteration") {
  const Grid3 g = Grid3::cube(16, 0.1);
  const RealField q = test::random_real(g, 4, -50.0, 200.0);
  const KSpaceVolume k = fft3_forward(ScatteringPotential(q));
  const RIVolume r = gp_reconstruct(k, GpConfig{1.0, 1}, kOptics);
  const RIVolume expected = potential_to_ri(nonneg_project(q), kOptics.wavelength_um, kOptics.n_medium);
  CHECK(test::max_abs_diff(r, expected) < 1e-8);
}

TEST_CASE("measured samples are restored every iteration") {
  const Grid3 g = Grid3::cube(32, 0.1);
  const KSpaceVolume k = bead_measurement(bead_phantom(g, 0.6, 1.46, kOptics.n_medium));
  int calls = 0;
  double worst = 0.0;
  double most_negative = 0.0;
  std::vector<double> steps;
  gp_reconstruct(k, GpConfig{1.0, 40}, kOptics, [&](const GpIteration& it) {
    ++calls;
    CHECK(it.index == calls);
    for (std::size_t i = 0; i < k.size(); ++i)
      if (k.mask()[i]) worst = std::max(worst, std::abs(it.mixed[i] - k[i]));
    most_negative = std::min(most_negative, *std::min_element(it.object.begin(), it.object.end()));
    steps.push_back(it.step_norm);
  });
  CHECK(calls == 40);
  CHECK(worst <= 1e-9);
  CHECK(most_negative >= 0.0);
  for (std::size_t j = steps.size() - 10; j < steps.size(); ++j) CHECK(steps[j] <= 1.05 * steps[j - 1]);
}

TEST_CASE("GP beats Rytov on the 49-view bead") {
  const Grid3 g = Grid3::cube(64, 0.1);
  const RIVolume bead = bead_phantom(g, 1.0, 1.46, kOptics.n_medium);
  const KSpaceVolume k = bead_measurement(bead);
  const RIVolume rytov = rytov_reconstruct(k, kOptics.wavelength_um, kOptics.n_medium);
  const RIVolume gp = gp_reconstruct(k, GpConfig{}, kOptics);
  CHECK(psnr(gp, bead) > psnr(rytov, bead));
  // The constraint keeps every voxel at or above the medium.
  CHECK(*std::min_element(gp.begin(), gp.end()) >= kOptics.n_medium);
}

TEST_CASE("GP is deterministic") {
  const Grid3 g = Grid3::cube(32, 0.1);
  const KSpaceVolume k = bead_measurement(bead_phantom(g, 0.6, 1.46, kOptics.n_medium));
  const RIVolume a = gp_reconstruct(k, GpConfig{1.0, 10}, kOptics);
  const RIVolume b = gp_reconstruct(k, GpConfig{1.0, 10}, kOptics);
  CHECK(std::equal(a.begin(), a.end(), b.begin()));
}

TEST_CASE("GP validation") {
  const Grid3 g = Grid3::cube(16, 0.1);
  CHECK_THROWS_AS(gp_reconstruct(KSpaceVolume(g), GpConfig{}, kOptics), ValidationError);
  const KSpaceVolume k = fft3_forward(ScatteringPotential(g, 1.0));
  CHECK_THROWS_AS(gp_reconstruct(k, GpConfig{0.0, 40}, kOptics), ValidationError);
  CHECK_THROWS_AS(gp_reconstruct(k, GpConfig{1.5, 40}, kOptics), ValidationError);
  CHECK_THROWS_AS(gp_reconstruct(k, GpConfig{1.0, 0}, kOptics), ValidationError);
}
