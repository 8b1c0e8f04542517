#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "odt/error.hpp"
#include "odt/metrics.hpp"
#include "odt/phantom.hpp"
#include "odt/projection.hpp"
#include "odt/rng.hpp"
#include "support.hpp"

using namespace odt;

namespace {

constexpr double kPi = std::numbers::pi;

// Sum of anisotropic Gaussians, off centre so no symmetry hides a sign error.
RIVolume smooth_phantom(int n) {
  const Grid3 g = Grid3::cube(n, 0.1);
  RIVolume v(g, 1.337);
  const int c = n / 2;
  struct Blob {
    double x, y, z, sx, sy, sz, a;
  };
  const Blob blobs[] = {{3.0, -2.0, 1.5, 4.0, 4.8, 3.2, 0.05},
                        {-4.0, 2.5, -3.0, 3.2, 2.9, 4.2, 0.03}};
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        double s = 0.0;
        for (const Blob& b : blobs) {
          const double dx = (x - c - b.x) / b.sx, dy = (y - c - b.y) / b.sy,
                       dz = (z - c - b.z) / b.sz;
          s += b.a * std::exp(-0.5 * (dx * dx + dy * dy + dz * dz));
        }
        v(z, y, x) += s;
      }
  return v;
}

// Unit vectors (x, y, z) of the rotation axis and the two in-plane directions.
struct Basis {
  double axis[3], e1[3], e2[3];
};

Basis basis(Axis a) {
  switch (a) {
    case Axis::X: return {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    case Axis::Y: return {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}};
    case Axis::Z: return {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}};
  }
  return {};
}

// Centred DFT of the volume contrast at an arbitrary frequency (radians per voxel).
cdouble volume_ft(const RealField& f, const double k[3]) {
  const int n = f.grid().nx, c = n / 2;
  cdouble s = 0.0;
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const double v = f(z, y, x);
        if (v == 0.0) continue;
        s += v * std::polar(1.0, -(k[0] * (x - c) + k[1] * (y - c) + k[2] * (z - c)));
      }
  return s;
}

Frame mirror_columns(const Frame& f) {
  Frame out(f.height, f.width);
  const int c = f.width / 2;
  for (int r = 0; r < f.height; ++r)
    for (int col = 1; col < f.width; ++col) out(r, col) = f(r, 2 * c - col);
  return out;
}

double frame_sum(const Frame& f) {
  double s = 0.0;
  for (double p : f.pixels) s += p;
  return s;
}

double frame_l2(const Frame& f) {
  double s = 0.0;
  for (double p : f.pixels) s += p * p;
  return std::sqrt(s);
}

double frame_l2_diff(const Frame& a, const Frame& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a.pixels[i] - b.pixels[i]) * (a.pixels[i] - b.pixels[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("zero contrast projects to a zero frame") {
  const RIVolume v(Grid3::cube(16, 0.1), 1.337);
  for (double a : {0.0, 33.0, 271.5}) {
    const Frame f = parallel_project(v, Axis::Y, a);
    CHECK(f.height == 16);
    CHECK(f.width == 16);
    for (double p : f.pixels) CHECK(p == 0.0);
  }
}

TEST_CASE("angle zero is the direct sum along the ray") {
  const Grid3 g = Grid3::cube(16, 0.1);
  RIVolume v(g, 1.337);
  const RealField r = test::random_real(g, 5, 0.0, 0.1);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += r[i];
  const RealField c = v.contrast();

  Frame fx(16, 16), fy(16, 16), fz(16, 16);
  for (int z = 0; z < 16; ++z)
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) {
        fx(x, y) += c(z, y, x);  // rows along x, ray along z
        fy(y, x) += c(z, y, x);  // rows along y, ray along z
        fz(z, x) += c(z, y, x);  // rows along z, ray along y
      }
  CHECK(parallel_project(v, Axis::X, 0.0).pixels == fx.pixels);
  CHECK(parallel_project(v, Axis::Y, 0.0).pixels == fy.pixels);
  CHECK(parallel_project(v, Axis::Z, 0.0).pixels == fz.pixels);
}

TEST_CASE("projection obeys the Fourier slice theorem") {
  const int n = 32, c = n / 2;
  const RIVolume v = smooth_phantom(n);
  const RealField contrast = v.contrast();
  Rng rng(2024);
  for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
    const Basis b = basis(axis);
    for (int trial = 0; trial < 5; ++trial) {
      const double angle = rng.uniform(0.0, 360.0);
      const Frame f = parallel_project(v, axis, angle);
      const double ca = std::cos(angle * kPi / 180.0), sa = std::sin(angle * kPi / 180.0);
      double err = 0.0, ref = 0.0;
      for (int kr = -c; kr < c; ++kr)
        for (int ks = -c; ks < c; ++ks) {
          const double wr = 2.0 * kPi * kr / n, ws = 2.0 * kPi * ks / n;
          cdouble p = 0.0;
          for (int row = 0; row < n; ++row)
            for (int col = 0; col < n; ++col)
              p += f(row, col) * std::polar(1.0, -(wr * (row - c) + ws * (col - c)));
          double k[3];
          for (int d = 0; d < 3; ++d) k[d] = wr * b.axis[d] + ws * (ca * b.e1[d] + sa * b.e2[d]);
          const cdouble q = volume_ft(contrast, k);
          err += std::norm(p - q);
          ref += std::norm(q);
        }
      CHECK(std::sqrt(err / ref) <= 0.01);
    }
  }
}

TEST_CASE("schedule angles and frame count") {
  const RIVolume v = bead_phantom(Grid3::cube(16, 0.1), 0.4, 1.46, 1.337);
  const ProjectionStack s = project_schedule(v, Axis::Z);
  REQUIRE(s.frames.size() == 360);
  for (int k = 0; k < 360; ++k) CHECK(s.angles_deg[k] == k);
  CHECK(s.axis == Axis::Z);
  CHECK(s.provenance == Provenance::schedule);
  CHECK(s.pitch_um == 0.1);
  s.validate();

  const ProjectionStack s7 = project_schedule(v, Axis::X, 7);
  CHECK(s7.angles_deg[3] == doctest::Approx(3 * 360.0 / 7).epsilon(1e-15));
  CHECK_THROWS_AS(project_schedule(v, Axis::X, 1), ValidationError);
}

TEST_CASE("a radially symmetric object projects the same at every angle") {
  const int n = 64, c = n / 2;
  const double sigma = 9.0;
  RIVolume smooth(Grid3::cube(n, 0.1), 1.337);
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const double r2 = (x - c) * (x - c) + (y - c) * (y - c) + (z - c) * (z - c);
        smooth(z, y, x) += 0.1 * std::exp(-0.5 * r2 / (sigma * sigma));
      }
  const RIVolume bead = bead_phantom(Grid3::cube(n, 0.1), 1.0, 1.46, 1.337);
  for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
    const ProjectionStack s = project_schedule(smooth, axis, 36);
    const double ref = frame_l2(s.frames[0]);
    for (const Frame& f : s.frames) CHECK(frame_l2_diff(f, s.frames[0]) <= 1e-3 * ref);

    // The voxelised bead edge is not rotationally symmetric on the grid.
    const ProjectionStack b = project_schedule(bead, axis, 36);
    const double bref = frame_l2(b.frames[0]);
    for (const Frame& f : b.frames) CHECK(frame_l2_diff(f, b.frames[0]) <= 2e-2 * bref);
  }
}

TEST_CASE("frame at 180 degrees mirrors the frame at 0") {
  SpherePhantomSpec spec;
  spec.seed = 3;
  spec.grid = Grid3::cube(32, 0.1);
  spec.radius_range_um = {0.3, 0.6};
  const RIVolume v = generate_sphere_phantom(spec);
  for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
    const Frame f0 = parallel_project(v, axis, 0.0);
    const Frame f180 = mirror_columns(parallel_project(v, axis, 180.0));
    CHECK(frame_l2_diff(f0, f180) <= 1e-12 * frame_l2(f0));
    const Frame g = parallel_project(v, axis, 17.0);
    const Frame g180 = mirror_columns(parallel_project(v, axis, 197.0));
    CHECK(frame_l2_diff(g, g180) <= 1e-2 * frame_l2(g));
  }
}

TEST_CASE("rotating the volume shifts the projection angle") {
  SpherePhantomSpec spec;
  spec.seed = 8;
  spec.grid = Grid3::cube(32, 0.1);
  spec.radius_range_um = {0.3, 0.6};
  const RIVolume v = generate_sphere_phantom(spec);
  const int n = 32, c = 16;
  // Quarter turn in the (x, z) plane: new(e1, e2) = old(e2, -e1).
  RIVolume r(v.grid(), v.n_background());
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const int sz = 2 * c - x, sx = z;
        if (sz >= 0 && sz < n) r(z, y, x) = v(sz, y, sx);
      }
  for (double a : {120.0, 95.5, 300.0}) {
    const Frame rotated = parallel_project(r, Axis::Y, a);
    const Frame shifted = parallel_project(v, Axis::Y, a - 90.0);
    CHECK(frame_l2_diff(rotated, shifted) <= 1e-9 * frame_l2(shifted));
  }
}

TEST_CASE("projection preserves mass") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    SpherePhantomSpec spec;
    spec.seed = seed;
    spec.grid = Grid3::cube(32, 0.1);
    spec.radius_range_um = {0.2, 0.8};
    const RIVolume v = generate_sphere_phantom(spec);
    double mass = 0.0;
    for (double c : v.contrast()) mass += c;
    for (Axis axis : {Axis::X, Axis::Y, Axis::Z})
      for (double a : {0.0, 12.5, 45.0, 133.0, 260.0})
        CHECK(std::abs(frame_sum(parallel_project(v, axis, a)) - mass) <= 5e-3 * mass);
  }
}

TEST_CASE("serial and parallel projection kernels agree bitwise") {
  const RIVolume v = generate_sphere_phantom(SpherePhantomSpec{});
  const RealField c = v.contrast();
  const auto layout = kernels::plane_layout(v.grid(), Axis::X);
  std::vector<double> angles;
  for (int k = 0; k < 12; ++k) angles.push_back(k * 29.5);
  std::vector<Frame> a(angles.size()), b(angles.size());
  kernels::serial::project(c.values(), layout, angles, a);
  kernels::parallel::project(c.values(), layout, angles, b);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].pixels == b[k].pixels);

  std::vector<double> va(c.size(), 0.0), vb(c.size(), 0.0);
  kernels::serial::backproject(a, angles, layout, 0.25, va);
  kernels::parallel::backproject(a, angles, layout, 0.25, vb);
  CHECK(va == vb);
}

TEST_CASE("ramp filter removes constants") {
  const Frame f(4, 37, 2.5);
  for (RampWindow w : {RampWindow::none, RampWindow::hann}) {
    const Frame r = ramp_filter(f, w);
    for (double p : r.pixels) CHECK(std::abs(p) < 1e-12);
  }
}

TEST_CASE("ramp filter is linear") {
  Rng rng(9);
  Frame a(5, 48), b(5, 48), s(5, 48);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a.pixels[i] = rng.uniform(-1.0, 1.0);
    b.pixels[i] = rng.uniform(-1.0, 1.0);
    s.pixels[i] = a.pixels[i] + b.pixels[i];
  }
  const Frame ra = ramp_filter(a), rb = ramp_filter(b), rs = ramp_filter(s);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(rs.pixels[i] - ra.pixels[i] - rb.pixels[i]) < 1e-10);
}

TEST_CASE("ramp filter impulse response is the Ram-Lak sequence") {
  const int w = 512, c = w / 2;
  Frame f(1, w);
  f(0, c) = 1.0;
  const Frame r = ramp_filter(f);
  for (int k = -c; k < c; ++k) {
    double expected = 0.0;
    if (k == 0)
      expected = 0.25;
    else if (k % 2 != 0)
      expected = -1.0 / (kPi * kPi * k * k);
    CHECK(std::abs(r(0, c + k) - expected) < 1e-6);
  }
}

TEST_CASE("fbp of a zero stack is the background") {
  ProjectionStack s = project_schedule(RIVolume(Grid3::cube(16, 0.1), 1.4), Axis::Y, 20);
  const RIVolume v = fbp(s, 1.337);
  for (double n : v) CHECK(n == 1.337);
}

TEST_CASE("fbp is linear in the frames") {
  const RIVolume bead = bead_phantom(Grid3::cube(16, 0.1), 0.5, 1.46, 1.337);
  const ProjectionStack s = project_schedule(bead, Axis::Y, 24);
  ProjectionStack d = s;
  for (Frame& f : d.frames)
    for (double& p : f.pixels) p *= 2.0;
  const RealField a = fbp(s, 1.337).contrast();
  const RealField b = fbp(d, 1.337).contrast();
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(b[i] - 2.0 * a[i]) <= 1e-12);
}

TEST_CASE("fbp round trip recovers the bead") {
  const RIVolume bead = bead_phantom(Grid3::cube(64, 0.1), 1.0, 1.46, 1.337);
  double previous = -1e9;
  for (int n_angles : {16, 64, 360}) {
    const double p = psnr(fbp(project_schedule(bead, Axis::Y, n_angles), 1.337), bead);
    CHECK(p > previous);
    previous = p;
  }
  CHECK(previous > 30.0);

  // 180 degrees of coverage reconstructs as well.
  ProjectionStack half = project_schedule(bead, Axis::Y, 360);
  half.angles_deg.resize(180);
  half.frames.resize(180);
  CHECK(psnr(fbp(half, 1.337), bead) > 30.0);
}

TEST_CASE("fbp validation") {
  const RIVolume bead = bead_phantom(Grid3::cube(16, 0.1), 0.5, 1.46, 1.337);
  ProjectionStack s = project_schedule(bead, Axis::Y, 12);
  ProjectionStack bad = s;
  bad.frames[3] = Frame(16, 15);
  CHECK_THROWS_AS(fbp(bad, 1.337), ValidationError);
  bad = s;
  bad.angles_deg[4] += 1.0;
  CHECK_THROWS_AS(fbp(bad, 1.337), ValidationError);
  bad = s;
  bad.angles_deg.resize(6);
  bad.frames.resize(6);
  bad.angles_deg.pop_back();
  bad.frames.pop_back();
  CHECK_THROWS_AS(fbp(bad, 1.337), ValidationError);
  bad = s;
  bad.frames[0].pixels[0] = std::nan("");
  CHECK_THROWS_AS(fbp(bad, 1.337), ValidationError);
}

TEST_CASE("three-axis average") {
  const Grid3 g = Grid3::cube(8, 0.1);
  RIVolume v(g, 1.337);
  const RealField r = test::random_real(g, 11, 0.0, 0.1);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += r[i];
  const RIVolume same = fbp_three_axis(v, v, v);
  CHECK(test::max_abs_diff(same, v) < 1e-15);

  const RIVolume empty(g, 1.337);
  const RealField third = fbp_three_axis(v, empty, empty).contrast();
  const RealField c = v.contrast();
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(third[i] - c[i] / 3.0) < 1e-15);

  RIVolume shifted = v;
  for (auto& n : shifted) n += 0.01;
  const RIVolume mean_shifted = fbp_three_axis(shifted, shifted, shifted);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(mean_shifted[i] - same[i] - 0.01) < 1e-14);

  CHECK_THROWS_AS(fbp_three_axis(v, v, RIVolume(Grid3::cube(16, 0.1), 1.337)), ValidationError);
}
