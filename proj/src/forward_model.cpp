#include "odt/forward_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "odt/error.hpp"

namespace odt {

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

double IlluminationSet::kappa() const {
  return 2.0 * std::numbers::pi * n_medium / wavelength_um;
}

void IlluminationSet::validate() const {
  optics().validate();
  if (directions.empty()) throw ValidationError("illumination set is empty");
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const Vec3& s = directions[i];
    if (std::abs(s.norm() - 1.0) > 1e-12)
      throw ValidationError("illumination directions must be unit vectors");
    if (!(s.z > 0.0)) throw ValidationError("illumination must propagate towards +z");
    for (std::size_t j = 0; j < i; ++j)
      if ((s - directions[j]).norm() < 1e-12)
        throw ValidationError("illumination directions must be distinct");
  }
}

IlluminationSet circular_illumination(int n_views, double tilt_deg, const Optics& optics) {
  optics.validate();
  if (n_views < 1) throw ValidationError("n_views must be >= 1");
  if (!(tilt_deg > 0.0 && tilt_deg < 90.0))
    throw ValidationError("tilt must lie in (0, 90) degrees for transmission");
  IlluminationSet set;
  set.wavelength_um = optics.wavelength_um;
  set.n_medium = optics.n_medium;
  set.na_detection = optics.na;
  const double theta = tilt_deg * std::numbers::pi / 180.0;
  const double st = std::sin(theta);
  const double ct = std::cos(theta);
  set.directions.reserve(static_cast<std::size_t>(n_views));
  for (int m = 0; m < n_views; ++m) {
    const double phi = 2.0 * std::numbers::pi * m / n_views;
    set.directions.push_back({st * std::cos(phi), st * std::sin(phi), ct});
  }
  return set;
}

std::vector<CapSample> ewald_cap_coords(const IlluminationSet& illum, std::size_t view,
                                        const Grid3& grid) {
  if (view >= illum.directions.size()) throw ValidationError("view index out of range");
  const double kappa = illum.kappa();
  const double kmax2 = std::pow(kappa * illum.na_detection, 2);
  const double dkx = 2.0 * std::numbers::pi / (grid.nx * grid.pitch_um);
  const double dky = 2.0 * std::numbers::pi / (grid.ny * grid.pitch_um);
  const Vec3 km = illum.directions[view] * kappa;

  std::vector<CapSample> out;
  for (int r = 0; r < grid.ny; ++r) {
    const double ky = (r - grid.ny / 2) * dky;
    for (int c = 0; c < grid.nx; ++c) {
      const double kx = (c - grid.nx / 2) * dkx;
      const double kt2 = kx * kx + ky * ky;
      if (kt2 > kmax2) continue;
      const double kz = std::sqrt(kappa * kappa - kt2);
      out.push_back({r, c, Vec3{kx, ky, kz} - km});
    }
  }
  return out;
}

namespace {

// Trilinear sample of a centred spectrum at continuous index coordinates;
// neighbours outside the grid contribute zero.
cdouble sample_trilinear(const ComplexField& f, double u, double v, double w) {
  const Grid3& g = f.grid();
  const int x0 = static_cast<int>(std::floor(u));
  const int y0 = static_cast<int>(std::floor(v));
  const int z0 = static_cast<int>(std::floor(w));
  const double fx = u - x0;
  const double fy = v - y0;
  const double fz = w - z0;
  cdouble acc = 0.0;
  for (int dz = 0; dz < 2; ++dz) {
    const int z = z0 + dz;
    if (z < 0 || z >= g.nz) continue;
    const double wz = dz ? fz : 1.0 - fz;
    for (int dy = 0; dy < 2; ++dy) {
      const int y = y0 + dy;
      if (y < 0 || y >= g.ny) continue;
      const double wy = dy ? fy : 1.0 - fy;
      for (int dx = 0; dx < 2; ++dx) {
        const int x = x0 + dx;
        if (x < 0 || x >= g.nx) continue;
        const double wx = dx ? fx : 1.0 - fx;
        acc += (wx * wy * wz) * f(z, y, x);
      }
    }
  }
  return acc;
}

}  // namespace

HologramSet simulate_holograms(const ScatteringPotential& q, const IlluminationSet& illum,
                               double tilt_deg) {
  const Grid3& g = q.grid();
  g.validate_cubic();
  illum.validate();
  const ComplexField spectrum = fft3_forward(to_complex(q));
  const double dk = g.dk();
  const double c = g.center();
  const double hi = g.nx - 1;

  HologramSet h;
  h.illumination = illum;
  h.tilt_deg = tilt_deg;
  h.detector_ny = g.ny;
  h.detector_nx = g.nx;
  h.pitch_um = g.pitch_um;
  h.frames.assign(illum.directions.size(), ComplexFrame(g.ny, g.nx));

  bool aliasing = false;
  const auto n_views = static_cast<long>(illum.directions.size());
#pragma omp parallel for schedule(dynamic) reduction(|| : aliasing)
  for (long m = 0; m < n_views; ++m) {
    ComplexFrame& frame = h.frames[static_cast<std::size_t>(m)];
    for (const CapSample& s : ewald_cap_coords(illum, static_cast<std::size_t>(m), g)) {
      const double u = s.k.x / dk + c;
      const double v = s.k.y / dk + c;
      const double w = s.k.z / dk + c;
      if (u < 0 || v < 0 || w < 0 || u > hi || v > hi || w > hi) {
        aliasing = true;
        continue;
      }
      frame(s.row, s.col) = sample_trilinear(spectrum, u, v, w);
    }
  }
  h.aliasing_warning = aliasing;
  return h;
}

KSpaceVolume grid_kspace(const HologramSet& h, const Grid3& grid) {
  grid.validate_cubic();
  if (h.frames.empty()) throw ValidationError("hologram set is empty");
  if (h.frames.size() != h.illumination.directions.size())
    throw ValidationError("hologram frame count does not match illumination count");
  if (h.detector_nx != grid.nx || h.detector_ny != grid.ny ||
      std::abs(h.pitch_um - grid.pitch_um) > 1e-12 * grid.pitch_um)
    throw ValidationError("hologram detector geometry is inconsistent with the grid");

  KSpaceVolume k(grid);
  std::vector<std::uint32_t> hits(grid.voxels(), 0);
  const double dk = grid.dk();
  const double c = grid.center();
  // Ordered accumulation, view by view, keeps the result schedule-independent.
  for (std::size_t m = 0; m < h.frames.size(); ++m) {
    const ComplexFrame& frame = h.frames[m];
    if (frame.height != grid.ny || frame.width != grid.nx)
      throw ValidationError("hologram frame has wrong dimensions");
    for (const CapSample& s : ewald_cap_coords(h.illumination, m, grid)) {
      const long x = std::lround(s.k.x / dk + c);
      const long y = std::lround(s.k.y / dk + c);
      const long z = std::lround(s.k.z / dk + c);
      if (x < 0 || y < 0 || z < 0 || x >= grid.nx || y >= grid.ny || z >= grid.nz) continue;
      const std::size_t i = k.index(static_cast<int>(z), static_cast<int>(y), static_cast<int>(x));
      k[i] += frame(s.row, s.col);
      ++hits[i];
    }
  }
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (hits[i] == 0) continue;
    k[i] /= static_cast<double>(hits[i]);
    k.mask()[i] = 1;
  }
  return k;
}

RIVolume rytov_reconstruct(const KSpaceVolume& k, double wavelength_um, double n_background) {
  return potential_to_ri(real_part(fft3_inverse(k)), wavelength_um, n_background);
}

std::vector<std::uint8_t> predicted_missing_cone(const Grid3& grid, const IlluminationSet& illum,
                                                 double radius_fraction) {
  grid.validate_cubic();
  illum.validate();
  const double kappa = illum.kappa();
  const double dk = grid.dk();

  // Distinct tilts of the acquisition. A point K lies on some cap of tilt t
  // (any azimuth) iff g_t(K) = |cos t Kz + |K|^2/(2 kappa)| - rho sin t <= 0.
  std::vector<double> tilts;
  for (const Vec3& s : illum.directions) {
    const double t = std::acos(std::clamp(s.z, -1.0, 1.0));
    if (std::none_of(tilts.begin(), tilts.end(), [&](double o) { return std::abs(o - t) < 1e-9; }))
      tilts.push_back(t);
  }
  const double min_tilt = *std::min_element(tilts.begin(), tilts.end());
  const double radius = radius_fraction * kappa * std::sin(min_tilt);
  // Nearest-voxel snapping moves a sample by at most sqrt(3)/2 dk; g is
  // Lipschitz with constant cos t + sin t + |K|/kappa on the ball.
  const double snap = 0.5 * std::sqrt(3.0) * dk;

  std::vector<std::uint8_t> cone(grid.voxels(), 0);
  const int c = grid.center();
  for (int z = 0; z < grid.nz; ++z)
    for (int y = 0; y < grid.ny; ++y)
      for (int x = 0; x < grid.nx; ++x) {
        const double kx = (x - c) * dk, ky = (y - c) * dk, kz = (z - c) * dk;
        const double k2 = kx * kx + ky * ky + kz * kz;
        if (k2 > radius * radius) continue;
        const double rho = std::sqrt(kx * kx + ky * ky);
        bool missing = true;
        for (double t : tilts) {
          const double lipschitz = std::cos(t) + std::sin(t) + (radius + dk) / kappa;
          const double g = std::abs(std::cos(t) * kz + k2 / (2.0 * kappa)) - rho * std::sin(t);
          if (g <= lipschitz * snap) {
            missing = false;
            break;
          }
        }
        cone[static_cast<std::size_t>((z * grid.ny + y) * grid.nx + x)] = missing;
      }
  return cone;
}

std::vector<std::uint8_t> missing_cone_support(const Grid3& grid, const IlluminationSet& illum,
                                               double radius_fraction) {
  grid.validate_cubic();
  illum.validate();
  double min_tilt = std::numbers::pi;
  for (const Vec3& s : illum.directions)
    min_tilt = std::min(min_tilt, std::acos(std::clamp(s.z, -1.0, 1.0)));
  const double radius = radius_fraction * illum.kappa() * std::sin(min_tilt);
  const double dk = grid.dk();
  const int c = grid.center();
  std::vector<std::uint8_t> ball(grid.voxels(), 0);
  for (int z = 0; z < grid.nz; ++z)
    for (int y = 0; y < grid.ny; ++y)
      for (int x = 0; x < grid.nx; ++x) {
        const double k2 = dk * dk * ((x - c) * (x - c) + (y - c) * (y - c) + (z - c) * (z - c));
        ball[static_cast<std::size_t>((z * grid.ny + y) * grid.nx + x)] =
            k2 > 0.0 && k2 <= radius * radius;
      }
  return ball;
}

}  // namespace odt
