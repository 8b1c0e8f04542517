#include "odt/phantom.hpp"

#include <algorithm>
#include <cmath>

#include "odt/error.hpp"
#include "odt/rng.hpp"

namespace odt {
namespace {

double half_extent_um(const Grid3& g) {
  return 0.5 * std::min({g.nx, g.ny, g.nz}) * g.pitch_um;
}

}  // namespace

void SpherePhantomSpec::validate() const {
  grid.validate();
  if (n_spheres_range[0] < 0 || n_spheres_range[0] > n_spheres_range[1])
    throw ValidationError("n_spheres_range must satisfy 0 <= min <= max");
  if (!(radius_range_um[0] <= radius_range_um[1]))
    throw ValidationError("radius_range_um must satisfy min <= max");
  if (!(ri_range[0] <= ri_range[1])) throw ValidationError("ri_range must satisfy min <= max");
  if (n_background < 1.0) throw ValidationError("n_background must be >= 1");
  if (n_spheres_range[1] == 0) return;
  if (radius_range_um[0] < 2.0 * grid.pitch_um - 1e-12)
    throw ValidationError("sphere radii must be at least 2 voxels");
  if (radius_range_um[1] > half_extent_um(grid))
    throw ValidationError("sphere radius exceeds half the grid");
  if (ri_range[0] < n_background || ri_range[1] > n_background + 0.2 + 1e-12)
    throw ValidationError("ri_range must lie within [n_background, n_background + 0.2]");
}

RIVolume generate_sphere_phantom(const SpherePhantomSpec& spec) {
  spec.validate();
  const Grid3& g = spec.grid;
  RIVolume vol(g, spec.n_background);
  Rng rng(spec.seed);

  const auto count = rng.uniform_int(spec.n_spheres_range[0], spec.n_spheres_range[1]);
  // Usable radius of the inscribed sphere, one voxel inside the border.
  const double inscribed = half_extent_um(g) - g.pitch_um;

  for (std::int64_t s = 0; s < count; ++s) {
    const double r = rng.uniform(spec.radius_range_um[0], spec.radius_range_um[1]);
    const double ri = rng.uniform(spec.ri_range[0], spec.ri_range[1]);
    const double reach = std::max(inscribed - r, 0.0);
    double cx, cy, cz;
    do {
      cx = rng.uniform(-reach, reach);
      cy = rng.uniform(-reach, reach);
      cz = rng.uniform(-reach, reach);
    } while (reach > 0.0 && cx * cx + cy * cy + cz * cz > reach * reach);

    const double r2 = r * r;
    for (int z = 0; z < g.nz; ++z) {
      const double pz = (z - g.nz / 2) * g.pitch_um - cz;
      if (std::abs(pz) > r) continue;
      for (int y = 0; y < g.ny; ++y) {
        const double py = (y - g.ny / 2) * g.pitch_um - cy;
        if (pz * pz + py * py > r2) continue;
        for (int x = 0; x < g.nx; ++x) {
          const double px = (x - g.nx / 2) * g.pitch_um - cx;
          if (px * px + py * py + pz * pz <= r2) vol(z, y, x) = std::max(vol(z, y, x), ri);
        }
      }
    }
  }
  return vol;
}

RIVolume bead_phantom(const Grid3& grid, double radius_um, double n_bead, double n_background) {
  grid.validate();
  if (!(radius_um > 0.0)) throw ValidationError("bead radius must be positive");
  if (radius_um > half_extent_um(grid)) throw ValidationError("bead radius exceeds half the grid");
  if (n_background < 1.0 || n_bead < 1.0) throw ValidationError("indices must be >= 1");

  RIVolume vol(grid, n_background);
  const double h = grid.pitch_um;
  for (int z = 0; z < grid.nz; ++z)
    for (int y = 0; y < grid.ny; ++y)
      for (int x = 0; x < grid.nx; ++x) {
        const double dx = (x - grid.nx / 2) * h;
        const double dy = (y - grid.ny / 2) * h;
        const double dz = (z - grid.nz / 2) * h;
        const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
        const double frac = std::clamp(0.5 - (d - radius_um) / h, 0.0, 1.0);
        if (frac >= 1.0)
          vol(z, y, x) = n_bead;
        else if (frac > 0.0)
          vol(z, y, x) = n_background + frac * (n_bead - n_background);
      }
  return vol;
}

}  // namespace odt
