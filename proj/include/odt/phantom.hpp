#pragma once

#include <array>
#include <cstdint>

#include "odt/volume.hpp"

namespace odt {

/// Random multi-sphere phantom. Spheres are placed fully inside the sphere
/// inscribed in the grid so that every rotated parallel projection sees the
/// whole object.
struct SpherePhantomSpec {
  std::uint64_t seed = 0;
  std::array<int, 2> n_spheres_range{3, 8};
  std::array<double, 2> radius_range_um{0.5, 3.0};
  std::array<double, 2> ri_range{1.36, 1.40};
  Grid3 grid = Grid3::cube(64, 0.1);
  double n_background = 1.337;

  void validate() const;
};

/// Deterministic for a given seed (mt19937_64). Overlaps take the max index.
RIVolume generate_sphere_phantom(const SpherePhantomSpec& spec);

/// Sphere centred on voxel (n/2, n/2, n/2). Boundary voxels are blended by
/// clamp(0.5 - (d - r)/pitch, 0, 1) where d is the centre distance.
RIVolume bead_phantom(const Grid3& grid, double radius_um, double n_bead, double n_background);

}  // namespace odt
