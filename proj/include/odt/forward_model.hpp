#pragma once

#include <cstdint>
#include <vector>

#include "odt/volume.hpp"

namespace odt {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

/// Plane-wave illuminations of one acquisition.
struct IlluminationSet {
  double wavelength_um = 0.532;
  double n_medium = 1.337;
  double na_detection = 0.9;
  std::vector<Vec3> directions;

  /// In-medium wavenumber 2*pi*n_m/lambda (rad/um).
  double kappa() const;
  Optics optics() const { return {wavelength_um, n_medium, na_detection}; }
  /// Unit length, s_z > 0, pairwise distinct.
  void validate() const;
};

/// Per-view detector-plane spectra. Pixel (r, c) of a frame holds the sample at
/// transverse frequency ((c - nx/2) dk, (r - ny/2) dk) of that view's cap.
struct HologramSet {
  IlluminationSet illumination;
  double tilt_deg = 0.0;
  int detector_ny = 0;
  int detector_nx = 0;
  double pitch_um = 0.1;
  std::vector<ComplexFrame> frames;
  /// Set when some cap coordinates fall outside the grid's frequency range.
  bool aliasing_warning = false;

  Grid3 grid() const { return Grid3::cube(detector_nx, pitch_um); }
};

/// s_m = (sin t cos p_m, sin t sin p_m, cos t), p_m = 2 pi m / n_views.
IlluminationSet circular_illumination(int n_views, double tilt_deg, const Optics& optics);

struct CapSample {
  int row = 0;
  int col = 0;
  /// Object-frequency coordinate K = k - kappa s_m in rad/um.
  Vec3 k;
};

/// Detector pixels inside the detection NA and their Ewald-cap coordinates.
std::vector<CapSample> ewald_cap_coords(const IlluminationSet& illum, std::size_t view,
                                        const Grid3& grid);

/// Samples the potential's spectrum on each view's cap (complex trilinear).
HologramSet simulate_holograms(const ScatteringPotential& q, const IlluminationSet& illum,
                               double tilt_deg);

/// Nearest-voxel gridding with hit averaging; the mask marks hit voxels.
KSpaceVolume grid_kspace(const HologramSet& h, const Grid3& grid);

/// Direct inversion of the zero-filled k-space.
RIVolume rytov_reconstruct(const KSpaceVolume& k, double wavelength_um, double n_background);

/// Voxels of the centred k-space grid that no Ewald cap of the acquisition's
/// tilt family can reach, even after nearest-voxel snapping, restricted to
/// |K| <= radius_fraction * kappa * sin(tilt). This is the missing cone.
std::vector<std::uint8_t> predicted_missing_cone(const Grid3& grid, const IlluminationSet& illum,
                                                 double radius_fraction = 1.0);

/// Voxels with 0 < |K| <= radius_fraction * kappa * sin(tilt): the ball the
/// missing cone is cut from, without the DC voxel.
std::vector<std::uint8_t> missing_cone_support(const Grid3& grid, const IlluminationSet& illum,
                                               double radius_fraction = 1.0);

}  // namespace odt
