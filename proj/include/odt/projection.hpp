#pragma once

#include <string>
#include <vector>

#include "odt/kernels/projection_kernels.hpp"
#include "odt/volume.hpp"

namespace odt {

enum class Provenance { measured_angles, missing_angles, enhanced, schedule };
enum class RampWindow { none, hann };

std::string to_string(Axis a);
std::string to_string(Provenance p);
Axis parse_axis(const std::string& s);
Provenance parse_provenance(const std::string& s);
RampWindow parse_window(const std::string& s);

/// Parallel-beam projections of the potential contrast around one axis.
/// Frame rows run along the rotation axis, columns along the detector.
struct ProjectionStack {
  Axis axis = Axis::Y;
  std::vector<double> angles_deg;
  std::vector<Frame> frames;
  int height = 0;
  int width = 0;
  double pitch_um = 0.1;
  Provenance provenance = Provenance::schedule;

  /// Frame count matches angles, angles sorted in [0, 360), constant dims,
  /// finite values.
  void validate() const;
  /// Same axis, angles and frame dims.
  bool same_geometry(const ProjectionStack& o) const;
};

/// Rotates the contrast (n - n_background) by -angle about `axis` with
/// bilinear interpolation in each plane normal to `axis` and sums along the
/// fixed ray direction.
Frame parallel_project(const RIVolume& v, Axis axis, double angle_deg);

/// n_angles equiangular projections at k * 360 / n_angles.
ProjectionStack project_schedule(const RIVolume& v, Axis axis, int n_angles = 360);

/// Ram-Lak ramp filter along each row. Rows are edge-extended to a power of
/// two >= 2 * width before circular filtering; the zero frequency is removed.
Frame ramp_filter(const Frame& frame, RampWindow window = RampWindow::none);

/// Filtered backprojection of an equiangular stack over 180 or 360 degrees.
RIVolume fbp(const ProjectionStack& stack, double n_background,
             RampWindow window = RampWindow::none);

/// Voxelwise mean of three reconstructions on the same grid.
RIVolume fbp_three_axis(const RIVolume& vx, const RIVolume& vy, const RIVolume& vz);

}  // namespace odt
