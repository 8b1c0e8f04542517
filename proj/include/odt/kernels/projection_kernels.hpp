#pragma once

// Rotate-and-sum parallel-beam projector and voxel-driven backprojector.
//
// Rotation about an axis leaves the axis coordinate unchanged, so each frame
// row is a 2D problem inside one slice orthogonal to the axis. In that plane
// (e1, e2) the detector direction at angle a is u = cos(a) e1 + sin(a) e2 and
// the ray direction is r = -sin(a) e1 + cos(a) e2; at a = 0 the ray runs along
// e2. The rotation centre is voxel index n/2.
//
//   axis X: e1 = y, e2 = z      axis Y: e1 = x, e2 = z      axis Z: e1 = x, e2 = y
//
// serial:: and parallel:: compute every output element with the same
// floating-point operation order, so their results are bitwise identical.

#include <cstdint>
#include <span>
#include <vector>

#include "odt/grid.hpp"

namespace odt {

enum class Axis { X, Y, Z };

namespace kernels {

struct PlaneLayout {
  int n = 0;
  std::int64_t stride_axis = 0;
  std::int64_t stride_e1 = 0;
  std::int64_t stride_e2 = 0;
};

PlaneLayout plane_layout(const Grid3& grid, Axis axis);

/// cos/sin of an angle in degrees, exact at multiples of 90.
void exact_cos_sin(double angle_deg, double& c, double& s);

/// Bilinear taps of every detector column for one angle, in CSR form over
/// in-slice voxel offsets.
struct RayFootprint {
  std::vector<std::uint32_t> column_begin;  // width + 1 entries
  std::vector<std::int64_t> offset;
  std::vector<double> weight;
};

RayFootprint ray_footprint(const PlaneLayout& layout, double angle_deg);

/// Detector column and linear weight of every in-slice voxel for one angle.
struct VoxelFootprint {
  std::vector<std::int32_t> column;  // left neighbour, may be -1 or n-1
  std::vector<double> frac;          // weight of column + 1
};

VoxelFootprint voxel_footprint(const PlaneLayout& layout, double angle_deg);

namespace serial {
/// frames[k] receives the projection of `volume` at angles_deg[k].
void project(std::span<const double> volume, const PlaneLayout& layout,
             std::span<const double> angles_deg, std::span<Frame> frames);
/// volume += weight * sum_k backprojection of frames[k].
void backproject(std::span<const Frame> frames, std::span<const double> angles_deg,
                 const PlaneLayout& layout, double weight, std::span<double> volume);
}  // namespace serial

namespace parallel {
void project(std::span<const double> volume, const PlaneLayout& layout,
             std::span<const double> angles_deg, std::span<Frame> frames);
void backproject(std::span<const Frame> frames, std::span<const double> angles_deg,
                 const PlaneLayout& layout, double weight, std::span<double> volume);
}  // namespace parallel

}  // namespace kernels
}  // namespace odt
