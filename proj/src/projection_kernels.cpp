#include "odt/kernels/projection_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "odt/error.hpp"

namespace odt::kernels {

PlaneLayout plane_layout(const Grid3& grid, Axis axis) {
  grid.validate_cubic();
  const std::int64_t sx = 1;
  const std::int64_t sy = grid.nx;
  const std::int64_t sz = static_cast<std::int64_t>(grid.nx) * grid.ny;
  switch (axis) {
    case Axis::X: return {grid.nx, sx, sy, sz};
    case Axis::Y: return {grid.nx, sy, sx, sz};
    case Axis::Z: return {grid.nx, sz, sx, sy};
  }
  throw ValidationError("unknown axis");
}

void exact_cos_sin(double angle_deg, double& c, double& s) {
  const double r = std::fmod(angle_deg, 360.0);
  const double a = r < 0 ? r + 360.0 : r;
  if (a == 0.0) { c = 1.0; s = 0.0; return; }
  if (a == 90.0) { c = 0.0; s = 1.0; return; }
  if (a == 180.0) { c = -1.0; s = 0.0; return; }
  if (a == 270.0) { c = 0.0; s = -1.0; return; }
  const double rad = a * std::numbers::pi / 180.0;
  c = std::cos(rad);
  s = std::sin(rad);
}

RayFootprint ray_footprint(const PlaneLayout& layout, double angle_deg) {
  double cs, sn;
  exact_cos_sin(angle_deg, cs, sn);
  const int n = layout.n;
  const double c = n / 2;
  // Half ray length covering the in-plane diagonal.
  const int half = static_cast<int>(std::ceil(n * std::numbers::sqrt2 / 2.0)) + 1;

  RayFootprint fp;
  fp.column_begin.reserve(static_cast<std::size_t>(n) + 1);
  fp.column_begin.push_back(0);
  for (int iu = 0; iu < n; ++iu) {
    const double u = iu - c;
    for (int t = -half; t <= half; ++t) {
      const double p1 = c + u * cs - t * sn;
      const double p2 = c + u * sn + t * cs;
      const int i1 = static_cast<int>(std::floor(p1));
      const int i2 = static_cast<int>(std::floor(p2));
      if (i1 < -1 || i2 < -1 || i1 >= n || i2 >= n) continue;
      const double f1 = p1 - i1;
      const double f2 = p2 - i2;
      for (int d2 = 0; d2 < 2; ++d2) {
        const int j2 = i2 + d2;
        if (j2 < 0 || j2 >= n) continue;
        const double w2 = d2 ? f2 : 1.0 - f2;
        for (int d1 = 0; d1 < 2; ++d1) {
          const int j1 = i1 + d1;
          if (j1 < 0 || j1 >= n) continue;
          const double w = w2 * (d1 ? f1 : 1.0 - f1);
          if (w == 0.0) continue;
          fp.offset.push_back(j1 * layout.stride_e1 + j2 * layout.stride_e2);
          fp.weight.push_back(w);
        }
      }
    }
    fp.column_begin.push_back(static_cast<std::uint32_t>(fp.offset.size()));
  }
  return fp;
}

VoxelFootprint voxel_footprint(const PlaneLayout& layout, double angle_deg) {
  double cs, sn;
  exact_cos_sin(angle_deg, cs, sn);
  const int n = layout.n;
  const double c = n / 2;
  VoxelFootprint fp;
  fp.column.resize(static_cast<std::size_t>(n) * n);
  fp.frac.resize(fp.column.size());
  for (int i2 = 0; i2 < n; ++i2)
    for (int i1 = 0; i1 < n; ++i1) {
      const double u = (i1 - c) * cs + (i2 - c) * sn + c;
      const double col = std::floor(u);
      const std::size_t j = static_cast<std::size_t>(i2) * n + i1;
      fp.column[j] = static_cast<std::int32_t>(std::max(-2.0, std::min(col, double(n))));
      fp.frac[j] = u - col;
    }
  return fp;
}

namespace {

void check_frames(std::span<const double> angles, std::size_t n_frames) {
  if (angles.size() != n_frames) throw ValidationError("angle and frame counts differ");
}

inline void project_row(const double* vol, std::int64_t base, const RayFootprint& fp, int n,
                        double* row) {
  for (int iu = 0; iu < n; ++iu) {
    double acc = 0.0;
    for (std::uint32_t k = fp.column_begin[iu]; k < fp.column_begin[iu + 1]; ++k)
      acc += fp.weight[k] * vol[base + fp.offset[k]];
    row[iu] = acc;
  }
}

inline void backproject_slice(const std::vector<VoxelFootprint>& fps,
                              std::span<const Frame> frames, const std::vector<std::int64_t>& offs,
                              int v, std::int64_t base, double weight, double* vol) {
  const int n = frames.empty() ? 0 : frames[0].width;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const double* row = &frames[k].pixels[static_cast<std::size_t>(v) * n];
    const VoxelFootprint& fp = fps[k];
    for (std::size_t j = 0; j < offs.size(); ++j) {
      const int c0 = fp.column[j];
      const double f = fp.frac[j];
      const double left = (c0 >= 0 && c0 < n) ? row[c0] : 0.0;
      const double right = (c0 + 1 >= 0 && c0 + 1 < n) ? row[c0 + 1] : 0.0;
      vol[base + offs[j]] += weight * ((1.0 - f) * left + f * right);
    }
  }
}

std::vector<std::int64_t> plane_offsets(const PlaneLayout& layout) {
  std::vector<std::int64_t> offs(static_cast<std::size_t>(layout.n) * layout.n);
  for (int i2 = 0; i2 < layout.n; ++i2)
    for (int i1 = 0; i1 < layout.n; ++i1)
      offs[static_cast<std::size_t>(i2) * layout.n + i1] =
          i1 * layout.stride_e1 + i2 * layout.stride_e2;
  return offs;
}

void check_backprojection(std::span<const Frame> frames, std::span<const double> angles,
                          const PlaneLayout& layout, std::size_t volume_size) {
  check_frames(angles, frames.size());
  for (const Frame& f : frames)
    if (f.height != layout.n || f.width != layout.n)
      throw ValidationError("frame dimensions do not match the volume");
  if (volume_size != static_cast<std::size_t>(layout.n) * layout.n * layout.n)
    throw ValidationError("volume size does not match layout");
}

}  // namespace

namespace serial {

void project(std::span<const double> volume, const PlaneLayout& layout,
             std::span<const double> angles_deg, std::span<Frame> frames) {
  check_frames(angles_deg, frames.size());
  const int n = layout.n;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const RayFootprint fp = ray_footprint(layout, angles_deg[k]);
    frames[k] = Frame(n, n);
    for (int v = 0; v < n; ++v)
      project_row(volume.data(), v * layout.stride_axis, fp, n,
                  &frames[k].pixels[static_cast<std::size_t>(v) * n]);
  }
}

void backproject(std::span<const Frame> frames, std::span<const double> angles_deg,
                 const PlaneLayout& layout, double weight, std::span<double> volume) {
  check_backprojection(frames, angles_deg, layout, volume.size());
  std::vector<VoxelFootprint> fps;
  fps.reserve(frames.size());
  for (double a : angles_deg) fps.push_back(voxel_footprint(layout, a));
  const auto offs = plane_offsets(layout);
  for (int v = 0; v < layout.n; ++v)
    backproject_slice(fps, frames, offs, v, v * layout.stride_axis, weight, volume.data());
}

}  // namespace serial

namespace parallel {

void project(std::span<const double> volume, const PlaneLayout& layout,
             std::span<const double> angles_deg, std::span<Frame> frames) {
  check_frames(angles_deg, frames.size());
  const int n = layout.n;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const RayFootprint fp = ray_footprint(layout, angles_deg[k]);
    frames[k] = Frame(n, n);
    double* out = frames[k].pixels.data();
#pragma omp parallel for schedule(static)
    for (int v = 0; v < n; ++v)
      project_row(volume.data(), v * layout.stride_axis, fp, n,
                  out + static_cast<std::size_t>(v) * n);
  }
}

void backproject(std::span<const Frame> frames, std::span<const double> angles_deg,
                 const PlaneLayout& layout, double weight, std::span<double> volume) {
  check_backprojection(frames, angles_deg, layout, volume.size());
  std::vector<VoxelFootprint> fps(frames.size());
  const auto n_angles = static_cast<long>(frames.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n_angles; ++k)
    fps[static_cast<std::size_t>(k)] = voxel_footprint(layout, angles_deg[static_cast<std::size_t>(k)]);
  const auto offs = plane_offsets(layout);
#pragma omp parallel for schedule(static)
  for (int v = 0; v < layout.n; ++v)
    backproject_slice(fps, frames, offs, v, v * layout.stride_axis, weight, volume.data());
}

}  // namespace parallel
}  // namespace odt::kernels
