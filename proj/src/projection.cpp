#include "odt/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "odt/error.hpp"
#include "odt/fft.hpp"

namespace odt {

std::string to_string(Axis a) {
  switch (a) {
    case Axis::X: return "X";
    case Axis::Y: return "Y";
    case Axis::Z: return "Z";
  }
  return "?";
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::measured_angles: return "measured_angles";
    case Provenance::missing_angles: return "missing_angles";
    case Provenance::enhanced: return "enhanced";
    case Provenance::schedule: return "schedule";
  }
  return "?";
}

Axis parse_axis(const std::string& s) {
  if (s == "X" || s == "x") return Axis::X;
  if (s == "Y" || s == "y") return Axis::Y;
  if (s == "Z" || s == "z") return Axis::Z;
  throw ValidationError("unknown axis '" + s + "'");
}

Provenance parse_provenance(const std::string& s) {
  for (auto p : {Provenance::measured_angles, Provenance::missing_angles, Provenance::enhanced,
                 Provenance::schedule})
    if (to_string(p) == s) return p;
  throw ValidationError("unknown provenance '" + s + "'");
}

RampWindow parse_window(const std::string& s) {
  if (s == "none") return RampWindow::none;
  if (s == "hann") return RampWindow::hann;
  throw ValidationError("unknown ramp window '" + s + "'");
}

void ProjectionStack::validate() const {
  if (frames.size() != angles_deg.size())
    throw ValidationError("projection stack: frame count differs from angle count");
  if (height < 1 || width < 1) throw ValidationError("projection stack: empty frame dims");
  if (!(pitch_um > 0.0)) throw ValidationError("projection stack: pitch must be positive");
  for (std::size_t i = 0; i < angles_deg.size(); ++i) {
    const double a = angles_deg[i];
    if (!(a >= 0.0 && a < 360.0)) throw ValidationError("projection stack: angle outside [0, 360)");
    if (i > 0 && !(a > angles_deg[i - 1]))
      throw ValidationError("projection stack: angles must be strictly increasing");
  }
  for (const Frame& f : frames) {
    if (f.height != height || f.width != width)
      throw ValidationError("projection stack: inconsistent frame dims");
    for (double p : f.pixels)
      if (!std::isfinite(p)) throw ValidationError("projection stack: non-finite frame value");
  }
}

bool ProjectionStack::same_geometry(const ProjectionStack& o) const {
  return axis == o.axis && angles_deg == o.angles_deg && height == o.height &&
         width == o.width && frames.size() == o.frames.size();
}

Frame parallel_project(const RIVolume& v, Axis axis, double angle_deg) {
  const auto layout = kernels::plane_layout(v.grid(), axis);
  const RealField contrast = v.contrast();
  Frame frame;
  const double angles[1] = {angle_deg};
  kernels::parallel::project(contrast.values(), layout, angles, std::span<Frame>(&frame, 1));
  return frame;
}

ProjectionStack project_schedule(const RIVolume& v, Axis axis, int n_angles) {
  if (n_angles < 2) throw ValidationError("projection schedule needs at least 2 angles");
  const auto layout = kernels::plane_layout(v.grid(), axis);
  ProjectionStack stack;
  stack.axis = axis;
  stack.height = stack.width = layout.n;
  stack.pitch_um = v.grid().pitch_um;
  stack.provenance = Provenance::schedule;
  stack.angles_deg.resize(static_cast<std::size_t>(n_angles));
  for (int k = 0; k < n_angles; ++k) stack.angles_deg[k] = k * (360.0 / n_angles);
  stack.frames.resize(stack.angles_deg.size());
  const RealField contrast = v.contrast();
  kernels::parallel::project(contrast.values(), layout, stack.angles_deg, stack.frames);
  return stack;
}

namespace {

class RampKernel {
 public:
  RampKernel(int width, RampWindow window) : width_(width) {
    padded_ = 1;
    while (padded_ < 2 * width) padded_ *= 2;
    // Spatial Ram-Lak kernel for unit detector spacing, circularly indexed.
    std::vector<cdouble> h(static_cast<std::size_t>(padded_), 0.0);
    h[0] = 0.25;
    double sum = 0.25;
    for (int n = 1; n < padded_ / 2; n += 2) {
      const double v = -1.0 / (std::numbers::pi * std::numbers::pi * n * n);
      h[static_cast<std::size_t>(n)] = v;
      h[static_cast<std::size_t>(padded_ - n)] = v;
      sum += 2.0 * v;
    }
    // The truncated kernel has a small positive sum (the missing -1/(pi n)^2
    // tails). Put the opposite mass on lag P/2, which never couples two
    // samples of the same row, so the DC response is zero while rows padded
    // with zeros are still convolved exactly.
    h[static_cast<std::size_t>(padded_ / 2)] = -sum;
    std::vector<cdouble> spectrum(h.size());
    fft::dft1(h, spectrum, fft::Direction::forward);
    response_.resize(h.size());
    for (int k = 0; k < padded_; ++k) {
      double r = spectrum[static_cast<std::size_t>(k)].real();
      if (window == RampWindow::hann) {
        const int signed_k = k <= padded_ / 2 ? k : k - padded_;
        r *= 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * signed_k / padded_));
      }
      response_[static_cast<std::size_t>(k)] = r / padded_;
    }
    response_[0] = 0.0;
  }

  void apply(const double* in, double* out) const {
    std::vector<cdouble> buf(static_cast<std::size_t>(padded_));
    std::vector<cdouble> spec(buf.size());
    for (int i = 0; i < width_; ++i) buf[static_cast<std::size_t>(i)] = in[i];
    // Right half of the padding repeats the last sample, the wrapped left
    // half repeats the first.
    const int right = width_ + (padded_ - width_) / 2;
    for (int i = width_; i < right; ++i) buf[static_cast<std::size_t>(i)] = in[width_ - 1];
    for (int i = right; i < padded_; ++i) buf[static_cast<std::size_t>(i)] = in[0];
    fft::dft1(buf, spec, fft::Direction::forward);
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= response_[k];
    fft::dft1(spec, buf, fft::Direction::backward);
    for (int i = 0; i < width_; ++i) out[i] = buf[static_cast<std::size_t>(i)].real();
  }

 private:
  int width_;
  int padded_;
  std::vector<double> response_;
};

void filter_frame(const RampKernel& kernel, const Frame& in, Frame& out) {
  out = Frame(in.height, in.width);
  for (int r = 0; r < in.height; ++r)
    kernel.apply(&in.pixels[static_cast<std::size_t>(r) * in.width],
                 &out.pixels[static_cast<std::size_t>(r) * in.width]);
}

}  // namespace

Frame ramp_filter(const Frame& frame, RampWindow window) {
  if (frame.width < 1) return frame;
  for (double p : frame.pixels)
    if (!std::isfinite(p)) throw ValidationError("ramp_filter: non-finite input");
  const RampKernel kernel(frame.width, window);
  Frame out;
  filter_frame(kernel, frame, out);
  return out;
}

RIVolume fbp(const ProjectionStack& stack, double n_background, RampWindow window) {
  stack.validate();
  const std::size_t n_angles = stack.angles_deg.size();
  if (n_angles < 2) throw ValidationError("fbp needs at least 2 angles");
  if (stack.height != stack.width) throw ValidationError("fbp needs square frames");

  const double step = stack.angles_deg[1] - stack.angles_deg[0];
  for (std::size_t k = 1; k < n_angles; ++k)
    if (std::abs(stack.angles_deg[k] - stack.angles_deg[0] - k * step) > 1e-6)
      throw ValidationError("fbp needs equiangular projections");
  const double span = step * static_cast<double>(n_angles);
  double weight;
  if (std::abs(span - 360.0) < 1e-6)
    weight = step * std::numbers::pi / 180.0 / 2.0;  // = pi / n_angles
  else if (std::abs(span - 180.0) < 1e-6)
    weight = step * std::numbers::pi / 180.0;
  else
    throw ValidationError("fbp needs angles covering 180 or 360 degrees");

  const RampKernel kernel(stack.width, window);
  std::vector<Frame> filtered(n_angles);
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < static_cast<long>(n_angles); ++k)
    filter_frame(kernel, stack.frames[static_cast<std::size_t>(k)],
                 filtered[static_cast<std::size_t>(k)]);

  const Grid3 grid = Grid3::cube(stack.width, stack.pitch_um);
  RealField contrast(grid, 0.0);
  kernels::parallel::backproject(filtered, stack.angles_deg, kernels::plane_layout(grid, stack.axis),
                                 weight, contrast.values());
  RIVolume out(grid, n_background);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = n_background + contrast[i];
  return out;
}

RIVolume fbp_three_axis(const RIVolume& vx, const RIVolume& vy, const RIVolume& vz) {
  if (!(vx.grid() == vy.grid()) || !(vy.grid() == vz.grid()))
    throw ValidationError("fbp_three_axis: grid mismatch");
  RIVolume out(vx.grid(), vx.n_background());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (vx[i] + vy[i] + vz[i]) / 3.0;
  return out;
}

}  // namespace odt
