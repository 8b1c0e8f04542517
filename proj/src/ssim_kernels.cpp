#include "odt/kernels/ssim_kernels.hpp"

#include <cmath>

#include "odt/error.hpp"

namespace odt::kernels {

std::vector<double> gaussian_taps(int window, double sigma) {
  if (window < 1 || window % 2 == 0) throw ValidationError("SSIM window must be odd and >= 1");
  if (!(sigma > 0.0)) throw ValidationError("SSIM sigma must be positive");
  const int r = window / 2;
  std::vector<double> w(static_cast<std::size_t>(window));
  double sum = 0.0;
  for (int j = -r; j <= r; ++j) {
    w[static_cast<std::size_t>(j + r)] = std::exp(-0.5 * j * j / (sigma * sigma));
    sum += w[static_cast<std::size_t>(j + r)];
  }
  for (double& v : w) v /= sum;
  return w;
}

namespace {

// Filters one line of n samples spaced by stride.
void filter_line(const double* in, double* out, int n, std::size_t stride,
                 const std::vector<double>& taps) {
  const int r = static_cast<int>(taps.size()) / 2;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0, wsum = 0.0;
    const int lo = i - r < 0 ? -i : -r;
    const int hi = i + r >= n ? n - 1 - i : r;
    for (int j = lo; j <= hi; ++j) {
      const double w = taps[static_cast<std::size_t>(j + r)];
      acc += w * in[static_cast<std::ptrdiff_t>(i + j) * static_cast<std::ptrdiff_t>(stride)];
      wsum += w;
    }
    out[static_cast<std::size_t>(i) * stride] = acc / wsum;
  }
}

// Pass along one axis; `line` indexes the lines of that axis.
struct AxisPass {
  int n;
  std::size_t stride;
  long lines;
  std::size_t (*offset)(const Grid3&, long);
};

std::size_t off_x(const Grid3& g, long l) { return static_cast<std::size_t>(l) * g.nx; }
std::size_t off_y(const Grid3& g, long l) {
  const long z = l / g.nx, x = l % g.nx;
  return static_cast<std::size_t>(z) * g.ny * g.nx + static_cast<std::size_t>(x);
}
std::size_t off_z(const Grid3&, long l) { return static_cast<std::size_t>(l); }

AxisPass pass(const Grid3& g, int axis) {
  const std::size_t plane = static_cast<std::size_t>(g.nx) * g.ny;
  switch (axis) {
    case 0: return {g.nx, 1, static_cast<long>(g.ny) * g.nz, off_x};
    case 1: return {g.ny, static_cast<std::size_t>(g.nx), static_cast<long>(g.nx) * g.nz, off_y};
    default: return {g.nz, plane, static_cast<long>(plane), off_z};
  }
}

template <bool Parallel>
void filter3(const RealField& in, const std::vector<double>& taps, RealField& out) {
  const Grid3& g = in.grid();
  if (!(out.grid() == g) || out.size() != in.size()) out = RealField(g);
  RealField tmp(g);
  const RealField* src = &in;
  RealField* bufs[3] = {&out, &tmp, &out};
  for (int axis = 0; axis < 3; ++axis) {
    const AxisPass p = pass(g, axis);
    RealField* dst = bufs[axis];
#pragma omp parallel for schedule(static) if (Parallel)
    for (long l = 0; l < p.lines; ++l) {
      const std::size_t o = p.offset(g, l);
      filter_line(src->data() + o, dst->data() + o, p.n, p.stride, taps);
    }
    src = dst;
  }
}

template <bool Parallel>
double ssim_mean_impl(const RealField& x, const RealField& y, const std::vector<double>& taps,
                      double c1, double c2) {
  const Grid3& g = x.grid();
  RealField xx(g), yy(g), xy(g);
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  RealField mx(g), my(g), sxx(g), syy(g), sxy(g);
  filter3<Parallel>(x, taps, mx);
  filter3<Parallel>(y, taps, my);
  filter3<Parallel>(xx, taps, sxx);
  filter3<Parallel>(yy, taps, syy);
  filter3<Parallel>(xy, taps, sxy);

  // Per-slice partial sums, added in slice order for a deterministic result.
  std::vector<double> partial(static_cast<std::size_t>(g.nz), 0.0);
  const std::size_t plane = static_cast<std::size_t>(g.nx) * g.ny;
#pragma omp parallel for schedule(static) if (Parallel)
  for (int z = 0; z < g.nz; ++z) {
    double s = 0.0;
    for (std::size_t i = z * plane; i < (z + 1) * plane; ++i) {
      const double vx = sxx[i] - mx[i] * mx[i];
      const double vy = syy[i] - my[i] * my[i];
      const double cov = sxy[i] - mx[i] * my[i];
      s += ((2.0 * mx[i] * my[i] + c1) * (2.0 * cov + c2)) /
           ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
    }
    partial[static_cast<std::size_t>(z)] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total / static_cast<double>(x.size());
}

}  // namespace

namespace serial {
void gaussian_filter3(const RealField& in, const std::vector<double>& taps, RealField& out) {
  filter3<false>(in, taps, out);
}
double ssim_mean(const RealField& x, const RealField& y, const std::vector<double>& taps,
                 double c1, double c2) {
  return ssim_mean_impl<false>(x, y, taps, c1, c2);
}
}  // namespace serial

namespace parallel {
void gaussian_filter3(const RealField& in, const std::vector<double>& taps, RealField& out) {
  filter3<true>(in, taps, out);
}
double ssim_mean(const RealField& x, const RealField& y, const std::vector<double>& taps,
                 double c1, double c2) {
  return ssim_mean_impl<true>(x, y, taps, c1, c2);
}
}  // namespace parallel

}  // namespace odt::kernels
