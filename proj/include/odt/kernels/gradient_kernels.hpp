#pragma once

// Forward differences with circular boundary and the matching divergence
// (div = -grad^T). Templates so the TV solver can run on complex potentials.

#include <cmath>
#include <complex>
#include <span>

#include "odt/grid.hpp"

namespace odt::kernels {

template <class T>
struct Gradient3 {
  Field3<T> x, y, z;

  explicit Gradient3(const Grid3& g) : x(g), y(g), z(g) {}
};

namespace detail {

template <class T>
inline void grad_slice(const Field3<T>& p, Gradient3<T>& d, int z) {
  const Grid3& g = p.grid();
  const int zp = (z + 1) % g.nz;
  for (int y = 0; y < g.ny; ++y) {
    const int yp = (y + 1) % g.ny;
    for (int x = 0; x < g.nx; ++x) {
      const int xp = (x + 1) % g.nx;
      const T c = p(z, y, x);
      d.x(z, y, x) = p(z, y, xp) - c;
      d.y(z, y, x) = p(z, yp, x) - c;
      d.z(z, y, x) = p(zp, y, x) - c;
    }
  }
}

template <class T>
inline void div_slice(const Gradient3<T>& d, Field3<T>& out, int z) {
  const Grid3& g = out.grid();
  const int zm = (z + g.nz - 1) % g.nz;
  for (int y = 0; y < g.ny; ++y) {
    const int ym = (y + g.ny - 1) % g.ny;
    for (int x = 0; x < g.nx; ++x) {
      const int xm = (x + g.nx - 1) % g.nx;
      out(z, y, x) = (d.x(z, y, x) - d.x(z, y, xm)) + (d.y(z, y, x) - d.y(z, ym, x)) +
                     (d.z(z, y, x) - d.z(zm, y, x));
    }
  }
}

}  // namespace detail

namespace serial {

template <class T>
void grad3(const Field3<T>& p, Gradient3<T>& d) {
  for (int z = 0; z < p.grid().nz; ++z) detail::grad_slice(p, d, z);
}

template <class T>
void div3(const Gradient3<T>& d, Field3<T>& out) {
  for (int z = 0; z < out.grid().nz; ++z) detail::div_slice(d, out, z);
}

}  // namespace serial

namespace parallel {

template <class T>
void grad3(const Field3<T>& p, Gradient3<T>& d) {
  const int nz = p.grid().nz;
#pragma omp parallel for schedule(static)
  for (int z = 0; z < nz; ++z) detail::grad_slice(p, d, z);
}

template <class T>
void div3(const Gradient3<T>& d, Field3<T>& out) {
  const int nz = out.grid().nz;
#pragma omp parallel for schedule(static)
  for (int z = 0; z < nz; ++z) detail::div_slice(d, out, z);
}

}  // namespace parallel

/// Voxelwise isotropic shrinkage d * max(|d| - t, 0) / |d|, with 0/0 -> 0.
template <class T>
void shrink3(Gradient3<T>& d, double t) {
  const std::size_t n = d.x.size();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = std::sqrt(std::norm(d.x[i]) + std::norm(d.y[i]) + std::norm(d.z[i]));
    const double s = mag > t ? (mag - t) / mag : 0.0;
    d.x[i] *= s;
    d.y[i] *= s;
    d.z[i] *= s;
  }
}

}  // namespace odt::kernels
