#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace odt {

using cdouble = std::complex<double>;

/// Regular voxel grid with isotropic pitch. Arrays over a grid are stored
/// z-major: z slowest, x fastest.
struct Grid3 {
  int nx = 0;
  int ny = 0;
  int nz = 0;
  double pitch_um = 0.1;

  static Grid3 cube(int n, double pitch_um) { return {n, n, n, pitch_um}; }

  std::size_t voxels() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }
  bool is_cubic() const { return nx == ny && ny == nz; }
  int n() const { return nx; }
  int center() const { return nx / 2; }

  /// Spacing of the DFT frequency lattice in rad/um (cubic grids).
  double dk() const;

  /// Throws ValidationError unless every extent is >= 8 and pitch > 0.
  void validate() const;
  /// validate() plus the cubic requirement.
  void validate_cubic() const;

  bool operator==(const Grid3&) const = default;
};

template <class T>
class Field3 {
 public:
  using value_type = T;

  Field3() = default;
  explicit Field3(const Grid3& grid, T fill = T{})
      : grid_(grid), values_(grid.voxels(), fill) {}

  const Grid3& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(int z, int y, int x) const {
    return (static_cast<std::size_t>(z) * grid_.ny + static_cast<std::size_t>(y)) *
               grid_.nx +
           static_cast<std::size_t>(x);
  }

  T& operator()(int z, int y, int x) { return values_[index(z, y, x)]; }
  const T& operator()(int z, int y, int x) const { return values_[index(z, y, x)]; }
  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }
  T* data() { return values_.data(); }
  const T* data() const { return values_.data(); }

  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

 private:
  Grid3 grid_{};
  std::vector<T> values_;
};

using RealField = Field3<double>;
using ComplexField = Field3<cdouble>;

/// Row-major 2D array (rows = height).
template <class T>
struct Image2 {
  int height = 0;
  int width = 0;
  std::vector<T> pixels;

  Image2() = default;
  Image2(int h, int w, T fill = T{})
      : height(h), width(w), pixels(static_cast<std::size_t>(h) * w, fill) {}

  T& operator()(int row, int col) {
    return pixels[static_cast<std::size_t>(row) * width + col];
  }
  const T& operator()(int row, int col) const {
    return pixels[static_cast<std::size_t>(row) * width + col];
  }
  std::size_t size() const { return pixels.size(); }
  bool same_shape(const Image2& o) const { return height == o.height && width == o.width; }
};

using Frame = Image2<double>;
using ComplexFrame = Image2<cdouble>;

}  // namespace odt
