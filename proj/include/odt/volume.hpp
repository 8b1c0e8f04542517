#pragma once

#include <cstdint>
#include <vector>

#include "odt/grid.hpp"

namespace odt {

/// Imaging optics shared by the forward model and the reconstructions.
/// Defaults are typical values for a 532 nm ODT setup in cell medium.
struct Optics {
  double wavelength_um = 0.532;
  double n_medium = 1.337;
  /// Detection NA relative to the medium, in (0, 1].
  double na = 0.9;

  /// Free-space wavenumber 2*pi/lambda.
  double kappa0() const;
  /// In-medium wavenumber 2*pi*n_m/lambda; the Ewald sphere radius.
  double kappa() const;
  void validate() const;
};

/// Refractive index n on a grid, with the medium index it is embedded in.
class RIVolume : public RealField {
 public:
  RIVolume() = default;
  RIVolume(const Grid3& grid, double n_background)
      : RealField(grid, n_background), n_background_(n_background) {}
  RIVolume(RealField values, double n_background)
      : RealField(std::move(values)), n_background_(n_background) {}

  double n_background() const { return n_background_; }

  /// n - n_background per voxel.
  RealField contrast() const;

 private:
  double n_background_ = 1.337;
};

/// Scattering potential q = k0^2 (n^2 - n_m^2), rad^2/um^2.
class ScatteringPotential : public RealField {
 public:
  using RealField::RealField;
  explicit ScatteringPotential(RealField f) : RealField(std::move(f)) {}
};

/// DC-centred spectrum plus the binary sampling mask (1 = measured).
class KSpaceVolume : public ComplexField {
 public:
  KSpaceVolume() = default;
  explicit KSpaceVolume(const Grid3& grid)
      : ComplexField(grid), mask_(grid.voxels(), 0) {}
  KSpaceVolume(ComplexField values, std::vector<std::uint8_t> mask);

  std::vector<std::uint8_t>& mask() { return mask_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  std::size_t mask_count() const;

 private:
  std::vector<std::uint8_t> mask_;
};

/// Centred unitary 3D DFT: X[k] = N^{-3/2} sum_r x[r] exp(-2 pi i (k-c).(r-c)/N)
/// with c = N/2 on both sides. Rejects non-cubic grids and non-finite input.
ComplexField fft3_forward(const ComplexField& v);
/// Same transform applied to a real potential; the mask is all ones.
KSpaceVolume fft3_forward(const ScatteringPotential& v);
/// Adjoint (= inverse) of fft3_forward.
ComplexField fft3_inverse(const ComplexField& k);

ComplexField to_complex(const RealField& f);
RealField real_part(const ComplexField& f);

ScatteringPotential ri_to_potential(const RIVolume& ri, double wavelength_um);
RIVolume potential_to_ri(const RealField& q, double wavelength_um, double n_background);

}  // namespace odt
