#include "odt/volume.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "odt/error.hpp"

namespace odt {

double Grid3::dk() const { return 2.0 * std::numbers::pi / (nx * pitch_um); }

void Grid3::validate() const {
  if (nx < 8 || ny < 8 || nz < 8) {
    std::ostringstream os;
    os << "grid extents must be >= 8, got " << nx << "x" << ny << "x" << nz;
    throw ValidationError(os.str());
  }
  if (!(pitch_um > 0.0) || !std::isfinite(pitch_um))
    throw ValidationError("grid pitch must be positive");
}

void Grid3::validate_cubic() const {
  validate();
  if (!is_cubic()) throw ValidationError("operation requires a cubic grid");
}

double Optics::kappa0() const { return 2.0 * std::numbers::pi / wavelength_um; }
double Optics::kappa() const { return kappa0() * n_medium; }

void Optics::validate() const {
  if (!(wavelength_um > 0.0)) throw ValidationError("wavelength must be positive");
  if (!(n_medium >= 1.0)) throw ValidationError("medium index must be >= 1");
  if (!(na > 0.0 && na <= 1.0)) throw ValidationError("detection NA must lie in (0, 1]");
}

RealField RIVolume::contrast() const {
  RealField out(grid());
  for (std::size_t i = 0; i < size(); ++i) out[i] = (*this)[i] - n_background_;
  return out;
}

KSpaceVolume::KSpaceVolume(ComplexField values, std::vector<std::uint8_t> mask)
    : ComplexField(std::move(values)), mask_(std::move(mask)) {
  if (mask_.size() != size()) throw ValidationError("mask size does not match k-space grid");
}

std::size_t KSpaceVolume::mask_count() const {
  std::size_t n = 0;
  for (auto m : mask_) n += m != 0;
  return n;
}

ComplexField to_complex(const RealField& f) {
  ComplexField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
  return out;
}

RealField real_part(const ComplexField& f) {
  RealField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].real();
  return out;
}

ScatteringPotential ri_to_potential(const RIVolume& ri, double wavelength_um) {
  if (!(wavelength_um > 0.0)) throw ValidationError("wavelength must be positive");
  const double k0 = 2.0 * std::numbers::pi / wavelength_um;
  const double k02 = k0 * k0;
  const double nm2 = ri.n_background() * ri.n_background();
  ScatteringPotential q(ri.grid());
  for (std::size_t i = 0; i < ri.size(); ++i) {
    const double n = ri[i];
    if (!std::isfinite(n)) throw ValidationError("refractive index volume has non-finite values");
    if (n < 1.0) throw ValidationError("refractive index below 1 is not physical");
    q[i] = k02 * (n * n - nm2);
  }
  return q;
}

RIVolume potential_to_ri(const RealField& q, double wavelength_um, double n_background) {
  if (!(wavelength_um > 0.0)) throw ValidationError("wavelength must be positive");
  if (!(n_background >= 1.0)) throw ValidationError("background index must be >= 1");
  const double k0 = 2.0 * std::numbers::pi / wavelength_um;
  const double inv_k02 = 1.0 / (k0 * k0);
  const double nm2 = n_background * n_background;
  RIVolume ri(q.grid(), n_background);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double n2 = nm2 + q[i] * inv_k02;
    if (!(n2 >= 0.0)) throw ValidationError("potential implies n^2 < 0 (non-physical)");
    ri[i] = std::sqrt(n2);
  }
  return ri;
}

}  // namespace odt
