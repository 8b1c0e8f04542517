#include "odt/gp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "odt/error.hpp"

namespace odt {

void GpConfig::validate() const {
  if (!(beta > 0.0 && beta <= 1.0)) throw ValidationError("GP beta must lie in (0, 1]");
  if (iterations < 1) throw ValidationError("GP iterations must be positive");
}

ScatteringPotential nonneg_project(const ComplexField& p) {
  ScatteringPotential out(p.grid());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = std::max(p[i].real(), 0.0);
  return out;
}

ScatteringPotential nonneg_project(const RealField& p) {
  ScatteringPotential out(p.grid());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = std::max(p[i], 0.0);
  return out;
}

namespace {

double energy(const ComplexField& f) {
  double e = 0.0;
  for (const auto& c : f) e += std::norm(c);
  return e;
}

}  // namespace

RIVolume gp_reconstruct(const KSpaceVolume& measured, const GpConfig& cfg, const Optics& optics,
                        const GpTraceHook& trace) {
  cfg.validate();
  measured.grid().validate_cubic();
  if (measured.mask_count() == 0) throw ValidationError("GP: sampling mask is empty");

  const auto& mask = measured.mask();
  const double e0 = energy(measured);
  ComplexField kspace = measured;  // P_0
  ComplexField mixed(measured.grid());
  RealField previous(measured.grid(), 0.0);
  ScatteringPotential object(measured.grid());

  for (int j = 1; j <= cfg.iterations; ++j) {
    for (std::size_t i = 0; i < kspace.size(); ++i) {
      const double w = mask[i] ? cfg.beta : 0.0;
      mixed[i] = (1.0 - w) * kspace[i] + w * measured[i];
    }
    const ComplexField p = fft3_inverse(mixed);

    double clipped = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) clipped = std::min(clipped, p[i].real());
    object = nonneg_project(p);

    kspace = fft3_forward(to_complex(object));
    const double e = energy(kspace);
    if (!std::isfinite(e) || (e0 > 0.0 && e > 10.0 * e0)) {
      std::ostringstream os;
      os << "GP diverged at iteration " << j << ": k-space energy " << e << " vs initial " << e0;
      throw RuntimeError(os.str());
    }

    if (trace) {
      double step = 0.0;
      for (std::size_t i = 0; i < object.size(); ++i) step += std::pow(object[i] - previous[i], 2);
      trace(GpIteration{j, mixed, object, std::sqrt(step), -clipped});
      previous = object;
    }
  }
  return potential_to_ri(object, optics.wavelength_um, optics.n_medium);
}

}  // namespace odt
