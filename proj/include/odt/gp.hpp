#pragma once

#include <functional>

#include "odt/volume.hpp"

namespace odt {

struct GpConfig {
  double beta = 1.0;
  int iterations = 40;

  void validate() const;
};

/// Snapshot handed to the optional per-iteration trace hook.
struct GpIteration {
  int index = 0;  // 1-based
  /// k-space after data mixing, (1 - beta*mask) P + beta*measured.
  const ComplexField& mixed;
  /// Object-space iterate after the nonnegativity projection.
  const RealField& object;
  /// ||object_j - object_{j-1}||_2 (object_0 = 0).
  double step_norm = 0.0;
  /// Largest negative real part removed by the projection.
  double clipped = 0.0;
};

using GpTraceHook = std::function<void(const GpIteration&)>;

/// max(Re p, 0) voxelwise.
ScatteringPotential nonneg_project(const ComplexField& p);
ScatteringPotential nonneg_project(const RealField& p);

/// Gerchberg-Papoulis POCS: alternate data replacement on the mask with
/// nonnegativity of the potential contrast. Throws RuntimeError when the
/// k-space energy exceeds 10x its initial value.
RIVolume gp_reconstruct(const KSpaceVolume& measured, const GpConfig& cfg, const Optics& optics,
                        const GpTraceHook& trace = {});

}  // namespace odt
