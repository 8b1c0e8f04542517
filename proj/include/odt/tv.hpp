#pragma once

#include <functional>

#include "odt/kernels/gradient_kernels.hpp"
#include "odt/volume.hpp"

namespace odt {

using VectorField3 = kernels::Gradient3<double>;

struct TvConfig {
  double mu = 100.0;     // data weight
  double alpha = 100.0;  // TV weight
  int cg_iterations = 5;
  int bregman_iterations = 40;
  /// Weight of the Bregman term ||d - grad p - b||^2; the shrinkage
  /// threshold is alpha / penalty.
  double penalty = 100.0;

  /// Values used for simulated data.
  static TvConfig simulation() { return {100.0, 100.0, 5, 40, 100.0}; }
  /// Values used for measured cell data.
  static TvConfig measured() { return {900.0, 1000.0, 5, 40, 1000.0}; }
  void validate() const;
};

VectorField3 grad3(const RealField& p);
/// Divergence with the boundary handling that makes it -grad3^T.
RealField div3(const VectorField3& d);
/// Sum over voxels of the isotropic gradient magnitude.
double tv_norm(const RealField& p);
VectorField3 shrink3(const VectorField3& d, double t);

struct TvIteration {
  int index = 0;  // 1-based outer iteration
  /// (mu/2) ||mask (A p - y)||^2 + alpha TV(p)
  double objective = 0.0;
  double data_term = 0.0;
  /// TV(p), unweighted.
  double tv = 0.0;
  /// Residual norms of the inner CG solve, starting with the initial one.
  std::vector<double> cg_residuals;
  /// Quadratic energy 0.5 <p, M p> - Re <rhs, p> of the CG iterates.
  std::vector<double> cg_energies;
};

using TvTraceHook = std::function<void(const TvIteration&)>;

/// Split-Bregman TV reconstruction
///   min_p (mu/2) ||mask (A p - y)||^2 + alpha ||grad p||_1
/// with d = grad p enforced by the Bregman penalty. The p-subproblem
/// (mu A^H mask A + penalty grad^T grad) p = rhs is solved by cg_iterations
/// steps of CG warm-started from the previous iterate. The iteration starts
/// from the zero-filled estimate A^H y, so it reduces to Rytov as alpha
/// goes to zero at fixed penalty. The potential stays
/// complex inside the solver; the real part is returned.
RIVolume tv_reconstruct(const KSpaceVolume& measured, const TvConfig& cfg, const Optics& optics,
                        const TvTraceHook& trace = {});

}  // namespace odt
