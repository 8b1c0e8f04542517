#include "odt/tv.hpp"

#include <cmath>
#include <sstream>

#include "odt/error.hpp"

namespace odt {

void TvConfig::validate() const {
  if (!(mu > 0.0)) throw ValidationError("TV mu must be positive");
  if (!(alpha > 0.0)) throw ValidationError("TV alpha must be positive");
  if (!(penalty > 0.0)) throw ValidationError("TV penalty must be positive");
  if (cg_iterations < 1 || bregman_iterations < 1)
    throw ValidationError("TV iteration counts must be positive");
}

VectorField3 grad3(const RealField& p) {
  VectorField3 d(p.grid());
  kernels::parallel::grad3(p, d);
  return d;
}

RealField div3(const VectorField3& d) {
  RealField out(d.x.grid());
  kernels::parallel::div3(d, out);
  return out;
}

double tv_norm(const RealField& p) {
  const VectorField3 d = grad3(p);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    sum += std::sqrt(d.x[i] * d.x[i] + d.y[i] * d.y[i] + d.z[i] * d.z[i]);
  return sum;
}

VectorField3 shrink3(const VectorField3& d, double t) {
  if (t < 0.0) throw ValidationError("shrink threshold must be >= 0");
  VectorField3 out = d;
  kernels::shrink3(out, t);
  return out;
}

namespace {

using CGrad = kernels::Gradient3<cdouble>;

double re_dot(const ComplexField& a, const ComplexField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (std::conj(a[i]) * b[i]).real();
  return s;
}

ComplexField masked(const ComplexField& k, const std::vector<std::uint8_t>& mask) {
  ComplexField out(k.grid());
  for (std::size_t i = 0; i < k.size(); ++i) out[i] = mask[i] ? k[i] : cdouble{};
  return out;
}

double complex_tv(const CGrad& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i)
    s += std::sqrt(std::norm(g.x[i]) + std::norm(g.y[i]) + std::norm(g.z[i]));
  return s;
}

class NormalOperator {
 public:
  NormalOperator(const std::vector<std::uint8_t>& mask, double mu, double penalty, const Grid3& g)
      : mask_(mask), mu_(mu), penalty_(penalty), grad_(g) {}

  // out = mu A^H mask A p + penalty grad^T grad p
  void apply(const ComplexField& p, ComplexField& out) {
    const ComplexField data = fft3_inverse(masked(fft3_forward(p), mask_));
    kernels::parallel::grad3(p, grad_);
    kernels::parallel::div3(grad_, out);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = mu_ * data[i] - penalty_ * out[i];
  }

 private:
  const std::vector<std::uint8_t>& mask_;
  double mu_;
  double penalty_;
  CGrad grad_;
};

void conjugate_gradient(NormalOperator& op, const ComplexField& rhs, ComplexField& p,
                        int iterations, TvIteration* trace) {
  ComplexField mp(p.grid());
  op.apply(p, mp);
  ComplexField r(p.grid());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - mp[i];
  ComplexField dir = r;
  double rho = re_dot(r, r);

  auto record = [&] {
    if (!trace) return;
    trace->cg_residuals.push_back(std::sqrt(rho));
    trace->cg_energies.push_back(-0.5 * (re_dot(p, rhs) + re_dot(p, r)));
  };
  record();

  ComplexField q(p.grid());
  for (int it = 0; it < iterations; ++it) {
    op.apply(dir, q);
    const double den = re_dot(dir, q);
    if (!(den > 1e-30)) break;  // breakdown or converged
    const double step = rho / den;
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] += step * dir[i];
      r[i] -= step * q[i];
    }
    const double rho_next = re_dot(r, r);
    const double beta = rho_next / rho;
    rho = rho_next;
    record();
    if (rho == 0.0) break;
    for (std::size_t i = 0; i < dir.size(); ++i) dir[i] = r[i] + beta * dir[i];
  }
}

}  // namespace

RIVolume tv_reconstruct(const KSpaceVolume& measured, const TvConfig& cfg, const Optics& optics,
                        const TvTraceHook& trace) {
  cfg.validate();
  const Grid3& g = measured.grid();
  g.validate_cubic();
  const auto& mask = measured.mask();
  if (measured.mask_count() == 0) throw ValidationError("TV: sampling mask is empty");

  const ComplexField y = masked(measured, mask);
  ComplexField rhs_data = fft3_inverse(y);
  for (auto& v : rhs_data) v *= cfg.mu;

  NormalOperator op(mask, cfg.mu, cfg.penalty, g);
  ComplexField rhs(g);
  ComplexField tmp(g);
  CGrad d(g), b(g), gp(g), diff(g);
  const double threshold = cfg.alpha / cfg.penalty;

  // Start from the zero-filled estimate with d and b already split from it.
  ComplexField p = fft3_inverse(y);
  auto split = [&] {
    kernels::parallel::grad3(p, gp);
    for (std::size_t i = 0; i < p.size(); ++i) {
      d.x[i] = gp.x[i] + b.x[i];
      d.y[i] = gp.y[i] + b.y[i];
      d.z[i] = gp.z[i] + b.z[i];
    }
    kernels::shrink3(d, threshold);
    for (std::size_t i = 0; i < p.size(); ++i) {
      b.x[i] += gp.x[i] - d.x[i];
      b.y[i] += gp.y[i] - d.y[i];
      b.z[i] += gp.z[i] - d.z[i];
    }
  };
  split();

  for (int outer = 1; outer <= cfg.bregman_iterations; ++outer) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      diff.x[i] = d.x[i] - b.x[i];
      diff.y[i] = d.y[i] - b.y[i];
      diff.z[i] = d.z[i] - b.z[i];
    }
    kernels::parallel::div3(diff, tmp);
    for (std::size_t i = 0; i < p.size(); ++i) rhs[i] = rhs_data[i] - cfg.penalty * tmp[i];

    TvIteration info;
    conjugate_gradient(op, rhs, p, cfg.cg_iterations, trace ? &info : nullptr);

    split();

    for (const auto& v : p)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        std::ostringstream os;
        os << "TV reconstruction produced non-finite values at Bregman iteration " << outer;
        throw RuntimeError(os.str());
      }

    if (trace) {
      const ComplexField ap = fft3_forward(p);
      double residual = 0.0;
      for (std::size_t i = 0; i < ap.size(); ++i)
        if (mask[i]) residual += std::norm(ap[i] - y[i]);
      info.index = outer;
      info.data_term = 0.5 * cfg.mu * residual;
      info.tv = complex_tv(gp);
      info.objective = info.data_term + cfg.alpha * info.tv;
      trace(info);
    }
  }
  return potential_to_ri(real_part(p), optics.wavelength_um, optics.n_medium);
}

}  // namespace odt
