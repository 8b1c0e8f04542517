#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "odt/projection.hpp"
#include "odt/volume.hpp"

namespace odt {

double mse(const RealField& a, const RealField& b);

/// 10 log10(peak^2 / MSE) with peak = max - min of the reference.
/// Identical inputs give +infinity.
double psnr(const RealField& test, const RealField& reference);

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
};

/// Mean 3D SSIM with Gaussian windows; dynamic range from the reference.
double ssim(const RealField& test, const RealField& reference, const SsimParams& p = {});

/// Counts over `bins` equal bins of [lo, hi]; out-of-range values land in
/// the edge bins.
std::vector<std::size_t> ri_histogram(const RealField& v, int bins, double lo, double hi);

/// Line of voxels along `axis`. `fixed` holds the other two coordinates in
/// (z, y, x) order with the axis coordinate omitted, e.g. (z, y) for X.
std::vector<double> line_profile(const RealField& v, Axis axis, int fixed_a, int fixed_b);
/// Profile through the grid centre.
std::vector<double> line_profile(const RealField& v, Axis axis);

/// Full width, in samples, where the profile exceeds background + half of
/// (peak - background), using linear interpolation at the crossings.
double fwhm(const std::vector<double>& profile, double background);

/// Fraction of `region` voxels that are set in `mask`.
double mask_occupancy(const std::vector<std::uint8_t>& mask,
                      const std::vector<std::uint8_t>& region);

/// Sum of |spectrum|^2 over `region`.
double region_energy(const ComplexField& spectrum, const std::vector<std::uint8_t>& region);

/// Spectral energy inside `region` divided by the energy inside `support`.
double energy_fraction(const ComplexField& spectrum, const std::vector<std::uint8_t>& region,
                       const std::vector<std::uint8_t>& support);

}  // namespace odt
