#pragma once

// Separable Gaussian smoothing and the SSIM map reduction. Windows are
// truncated at the volume border and renormalized over the in-bounds taps.

#include <vector>

#include "odt/grid.hpp"

namespace odt::kernels {

/// Normalized 1D Gaussian taps exp(-j^2 / (2 sigma^2)), j = -r..r, r = window/2.
std::vector<double> gaussian_taps(int window, double sigma);

namespace serial {
void gaussian_filter3(const RealField& in, const std::vector<double>& taps, RealField& out);
double ssim_mean(const RealField& x, const RealField& y, const std::vector<double>& taps,
                 double c1, double c2);
}  // namespace serial

namespace parallel {
void gaussian_filter3(const RealField& in, const std::vector<double>& taps, RealField& out);
double ssim_mean(const RealField& x, const RealField& y, const std::vector<double>& taps,
                 double c1, double c2);
}  // namespace parallel

}  // namespace odt::kernels
