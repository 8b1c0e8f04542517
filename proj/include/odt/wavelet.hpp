#pragma once

#include <string>
#include <vector>

#include "odt/grid.hpp"

namespace odt {

/// Orthonormal Daubechies reconstruction low-pass filter for "db1".."db4".
const std::vector<double>& daubechies_filter(const std::string& id);

/// Periodized orthonormal 2D DWT over a row-major h x w buffer. Both
/// dimensions must be divisible by 2^levels. Subbands are stored in the
/// usual pyramid layout with the approximation in the top-left corner.
class Dwt2 {
 public:
  Dwt2(const std::string& wavelet_id, int levels);

  void forward(std::vector<double>& data, int height, int width) const;
  void inverse(std::vector<double>& data, int height, int width) const;
  int levels() const { return levels_; }

 private:
  void analyze(double* line, std::size_t stride, int n, std::vector<double>& tmp) const;
  void synthesize(double* line, std::size_t stride, int n, std::vector<double>& tmp) const;

  std::vector<double> lo_;
  std::vector<double> hi_;
  int levels_;
  int shift_;
};

/// Hard-threshold wavelet denoiser on the frame rescaled to [0, 1]. The
/// approximation band is left untouched. Frames whose size is not a multiple
/// of 2^levels are edge-padded before the transform and cropped afterwards.
Frame wavelet_denoise(const Frame& frame, const std::string& wavelet_id = "db3", int levels = 4,
                      double threshold = 0.7);

}  // namespace odt
