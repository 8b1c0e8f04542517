#include "odt/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "odt/error.hpp"

namespace odt {

namespace {
int wrap(int i, int n) { return ((i % n) + n) % n; }
}  // namespace

const std::vector<double>& daubechies_filter(const std::string& id) {
  static const std::map<std::string, std::vector<double>> filters = {
      {"db1", {0.7071067811865476, 0.7071067811865476}},
      {"db2", {0.48296291314453416, 0.8365163037378079, 0.2241438680420134, -0.12940952255126037}},
      {"db3",
       {0.33267055295008263, 0.8068915093110925, 0.45987750211849154, -0.13501102001025458,
        -0.08544127388202666, 0.03522629188570953}},
      {"db4",
       {0.2303778133088965, 0.7148465705529157, 0.6308807679298589, -0.027983769416859854,
        -0.18703481171909309, 0.030841381835560764, 0.0328830116668852,
        -0.010597401785069032}},
  };
  const auto it = filters.find(id);
  if (it == filters.end()) throw ValidationError("unsupported wavelet '" + id + "' (db1..db4)");
  return it->second;
}

Dwt2::Dwt2(const std::string& wavelet_id, int levels)
    : lo_(daubechies_filter(wavelet_id)), levels_(levels) {
  if (levels < 1) throw ValidationError("wavelet levels must be >= 1");
  const std::size_t L = lo_.size();
  hi_.resize(L);
  for (std::size_t n = 0; n < L; ++n) hi_[n] = ((n % 2) ? -1.0 : 1.0) * lo_[L - 1 - n];
  // Filter alignment of the common periodized DWT convention.
  shift_ = 1 - static_cast<int>(L) / 2;
}

void Dwt2::analyze(double* line, std::size_t stride, int n, std::vector<double>& tmp) const {
  const int half = n / 2;
  tmp.assign(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < half; ++k) {
    double a = 0.0, d = 0.0;
    for (std::size_t j = 0; j < lo_.size(); ++j) {
      const double x = line[static_cast<std::size_t>(wrap(2 * k + static_cast<int>(j) + shift_, n)) * stride];
      a += lo_[j] * x;
      d += hi_[j] * x;
    }
    tmp[static_cast<std::size_t>(k)] = a;
    tmp[static_cast<std::size_t>(half + k)] = d;
  }
  for (int i = 0; i < n; ++i) line[static_cast<std::size_t>(i) * stride] = tmp[static_cast<std::size_t>(i)];
}

void Dwt2::synthesize(double* line, std::size_t stride, int n, std::vector<double>& tmp) const {
  const int half = n / 2;
  tmp.assign(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < half; ++k) {
    const double a = line[static_cast<std::size_t>(k) * stride];
    const double d = line[static_cast<std::size_t>(half + k) * stride];
    for (std::size_t j = 0; j < lo_.size(); ++j)
      tmp[static_cast<std::size_t>(wrap(2 * k + static_cast<int>(j) + shift_, n))] += lo_[j] * a + hi_[j] * d;
  }
  for (int i = 0; i < n; ++i) line[static_cast<std::size_t>(i) * stride] = tmp[static_cast<std::size_t>(i)];
}

namespace {

void check_dims(int height, int width, int levels, std::size_t size) {
  const int block = 1 << levels;
  if (height % block != 0 || width % block != 0)
    throw ValidationError("DWT dims must be divisible by 2^levels");
  if (size != static_cast<std::size_t>(height) * width)
    throw ValidationError("DWT buffer size does not match dims");
}

}  // namespace

void Dwt2::forward(std::vector<double>& data, int height, int width) const {
  check_dims(height, width, levels_, data.size());
  std::vector<double> tmp;
  int h = height, w = width;
  for (int level = 0; level < levels_; ++level) {
    for (int r = 0; r < h; ++r) analyze(&data[static_cast<std::size_t>(r) * width], 1, w, tmp);
    for (int c = 0; c < w; ++c) analyze(&data[static_cast<std::size_t>(c)], width, h, tmp);
    h /= 2;
    w /= 2;
  }
}

void Dwt2::inverse(std::vector<double>& data, int height, int width) const {
  check_dims(height, width, levels_, data.size());
  std::vector<double> tmp;
  for (int level = levels_ - 1; level >= 0; --level) {
    const int h = height >> level, w = width >> level;
    for (int c = 0; c < w; ++c) synthesize(&data[static_cast<std::size_t>(c)], width, h, tmp);
    for (int r = 0; r < h; ++r) synthesize(&data[static_cast<std::size_t>(r) * width], 1, w, tmp);
  }
}

Frame wavelet_denoise(const Frame& frame, const std::string& wavelet_id, int levels,
                      double threshold) {
  const Dwt2 dwt(wavelet_id, levels);
  const int block = 1 << levels;
  if (frame.height < block || frame.width < block)
    throw ValidationError("wavelet_denoise: frame smaller than 2^levels");
  if (threshold < 0.0) throw ValidationError("wavelet_denoise: threshold must be >= 0");

  const auto [lo_it, hi_it] = std::minmax_element(frame.pixels.begin(), frame.pixels.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) return frame;
  const double range = hi - lo;

  const int H = (frame.height + block - 1) / block * block;
  const int W = (frame.width + block - 1) / block * block;
  std::vector<double> buf(static_cast<std::size_t>(H) * W);
  for (int r = 0; r < H; ++r)
    for (int c = 0; c < W; ++c)
      buf[static_cast<std::size_t>(r) * W + c] =
          (frame(std::min(r, frame.height - 1), std::min(c, frame.width - 1)) - lo) / range;

  dwt.forward(buf, H, W);
  const int ah = H >> levels, aw = W >> levels;
  for (int r = 0; r < H; ++r)
    for (int c = 0; c < W; ++c) {
      if (r < ah && c < aw) continue;
      double& v = buf[static_cast<std::size_t>(r) * W + c];
      if (std::abs(v) < threshold) v = 0.0;
    }
  dwt.inverse(buf, H, W);

  Frame out(frame.height, frame.width);
  for (int r = 0; r < frame.height; ++r)
    for (int c = 0; c < frame.width; ++c)
      out(r, c) = lo + range * buf[static_cast<std::size_t>(r) * W + c];
  return out;
}

}  // namespace odt
