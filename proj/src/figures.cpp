#include "odt/figures.hpp"

#include <algorithm>
#include <cmath>

#include "odt/error.hpp"
#include "odt/io.hpp"
#include "odt/metrics.hpp"
#include "odt/pipeline.hpp"

namespace odt {

std::string to_string(SlicePlane p) {
  switch (p) {
    case SlicePlane::xy: return "xy";
    case SlicePlane::yz: return "yz";
    case SlicePlane::xz: return "xz";
  }
  return "?";
}

namespace {

template <class T, class F>
Frame central_slice(const Field3<T>& v, SlicePlane plane, F value) {
  const Grid3& g = v.grid();
  switch (plane) {
    case SlicePlane::xy: {
      Frame f(g.ny, g.nx);
      for (int y = 0; y < g.ny; ++y)
        for (int x = 0; x < g.nx; ++x) f(y, x) = value(v(g.nz / 2, y, x));
      return f;
    }
    case SlicePlane::yz: {
      Frame f(g.nz, g.ny);
      for (int z = 0; z < g.nz; ++z)
        for (int y = 0; y < g.ny; ++y) f(z, y) = value(v(z, y, g.nx / 2));
      return f;
    }
    case SlicePlane::xz: {
      Frame f(g.nz, g.nx);
      for (int z = 0; z < g.nz; ++z)
        for (int x = 0; x < g.nx; ++x) f(z, x) = value(v(z, g.ny / 2, x));
      return f;
    }
  }
  return {};
}

constexpr double kLogEps = 1e-8;

}  // namespace

GrayImage slice_panel(const RealField& v, SlicePlane plane) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return to_gray(central_slice(v, plane, [](double x) { return x; }), *lo, *hi);
}

GrayImage kspace_panel(const ComplexField& k, SlicePlane plane) {
  return to_gray(central_slice(k, plane, [](cdouble c) { return std::log10(std::abs(c) + kLogEps); }));
}

GrayImage kspace_panel(const RIVolume& v, SlicePlane plane) {
  return kspace_panel(fft3_forward(to_complex(v.contrast())), plane);
}

GrayImage histogram_panel(const std::vector<std::size_t>& counts) {
  constexpr int kHeight = 160;
  const int bar = std::max(1, 512 / std::max<int>(1, static_cast<int>(counts.size())));
  GrayImage img(kHeight, bar * static_cast<int>(counts.size()), 255);
  const std::size_t peak = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
  if (peak == 0) return img;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    const int h = static_cast<int>(std::lround(static_cast<double>(counts[b]) / peak * (kHeight - 1)));
    for (int r = kHeight - h; r < kHeight; ++r)
      for (int c = 0; c < bar; ++c) img(r, static_cast<int>(b) * bar + c) = 0;
  }
  return img;
}

GrayImage profile_panel(const std::vector<std::vector<double>>& profiles) {
  constexpr int kHeight = 200;
  constexpr int kScale = 8;
  if (profiles.empty() || profiles[0].size() < 2) throw ValidationError("profile_panel: no data");
  const std::size_t n = profiles[0].size();
  double lo = profiles[0][0], hi = lo;
  for (const auto& p : profiles) {
    if (p.size() != n) throw ValidationError("profile_panel: profiles differ in length");
    for (double x : p) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  const double span = hi > lo ? hi - lo : 1.0;
  const int width = static_cast<int>(n - 1) * kScale + 1;
  GrayImage img(kHeight, width, 255);
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    const auto shade = static_cast<std::uint8_t>(std::min<std::size_t>(k * 96, 192));
    const auto& p = profiles[k];
    for (int c = 0; c < width; ++c) {
      const double t = static_cast<double>(c) / kScale;
      const std::size_t i = std::min(static_cast<std::size_t>(t), n - 2);
      const double v = p[i] + (t - static_cast<double>(i)) * (p[i + 1] - p[i]);
      const int r = kHeight - 1 - static_cast<int>(std::lround((v - lo) / span * (kHeight - 1)));
      img(r, c) = shade;
    }
  }
  return img;
}

FigureReport export_figures(const std::filesystem::path& run_dir) {
  FigureReport report;
  const RunLayout layout{run_dir};
  if (!std::filesystem::is_directory(run_dir)) {
    report.warnings.push_back("run directory " + run_dir.string() + " does not exist");
    return report;
  }
  auto emit = [&](const std::string& name, const GrayImage& img) {
    const auto path = layout.figures() / (name + ".png");
    write_png(path, img);
    report.written.push_back(path);
  };
  auto load = [&](const std::filesystem::path& p, RIVolume& out) {
    if (!std::filesystem::exists(p) || !std::filesystem::exists(io::sidecar_path(p))) {
      report.warnings.push_back("missing " + p.filename().string() + "; skipped");
      return false;
    }
    out = io::read_volume(p);
    return true;
  };

  const SlicePlane planes[] = {SlicePlane::xy, SlicePlane::yz, SlicePlane::xz};
  const std::pair<const char*, std::filesystem::path> volumes[] = {
      {"phantom", layout.phantom()}, {"rytov", layout.rytov()},
      {"gp", layout.gp()},           {"final", layout.final_volume()}};

  RIVolume phantom, final_volume;
  bool have_phantom = false, have_final = false;
  for (const auto& [name, path] : volumes) {
    RIVolume v;
    if (!load(path, v)) continue;
    for (SlicePlane p : planes) emit(std::string(name) + "_slice_" + to_string(p), slice_panel(v, p));
    emit(std::string(name) + "_kspace_xz", kspace_panel(v, SlicePlane::xz));
    emit(std::string(name) + "_kspace_xy", kspace_panel(v, SlicePlane::xy));
    if (std::string(name) == "phantom") {
      phantom = std::move(v);
      have_phantom = true;
    } else if (std::string(name) == "final") {
      final_volume = std::move(v);
      have_final = true;
    }
  }

  if (std::filesystem::exists(layout.kspace()) && std::filesystem::exists(io::sidecar_path(layout.kspace()))) {
    const KSpaceVolume k = io::read_kspace(layout.kspace());
    emit("measured_kspace_xz", kspace_panel(k, SlicePlane::xz));
    emit("measured_kspace_xy", kspace_panel(k, SlicePlane::xy));
  } else {
    report.warnings.push_back("missing " + layout.kspace().filename().string() + "; skipped");
  }

  if (have_final) {
    const double nb = final_volume.n_background();
    const double top = have_phantom ? *std::max_element(phantom.begin(), phantom.end()) : nb + 0.2;
    const double lo = nb - 0.02, hi = std::max(top, nb) + 0.02;
    emit("final_histogram", histogram_panel(ri_histogram(final_volume, 128, lo, hi)));
    for (Axis a : {Axis::X, Axis::Z}) {
      std::vector<std::vector<double>> profiles{line_profile(final_volume, a)};
      if (have_phantom) profiles.insert(profiles.begin(), line_profile(phantom, a));
      emit("final_profile_" + to_string(a), profile_panel(profiles));
    }
  }
  return report;
}

}  // namespace odt
