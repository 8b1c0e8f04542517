#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "odt/enhance.hpp"
#include "odt/gp.hpp"
#include "odt/phantom.hpp"
#include "odt/projection.hpp"

namespace odt {

namespace fs = std::filesystem;

/// Ground truth for a run: random spheres, a centred bead, or a VOLF file.
struct PhantomConfig {
  std::string kind = "spheres";  // spheres | bead | file
  SpherePhantomSpec spheres;
  double bead_radius_um = 1.0;
  double n_bead = 1.46;
  fs::path path;
};

struct PipelineConfig {
  fs::path run_dir = "run";
  PhantomConfig phantom;
  Optics optics;
  int n_views = 49;
  double tilt_deg = 45.0;
  GpConfig gp;
  int n_angles = 360;
  std::vector<Axis> axes{Axis::X, Axis::Y, Axis::Z};
  EnhancerContract enhancer;
  /// Enhance only the frames at missing angles (the default) or every frame.
  bool enhance_all_angles = false;
  RampWindow window = RampWindow::none;
  /// Also write the projections of the GP volume split into measured and
  /// missing angles, the training data of a learned enhancer.
  bool training_stacks = true;

  /// Missing keys keep their defaults; unknown keys are rejected.
  static PipelineConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  /// Checks values and that referenced input files exist.
  void validate() const;
};

/// File names inside a run directory.
struct RunLayout {
  fs::path root;

  fs::path config() const { return root / "config.json"; }
  fs::path manifest() const { return root / "manifest.json"; }
  fs::path timings() const { return root / "timings.json"; }
  fs::path metrics() const { return root / "metrics.json"; }
  fs::path phantom() const { return root / "phantom.volf"; }
  fs::path holograms() const { return root / "holograms.holo"; }
  fs::path kspace() const { return root / "kspace.volf"; }
  fs::path rytov() const { return root / "rytov.volf"; }
  fs::path gp() const { return root / "gp.volf"; }
  fs::path projections(Axis a) const { return root / ("projections_" + to_string(a) + ".pstk"); }
  fs::path enhanced(Axis a) const { return root / ("enhanced_" + to_string(a) + ".pstk"); }
  fs::path training(Axis a, Provenance p) const {
    return root / "training" / (to_string(p) + "_" + to_string(a) + ".pstk");
  }
  fs::path fbp(Axis a) const { return root / ("fbp_" + to_string(a) + ".volf"); }
  fs::path final_volume() const { return root / "final.volf"; }
  fs::path figures() const { return root / "figures"; }
};

struct PipelineResult {
  RunLayout layout;
  nlohmann::json metrics;
};

/// Runs phantom -> simulate -> grid -> rytov -> gp -> project -> enhance ->
/// fbp -> average -> metrics. Every stage reads its inputs from the files
/// written by earlier stages. A failing stage throws with its name in the
/// message and leaves earlier outputs in place.
PipelineResult run_pipeline(const PipelineConfig& cfg);

/// Projection angles whose rays lie within the illumination tilt of the
/// optical (z) axis. Rotations about Z never qualify.
bool is_measured_angle(Axis axis, double angle_deg, double tilt_deg);

}  // namespace odt
