#include "odt/pipeline.hpp"

#include <chrono>
#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <set>

#include "odt/checksum.hpp"
#include "odt/error.hpp"
#include "odt/forward_model.hpp"
#include "odt/io.hpp"
#include "odt/metrics.hpp"

namespace odt {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ValidationError("config: '" + where + "' must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ValidationError("config: unknown key '" + where + "." + k + "'");
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError("config: bad value for '" + where + "." + key + "': " + e.what());
  }
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& j) {
  PipelineConfig c;
  check_keys(j, "config",
             {"run_dir", "phantom", "optics", "acquisition", "gp", "projection", "enhancer",
              "training_stacks"});
  if (j.contains("run_dir")) c.run_dir = j.at("run_dir").get<std::string>();
  read(j, "training_stacks", c.training_stacks, "config");

  if (j.contains("phantom")) {
    const json& p = j.at("phantom");
    check_keys(p, "phantom",
               {"kind", "seed", "n_spheres_range", "radius_range_um", "ri_range", "grid_size",
                "pitch_um", "bead_radius_um", "n_bead", "path"});
    read(p, "kind", c.phantom.kind, "phantom");
    read(p, "seed", c.phantom.spheres.seed, "phantom");
    read(p, "n_spheres_range", c.phantom.spheres.n_spheres_range, "phantom");
    read(p, "radius_range_um", c.phantom.spheres.radius_range_um, "phantom");
    read(p, "ri_range", c.phantom.spheres.ri_range, "phantom");
    int n = c.phantom.spheres.grid.nx;
    double pitch = c.phantom.spheres.grid.pitch_um;
    read(p, "grid_size", n, "phantom");
    read(p, "pitch_um", pitch, "phantom");
    c.phantom.spheres.grid = Grid3::cube(n, pitch);
    read(p, "bead_radius_um", c.phantom.bead_radius_um, "phantom");
    read(p, "n_bead", c.phantom.n_bead, "phantom");
    std::string path;
    read(p, "path", path, "phantom");
    c.phantom.path = path;
  }
  if (j.contains("optics")) {
    const json& o = j.at("optics");
    check_keys(o, "optics", {"wavelength_um", "n_medium", "na"});
    read(o, "wavelength_um", c.optics.wavelength_um, "optics");
    read(o, "n_medium", c.optics.n_medium, "optics");
    read(o, "na", c.optics.na, "optics");
  }
  if (j.contains("acquisition")) {
    const json& a = j.at("acquisition");
    check_keys(a, "acquisition", {"n_views", "tilt_deg"});
    read(a, "n_views", c.n_views, "acquisition");
    read(a, "tilt_deg", c.tilt_deg, "acquisition");
  }
  if (j.contains("gp")) {
    const json& g = j.at("gp");
    check_keys(g, "gp", {"beta", "iterations"});
    read(g, "beta", c.gp.beta, "gp");
    read(g, "iterations", c.gp.iterations, "gp");
  }
  if (j.contains("projection")) {
    const json& p = j.at("projection");
    check_keys(p, "projection", {"n_angles", "axes", "ramp_window"});
    read(p, "n_angles", c.n_angles, "projection");
    if (p.contains("axes")) {
      std::vector<std::string> axes;
      read(p, "axes", axes, "projection");
      c.axes.clear();
      for (const auto& a : axes) c.axes.push_back(parse_axis(a));
    }
    std::string window = "none";
    read(p, "ramp_window", window, "projection");
    c.window = parse_window(window);
  }
  if (j.contains("enhancer")) {
    const json& e = j.at("enhancer");
    check_keys(e, "enhancer",
               {"kind", "scope", "wavelet", "levels", "threshold", "command", "timeout_s"});
    std::string kind = "identity";
    read(e, "kind", kind, "enhancer");
    c.enhancer.kind = parse_enhancer_kind(kind);
    std::string scope = "missing";
    read(e, "scope", scope, "enhancer");
    if (scope != "missing" && scope != "all")
      throw ValidationError("config: enhancer.scope must be missing or all");
    c.enhance_all_angles = scope == "all";
    read(e, "wavelet", c.enhancer.wavelet.wavelet, "enhancer");
    read(e, "levels", c.enhancer.wavelet.levels, "enhancer");
    read(e, "threshold", c.enhancer.wavelet.threshold, "enhancer");
    read(e, "command", c.enhancer.command, "enhancer");
    read(e, "timeout_s", c.enhancer.timeout_s, "enhancer");
  }
  return c;
}

json PipelineConfig::to_json() const {
  std::vector<std::string> axis_names;
  for (Axis a : axes) axis_names.push_back(to_string(a));
  const auto& s = phantom.spheres;
  return {
      {"run_dir", run_dir.string()},
      {"phantom",
       {{"kind", phantom.kind},
        {"seed", s.seed},
        {"n_spheres_range", s.n_spheres_range},
        {"radius_range_um", s.radius_range_um},
        {"ri_range", s.ri_range},
        {"grid_size", s.grid.nx},
        {"pitch_um", s.grid.pitch_um},
        {"bead_radius_um", phantom.bead_radius_um},
        {"n_bead", phantom.n_bead},
        {"path", phantom.path.string()}}},
      {"optics",
       {{"wavelength_um", optics.wavelength_um}, {"n_medium", optics.n_medium}, {"na", optics.na}}},
      {"acquisition", {{"n_views", n_views}, {"tilt_deg", tilt_deg}}},
      {"gp", {{"beta", gp.beta}, {"iterations", gp.iterations}}},
      {"projection",
       {{"n_angles", n_angles},
        {"axes", axis_names},
        {"ramp_window", window == RampWindow::hann ? "hann" : "none"}}},
      {"enhancer",
       {{"kind", to_string(enhancer.kind)},
        {"scope", enhance_all_angles ? "all" : "missing"},
        {"wavelet", enhancer.wavelet.wavelet},
        {"levels", enhancer.wavelet.levels},
        {"threshold", enhancer.wavelet.threshold},
        {"command", enhancer.command},
        {"timeout_s", enhancer.timeout_s}}},
      {"training_stacks", training_stacks},
  };
}

void PipelineConfig::validate() const {
  if (run_dir.empty()) throw ValidationError("config: run_dir is empty");
  optics.validate();
  gp.validate();
  enhancer.validate();
  if (phantom.kind == "spheres") {
    SpherePhantomSpec s = phantom.spheres;
    s.n_background = optics.n_medium;
    s.validate();
  } else if (phantom.kind == "bead") {
    phantom.spheres.grid.validate_cubic();
    if (!(phantom.bead_radius_um > 0.0)) throw ValidationError("config: bead radius must be positive");
    if (phantom.n_bead < 1.0) throw ValidationError("config: n_bead must be >= 1");
  } else if (phantom.kind == "file") {
    if (!fs::exists(phantom.path) || !fs::exists(io::sidecar_path(phantom.path)))
      throw ValidationError("config: phantom file " + phantom.path.string() + " not found");
  } else {
    throw ValidationError("config: phantom.kind must be spheres, bead or file");
  }
  if (n_views < 1) throw ValidationError("config: n_views must be positive");
  if (!(tilt_deg > 0.0 && tilt_deg < 90.0))
    throw ValidationError("config: tilt_deg must lie in (0, 90)");
  if (n_angles < 2) throw ValidationError("config: n_angles must be >= 2");
  if (axes.empty()) throw ValidationError("config: at least one projection axis is required");
  if (std::set<Axis>(axes.begin(), axes.end()).size() != axes.size())
    throw ValidationError("config: projection axes repeat");
}

bool is_measured_angle(Axis axis, double angle_deg, double tilt_deg) {
  if (axis == Axis::Z) return false;
  const double rad = std::numbers::pi / 180.0;
  // The ray's z component is cos(angle) for rotations about X and Y.
  return std::abs(std::cos(angle_deg * rad)) >= std::cos(tilt_deg * rad) - 1e-12;
}

namespace {

std::array<ProjectionStack, 2> split_by_angle(const ProjectionStack& s, double tilt_deg) {
  std::array<ProjectionStack, 2> parts;
  const Provenance kinds[2] = {Provenance::measured_angles, Provenance::missing_angles};
  for (int i = 0; i < 2; ++i) {
    parts[i].axis = s.axis;
    parts[i].height = s.height;
    parts[i].width = s.width;
    parts[i].pitch_um = s.pitch_um;
    parts[i].provenance = kinds[i];
  }
  for (std::size_t k = 0; k < s.frames.size(); ++k) {
    auto& part = parts[is_measured_angle(s.axis, s.angles_deg[k], tilt_deg) ? 0 : 1];
    part.angles_deg.push_back(s.angles_deg[k]);
    part.frames.push_back(s.frames[k]);
  }
  return parts;
}

ProjectionStack merge_by_angle(const ProjectionStack& layout, const ProjectionStack& a,
                               const ProjectionStack& b) {
  ProjectionStack out = layout;
  out.provenance = Provenance::enhanced;
  std::size_t ia = 0, ib = 0;
  for (std::size_t k = 0; k < out.frames.size(); ++k) {
    const double angle = out.angles_deg[k];
    if (ia < a.frames.size() && a.angles_deg[ia] == angle)
      out.frames[k] = a.frames[ia++];
    else if (ib < b.frames.size() && b.angles_deg[ib] == angle)
      out.frames[k] = b.frames[ib++];
    else
      throw RuntimeError("enhanced stack lost the frame at " + std::to_string(angle) + " deg");
  }
  return out;
}

using Clock = std::chrono::steady_clock;

class StageRunner {
 public:
  template <class F>
  void operator()(const std::string& name, F&& body) {
    const auto t0 = Clock::now();
    try {
      body();
    } catch (const ValidationError& e) {
      throw ValidationError("stage '" + name + "' failed: " + e.what());
    } catch (const std::exception& e) {
      throw RuntimeError("stage '" + name + "' failed: " + e.what());
    }
    timings_.push_back({{"stage", name},
                        {"seconds", std::chrono::duration<double>(Clock::now() - t0).count()}});
    names_.push_back(name);
  }
  const json& timings() const { return timings_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  json timings_ = json::array();
  std::vector<std::string> names_;
};

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << s;
  if (!out) throw RuntimeError("cannot write " + p.string());
}

/// Hashed form of the config: everything that influences the outputs.
json canonical_config(const PipelineConfig& cfg) {
  json j = cfg.to_json();
  j.erase("run_dir");
  return j;
}

json quality(const RIVolume& v, const RIVolume& truth) {
  const double p = psnr(v, truth);
  return {{"psnr_db", std::isfinite(p) ? json(p) : json("inf")}, {"ssim", ssim(v, truth)}};
}

/// Centred spectrum of the scattering potential contrast.
ComplexField potential_spectrum(const RIVolume& v, const Optics& optics) {
  return fft3_forward(to_complex(ri_to_potential(v, optics.wavelength_um)));
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  const RunLayout L{cfg.run_dir};
  fs::create_directories(L.root);
  const json config_json = canonical_config(cfg);
  write_text(L.config(), config_json.dump(2) + "\n");

  const Optics& optics = cfg.optics;
  const double nb = optics.n_medium;
  StageRunner stage;
  PipelineResult result{L, json::object()};
  json warnings = json::array();

  stage("phantom", [&] {
    RIVolume truth;
    if (cfg.phantom.kind == "spheres") {
      SpherePhantomSpec s = cfg.phantom.spheres;
      s.n_background = nb;
      truth = generate_sphere_phantom(s);
    } else if (cfg.phantom.kind == "bead") {
      truth = bead_phantom(cfg.phantom.spheres.grid, cfg.phantom.bead_radius_um,
                           cfg.phantom.n_bead, nb);
    } else {
      truth = io::read_volume(cfg.phantom.path);
      if (std::abs(truth.n_background() - nb) > 1e-9)
        throw ValidationError("phantom file background differs from optics.n_medium");
    }
    io::write_volume(L.phantom(), truth, "phantom");
  });

  stage("simulate", [&] {
    const RIVolume truth = io::read_volume(L.phantom());
    const auto illum = circular_illumination(cfg.n_views, cfg.tilt_deg, optics);
    const HologramSet h =
        simulate_holograms(ri_to_potential(truth, optics.wavelength_um), illum, cfg.tilt_deg);
    if (h.aliasing_warning) warnings.push_back("simulate: cap coordinates exceed the grid band");
    io::write_holograms(L.holograms(), h);
  });

  stage("grid", [&] {
    const HologramSet h = io::read_holograms(L.holograms());
    io::write_kspace(L.kspace(), grid_kspace(h, h.grid()), "kspace", nb);
  });

  stage("rytov", [&] {
    const KSpaceVolume k = io::read_kspace(L.kspace());
    io::write_volume(L.rytov(), rytov_reconstruct(k, optics.wavelength_um, nb), "rytov");
  });

  stage("gp", [&] {
    const KSpaceVolume k = io::read_kspace(L.kspace());
    io::write_volume(L.gp(), gp_reconstruct(k, cfg.gp, optics), "gp");
  });

  stage("project", [&] {
    const RIVolume gp = io::read_volume(L.gp());
    for (Axis a : cfg.axes) {
      ProjectionStack s = project_schedule(gp, a, cfg.n_angles);
      io::write_stack(L.projections(a), s);
      if (!cfg.training_stacks) continue;
      for (const auto& part : split_by_angle(s, cfg.tilt_deg))
        if (!part.frames.empty()) io::write_stack(L.training(a, part.provenance), part);
    }
  });

  stage("enhance", [&] {
    EnhancerContract e = cfg.enhancer;
    for (Axis a : cfg.axes) {
      if (e.kind == EnhancerKind::external && cfg.enhancer.work_dir.empty())
        e.work_dir = L.root / ("enhance_work_" + to_string(a));
      const ProjectionStack in = io::read_stack(L.projections(a));
      if (cfg.enhance_all_angles) {
        io::write_stack(L.enhanced(a), enhance_stack(in, e));
      } else {
        auto parts = split_by_angle(in, cfg.tilt_deg);
        if (!parts[1].frames.empty()) parts[1] = enhance_stack(parts[1], e);
        io::write_stack(L.enhanced(a), merge_by_angle(in, parts[0], parts[1]));
      }
      if (e.kind == EnhancerKind::external && cfg.enhancer.work_dir.empty())
        fs::remove_all(e.work_dir);
    }
  });

  stage("fbp", [&] {
    for (Axis a : cfg.axes)
      io::write_volume(L.fbp(a), fbp(io::read_stack(L.enhanced(a)), nb, cfg.window),
                       "fbp_" + to_string(a));
  });

  stage("average", [&] {
    std::vector<RIVolume> parts;
    for (Axis a : cfg.axes) parts.push_back(io::read_volume(L.fbp(a)));
    RIVolume out;
    if (parts.size() == 3) {
      out = fbp_three_axis(parts[0], parts[1], parts[2]);
    } else {
      out = parts[0];
      for (std::size_t i = 0; i < out.size(); ++i) {
        double s = 0.0;
        for (const auto& p : parts) s += p[i];
        out[i] = s / static_cast<double>(parts.size());
      }
    }
    io::write_volume(L.final_volume(), out, "final");
  });

  stage("metrics", [&] {
    const RIVolume truth = io::read_volume(L.phantom());
    const RIVolume rytov = io::read_volume(L.rytov());
    const RIVolume gp = io::read_volume(L.gp());
    const RIVolume final_volume = io::read_volume(L.final_volume());
    const KSpaceVolume k = io::read_kspace(L.kspace());
    const Grid3& g = truth.grid();

    json m;
    m["rytov"] = quality(rytov, truth);
    m["gp"] = quality(gp, truth);
    m["final"] = quality(final_volume, truth);

    const auto illum = circular_illumination(cfg.n_views, cfg.tilt_deg, optics);
    const auto cone = predicted_missing_cone(g, illum);
    const std::size_t cone_voxels =
        static_cast<std::size_t>(std::count(cone.begin(), cone.end(), std::uint8_t{1}));
    json c;
    c["cone_voxels"] = cone_voxels;
    if (cone_voxels > 0) {
      // Energies in the cone, absolute, relative to the ball it is cut from,
      // and relative to the ground truth's energy in the cone.
      const auto support = missing_cone_support(g, illum);
      c["rytov_mask_occupancy"] = mask_occupancy(k.mask(), cone);
      const ComplexField truth_spectrum = potential_spectrum(truth, optics);
      const double truth_cone = region_energy(truth_spectrum, cone);
      const std::pair<const char*, const RIVolume*> vols[] = {
          {"phantom", &truth}, {"rytov", &rytov}, {"gp", &gp}, {"final", &final_volume}};
      for (const auto& [name, v] : vols) {
        const ComplexField spectrum =
            v == &truth ? truth_spectrum : potential_spectrum(*v, optics);
        const double e = region_energy(spectrum, cone);
        c[std::string(name)] = {{"cone_energy", e},
                                {"energy_fraction", energy_fraction(spectrum, cone, support)},
                                {"fill_ratio", truth_cone > 0.0 ? e / truth_cone : 0.0}};
      }
    }
    m["missing_cone"] = c;
    m["warnings"] = warnings;
    write_text(L.metrics(), m.dump(2) + "\n");
    result.metrics = m;
  });

  // Manifest: config hash and checksums of every produced file.
  json files = json::object();
  std::vector<fs::path> paths;
  for (const auto& entry : fs::recursive_directory_iterator(L.root))
    if (entry.is_regular_file()) paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) {
    const auto rel = fs::relative(p, L.root);
    const std::string top = rel.begin()->string();
    if (p == L.manifest() || p == L.timings() || top == "figures") continue;
    files[rel.generic_string()] = sha256_file(p);
  }
  const json manifest = {{"config_sha256", sha256_hex(config_json.dump())},
                         {"stages", stage.names()},
                         {"files", files}};
  write_text(L.manifest(), manifest.dump(2) + "\n");
  write_text(L.timings(), json{{"stages", stage.timings()}}.dump(2) + "\n");
  for (const auto& w : warnings) std::cerr << "warning: " << w.get<std::string>() << "\n";
  return result;
}

}  // namespace odt
