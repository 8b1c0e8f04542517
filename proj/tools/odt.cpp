// Command-line front end. Exit codes: 0 success, 1 invalid input, 2 runtime failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "odt/enhance.hpp"
#include "odt/error.hpp"
#include "odt/figures.hpp"
#include "odt/forward_model.hpp"
#include "odt/gp.hpp"
#include "odt/io.hpp"
#include "odt/metrics.hpp"
#include "odt/parallel.hpp"
#include "odt/phantom.hpp"
#include "odt/pipeline.hpp"
#include "odt/tv.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Measured {
  odt::KSpaceVolume kspace;
  odt::Optics optics;
};

// Accepts a hologram set (gridded on the fly) or a c64 k-space VOLF.
Measured load_measurements(const fs::path& in, double wavelength_um) {
  const json side = json::parse(odt::io::read_bytes(odt::io::sidecar_path(in)));
  if (side.contains("n_views")) {
    const odt::HologramSet h = odt::io::read_holograms(in);
    return {odt::grid_kspace(h, h.grid()), h.illumination.optics()};
  }
  const odt::io::VolumeHeader hdr = odt::io::read_volume_header(in);
  odt::Optics optics;
  optics.wavelength_um = wavelength_um;
  optics.n_medium = hdr.n_background;
  return {odt::io::read_kspace(in), optics};
}

void write_csv(const fs::path& p, const std::string& header, const std::vector<std::string>& rows) {
  std::ofstream out(p);
  out << header << "\n";
  for (const auto& r : rows) out << r << "\n";
  if (!out) throw odt::RuntimeError("cannot write " + p.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optical diffraction tomography toolkit"};
  app.require_subcommand(1);

  // phantom
  auto* ph = app.add_subcommand("phantom", "Generate a sphere or bead phantom (VOLF)");
  std::string ph_kind = "spheres", ph_out, ph_config;
  odt::SpherePhantomSpec spec;
  int ph_size = 64;
  double ph_pitch = 0.1, bead_radius = 1.0, n_bead = 1.46;
  ph->add_option("--kind", ph_kind, "spheres or bead")->check(CLI::IsMember({"spheres", "bead"}));
  ph->add_option("--config", ph_config, "JSON file with phantom keys (as in the pipeline config)");
  ph->add_option("--seed", spec.seed);
  ph->add_option("--n-spheres", spec.n_spheres_range, "min max");
  ph->add_option("--radius-um", spec.radius_range_um, "min max");
  ph->add_option("--ri", spec.ri_range, "min max");
  ph->add_option("--size", ph_size, "grid edge in voxels");
  ph->add_option("--pitch-um", ph_pitch);
  ph->add_option("--n-background", spec.n_background);
  ph->add_option("--bead-radius-um", bead_radius);
  ph->add_option("--n-bead", n_bead);
  ph->add_option("--out", ph_out)->required();

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate hologram spectra of a phantom");
  std::string sim_in, sim_out;
  int n_views = 49;
  double tilt = 45.0;
  odt::Optics sim_optics;
  sim->add_option("--in", sim_in)->required()->check(CLI::ExistingFile);
  sim->add_option("--out", sim_out)->required();
  sim->add_option("--views", n_views);
  sim->add_option("--tilt-deg", tilt);
  sim->add_option("--wavelength-um", sim_optics.wavelength_um);
  sim->add_option("--na", sim_optics.na);

  // reconstructions
  std::string rin, rout, kspace_out;
  double wavelength = 0.532;
  auto add_recon_io = [&](CLI::App* c) {
    c->add_option("--in", rin, "hologram set or k-space VOLF")->required()->check(CLI::ExistingFile);
    c->add_option("--out", rout)->required();
    c->add_option("--wavelength-um", wavelength, "for k-space input");
  };
  auto* ry = app.add_subcommand("recon-rytov", "Direct inversion of the gridded k-space");
  add_recon_io(ry);
  ry->add_option("--kspace-out", kspace_out, "also write the gridded k-space");

  auto* gp = app.add_subcommand("recon-gp", "Gerchberg-Papoulis reconstruction");
  add_recon_io(gp);
  odt::GpConfig gp_cfg;
  gp->add_option("--beta", gp_cfg.beta);
  gp->add_option("--iters", gp_cfg.iterations);

  auto* tv = app.add_subcommand("recon-tv", "Split-Bregman TV reconstruction");
  add_recon_io(tv);
  odt::TvConfig tv_cfg;
  tv->add_option("--mu", tv_cfg.mu);
  tv->add_option("--alpha", tv_cfg.alpha);
  tv->add_option("--cg-iters", tv_cfg.cg_iterations);
  tv->add_option("--bregman-iters", tv_cfg.bregman_iterations);
  tv->add_option("--penalty", tv_cfg.penalty, "Bregman penalty weight");

  // project
  auto* pr = app.add_subcommand("project", "Parallel-beam projections of a volume (PSTK)");
  std::string pr_in, pr_out, pr_axis = "Y";
  int n_angles = 360;
  pr->add_option("--in", pr_in)->required()->check(CLI::ExistingFile);
  pr->add_option("--out", pr_out)->required();
  pr->add_option("--axis", pr_axis)->check(CLI::IsMember({"X", "Y", "Z", "x", "y", "z"}));
  pr->add_option("--angles", n_angles, "number of equiangular projections");

  // enhance
  auto* en = app.add_subcommand("enhance", "Enhance a projection stack");
  std::string en_in, en_out, en_kind = "identity";
  odt::EnhancerContract contract;
  en->add_option("--in", en_in)->required()->check(CLI::ExistingFile);
  en->add_option("--out", en_out)->required();
  en->add_option("--kind", en_kind)->check(CLI::IsMember({"identity", "wavelet", "external"}));
  en->add_option("--cmd", contract.command, "command template with {in} and {out}");
  en->add_option("--timeout-s", contract.timeout_s);
  en->add_option("--wavelet", contract.wavelet.wavelet);
  en->add_option("--levels", contract.wavelet.levels);
  en->add_option("--threshold", contract.wavelet.threshold);

  // fbp
  auto* fb = app.add_subcommand("fbp", "Filtered backprojection; three stacks are averaged");
  std::vector<std::string> fb_in;
  std::string fb_out, fb_window = "none";
  double fb_nb = 1.337;
  fb->add_option("--in", fb_in, "one stack, or one per axis")->required()->check(CLI::ExistingFile);
  fb->add_option("--out", fb_out)->required();
  fb->add_option("--n-background", fb_nb);
  fb->add_option("--window", fb_window)->check(CLI::IsMember({"none", "hann"}));

  // metrics
  auto* me = app.add_subcommand("metrics", "Compare a volume against a reference");
  std::string me_ref, me_test, hist_csv, prof_csv, plots_dir, prof_axis = "X";
  int bins = 128;
  std::vector<double> hist_range;
  me->add_option("--ref", me_ref)->required()->check(CLI::ExistingFile);
  me->add_option("--test", me_test)->required()->check(CLI::ExistingFile);
  me->add_option("--histogram-csv", hist_csv);
  me->add_option("--bins", bins);
  me->add_option("--range", hist_range, "lo hi")->expected(2);
  me->add_option("--profile-csv", prof_csv);
  me->add_option("--profile-axis", prof_axis)->check(CLI::IsMember({"X", "Y", "Z"}));
  me->add_option("--plots", plots_dir, "directory for histogram and profile PNGs");

  // pipeline and figures
  auto* pl = app.add_subcommand("pipeline", "Run the end-to-end reconstruction pipeline");
  std::string pl_config, pl_run_dir;
  pl->add_option("--config", pl_config, "JSON config")->check(CLI::ExistingFile);
  pl->add_option("--run-dir", pl_run_dir, "overrides run_dir of the config");
  pl->add_option("--enhancer", en_kind)->check(CLI::IsMember({"identity", "wavelet", "external"}));
  auto* fg = app.add_subcommand("figures", "Render PNG figures for a run directory");
  std::string fg_dir;
  fg->add_option("--run-dir", fg_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    odt::configure_threads_from_env();

    if (*ph) {
      odt::RIVolume v;
      if (!ph_config.empty()) {
        json j = json::parse(odt::io::read_bytes(ph_config));
        odt::PipelineConfig c = odt::PipelineConfig::from_json({{"phantom", j}});
        c.optics.n_medium = spec.n_background;
        if (c.phantom.kind == "bead")
          v = odt::bead_phantom(c.phantom.spheres.grid, c.phantom.bead_radius_um, c.phantom.n_bead,
                                spec.n_background);
        else {
          c.phantom.spheres.n_background = spec.n_background;
          v = odt::generate_sphere_phantom(c.phantom.spheres);
        }
      } else if (ph_kind == "bead") {
        v = odt::bead_phantom(odt::Grid3::cube(ph_size, ph_pitch), bead_radius, n_bead,
                              spec.n_background);
      } else {
        spec.grid = odt::Grid3::cube(ph_size, ph_pitch);
        v = odt::generate_sphere_phantom(spec);
      }
      odt::io::write_volume(ph_out, v, "phantom");
    } else if (*sim) {
      const odt::RIVolume v = odt::io::read_volume(sim_in);
      sim_optics.n_medium = v.n_background();
      const auto illum = odt::circular_illumination(n_views, tilt, sim_optics);
      const auto h = odt::simulate_holograms(odt::ri_to_potential(v, sim_optics.wavelength_um),
                                             illum, tilt);
      if (h.aliasing_warning)
        std::cerr << "warning: some cap coordinates fall outside the grid band\n";
      odt::io::write_holograms(sim_out, h);
    } else if (*ry || *gp || *tv) {
      const Measured m = load_measurements(rin, wavelength);
      odt::RIVolume out;
      if (*ry) {
        if (!kspace_out.empty())
          odt::io::write_kspace(kspace_out, m.kspace, "kspace", m.optics.n_medium);
        out = odt::rytov_reconstruct(m.kspace, m.optics.wavelength_um, m.optics.n_medium);
      } else if (*gp) {
        out = odt::gp_reconstruct(m.kspace, gp_cfg, m.optics);
      } else {
        out = odt::tv_reconstruct(m.kspace, tv_cfg, m.optics);
      }
      odt::io::write_volume(rout, out, *ry ? "rytov" : (*gp ? "gp" : "tv"));
    } else if (*pr) {
      const odt::RIVolume v = odt::io::read_volume(pr_in);
      odt::io::write_stack(pr_out, odt::project_schedule(v, odt::parse_axis(pr_axis), n_angles));
    } else if (*en) {
      contract.kind = odt::parse_enhancer_kind(en_kind);
      const odt::ProjectionStack s = odt::io::read_stack(en_in);
      odt::io::write_stack(en_out, odt::enhance_stack(s, contract));
    } else if (*fb) {
      if (fb_in.size() != 1 && fb_in.size() != 3)
        throw odt::ValidationError("fbp takes one stack or three stacks (one per axis)");
      const auto window = odt::parse_window(fb_window);
      std::vector<odt::RIVolume> vols;
      for (const auto& p : fb_in) vols.push_back(odt::fbp(odt::io::read_stack(p), fb_nb, window));
      const odt::RIVolume out =
          vols.size() == 3 ? odt::fbp_three_axis(vols[0], vols[1], vols[2]) : vols[0];
      odt::io::write_volume(fb_out, out, "fbp");
    } else if (*me) {
      const odt::RIVolume ref = odt::io::read_volume(me_ref);
      const odt::RIVolume test = odt::io::read_volume(me_test);
      const double p = odt::psnr(test, ref);
      json out = {{"psnr_db", std::isfinite(p) ? json(p) : json("inf")},
                  {"ssim", odt::ssim(test, ref)}};
      double lo = 0.0, hi = 0.0;
      if (hist_range.size() == 2) {
        lo = hist_range[0];
        hi = hist_range[1];
      } else {
        const auto [a, b] = std::minmax_element(ref.begin(), ref.end());
        lo = std::min(*a, ref.n_background()) - 0.01;
        hi = *b + 0.01;
      }
      const auto counts = odt::ri_histogram(test, bins, lo, hi);
      const auto axis = odt::parse_axis(prof_axis);
      const auto profile = odt::line_profile(test, axis);
      if (!hist_csv.empty()) {
        std::vector<std::string> rows;
        for (int b = 0; b < bins; ++b)
          rows.push_back(std::to_string(lo + (b + 0.5) * (hi - lo) / bins) + "," +
                         std::to_string(counts[static_cast<std::size_t>(b)]));
        write_csv(hist_csv, "ri_center,count", rows);
      }
      if (!prof_csv.empty()) {
        const auto ref_profile = odt::line_profile(ref, axis);
        std::vector<std::string> rows;
        for (std::size_t i = 0; i < profile.size(); ++i)
          rows.push_back(std::to_string(i) + "," + std::to_string(ref_profile[i]) + "," +
                         std::to_string(profile[i]));
        write_csv(prof_csv, "index,reference,test", rows);
      }
      if (!plots_dir.empty()) {
        odt::write_png(fs::path(plots_dir) / "histogram.png", odt::histogram_panel(counts));
        odt::write_png(fs::path(plots_dir) / ("profile_" + prof_axis + ".png"),
                       odt::profile_panel({odt::line_profile(ref, axis), profile}));
      }
      std::cout << out.dump(2) << "\n";
    } else if (*pl) {
      json j = json::object();
      if (!pl_config.empty()) j = json::parse(odt::io::read_bytes(pl_config));
      odt::PipelineConfig cfg = odt::PipelineConfig::from_json(j);
      if (!pl_run_dir.empty()) cfg.run_dir = pl_run_dir;
      if (pl->count("--enhancer")) cfg.enhancer.kind = odt::parse_enhancer_kind(en_kind);
      const auto result = odt::run_pipeline(cfg);
      std::cout << result.metrics.dump(2) << "\n";
    } else if (*fg) {
      const auto report = odt::export_figures(fg_dir);
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << report.written.size() << " figures written, " << report.warnings.size()
                << " warnings\n";
    }
  } catch (const odt::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
