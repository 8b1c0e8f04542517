#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "odt/png.hpp"
#include "odt/volume.hpp"

namespace odt {

enum class SlicePlane { xy, yz, xz };

std::string to_string(SlicePlane p);

/// Central slice of a volume scaled to the volume's own range.
GrayImage slice_panel(const RealField& v, SlicePlane plane);
/// Central slice of log10(|F| + 1e-8), F the centred spectrum of the contrast.
GrayImage kspace_panel(const RIVolume& v, SlicePlane plane);
/// Central slice of log10(|k| + 1e-8) of a k-space volume.
GrayImage kspace_panel(const ComplexField& k, SlicePlane plane);
/// Bar chart of histogram counts.
GrayImage histogram_panel(const std::vector<std::size_t>& counts);
/// Line plot of one or more equally long profiles on a shared scale.
GrayImage profile_panel(const std::vector<std::vector<double>>& profiles);

struct FigureReport {
  std::vector<std::filesystem::path> written;
  std::vector<std::string> warnings;
};

/// Renders the panels for every artifact present in a run directory into
/// `run_dir/figures`. Missing artifacts are reported as warnings.
FigureReport export_figures(const std::filesystem::path& run_dir);

}  // namespace odt
