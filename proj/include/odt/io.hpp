#pragma once

// On-disk formats. Every dataset is a raw little-endian float32 file at
// `path` plus a JSON sidecar at `path + ".json"`.
//
//   VOLF  {name, dtype: "f32"|"c64", dims: [nz, ny, nx], pitch_um, n_background}
//         z-major samples; c64 stores interleaved (re, im) pairs. A k-space
//         volume may carry its sampling mask as one byte per voxel in
//         `path + ".mask"`.
//   PSTK  {axis, angles_deg, dims: [h, w], pitch_um, provenance}
//         frames concatenated in angle order, rows along the rotation axis.
//   HOLO  {n_views, tilt_deg, wavelength_um, n_medium, na, detector_dims, pitch_um}
//         complex frames concatenated view-major.

#include <filesystem>
#include <string>

#include "odt/forward_model.hpp"
#include "odt/projection.hpp"
#include "odt/volume.hpp"

namespace odt::io {

namespace fs = std::filesystem;

fs::path sidecar_path(const fs::path& data);
fs::path mask_path(const fs::path& data);

struct VolumeHeader {
  std::string name;
  std::string dtype;  // "f32" or "c64"
  Grid3 grid;
  double n_background = 1.337;
};

VolumeHeader read_volume_header(const fs::path& path);

void write_volume(const fs::path& path, const RealField& values, const std::string& name,
                  double n_background);
void write_volume(const fs::path& path, const RIVolume& v, const std::string& name);
RIVolume read_volume(const fs::path& path);

/// Writes a c64 VOLF and the mask file.
void write_kspace(const fs::path& path, const KSpaceVolume& k, const std::string& name,
                  double n_background);
/// Reads a c64 VOLF. Without a mask file the mask is inferred from nonzero samples.
KSpaceVolume read_kspace(const fs::path& path);

void write_stack(const fs::path& path, const ProjectionStack& stack);
ProjectionStack read_stack(const fs::path& path);

void write_holograms(const fs::path& path, const HologramSet& h);
HologramSet read_holograms(const fs::path& path);

/// Whole-file byte read, for checksums and comparisons.
std::string read_bytes(const fs::path& path);

}  // namespace odt::io
