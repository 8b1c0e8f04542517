#include "odt/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <json.hpp>

#include "odt/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts are not supported");

namespace odt::io {

using nlohmann::json;

fs::path sidecar_path(const fs::path& data) { return fs::path(data.string() + ".json"); }
fs::path mask_path(const fs::path& data) { return fs::path(data.string() + ".mask"); }

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw RuntimeError("cannot write " + path.string());
}

json read_json(const fs::path& path) {
  const fs::path side = sidecar_path(path);
  if (!fs::exists(side)) throw ValidationError("missing manifest " + side.string());
  try {
    return json::parse(read_bytes(side));
  } catch (const json::exception& e) {
    throw ValidationError("malformed manifest " + side.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) { write_text(sidecar_path(path), j.dump(2) + "\n"); }

void write_floats(const fs::path& path, const std::vector<float>& data) {
  std::string bytes(data.size() * sizeof(float), '\0');
  std::memcpy(bytes.data(), data.data(), bytes.size());
  write_text(path, bytes);
}

std::vector<float> read_floats(const fs::path& path, std::size_t expected) {
  const std::string bytes = read_bytes(path);
  if (bytes.size() != expected * sizeof(float))
    throw ValidationError(path.string() + ": expected " + std::to_string(expected * sizeof(float)) +
                          " bytes, found " + std::to_string(bytes.size()));
  std::vector<float> data(expected);
  std::memcpy(data.data(), bytes.data(), bytes.size());
  for (float f : data)
    if (!std::isfinite(f)) throw ValidationError(path.string() + ": non-finite sample");
  return data;
}

template <class T>
T get(const json& j, const char* key, const fs::path& path) {
  if (!j.contains(key)) throw ValidationError(path.string() + ": manifest lacks '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": bad '" + key + "': " + e.what());
  }
}

json volume_json(const std::string& name, const std::string& dtype, const Grid3& g,
                 double n_background) {
  return {{"name", name},
          {"dtype", dtype},
          {"dims", {g.nz, g.ny, g.nx}},
          {"pitch_um", g.pitch_um},
          {"n_background", n_background}};
}

}  // namespace

VolumeHeader read_volume_header(const fs::path& path) {
  const json j = read_json(path);
  VolumeHeader h;
  h.name = get<std::string>(j, "name", path);
  h.dtype = get<std::string>(j, "dtype", path);
  if (h.dtype != "f32" && h.dtype != "c64")
    throw ValidationError(path.string() + ": dtype must be f32 or c64");
  const auto dims = get<std::vector<int>>(j, "dims", path);
  if (dims.size() != 3) throw ValidationError(path.string() + ": dims must have 3 entries");
  h.grid = {dims[2], dims[1], dims[0], get<double>(j, "pitch_um", path)};
  h.grid.validate();
  h.n_background = get<double>(j, "n_background", path);
  return h;
}

void write_volume(const fs::path& path, const RealField& values, const std::string& name,
                  double n_background) {
  std::vector<float> data(values.size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<float>(values[i]);
  write_floats(path, data);
  write_json(path, volume_json(name, "f32", values.grid(), n_background));
}

void write_volume(const fs::path& path, const RIVolume& v, const std::string& name) {
  write_volume(path, static_cast<const RealField&>(v), name, v.n_background());
}

RIVolume read_volume(const fs::path& path) {
  const VolumeHeader h = read_volume_header(path);
  if (h.dtype != "f32") throw ValidationError(path.string() + ": expected an f32 volume");
  const std::vector<float> data = read_floats(path, h.grid.voxels());
  RIVolume v(h.grid, h.n_background);
  for (std::size_t i = 0; i < data.size(); ++i) v[i] = data[i];
  return v;
}

void write_kspace(const fs::path& path, const KSpaceVolume& k, const std::string& name,
                  double n_background) {
  std::vector<float> data(2 * k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    data[2 * i] = static_cast<float>(k[i].real());
    data[2 * i + 1] = static_cast<float>(k[i].imag());
  }
  write_floats(path, data);
  write_json(path, volume_json(name, "c64", k.grid(), n_background));
  const auto& mask = k.mask();
  write_text(mask_path(path), std::string(mask.begin(), mask.end()));
}

KSpaceVolume read_kspace(const fs::path& path) {
  const VolumeHeader h = read_volume_header(path);
  if (h.dtype != "c64") throw ValidationError(path.string() + ": expected a c64 volume");
  const std::vector<float> data = read_floats(path, 2 * h.grid.voxels());
  KSpaceVolume k(h.grid);
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = {data[2 * i], data[2 * i + 1]};
  auto& mask = k.mask();
  if (fs::exists(mask_path(path))) {
    const std::string bytes = read_bytes(mask_path(path));
    if (bytes.size() != mask.size())
      throw ValidationError(mask_path(path).string() + ": wrong mask size");
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (bytes[i] != 0 && bytes[i] != 1)
        throw ValidationError(mask_path(path).string() + ": mask values must be 0 or 1");
      mask[i] = static_cast<std::uint8_t>(bytes[i]);
    }
  } else {
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = k[i] != cdouble{} ? 1 : 0;
  }
  return k;
}

void write_stack(const fs::path& path, const ProjectionStack& stack) {
  stack.validate();
  std::vector<float> data;
  data.reserve(stack.frames.size() * static_cast<std::size_t>(stack.height) * stack.width);
  for (const Frame& f : stack.frames)
    for (double p : f.pixels) data.push_back(static_cast<float>(p));
  write_floats(path, data);
  write_json(path, {{"axis", to_string(stack.axis)},
                    {"angles_deg", stack.angles_deg},
                    {"dims", {stack.height, stack.width}},
                    {"pitch_um", stack.pitch_um},
                    {"provenance", to_string(stack.provenance)}});
}

ProjectionStack read_stack(const fs::path& path) {
  const json j = read_json(path);
  ProjectionStack s;
  s.axis = parse_axis(get<std::string>(j, "axis", path));
  s.angles_deg = get<std::vector<double>>(j, "angles_deg", path);
  const auto dims = get<std::vector<int>>(j, "dims", path);
  if (dims.size() != 2 || dims[0] < 1 || dims[1] < 1)
    throw ValidationError(path.string() + ": dims must be [h, w] with positive entries");
  s.height = dims[0];
  s.width = dims[1];
  s.pitch_um = get<double>(j, "pitch_um", path);
  s.provenance = parse_provenance(get<std::string>(j, "provenance", path));
  const std::size_t per_frame = static_cast<std::size_t>(s.height) * s.width;
  const std::vector<float> data = read_floats(path, per_frame * s.angles_deg.size());
  s.frames.reserve(s.angles_deg.size());
  for (std::size_t k = 0; k < s.angles_deg.size(); ++k) {
    Frame f(s.height, s.width);
    for (std::size_t i = 0; i < per_frame; ++i) f.pixels[i] = data[k * per_frame + i];
    s.frames.push_back(std::move(f));
  }
  s.validate();
  return s;
}

void write_holograms(const fs::path& path, const HologramSet& h) {
  std::vector<float> data;
  data.reserve(h.frames.size() * 2 * static_cast<std::size_t>(h.detector_ny) * h.detector_nx);
  for (const ComplexFrame& f : h.frames) {
    if (f.height != h.detector_ny || f.width != h.detector_nx)
      throw ValidationError("hologram frame dims differ from detector dims");
    for (const cdouble& p : f.pixels) {
      data.push_back(static_cast<float>(p.real()));
      data.push_back(static_cast<float>(p.imag()));
    }
  }
  write_floats(path, data);
  const auto& il = h.illumination;
  write_json(path, {{"n_views", h.frames.size()},
                    {"tilt_deg", h.tilt_deg},
                    {"wavelength_um", il.wavelength_um},
                    {"n_medium", il.n_medium},
                    {"na", il.na_detection},
                    {"detector_dims", {h.detector_ny, h.detector_nx}},
                    {"pitch_um", h.pitch_um}});
}

HologramSet read_holograms(const fs::path& path) {
  const json j = read_json(path);
  const int n_views = get<int>(j, "n_views", path);
  const Optics optics{get<double>(j, "wavelength_um", path), get<double>(j, "n_medium", path),
                      get<double>(j, "na", path)};
  HologramSet h;
  h.tilt_deg = get<double>(j, "tilt_deg", path);
  h.illumination = circular_illumination(n_views, h.tilt_deg, optics);
  const auto dims = get<std::vector<int>>(j, "detector_dims", path);
  if (dims.size() != 2 || dims[0] < 1 || dims[1] < 1)
    throw ValidationError(path.string() + ": detector_dims must be [ny, nx]");
  h.detector_ny = dims[0];
  h.detector_nx = dims[1];
  h.pitch_um = j.value("pitch_um", 0.1);
  const std::size_t per_frame = static_cast<std::size_t>(h.detector_ny) * h.detector_nx;
  const std::vector<float> data =
      read_floats(path, 2 * per_frame * static_cast<std::size_t>(n_views));
  for (int v = 0; v < n_views; ++v) {
    ComplexFrame f(h.detector_ny, h.detector_nx);
    const std::size_t base = 2 * per_frame * static_cast<std::size_t>(v);
    for (std::size_t i = 0; i < per_frame; ++i) f.pixels[i] = {data[base + 2 * i], data[base + 2 * i + 1]};
    h.frames.push_back(std::move(f));
  }
  return h;
}

}  // namespace odt::io
