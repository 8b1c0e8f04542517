#include "odt/png.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "odt/error.hpp"

namespace odt {

void write_png(const std::filesystem::path& path, const GrayImage& img) {
  if (img.width < 1 || img.height < 1) throw ValidationError("write_png: empty image");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "wb"), std::fclose);
  if (!fp) throw RuntimeError("cannot write " + path.string());

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw RuntimeError("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw RuntimeError("libpng failed writing " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height),
               8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < img.height; ++r)
    png_write_row(png, img.pixels.data() + static_cast<std::size_t>(r) * img.width);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

GrayImage to_gray(const Frame& f, double lo, double hi) {
  GrayImage g(f.height, f.width);
  const double span = hi - lo;
  for (std::size_t i = 0; i < f.pixels.size(); ++i) {
    const double t = span > 0.0 ? (f.pixels[i] - lo) / span : 0.0;
    g.pixels[i] = static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(t, 0.0, 1.0)));
  }
  return g;
}

GrayImage to_gray(const Frame& f) {
  if (f.pixels.empty()) return {};
  const auto [lo, hi] = std::minmax_element(f.pixels.begin(), f.pixels.end());
  return to_gray(f, *lo, *hi);
}

}  // namespace odt
