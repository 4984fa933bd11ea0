#include "rabi/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <stdexcept>

#include <png.h>

namespace rabi {

RenderQuantity parse_render_quantity(const std::string& s) {
  if (s == "parity") return RenderQuantity::parity;
  if (s == "n_Z") return RenderQuantity::n_Z;
  if (s == "xi") return RenderQuantity::xi;
  if (s == "AP") return RenderQuantity::AP;
  if (s == "gap") return RenderQuantity::gap;
  throw std::invalid_argument("quantity must be one of parity, n_Z, xi, AP, gap");
}

namespace {

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

Rgb lerp(const std::array<double, 3>& a, const std::array<double, 3>& b, double t) {
  return {to_byte(a[0] + (b[0] - a[0]) * t), to_byte(a[1] + (b[1] - a[1]) * t),
          to_byte(a[2] + (b[2] - a[2]) * t)};
}

constexpr Rgb kMissing{128, 128, 128};

}  // namespace

Rgb diverging_color(double t) {
  t = std::clamp(t, -1.0, 1.0);
  constexpr std::array<double, 3> blue{0.23, 0.30, 0.75}, white{1.0, 1.0, 1.0}, red{0.71, 0.02, 0.15};
  return t < 0.0 ? lerp(white, blue, -t) : lerp(white, red, t);
}

Rgb sequential_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  static constexpr std::array<std::array<double, 3>, 5> anchors{{{0.267, 0.005, 0.329},
                                                                  {0.229, 0.322, 0.546},
                                                                  {0.128, 0.567, 0.551},
                                                                  {0.369, 0.789, 0.383},
                                                                  {0.993, 0.906, 0.144}}};
  const double s = t * (anchors.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(s), anchors.size() - 2);
  return lerp(anchors[i], anchors[i + 1], s - static_cast<double>(i));
}

Rgb Image::at(int x, int y) const {
  const std::size_t o = 3 * (static_cast<std::size_t>(y) * width + x);
  return {rgb.at(o), rgb.at(o + 1), rgb.at(o + 2)};
}

Image render_heatmap(const std::vector<SweepRecord>& records, const RenderOptions& opts) {
  if (records.empty()) throw std::invalid_argument("no records to render");
  if (opts.scale < 1) throw std::invalid_argument("scale must be at least 1");
  if (!(opts.amplitude > 0.0)) throw std::invalid_argument("amplitude exponent must be positive");
  std::map<double, int> lam, gs;
  for (const auto& r : records) {
    lam.emplace(r.lambda, 0);
    gs.emplace(r.g_over_gs, 0);
  }
  if (lam.size() * gs.size() != records.size())
    throw std::invalid_argument("records do not form a rectangular grid");
  int k = 0;
  for (auto& [_, idx] : lam) idx = k++;
  k = 0;
  for (auto& [_, idx] : gs) idx = k++;
  const int nl = static_cast<int>(lam.size()), ng = static_cast<int>(gs.size());

  auto value = [&](const SweepRecord& r) -> double {
    switch (opts.quantity) {
      case RenderQuantity::parity: return r.ok() ? r.parity : NAN;
      case RenderQuantity::n_Z: return r.n_Z >= 0 ? r.n_Z : NAN;
      case RenderQuantity::xi: return r.xi - 1.0;
      case RenderQuantity::AP: return r.AP;
      case RenderQuantity::gap: return r.gap;
    }
    return NAN;
  };
  const bool signed_q = opts.quantity == RenderQuantity::parity || opts.quantity == RenderQuantity::xi ||
                        opts.quantity == RenderQuantity::AP;
  double scale = 0.0;
  for (const auto& r : records) {
    const double v = value(r);
    if (std::isfinite(v)) scale = std::max(scale, std::abs(v));
  }
  if (scale == 0.0) scale = 1.0;

  std::vector<Rgb> cells(static_cast<std::size_t>(nl) * ng, kMissing);
  for (const auto& r : records) {
    const double v = value(r);
    if (!std::isfinite(v)) continue;
    const double u = v / scale;
    const double shaped = std::copysign(std::pow(std::abs(u), opts.amplitude), u);
    const int il = lam.at(r.lambda), ig = gs.at(r.g_over_gs);
    cells[static_cast<std::size_t>(ig) * nl + il] = signed_q ? diverging_color(shaped) : sequential_color(shaped);
  }

  Image img;
  img.width = nl * opts.scale;
  img.height = ng * opts.scale;
  img.rgb.resize(3 * static_cast<std::size_t>(img.width) * img.height);
  for (int y = 0; y < img.height; ++y) {
    const int ig = ng - 1 - y / opts.scale;
    for (int x = 0; x < img.width; ++x) {
      const Rgb c = cells[static_cast<std::size_t>(ig) * nl + x / opts.scale];
      const std::size_t o = 3 * (static_cast<std::size_t>(y) * img.width + x);
      img.rgb[o] = c.r;
      img.rgb[o + 1] = c.g;
      img.rgb[o + 2] = c.b;
    }
  }
  return img;
}

void write_png(const Image& image, const std::filesystem::path& path) {
  if (image.width <= 0 || image.height <= 0) throw std::invalid_argument("empty image");
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!fp) throw std::runtime_error("cannot open " + path.string() + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng failed while writing " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y)
    png_write_row(png, image.rgb.data() + 3 * static_cast<std::size_t>(y) * image.width);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace rabi
