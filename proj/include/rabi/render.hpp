#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rabi/sweep.hpp"

namespace rabi {

enum class RenderQuantity { parity, n_Z, xi, AP, gap };

/// Accepts parity, n_Z, xi, AP, gap.
RenderQuantity parse_render_quantity(const std::string& s);

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

/// Blue (-1) through white (0) to red (+1).
Rgb diverging_color(double t);
/// Dark blue-violet (0) through green to yellow (1).
Rgb sequential_color(double t);

struct RenderOptions {
  RenderQuantity quantity = RenderQuantity::parity;
  int scale = 8;           // pixels per grid cell
  double amplitude = 1.0;  // values shown as sign(v)|v|^amplitude after scaling to [-1, 1]
};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, top row first

  Rgb at(int x, int y) const;
};

/// Heatmap with lambda along x and g along y (g increasing upward). Signed
/// quantities (parity, xi - 1, AP) use the diverging map, n_Z and gap the
/// sequential one; missing values are grey. Throws std::invalid_argument when
/// the records do not form a rectangular grid.
Image render_heatmap(const std::vector<SweepRecord>& records, const RenderOptions& opts);

void write_png(const Image& image, const std::filesystem::path& path);

}  // namespace rabi
