#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace morpho {

enum class Connectivity { c4, c8 };

/// 8-bit grayscale image, row-major, (x, y) = (column, row), origin top-left.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> values;

  Image() = default;
  Image(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h),
        values(static_cast<std::size_t>(w > 0 ? w : 0) * static_cast<std::size_t>(h > 0 ? h : 0), fill) {
    if (w <= 0 || h <= 0)
      throw std::invalid_argument("Image: dimensions must be positive");
  }

  std::size_t size() const { return values.size(); }
  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

  std::uint8_t& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }

  bool operator==(const Image&) const = default;
};

/// Offsets of the 4- or 8-neighborhood. Returns the neighbor count.
inline int neighbor_offsets(Connectivity conn, int (&dx)[8], int (&dy)[8]) {
  static constexpr int ox[8] = {1, 0, -1, 0, 1, 1, -1, -1};
  static constexpr int oy[8] = {0, 1, 0, -1, 1, -1, 1, -1};
  int k = conn == Connectivity::c4 ? 4 : 8;
  for (int i = 0; i < k; ++i) {
    dx[i] = ox[i];
    dy[i] = oy[i];
  }
  return k;
}

inline Image complement(const Image& img) {
  Image out = img;
  for (auto& v : out.values)
    v = static_cast<std::uint8_t>(255 - v);
  return out;
}

enum class TopHatMode { absolute, input_minus_output, output_minus_input };

/// Residue between an image and a filtered version of it. The absolute form
/// serves both min-tree levelings (g >= f) and max-tree levelings (g <= f);
/// the signed forms clamp at zero.
inline Image top_hat(const Image& f, const Image& g, TopHatMode mode = TopHatMode::absolute) {
  if (f.width != g.width || f.height != g.height)
    throw std::invalid_argument("top_hat: dimension mismatch");
  Image out(f.width, f.height);
  for (std::size_t i = 0; i < f.size(); ++i) {
    int a = f.values[i], b = g.values[i];
    int d = 0;
    switch (mode) {
      case TopHatMode::absolute: d = std::abs(a - b); break;
      case TopHatMode::input_minus_output: d = a > b ? a - b : 0; break;
      case TopHatMode::output_minus_input: d = b > a ? b - a : 0; break;
    }
    out.values[i] = static_cast<std::uint8_t>(d);
  }
  return out;
}

/// An operator g is a leveling of f iff it preserves the order between
/// neighboring pixels: whenever g(p) > g(q), also f(p) >= g(p) and g(q) >= f(q).
inline bool is_leveling(const Image& f, const Image& g, Connectivity conn) {
  if (f.width != g.width || f.height != g.height)
    throw std::invalid_argument("is_leveling: dimension mismatch");
  int dx[8], dy[8];
  int k = neighbor_offsets(conn, dx, dy);
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      int gp = g.at(x, y);
      for (int i = 0; i < k; ++i) {
        int nx = x + dx[i], ny = y + dy[i];
        if (!f.in_bounds(nx, ny))
          continue;
        int gq = g.at(nx, ny);
        if (gp > gq && !(f.at(x, y) >= gp && gq >= f.at(nx, ny)))
          return false;
      }
    }
  }
  return true;
}

} // namespace morpho
