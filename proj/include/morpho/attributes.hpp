#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "component_tree.hpp"

namespace morpho {

enum class AttributeKind {
  area,
  contour_length,
  inertia,
  inertia_over_area2,
  circularity,
  elongation,
};

enum class Orientation { relevant_is_low, relevant_is_high };

inline Orientation default_orientation(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::area:
    case AttributeKind::circularity:
      return Orientation::relevant_is_high;
    default:
      return Orientation::relevant_is_low;
  }
}

inline const char* attribute_name(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::area: return "area";
    case AttributeKind::contour_length: return "contour_length";
    case AttributeKind::inertia: return "inertia";
    case AttributeKind::inertia_over_area2: return "inertia_over_area2";
    case AttributeKind::circularity: return "circularity";
    case AttributeKind::elongation: return "elongation";
  }
  return "?";
}

/// Raw pixel-coordinate sums up to second order. Integer accumulation keeps
/// the leaf-to-root pass exact and order-independent.
struct Moments {
  std::int64_t n = 0, sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;

  void add_pixel(std::int64_t x, std::int64_t y) {
    ++n;
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }

  Moments& operator+=(const Moments& o) {
    n += o.n;
    sx += o.sx;
    sy += o.sy;
    sxx += o.sxx;
    syy += o.syy;
    sxy += o.sxy;
    return *this;
  }
};

/// Moments of every node of a tree built over a pixel grid of the given
/// width, accumulated in one leaf-to-root pass (children in node-id order).
inline std::vector<Moments> accumulate_moments(const ComponentTree& t, int image_width) {
  std::vector<Moments> m(t.node_count());
  for (std::uint32_t v = 0; v < t.vertex_count(); ++v)
    m[t.node_of_vertex[v]].add_pixel(v % image_width, v / image_width);
  for (std::uint32_t i = static_cast<std::uint32_t>(t.node_count()); i-- > 1;)
    m[t.parent[i]] += m[i];
  return m;
}

/// Attribute values per node; orientation tells the shape-space machinery
/// whether relevant components carry high or low raw values. Values stay raw
/// here; the negation happens when the shape space is built.
struct AttributeMap {
  AttributeKind kind;
  Orientation orientation;
  std::vector<double> values;
};

namespace detail {

// Central second moments with the n/12 per-axis pixel-spread correction.
struct CentralMoments {
  double mu20, mu02, mu11;
  double inertia() const { return mu20 + mu02; }
};

inline CentralMoments central(const Moments& m) {
  double n = static_cast<double>(m.n);
  double xbar = static_cast<double>(m.sx) / n;
  double ybar = static_cast<double>(m.sy) / n;
  CentralMoments c;
  c.mu20 = static_cast<double>(m.sxx) - n * xbar * xbar + n / 12.0;
  c.mu02 = static_cast<double>(m.syy) - n * ybar * ybar + n / 12.0;
  c.mu11 = static_cast<double>(m.sxy) - n * xbar * ybar;
  return c;
}

// Per-node count of C4 pixel-side boundaries against the complement, image
// border included. A grid edge (p,q) lies on the boundary of exactly the
// nodes on the tree paths node(p)..lca and node(q)..lca (lca excluded);
// summing subtree deltas yields all counts in one pass.
inline std::vector<double> contour_lengths(const ComponentTree& t, const TreeTopology& topo,
                                           int w, int h) {
  const std::size_t n = t.node_count();
  std::vector<std::int64_t> delta(n, 0);

  auto lca = [&](std::uint32_t a, std::uint32_t b) {
    while (topo.depth[a] > topo.depth[b]) a = t.parent[a];
    while (topo.depth[b] > topo.depth[a]) b = t.parent[b];
    while (a != b) {
      a = t.parent[a];
      b = t.parent[b];
    }
    return a;
  };

  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::uint32_t p = static_cast<std::uint32_t>(y) * w + x;
      int border_sides = (x == 0) + (x == w - 1) + (y == 0) + (y == h - 1);
      delta[t.node_of_vertex[p]] += border_sides;
      if (x + 1 < w) {
        std::uint32_t a = t.node_of_vertex[p], b = t.node_of_vertex[p + 1];
        if (a != b) {
          std::uint32_t m = lca(a, b);
          delta[a] += 1;
          delta[b] += 1;
          delta[m] -= 2;
        }
      }
      if (y + 1 < h) {
        std::uint32_t a = t.node_of_vertex[p], b = t.node_of_vertex[p + w];
        if (a != b) {
          std::uint32_t m = lca(a, b);
          delta[a] += 1;
          delta[b] += 1;
          delta[m] -= 2;
        }
      }
    }

  for (std::uint32_t i = static_cast<std::uint32_t>(n); i-- > 1;)
    delta[t.parent[i]] += delta[i];
  return {delta.begin(), delta.end()};
}

} // namespace detail

/// Shape attribute of every node of a tree built over a w x h pixel grid.
inline AttributeMap attribute(const ComponentTree& t, AttributeKind kind, int w, int h,
                              Orientation orientation) {
  if (t.vertex_count() != static_cast<std::size_t>(w) * static_cast<std::size_t>(h))
    throw std::invalid_argument("attribute: tree does not cover a w*h pixel grid");

  AttributeMap out{kind, orientation, std::vector<double>(t.node_count())};

  if (kind == AttributeKind::contour_length) {
    TreeTopology topo = TreeTopology::compute(t);
    out.values = detail::contour_lengths(t, topo, w, h);
    return out;
  }

  std::vector<Moments> moments = accumulate_moments(t, w);
  for (std::size_t i = 0; i < t.node_count(); ++i) {
    const Moments& m = moments[i];
    double n = static_cast<double>(m.n);
    switch (kind) {
      case AttributeKind::area:
        out.values[i] = n;
        break;
      case AttributeKind::inertia:
        out.values[i] = detail::central(m).inertia();
        break;
      case AttributeKind::inertia_over_area2:
        out.values[i] = detail::central(m).inertia() / (n * n);
        break;
      case AttributeKind::circularity: {
        double inertia = detail::central(m).inertia();
        out.values[i] = std::min(1.0, n * n / (2.0 * std::numbers::pi * inertia));
        break;
      }
      case AttributeKind::elongation: {
        auto c = detail::central(m);
        double tr = c.mu20 + c.mu02;
        double disc = std::sqrt((c.mu20 - c.mu02) * (c.mu20 - c.mu02) + 4.0 * c.mu11 * c.mu11);
        double lmax = 0.5 * (tr + disc);
        double det = c.mu20 * c.mu02 - c.mu11 * c.mu11;
        double lmin = det / lmax; // det > 0 thanks to the n/12 correction
        out.values[i] = std::sqrt(lmax / lmin);
        break;
      }
      default:
        break;
    }
  }
  return out;
}

inline AttributeMap attribute(const ComponentTree& t, AttributeKind kind, int w, int h) {
  return attribute(t, kind, w, h, default_orientation(kind));
}

} // namespace morpho
