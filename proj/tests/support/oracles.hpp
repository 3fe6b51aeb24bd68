#pragma once

// Independent reference implementations used only by the tests. Everything
// here avoids the library's union-find / second-tree machinery on purpose:
// trees come from explicit threshold sweeps with flood fill, filters from
// per-pixel searches.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <vector>

#include <morpho/component_tree.hpp>
#include <morpho/graph.hpp>
#include <morpho/image.hpp>

namespace oracles {

using morpho::ComponentTree;
using morpho::Image;
using morpho::NodeWeightedGraph;
using morpho::Polarity;
using morpho::TreeKind;

// --- flood fill over an arbitrary graph -------------------------------------

inline std::vector<std::vector<std::uint32_t>> flood_components(const NodeWeightedGraph& g,
                                                                const std::vector<char>& in_set) {
  std::vector<std::vector<std::uint32_t>> comps;
  std::vector<char> seen(g.vertex_count(), 0);
  for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
    if (!in_set[v] || seen[v])
      continue;
    comps.emplace_back();
    std::vector<std::uint32_t> stack{v};
    seen[v] = 1;
    while (!stack.empty()) {
      std::uint32_t u = stack.back();
      stack.pop_back();
      comps.back().push_back(u);
      for (std::uint32_t w : g.neighbors(u))
        if (in_set[w] && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    std::sort(comps.back().begin(), comps.back().end());
  }
  return comps;
}

// --- component tree by explicit threshold sweep ------------------------------

inline ComponentTree brute_force_tree(const NodeWeightedGraph& g, Polarity pol) {
  if (g.vertex_count() == 0)
    throw std::invalid_argument("brute_force_tree: empty graph");

  std::vector<double> levels(g.weights);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (pol == Polarity::max)
    std::reverse(levels.begin(), levels.end());

  {
    std::vector<char> all(g.vertex_count(), 1);
    if (flood_components(g, all).size() != 1)
      throw std::invalid_argument("brute_force_tree: graph is disconnected");
  }

  // distinct component sets, first appearance gives the level
  std::map<std::vector<std::uint32_t>, double> sets;
  std::vector<char> in_set(g.vertex_count());
  for (double lambda : levels) {
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v)
      in_set[v] = pol == Polarity::min ? g.weights[v] <= lambda : g.weights[v] >= lambda;
    for (auto& comp : flood_components(g, in_set))
      sets.emplace(std::move(comp), lambda);
  }

  struct Node {
    std::vector<std::uint32_t> vertices;
    double level;
  };
  std::vector<Node> nodes;
  for (auto& [verts, level] : sets)
    nodes.push_back({verts, level});
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) {
    if (a.vertices.size() != b.vertices.size())
      return a.vertices.size() > b.vertices.size();
    if (a.level != b.level)
      return a.level < b.level;
    return a.vertices.front() < b.vertices.front();
  });

  ComponentTree t;
  t.kind = pol == Polarity::min ? TreeKind::min_tree : TreeKind::max_tree;
  t.parent.resize(nodes.size());
  t.level.resize(nodes.size());
  t.node_of_vertex.assign(g.vertex_count(), 0);
  t.parent[0] = 0;
  t.level[0] = nodes[0].level;
  for (std::uint32_t i = 1; i < nodes.size(); ++i) {
    t.level[i] = nodes[i].level;
    t.parent[i] = t.node_of_vertex[nodes[i].vertices.front()];
    for (std::uint32_t v : nodes[i].vertices)
      t.node_of_vertex[v] = i;
  }
  return t;
}

// --- structural tree equality -------------------------------------------------

// Canonical key of each node: the smallest vertex whose smallest node it is.
// Two canonicalized trees over the same vertex set are equal iff vertices map
// to nodes with equal keys, levels, and parent keys.
inline std::vector<std::uint32_t> node_keys(const ComponentTree& t) {
  constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> key(t.node_count(), none);
  for (std::uint32_t v = 0; v < t.vertex_count(); ++v)
    key[t.node_of_vertex[v]] = std::min(key[t.node_of_vertex[v]], v);
  return key;
}

inline bool tree_equal(const ComponentTree& a, const ComponentTree& b) {
  if (a.node_count() != b.node_count() || a.vertex_count() != b.vertex_count())
    return false;
  std::vector<std::uint32_t> ka = node_keys(a), kb = node_keys(b);
  for (std::uint32_t k : ka)
    if (k == std::numeric_limits<std::uint32_t>::max())
      return false; // node without a proper vertex: not canonical
  for (std::uint32_t v = 0; v < a.vertex_count(); ++v) {
    std::uint32_t na = a.node_of_vertex[v], nb = b.node_of_vertex[v];
    if (ka[na] != kb[nb] || a.level[na] != b.level[nb])
      return false;
    if (ka[a.parent[na]] != kb[b.parent[nb]] || a.level[a.parent[na]] != b.level[b.parent[nb]])
      return false;
  }
  return true;
}

// --- grayscale area opening / closing, per pixel -----------------------------

// gamma_a(f)(p) = max over lambda <= f(p) of lambda such that the component
// of {f >= lambda} containing p has at least a pixels.
inline Image area_opening(const Image& f, int a, morpho::Connectivity conn) {
  NodeWeightedGraph g = morpho::grid_graph(f, conn);
  Image out(f.width, f.height);
  std::vector<char> in_set(f.size());
  std::vector<char> seen(f.size());
  for (std::uint32_t p = 0; p < f.size(); ++p) {
    int result = -1;
    for (int lambda = f.values[p]; lambda >= 0 && result < 0; --lambda) {
      std::size_t count = 0;
      std::fill(seen.begin(), seen.end(), 0);
      std::vector<std::uint32_t> stack{p};
      seen[p] = 1;
      while (!stack.empty()) {
        std::uint32_t u = stack.back();
        stack.pop_back();
        ++count;
        for (std::uint32_t w : g.neighbors(u))
          if (!seen[w] && f.values[w] >= lambda) {
            seen[w] = 1;
            stack.push_back(w);
          }
      }
      if (count >= static_cast<std::size_t>(a))
        result = lambda;
    }
    out.values[p] = static_cast<std::uint8_t>(result < 0 ? 0 : result);
  }
  return out;
}

inline Image area_closing(const Image& f, int a, morpho::Connectivity conn) {
  NodeWeightedGraph g = morpho::grid_graph(f, conn);
  Image out(f.width, f.height);
  std::vector<char> seen(f.size());
  for (std::uint32_t p = 0; p < f.size(); ++p) {
    int result = 256;
    for (int lambda = f.values[p]; lambda <= 255 && result > 255; ++lambda) {
      std::size_t count = 0;
      std::fill(seen.begin(), seen.end(), 0);
      std::vector<std::uint32_t> stack{p};
      seen[p] = 1;
      while (!stack.empty()) {
        std::uint32_t u = stack.back();
        stack.pop_back();
        ++count;
        for (std::uint32_t w : g.neighbors(u))
          if (!seen[w] && f.values[w] <= lambda) {
            seen[w] = 1;
            stack.push_back(w);
          }
      }
      if (count >= static_cast<std::size_t>(a))
        result = lambda;
    }
    out.values[p] = static_cast<std::uint8_t>(result > 255 ? 255 : result);
  }
  return out;
}

// --- extinction values by threshold sweep ------------------------------------

struct OracleMinimum {
  std::uint32_t min_vertex;
  double altitude;
  double merge_level; // +inf for the first minimum
  double extinction;
};

// Regional minima of the weights, in rank order (altitude, then smallest
// vertex), with merge levels found by sweeping every threshold set.
inline std::vector<OracleMinimum> extinction_sweep(const NodeWeightedGraph& g) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();

  // regional minima by plateau flooding; ids in discovery order
  std::vector<std::uint32_t> min_vertex_of;
  std::vector<double> altitude_of;
  std::vector<std::uint32_t> vertex_min(g.vertex_count(), none);
  {
    std::vector<char> seen(g.vertex_count(), 0);
    std::vector<std::uint32_t> plateau;
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
      if (seen[v])
        continue;
      double w = g.weights[v];
      plateau.assign(1, v);
      seen[v] = 1;
      bool is_min = true;
      for (std::size_t i = 0; i < plateau.size(); ++i)
        for (std::uint32_t u : g.neighbors(plateau[i])) {
          if (g.weights[u] < w)
            is_min = false;
          else if (g.weights[u] == w && !seen[u]) {
            seen[u] = 1;
            plateau.push_back(u);
          }
        }
      if (is_min) {
        std::uint32_t id = static_cast<std::uint32_t>(min_vertex_of.size());
        for (std::uint32_t u : plateau)
          vertex_min[u] = id;
        min_vertex_of.push_back(*std::min_element(plateau.begin(), plateau.end()));
        altitude_of.push_back(w);
      }
    }
  }

  const std::uint32_t m = static_cast<std::uint32_t>(min_vertex_of.size());
  std::vector<std::uint32_t> ids(m);
  for (std::uint32_t i = 0; i < m; ++i)
    ids[i] = i;
  std::sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) {
    return altitude_of[a] != altitude_of[b] ? altitude_of[a] < altitude_of[b]
                                            : min_vertex_of[a] < min_vertex_of[b];
  });
  std::vector<std::uint32_t> rank_of(m);
  for (std::uint32_t r = 0; r < m; ++r)
    rank_of[ids[r]] = r;

  std::vector<double> merge_of(m, inf);
  std::vector<double> levels(g.weights);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::vector<char> in_set(g.vertex_count());
  std::vector<std::uint32_t> inside;
  for (double lambda : levels) {
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v)
      in_set[v] = g.weights[v] <= lambda;
    for (auto& comp : flood_components(g, in_set)) {
      inside.clear();
      for (std::uint32_t v : comp)
        if (vertex_min[v] != none)
          inside.push_back(vertex_min[v]);
      std::sort(inside.begin(), inside.end());
      inside.erase(std::unique(inside.begin(), inside.end()), inside.end());
      if (inside.size() < 2)
        continue;
      std::uint32_t best = none;
      for (std::uint32_t id : inside)
        best = std::min(best, rank_of[id]);
      for (std::uint32_t id : inside)
        if (rank_of[id] > best && merge_of[id] == inf)
          merge_of[id] = lambda;
    }
  }

  std::vector<OracleMinimum> recs(m);
  for (std::uint32_t r = 0; r < m; ++r) {
    std::uint32_t id = ids[r];
    recs[r] = {min_vertex_of[id], altitude_of[id], merge_of[id],
               merge_of[id] == inf ? inf : merge_of[id] - altitude_of[id]};
  }
  return recs;
}

// --- contour length over materialized pixel sets -----------------------------

// Independent of the tree-path counting in the library: membership tested by
// walking ancestor chains, boundary sides counted pixel by pixel.
inline std::vector<double> contour_direct(const ComponentTree& t, int w, int h) {
  auto contains = [&](std::uint32_t node, std::uint32_t pixel) {
    std::uint32_t n = t.node_of_vertex[pixel];
    while (true) {
      if (n == node)
        return true;
      if (n == t.root())
        return false;
      n = t.parent[n];
    }
  };
  std::vector<double> out(t.node_count(), 0);
  for (std::uint32_t node = 0; node < t.node_count(); ++node) {
    long count = 0;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        std::uint32_t p = static_cast<std::uint32_t>(y) * w + x;
        if (!contains(node, p))
          continue;
        count += (x == 0) || !contains(node, p - 1);
        count += (x == w - 1) || !contains(node, p + 1);
        count += (y == 0) || !contains(node, p - w);
        count += (y == h - 1) || !contains(node, p + w);
      }
    out[node] = static_cast<double>(count);
  }
  return out;
}

// --- random data -------------------------------------------------------------

inline Image random_image(std::mt19937& rng, int w, int h, int level_count) {
  Image img(w, h);
  std::uniform_int_distribution<int> dist(0, level_count - 1);
  int step = level_count > 1 ? 255 / (level_count - 1) : 0;
  for (auto& v : img.values)
    v = static_cast<std::uint8_t>(dist(rng) * step);
  return img;
}

// Random tree laid out as a node-weighted graph, for shape-space tests.
inline NodeWeightedGraph random_tree_graph(std::mt19937& rng, int n, bool integer_weights) {
  morpho::GraphBuilder builder(n);
  for (std::uint32_t i = 1; i < static_cast<std::uint32_t>(n); ++i) {
    std::uniform_int_distribution<std::uint32_t> pick(0, i - 1);
    builder.add_edge(i, pick(rng));
  }
  std::vector<double> weights(n);
  if (integer_weights) {
    std::uniform_int_distribution<int> dist(0, 7);
    for (auto& w : weights)
      w = dist(rng);
  } else {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& w : weights)
      w = dist(rng);
  }
  return builder.build(std::move(weights));
}

// Random image with a constant border and no critical 2x2 configuration, so
// its level sets carry no C4/C8 saddle ambiguity.
inline Image make_well_composed(std::mt19937& rng, int w, int h, int level_count) {
  Image img = random_image(rng, w, h, level_count);
  std::uniform_int_distribution<int> dist(0, level_count - 1);
  int step = level_count > 1 ? 255 / (level_count - 1) : 0;
  std::uint8_t border = static_cast<std::uint8_t>(dist(rng) * step);
  for (int x = 0; x < w; ++x) {
    img.at(x, 0) = border;
    img.at(x, h - 1) = border;
  }
  for (int y = 0; y < h; ++y) {
    img.at(0, y) = border;
    img.at(w - 1, y) = border;
  }

  auto interior = [&](int x, int y) { return x > 0 && x < w - 1 && y > 0 && y < h - 1; };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y + 1 < h; ++y)
      for (int x = 0; x + 1 < w; ++x) {
        int p = img.at(x, y), q = img.at(x + 1, y), r = img.at(x, y + 1), s = img.at(x + 1, y + 1);
        if (std::min(p, s) > std::max(q, r)) {
          std::uint8_t target = static_cast<std::uint8_t>(std::max(q, r));
          if (interior(x + 1, y + 1))
            img.at(x + 1, y + 1) = target;
          else
            img.at(x, y) = target;
          changed = true;
        } else if (std::min(q, r) > std::max(p, s)) {
          std::uint8_t target = static_cast<std::uint8_t>(std::max(p, s));
          if (interior(x + 1, y))
            img.at(x + 1, y) = target;
          else
            img.at(x, y + 1) = target;
          changed = true;
        }
      }
  }
  return img;
}

inline bool is_well_composed(const Image& img) {
  for (int y = 0; y + 1 < img.height; ++y)
    for (int x = 0; x + 1 < img.width; ++x) {
      int p = img.at(x, y), q = img.at(x + 1, y), r = img.at(x, y + 1), s = img.at(x + 1, y + 1);
      if (std::min(p, s) > std::max(q, r) || std::min(q, r) > std::max(p, s))
        return false;
    }
  return true;
}

// --- deterministic shape painters ---------------------------------------------

inline void paint_rect(Image& img, int x0, int y0, int x1, int y1, std::uint8_t v) {
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x)
      if (img.in_bounds(x, y))
        img.at(x, y) = v;
}

inline void paint_ellipse(Image& img, double cx, double cy, double rx, double ry, std::uint8_t v) {
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      double dx = (x - cx) / rx, dy = (y - cy) / ry;
      if (dx * dx + dy * dy <= 1.0)
        img.at(x, y) = v;
    }
}

// Dark elongated shapes and fasteners on a light background.
inline Image tools_like_image(int variant) {
  Image img(96, 64, 200);
  paint_rect(img, 8 + variant, 10, 60 + variant, 16, 60);        // shaft
  paint_ellipse(img, 70.0 + variant, 13.0, 9.0, 7.0, 50);        // head
  paint_rect(img, 12, 30, 18, 54, 70);                           // L-shape, vertical
  paint_rect(img, 12, 48, 40, 54, 70);                           // L-shape, horizontal
  paint_ellipse(img, 60.0, 40.0, 3.0, 3.0, 40 + variant);        // screw
  paint_ellipse(img, 75.0, 50.0, 3.5, 3.5, 45);                  // screw
  paint_rect(img, 30, 22, 33, 26, 90 + variant);                 // nut
  return img;
}

} // namespace oracles
