#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "image.hpp"

namespace morpho {

/// Undirected graph with a real weight per vertex, stored as CSR adjacency.
/// The same structure carries a pixel grid (weights = gray values) and a
/// shape space (vertices = tree nodes, weights = an attribute).
struct NodeWeightedGraph {
  std::vector<double> weights;
  std::vector<std::uint32_t> adjacency; // concatenated neighbor lists
  std::vector<std::uint32_t> offsets;   // size vertex_count + 1

  std::size_t vertex_count() const { return weights.size(); }
  std::size_t edge_count() const { return adjacency.size() / 2; }

  std::span<const std::uint32_t> neighbors(std::uint32_t v) const {
    return {adjacency.data() + offsets[v], adjacency.data() + offsets[v + 1]};
  }
};

/// Collects undirected edges, then lays out a CSR graph with sorted
/// neighbor lists. Rejects self-loops; duplicate edges are merged.
class GraphBuilder {
public:
  explicit GraphBuilder(std::size_t vertex_count) : n_(vertex_count) {}

  void add_edge(std::uint32_t a, std::uint32_t b) {
    if (a == b)
      throw std::invalid_argument("GraphBuilder: self-loop");
    if (a >= n_ || b >= n_)
      throw std::invalid_argument("GraphBuilder: vertex out of range");
    edges_.emplace_back(a, b);
  }

  NodeWeightedGraph build(std::vector<double> weights) {
    if (weights.size() != n_)
      throw std::invalid_argument("GraphBuilder: weight count mismatch");
    std::sort(edges_.begin(), edges_.end(), [](auto& e, auto& f) {
      auto ka = std::minmax(e.first, e.second);
      auto kb = std::minmax(f.first, f.second);
      return ka < kb;
    });
    edges_.erase(std::unique(edges_.begin(), edges_.end(),
                             [](auto& e, auto& f) {
                               return std::minmax(e.first, e.second) == std::minmax(f.first, f.second);
                             }),
                 edges_.end());

    NodeWeightedGraph g;
    g.weights = std::move(weights);
    g.offsets.assign(n_ + 1, 0);
    for (auto& [a, b] : edges_) {
      ++g.offsets[a + 1];
      ++g.offsets[b + 1];
    }
    for (std::size_t i = 0; i < n_; ++i)
      g.offsets[i + 1] += g.offsets[i];
    g.adjacency.resize(edges_.size() * 2);
    std::vector<std::uint32_t> fill(g.offsets.begin(), g.offsets.end() - 1);
    for (auto& [a, b] : edges_) {
      g.adjacency[fill[a]++] = b;
      g.adjacency[fill[b]++] = a;
    }
    for (std::size_t v = 0; v < n_; ++v)
      std::sort(g.adjacency.begin() + g.offsets[v], g.adjacency.begin() + g.offsets[v + 1]);
    return g;
  }

private:
  std::size_t n_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
};

/// One vertex per pixel (row-major), weight = gray value; edges join
/// 4- or 8-neighbors.
inline NodeWeightedGraph grid_graph(const Image& img, Connectivity conn) {
  const int w = img.width, h = img.height;
  NodeWeightedGraph g;
  g.weights.resize(img.size());
  for (std::size_t i = 0; i < img.size(); ++i)
    g.weights[i] = img.values[i];

  g.offsets.assign(img.size() + 1, 0);
  int dx[8], dy[8];
  int k = neighbor_offsets(conn, dx, dy);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::uint32_t deg = 0;
      for (int i = 0; i < k; ++i)
        if (img.in_bounds(x + dx[i], y + dy[i]))
          ++deg;
      g.offsets[static_cast<std::size_t>(y) * w + x + 1] = deg;
    }
  for (std::size_t i = 0; i < img.size(); ++i)
    g.offsets[i + 1] += g.offsets[i];
  g.adjacency.resize(g.offsets.back());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::size_t v = static_cast<std::size_t>(y) * w + x;
      std::uint32_t at = g.offsets[v];
      for (int i = 0; i < k; ++i) {
        int nx = x + dx[i], ny = y + dy[i];
        if (img.in_bounds(nx, ny))
          g.adjacency[at++] = static_cast<std::uint32_t>(ny) * w + nx;
      }
      std::sort(g.adjacency.begin() + g.offsets[v], g.adjacency.begin() + at);
    }
  return g;
}

} // namespace morpho
