#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"

namespace morpho {

enum class Polarity { min, max };
enum class TreeKind { min_tree, max_tree, tree_of_shapes };

/// Canonicalized component tree of a node-weighted graph. Node ids are
/// topologically ordered: the root is node 0 and parent[i] < i for i > 0.
/// For a tree of shapes the level monotonicity along branches does not hold;
/// the kind tag tells the two cases apart.
struct ComponentTree {
  TreeKind kind = TreeKind::min_tree;
  std::vector<std::uint32_t> parent;         // parent[0] == 0
  std::vector<double> level;
  std::vector<std::uint32_t> node_of_vertex; // vertex -> smallest containing node

  std::size_t node_count() const { return parent.size(); }
  std::size_t vertex_count() const { return node_of_vertex.size(); }
  std::uint32_t root() const { return 0; }

  Polarity polarity() const {
    return kind == TreeKind::max_tree ? Polarity::max : Polarity::min;
  }
};

/// Union-find construction over vertices sorted by weight (ascending for a
/// min-tree, descending for a max-tree, ties by vertex id), followed by the
/// canonicalization pass that merges same-level parent chains.
inline ComponentTree build_component_tree(const NodeWeightedGraph& g, Polarity pol) {
  const std::size_t n = g.vertex_count();
  if (n == 0)
    throw std::invalid_argument("build_component_tree: empty graph");

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (pol == Polarity::min)
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return g.weights[a] != g.weights[b] ? g.weights[a] < g.weights[b] : a < b;
    });
  else
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return g.weights[a] != g.weights[b] ? g.weights[a] > g.weights[b] : a < b;
    });

  std::vector<std::uint32_t> pos(n);
  for (std::uint32_t i = 0; i < n; ++i)
    pos[order[i]] = i;

  std::vector<std::uint32_t> par(n), uf(n);
  auto find = [&](std::uint32_t v) {
    while (uf[v] != v) {
      uf[v] = uf[uf[v]];
      v = uf[v];
    }
    return v;
  };

  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t p = order[i];
    par[p] = p;
    uf[p] = p;
    for (std::uint32_t q : g.neighbors(p)) {
      if (pos[q] < i) {
        std::uint32_t r = find(q);
        if (r != p) {
          par[r] = p;
          uf[r] = p;
        }
      }
    }
  }

  std::size_t roots = 0;
  for (std::uint32_t v = 0; v < n; ++v)
    roots += par[v] == v;
  if (roots != 1)
    throw std::invalid_argument("build_component_tree: graph is disconnected");

  // Root-to-leaf pass: afterwards every parent pointer is a canonical vertex.
  for (std::size_t i = n; i-- > 0;) {
    std::uint32_t p = order[i];
    std::uint32_t q = par[p];
    if (g.weights[par[q]] == g.weights[q])
      par[p] = par[q];
  }

  auto canonical = [&](std::uint32_t v) {
    return par[v] == v || g.weights[par[v]] != g.weights[v];
  };

  constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> node_id(n, none);
  std::uint32_t count = 0;
  for (std::size_t i = n; i-- > 0;) {
    std::uint32_t v = order[i];
    if (canonical(v))
      node_id[v] = count++;
  }

  ComponentTree t;
  t.kind = pol == Polarity::min ? TreeKind::min_tree : TreeKind::max_tree;
  t.parent.resize(count);
  t.level.resize(count);
  t.node_of_vertex.resize(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (node_id[v] != none) {
      t.level[node_id[v]] = g.weights[v];
      t.parent[node_id[v]] = par[v] == v ? node_id[v] : node_id[par[v]];
    }
    t.node_of_vertex[v] = node_id[v] != none ? node_id[v] : node_id[par[v]];
  }
  return t;
}

/// Children lists, per-node proper vertices (those whose smallest node is the
/// node itself), accumulated vertex counts, and node depths.
struct TreeTopology {
  std::vector<std::uint32_t> child_offsets, children;
  std::vector<std::uint32_t> proper_offsets, proper;
  std::vector<std::int64_t> vertex_counts;
  std::vector<std::uint32_t> depth;

  static TreeTopology compute(const ComponentTree& t) {
    const std::size_t n = t.node_count();
    TreeTopology topo;

    topo.child_offsets.assign(n + 1, 0);
    for (std::uint32_t i = 1; i < n; ++i)
      ++topo.child_offsets[t.parent[i] + 1];
    for (std::size_t i = 0; i < n; ++i)
      topo.child_offsets[i + 1] += topo.child_offsets[i];
    topo.children.resize(n > 0 ? n - 1 : 0);
    {
      std::vector<std::uint32_t> fill(topo.child_offsets.begin(), topo.child_offsets.end() - 1);
      for (std::uint32_t i = 1; i < n; ++i)
        topo.children[fill[t.parent[i]]++] = i;
    }

    topo.proper_offsets.assign(n + 1, 0);
    for (std::uint32_t v : t.node_of_vertex)
      ++topo.proper_offsets[v + 1];
    for (std::size_t i = 0; i < n; ++i)
      topo.proper_offsets[i + 1] += topo.proper_offsets[i];
    topo.proper.resize(t.vertex_count());
    {
      std::vector<std::uint32_t> fill(topo.proper_offsets.begin(), topo.proper_offsets.end() - 1);
      for (std::uint32_t v = 0; v < t.vertex_count(); ++v)
        topo.proper[fill[t.node_of_vertex[v]]++] = v;
    }

    topo.vertex_counts.assign(n, 0);
    for (std::uint32_t i = 0; i < n; ++i)
      topo.vertex_counts[i] = topo.proper_offsets[i + 1] - topo.proper_offsets[i];
    for (std::uint32_t i = static_cast<std::uint32_t>(n); i-- > 1;)
      topo.vertex_counts[t.parent[i]] += topo.vertex_counts[i];

    topo.depth.assign(n, 0);
    for (std::uint32_t i = 1; i < n; ++i)
      topo.depth[i] = topo.depth[t.parent[i]] + 1;
    return topo;
  }

  std::span<const std::uint32_t> children_of(std::uint32_t node) const {
    return {children.data() + child_offsets[node], children.data() + child_offsets[node + 1]};
  }
  std::span<const std::uint32_t> proper_of(std::uint32_t node) const {
    return {proper.data() + proper_offsets[node], proper.data() + proper_offsets[node + 1]};
  }
  std::size_t leaf_count() const {
    std::size_t c = 0;
    for (std::size_t i = 0; i + 1 < child_offsets.size(); ++i)
      c += child_offsets[i + 1] == child_offsets[i];
    return c;
  }
};

/// All vertices contained in the subtree rooted at node, in ascending order.
inline std::vector<std::uint32_t> subtree_vertices(const ComponentTree& t, const TreeTopology& topo,
                                                   std::uint32_t node) {
  std::vector<std::uint32_t> out;
  out.reserve(static_cast<std::size_t>(topo.vertex_counts[node]));
  std::vector<std::uint32_t> stack{node};
  while (!stack.empty()) {
    std::uint32_t n = stack.back();
    stack.pop_back();
    auto pr = topo.proper_of(n);
    out.insert(out.end(), pr.begin(), pr.end());
    for (std::uint32_t c : topo.children_of(n))
      stack.push_back(c);
  }
  (void)t;
  std::sort(out.begin(), out.end());
  return out;
}

/// Direct rule: each vertex takes the level of the lowest kept
/// ancestor-or-self of its node. The root is always kept; a predicate that
/// rejects it is overridden and counted.
template <class KeepFn>
std::vector<double> reconstruct(const ComponentTree& t, KeepFn&& keep,
                                std::size_t* root_overrides = nullptr) {
  const std::size_t n = t.node_count();
  std::vector<double> resolved(n);
  if (!keep(static_cast<std::uint32_t>(0)) && root_overrides)
    ++*root_overrides;
  resolved[0] = t.level[0];
  for (std::uint32_t i = 1; i < n; ++i)
    resolved[i] = keep(i) ? t.level[i] : resolved[t.parent[i]];

  std::vector<double> out(t.vertex_count());
  for (std::size_t v = 0; v < t.vertex_count(); ++v)
    out[v] = resolved[t.node_of_vertex[v]];
  return out;
}

/// "node parent level" lines, for test diffing.
inline std::string dump_tree(const ComponentTree& t) {
  std::string out;
  char buf[96];
  for (std::uint32_t i = 0; i < t.node_count(); ++i) {
    std::snprintf(buf, sizeof buf, "%u %u %.17g\n", i, t.parent[i], t.level[i]);
    out += buf;
  }
  return out;
}

} // namespace morpho
