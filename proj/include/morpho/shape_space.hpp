#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <variant>
#include <vector>

#include "attributes.hpp"
#include "component_tree.hpp"
#include "graph.hpp"

namespace morpho {

/// A component tree viewed as a node-weighted graph: vertices are the tree
/// nodes, adjacency is parenthood, weights are the oriented attribute.
/// Orientation makes relevant components minima, so attributes whose high
/// values are relevant get negated.
struct ShapeSpace {
  NodeWeightedGraph graph;
  const ComponentTree* base = nullptr;
  AttributeKind attribute_kind{};
  Orientation orientation{};
};

inline ShapeSpace make_shape_space(const ComponentTree& t, const AttributeMap& a) {
  if (a.values.size() != t.node_count())
    throw std::invalid_argument("make_shape_space: attribute does not match the tree");
  ShapeSpace s;
  s.base = &t;
  s.attribute_kind = a.kind;
  s.orientation = a.orientation;
  GraphBuilder builder(t.node_count());
  for (std::uint32_t i = 1; i < t.node_count(); ++i)
    builder.add_edge(i, t.parent[i]);
  std::vector<double> weights = a.values;
  if (a.orientation == Orientation::relevant_is_high)
    for (double& v : weights)
      v = -v;
  s.graph = builder.build(std::move(weights));
  return s;
}

/// The second tree: a min-tree of the shape space. Its leaves are the
/// regional minima of the attribute on the base tree.
inline ComponentTree second_tree(const ShapeSpace& s) {
  return build_component_tree(s.graph, Polarity::min);
}

enum class SecondAttributeKind { height, node_count, pixel_area };

inline const char* second_attribute_name(SecondAttributeKind kind) {
  switch (kind) {
    case SecondAttributeKind::height: return "height";
    case SecondAttributeKind::node_count: return "node_count";
    case SecondAttributeKind::pixel_area: return "pixel_area";
  }
  return "?";
}

namespace detail {

// Minimum shape-space weight inside each second-tree node.
inline std::vector<double> min_weight_inside(const ComponentTree& tt, const ShapeSpace& s) {
  std::vector<double> mn(tt.node_count(), std::numeric_limits<double>::infinity());
  for (std::uint32_t v = 0; v < tt.vertex_count(); ++v) {
    double w = s.graph.weights[v];
    double& slot = mn[tt.node_of_vertex[v]];
    slot = std::min(slot, w);
  }
  for (std::uint32_t i = static_cast<std::uint32_t>(tt.node_count()); i-- > 1;)
    mn[tt.parent[i]] = std::min(mn[tt.parent[i]], mn[i]);
  return mn;
}

// The base-tree node of minimal depth inside each second-tree node. A
// second-tree component is connected in the base tree, so this single node
// covers the whole component's pixel support.
inline std::vector<std::uint32_t> top_base_node(const ComponentTree& tt, const TreeTopology& topo,
                                                const TreeTopology& base_topo) {
  std::vector<std::uint32_t> top(tt.node_count(), 0);
  std::vector<std::uint32_t> best(tt.node_count(), std::numeric_limits<std::uint32_t>::max());
  for (std::uint32_t i = static_cast<std::uint32_t>(tt.node_count()); i-- > 0;) {
    for (std::uint32_t v : topo.proper_of(i))
      if (base_topo.depth[v] < best[i]) {
        best[i] = base_topo.depth[v];
        top[i] = v;
      }
    for (std::uint32_t c : topo.children_of(i))
      if (best[c] < best[i]) {
        best[i] = best[c];
        top[i] = top[c];
      }
  }
  return top;
}

} // namespace detail

/// Attribute on the second tree. All three kinds are increasing.
///   height     - level of the component minus the lowest weight inside it
///   node_count - number of base-tree nodes in the component
///   pixel_area - pixels of the original image covered by the component
inline std::vector<double> second_attribute(const ComponentTree& tt, const ShapeSpace& s,
                                            SecondAttributeKind kind) {
  TreeTopology topo = TreeTopology::compute(tt);
  switch (kind) {
    case SecondAttributeKind::height: {
      std::vector<double> mn = detail::min_weight_inside(tt, s);
      std::vector<double> out(tt.node_count());
      for (std::uint32_t i = 0; i < tt.node_count(); ++i)
        out[i] = tt.level[i] - mn[i];
      return out;
    }
    case SecondAttributeKind::node_count:
      return {topo.vertex_counts.begin(), topo.vertex_counts.end()};
    case SecondAttributeKind::pixel_area: {
      TreeTopology base_topo = TreeTopology::compute(*s.base);
      std::vector<std::uint32_t> top = detail::top_base_node(tt, topo, base_topo);
      std::vector<double> out(tt.node_count());
      for (std::uint32_t i = 0; i < tt.node_count(); ++i)
        out[i] = static_cast<double>(base_topo.vertex_counts[top[i]]);
      return out;
    }
  }
  throw std::invalid_argument("second_attribute: unknown kind");
}

/// One regional minimum of the shape space. The strict total order ranks
/// minima by altitude, ties by the smallest base-tree node in the plateau.
/// The first minimum never merges: its extinction is infinite.
struct MinimumRecord {
  std::uint32_t leaf;        // second-tree node holding the plateau
  std::uint32_t min_vertex;  // smallest base node inside, the tie-break key
  double altitude;
  std::uint32_t rank;
  double merge_level;        // level of CC, the lowest component joining a prior minimum
  double extinction;         // merge_level - altitude

  bool infinite() const { return extinction == std::numeric_limits<double>::infinity(); }
};

/// Extinction values of all regional minima, in rank order.
inline std::vector<MinimumRecord> extinction_values(const ComponentTree& tt) {
  TreeTopology topo = TreeTopology::compute(tt);
  constexpr double inf = std::numeric_limits<double>::infinity();

  std::vector<MinimumRecord> recs;
  for (std::uint32_t i = 0; i < tt.node_count(); ++i) {
    if (topo.child_offsets[i + 1] != topo.child_offsets[i])
      continue; // not a leaf
    auto pr = topo.proper_of(i);
    std::uint32_t mv = *std::min_element(pr.begin(), pr.end());
    recs.push_back({i, mv, tt.level[i], 0, inf, inf});
  }
  std::sort(recs.begin(), recs.end(), [](const MinimumRecord& a, const MinimumRecord& b) {
    return a.altitude != b.altitude ? a.altitude < b.altitude : a.min_vertex < b.min_vertex;
  });
  for (std::uint32_t r = 0; r < recs.size(); ++r)
    recs[r].rank = r;

  // Leaf-to-root pass carrying the best (lowest-rank) minimum of each
  // subtree: when branches meet, every branch best except the overall best
  // merges here. Each minimum retires exactly once.
  constexpr std::uint32_t big = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> best(tt.node_count(), big);
  for (const MinimumRecord& m : recs)
    best[m.leaf] = m.rank;
  for (std::uint32_t i = static_cast<std::uint32_t>(tt.node_count()); i-- > 1;) {
    std::uint32_t p = tt.parent[i];
    if (best[i] == big)
      continue;
    if (best[p] == big) {
      best[p] = best[i];
    } else {
      std::uint32_t loser = std::max(best[p], best[i]);
      best[p] = std::min(best[p], best[i]);
      recs[loser].merge_level = tt.level[p];
      recs[loser].extinction = recs[loser].merge_level - recs[loser].altitude;
    }
  }
  return recs;
}

// --- filtering strategies ---------------------------------------------------

struct ThresholdStrategy {
  double lambda; // keep base nodes whose oriented attribute is <= lambda
};
struct ClosingStrategy {
  SecondAttributeKind aa = SecondAttributeKind::height;
  double lambda = 0;
};
struct ExtinctionStrategy {
  double epsilon = 0;
};
using Strategy = std::variant<ThresholdStrategy, ClosingStrategy, ExtinctionStrategy>;

/// A surviving minimum together with its blob: the base-tree nodes attached
/// to it by the filtering strategy.
struct SurvivorBlob {
  std::uint32_t leaf;                  // second-tree leaf of the minimum
  double altitude;
  double extinction;
  std::vector<std::uint32_t> plateau;  // base nodes of the minimum plateau
  std::vector<std::uint32_t> nodes;    // base nodes of the blob
};

struct ShapeSpaceFilterResult {
  std::vector<double> filtered;    // the simplified attribute on base nodes
  std::vector<SurvivorBlob> blobs; // empty for the threshold strategy
  std::vector<char> kept;          // union of blobs, or the thresholded set
};

namespace detail {

// A second-tree node qualifies for the height closing when some component it
// represents reaches the requested height: components of node N live at
// levels [level(N), level(parent)), so the test uses the parent level.
inline std::vector<char> closing_qualifies(const ComponentTree& tt, const TreeTopology& topo,
                                           const ShapeSpace& s, SecondAttributeKind kind,
                                           double lambda) {
  std::vector<char> q(tt.node_count(), 0);
  q[0] = 1;
  (void)topo;
  if (kind == SecondAttributeKind::height) {
    std::vector<double> mn = min_weight_inside(tt, s);
    for (std::uint32_t i = 1; i < tt.node_count(); ++i)
      q[i] = tt.level[tt.parent[i]] - mn[i] >= lambda;
  } else {
    std::vector<double> aa = second_attribute(tt, s, kind);
    for (std::uint32_t i = 1; i < tt.node_count(); ++i)
      q[i] = aa[i] >= lambda;
  }
  return q;
}

// Attribute closing: every base node takes the level of the smallest
// qualifying second-tree component containing it (the root as fallback).
inline std::vector<double> closed_attribute(const ComponentTree& tt, const TreeTopology& topo,
                                            const ShapeSpace& s, SecondAttributeKind kind,
                                            double lambda) {
  std::vector<char> q = closing_qualifies(tt, topo, s, kind, lambda);
  std::vector<std::uint32_t> nearest(tt.node_count());
  nearest[0] = 0;
  for (std::uint32_t i = 1; i < tt.node_count(); ++i)
    nearest[i] = q[i] ? i : nearest[tt.parent[i]];
  std::vector<double> out(tt.vertex_count());
  for (std::uint32_t v = 0; v < tt.vertex_count(); ++v)
    out[v] = tt.level[nearest[tt.node_of_vertex[v]]];
  return out;
}

} // namespace detail

/// Apply one strategy in shape space.
///   threshold(L):  kept = base nodes with oriented attribute <= L
///   closing(aa,L): attribute closing of aa at L; survivors are the rank-first
///                  minima of the surviving plateaus, blob = largest component
///                  of the closed attribute around one survivor
///   extinction(E): height closing at E; survivors have extinction >= E,
///                  blob = component of {filtered < altitude + E} at the minimum
inline ShapeSpaceFilterResult filter_shape_space(const ShapeSpace& s, const ComponentTree& tt,
                                                 const Strategy& strategy) {
  const std::size_t nodes = s.graph.vertex_count();
  ShapeSpaceFilterResult res;
  res.kept.assign(nodes, 0);

  if (auto* th = std::get_if<ThresholdStrategy>(&strategy)) {
    res.filtered = s.graph.weights;
    for (std::size_t i = 0; i < nodes; ++i)
      res.kept[i] = s.graph.weights[i] <= th->lambda;
    return res;
  }

  TreeTopology topo = TreeTopology::compute(tt);
  std::vector<MinimumRecord> recs = extinction_values(tt);

  auto plateau_of = [&](const MinimumRecord& m) {
    auto pr = topo.proper_of(m.leaf);
    return std::vector<std::uint32_t>(pr.begin(), pr.end());
  };

  if (auto* cl = std::get_if<ClosingStrategy>(&strategy)) {
    if (cl->lambda < 0)
      throw std::invalid_argument("filter_shape_space: closing threshold must be >= 0");
    res.filtered = detail::closed_attribute(tt, topo, s, cl->aa, cl->lambda);

    NodeWeightedGraph closed_graph = s.graph;
    closed_graph.weights = res.filtered;
    ComponentTree tt2 = build_component_tree(closed_graph, Polarity::min);
    TreeTopology topo2 = TreeTopology::compute(tt2);

    // rank-first original minimum per surviving plateau
    std::vector<std::uint32_t> first(tt2.node_count(), std::numeric_limits<std::uint32_t>::max());
    for (std::uint32_t r = 0; r < recs.size(); ++r) {
      std::uint32_t leaf2 = tt2.node_of_vertex[recs[r].min_vertex];
      if (topo2.child_offsets[leaf2 + 1] != topo2.child_offsets[leaf2])
        continue; // the minimum was absorbed into a slope
      first[leaf2] = std::min(first[leaf2], r);
    }
    std::vector<char> survivor_leaf2(tt2.node_count(), 0);
    for (std::uint32_t i = 0; i < tt2.node_count(); ++i)
      survivor_leaf2[i] = first[i] != std::numeric_limits<std::uint32_t>::max();

    std::vector<std::uint32_t> survivors_in_subtree(tt2.node_count(), 0);
    for (std::uint32_t i = 0; i < tt2.node_count(); ++i)
      survivors_in_subtree[i] = survivor_leaf2[i];
    for (std::uint32_t i = static_cast<std::uint32_t>(tt2.node_count()); i-- > 1;)
      survivors_in_subtree[tt2.parent[i]] += survivors_in_subtree[i];

    for (std::uint32_t i = 0; i < tt2.node_count(); ++i) {
      if (!survivor_leaf2[i])
        continue;
      const MinimumRecord& m = recs[first[i]];
      std::uint32_t blob_node = i;
      while (blob_node != tt2.root() && survivors_in_subtree[tt2.parent[blob_node]] == 1)
        blob_node = tt2.parent[blob_node];
      SurvivorBlob b;
      b.leaf = m.leaf;
      b.altitude = m.altitude;
      b.extinction = m.extinction;
      b.plateau = subtree_vertices(tt2, topo2, i);
      b.nodes = subtree_vertices(tt2, topo2, blob_node);
      for (std::uint32_t n : b.nodes)
        res.kept[n] = 1;
      res.blobs.push_back(std::move(b));
    }
    return res;
  }

  const auto& ex = std::get<ExtinctionStrategy>(strategy);
  if (ex.epsilon < 0)
    throw std::invalid_argument("filter_shape_space: extinction threshold must be >= 0");
  res.filtered = detail::closed_attribute(tt, topo, s, SecondAttributeKind::height, ex.epsilon);

  std::vector<std::uint32_t> stamp(nodes, std::numeric_limits<std::uint32_t>::max());
  std::vector<std::uint32_t> stack;
  std::uint32_t run = 0;
  for (const MinimumRecord& m : recs) {
    if (!(m.extinction >= ex.epsilon))
      continue;
    SurvivorBlob b;
    b.leaf = m.leaf;
    b.altitude = m.altitude;
    b.extinction = m.extinction;
    b.plateau = plateau_of(m);

    // flood the basin of m in the closed landscape, below altitude + epsilon
    double cut = m.altitude + ex.epsilon;
    stack.clear();
    for (std::uint32_t v : b.plateau)
      if (res.filtered[v] < cut && stamp[v] != run) {
        stamp[v] = run;
        stack.push_back(v);
        b.nodes.push_back(v);
      }
    while (!stack.empty()) {
      std::uint32_t v = stack.back();
      stack.pop_back();
      for (std::uint32_t u : s.graph.neighbors(v))
        if (stamp[u] != run && res.filtered[u] < cut) {
          stamp[u] = run;
          stack.push_back(u);
          b.nodes.push_back(u);
        }
    }
    std::sort(b.nodes.begin(), b.nodes.end());
    for (std::uint32_t v : b.nodes)
      res.kept[v] = 1;
    res.blobs.push_back(std::move(b));
    ++run;
  }
  return res;
}

} // namespace morpho
