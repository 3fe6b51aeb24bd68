#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "attributes.hpp"
#include "component_tree.hpp"
#include "graph.hpp"
#include "image.hpp"
#include "shape_space.hpp"
#include "tree_of_shapes.hpp"

namespace morpho {

enum class FilterMode { preserve, remove };

/// Full configuration of one shape-space filtering run.
struct FilterSpec {
  TreeKind tree = TreeKind::min_tree;
  Connectivity connectivity = Connectivity::c4;
  AttributeKind attribute = AttributeKind::area;
  std::optional<Orientation> orientation; // default per attribute when unset
  Strategy strategy = ThresholdStrategy{0};
  FilterMode mode = FilterMode::preserve;
};

inline ComponentTree build_tree(const Image& img, TreeKind kind, Connectivity conn) {
  switch (kind) {
    case TreeKind::min_tree:
      return build_component_tree(grid_graph(img, conn), Polarity::min);
    case TreeKind::max_tree:
      return build_component_tree(grid_graph(img, conn), Polarity::max);
    case TreeKind::tree_of_shapes:
      return build_tree_of_shapes(img);
  }
  throw std::invalid_argument("build_tree: unknown kind");
}

namespace detail {

// The direct-rule reconstruction is a leveling exactly when the kept set is
// closed under parents, so the mode application closes the blob set: preserve
// keeps the blobs with all their ancestors, remove drops the blobs with all
// their descendants. The root is kept either way.
inline std::vector<char> kept_nodes(const ComponentTree& t, const std::vector<char>& blob_union,
                                    FilterMode mode) {
  const std::size_t n = t.node_count();
  std::vector<char> keep(n, 0);
  if (mode == FilterMode::preserve) {
    keep = blob_union;
    for (std::uint32_t i = static_cast<std::uint32_t>(n); i-- > 1;)
      if (keep[i])
        keep[t.parent[i]] = 1;
  } else {
    std::vector<char> drop = blob_union;
    drop[0] = 0;
    for (std::uint32_t i = 1; i < n; ++i)
      if (drop[t.parent[i]])
        drop[i] = 1;
    for (std::uint32_t i = 0; i < n; ++i)
      keep[i] = !drop[i];
  }
  keep[0] = 1;
  return keep;
}

inline Image to_image(const std::vector<double>& values, int w, int h) {
  Image out(w, h);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double v = std::llround(values[i]);
    out.values[i] = static_cast<std::uint8_t>(v < 0 ? 0 : v > 255 ? 255 : v);
  }
  return out;
}

} // namespace detail

/// The whole red path: base tree, attribute, shape space, second tree,
/// strategy, mode, reconstruction.
inline Image shape_filter(const Image& img, const FilterSpec& spec) {
  ComponentTree t = build_tree(img, spec.tree, spec.connectivity);
  AttributeMap a = attribute(t, spec.attribute, img.width, img.height,
                             spec.orientation.value_or(default_orientation(spec.attribute)));
  ShapeSpace s = make_shape_space(t, a);
  ComponentTree tt = second_tree(s);
  ShapeSpaceFilterResult res = filter_shape_space(s, tt, spec.strategy);
  std::vector<char> keep = detail::kept_nodes(t, res.kept, spec.mode);
  std::vector<double> recon = reconstruct(t, [&](std::uint32_t n) { return keep[n] != 0; });
  return detail::to_image(recon, img.width, img.height);
}

/// One detected object: the deepest shape of a surviving minimum plateau.
struct DetectedObject {
  AttributeKind attribute;
  std::uint32_t node;      // base-tree node id
  double level;            // gray level of the shape
  std::int64_t area;       // pixels
  double centroid_x, centroid_y;
  double attribute_value;  // raw, unoriented
  double extinction;
};

/// Detection with its supporting tree, for callers that need the detected
/// components' pixels (the overlay renderer does).
struct DetectionRun {
  ComponentTree tree;
  std::vector<DetectedObject> objects;
};

/// Extinction-based object detection on the tree of shapes. Each requested
/// attribute runs independently; results carry their attribute tag.
inline DetectionRun run_detection(const Image& img, const std::vector<AttributeKind>& kinds,
                                  double epsilon) {
  DetectionRun run;
  run.tree = build_tree_of_shapes(img);
  const ComponentTree& t = run.tree;
  TreeTopology topo = TreeTopology::compute(t);
  std::vector<Moments> moments = accumulate_moments(t, img.width);

  for (AttributeKind kind : kinds) {
    AttributeMap a = attribute(t, kind, img.width, img.height);
    ShapeSpace s = make_shape_space(t, a);
    ComponentTree tt = second_tree(s);
    ShapeSpaceFilterResult res = filter_shape_space(s, tt, ExtinctionStrategy{epsilon});
    for (const SurvivorBlob& b : res.blobs) {
      std::uint32_t node = b.plateau.front();
      for (std::uint32_t v : b.plateau)
        if (topo.depth[v] > topo.depth[node] || (topo.depth[v] == topo.depth[node] && v < node))
          node = v;
      const Moments& m = moments[node];
      run.objects.push_back({kind, node, t.level[node], m.n,
                             static_cast<double>(m.sx) / static_cast<double>(m.n),
                             static_cast<double>(m.sy) / static_cast<double>(m.n),
                             a.values[node], b.extinction});
    }
  }
  return run;
}

inline std::vector<DetectedObject> detect_objects(const Image& img,
                                                  const std::vector<AttributeKind>& kinds,
                                                  double epsilon) {
  return run_detection(img, kinds, epsilon).objects;
}

} // namespace morpho
