#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include <morpho/component_tree.hpp>
#include <morpho/graph.hpp>
#include <morpho/image.hpp>

namespace helpers {

inline morpho::Image image_rows(std::initializer_list<std::initializer_list<int>> rows) {
  int h = static_cast<int>(rows.size());
  int w = static_cast<int>(rows.begin()->size());
  morpho::Image img(w, h);
  int y = 0;
  for (auto& row : rows) {
    int x = 0;
    for (int v : row)
      img.at(x++, y) = static_cast<std::uint8_t>(v);
    ++y;
  }
  return img;
}

inline morpho::NodeWeightedGraph path_graph(const std::vector<double>& weights) {
  morpho::GraphBuilder b(weights.size());
  for (std::uint32_t i = 1; i < weights.size(); ++i)
    b.add_edge(i - 1, i);
  return b.build(std::vector<double>(weights));
}

// The node whose full vertex set equals the given sorted list, or the node
// count if absent.
inline std::uint32_t find_node_by_vertices(const morpho::ComponentTree& t,
                                           const std::vector<std::uint32_t>& vertices) {
  morpho::TreeTopology topo = morpho::TreeTopology::compute(t);
  for (std::uint32_t n = 0; n < t.node_count(); ++n)
    if (morpho::subtree_vertices(t, topo, n) == vertices)
      return n;
  return static_cast<std::uint32_t>(t.node_count());
}

inline std::vector<std::uint32_t> node_vertices(const morpho::ComponentTree& t, std::uint32_t node) {
  morpho::TreeTopology topo = morpho::TreeTopology::compute(t);
  return morpho::subtree_vertices(t, topo, node);
}

} // namespace helpers
