#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "component_tree.hpp"
#include "image.hpp"

namespace morpho {

/// Hole filling: the input set plus every complement component that cannot
/// reach the outside of the image under the given connectivity.
inline std::vector<char> saturate(const std::vector<char>& pixels, int w, int h,
                                  Connectivity conn_complement) {
  std::vector<char> reach(static_cast<std::size_t>(w) * h, 0);
  std::vector<std::uint32_t> stack;
  auto seed = [&](int x, int y) {
    std::uint32_t i = static_cast<std::uint32_t>(y) * w + x;
    if (!pixels[i] && !reach[i]) {
      reach[i] = 1;
      stack.push_back(i);
    }
  };
  for (int x = 0; x < w; ++x) {
    seed(x, 0);
    seed(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    seed(0, y);
    seed(w - 1, y);
  }
  int dx[8], dy[8];
  int k = neighbor_offsets(conn_complement, dx, dy);
  while (!stack.empty()) {
    std::uint32_t i = stack.back();
    stack.pop_back();
    int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
    for (int d = 0; d < k; ++d) {
      int nx = x + dx[d], ny = y + dy[d];
      if (nx < 0 || nx >= w || ny < 0 || ny >= h)
        continue;
      std::uint32_t j = static_cast<std::uint32_t>(ny) * w + nx;
      if (!pixels[j] && !reach[j]) {
        reach[j] = 1;
        stack.push_back(j);
      }
    }
  }
  std::vector<char> out(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i)
    out[i] = pixels[i] || !reach[i];
  return out;
}

namespace detail {

// Shapes keyed by their exact pixel set.
struct PixelSetHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (std::uint32_t x : v) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return h;
  }
};

struct ShapeOccurrence {
  bool has_upper = false, has_lower = false;
  int max_upper = 0, min_lower = 0;

  void note(bool upper, int level) {
    if (upper) {
      max_upper = has_upper ? std::max(max_upper, level) : level;
      has_upper = true;
    } else {
      min_lower = has_lower ? std::min(min_lower, level) : level;
      has_lower = true;
    }
  }
};

// One threshold sweep at one level: label foreground and background
// components, build their C8 adjacency graph with a virtual exterior node,
// and read every foreground component's saturation off the DFS tree: the
// holes of C are exactly the subtrees its articulation separates from the
// exterior (children c with low(c) >= disc(C)).
class LevelSweep {
public:
  LevelSweep(int w, int h) : w_(w), h_(h), n_(static_cast<std::size_t>(w) * h) {
    label_.resize(n_);
    mask_.resize(n_);
  }

  template <class Record>
  void run(const std::vector<std::uint8_t>& values, int level, bool upper, Record&& record) {
    for (std::size_t i = 0; i < n_; ++i)
      mask_[i] = upper ? values[i] >= level : values[i] <= level;

    // components: C4 foreground for upper sets, C8 for lower sets
    comp_pixels_.clear();
    comp_is_fg_.clear();
    std::fill(label_.begin(), label_.end(), none_);
    for (std::uint32_t i = 0; i < n_; ++i)
      if (label_[i] == none_)
        flood(i, mask_[i] ? (upper ? Connectivity::c4 : Connectivity::c8) : Connectivity::c8,
              mask_[i]);
    const std::uint32_t K = static_cast<std::uint32_t>(comp_pixels_.size());
    const std::uint32_t ext = K;

    // ring cells are the outermost layer; the comp holding them is adjacent
    // to the exterior, and if it is foreground its saturation is everything
    std::uint32_t ring_comp = label_[0];
    if (comp_is_fg_[ring_comp]) {
      record(nullptr, upper, level); // whole-domain shape
    }

    build_adjacency(K, ext);
    dfs(K, ext);

    sat_.clear();
    for (std::uint32_t c = 0; c < K; ++c) {
      if (!comp_is_fg_[c] || c == ring_comp)
        continue;
      sat_.assign(comp_pixels_[c].begin(), comp_pixels_[c].end());
      for (std::uint32_t u : tree_children(c))
        if (low_[u] >= disc_[c])
          for (std::uint32_t at = tin_[u]; at < tout_[u]; ++at)
            sat_.insert(sat_.end(), comp_pixels_[euler_[at]].begin(), comp_pixels_[euler_[at]].end());
      std::sort(sat_.begin(), sat_.end());
      record(&sat_, upper, level);
    }
  }

private:
  static constexpr std::uint32_t none_ = 0xffffffffu;

  void flood(std::uint32_t seed, Connectivity conn, bool fg) {
    std::uint32_t id = static_cast<std::uint32_t>(comp_pixels_.size());
    comp_pixels_.emplace_back();
    comp_is_fg_.push_back(fg);
    auto& px = comp_pixels_.back();
    int dx[8], dy[8];
    int k = neighbor_offsets(conn, dx, dy);
    stack_.clear();
    stack_.push_back(seed);
    label_[seed] = id;
    while (!stack_.empty()) {
      std::uint32_t i = stack_.back();
      stack_.pop_back();
      px.push_back(i);
      int x = static_cast<int>(i % w_), y = static_cast<int>(i / w_);
      for (int d = 0; d < k; ++d) {
        int nx = x + dx[d], ny = y + dy[d];
        if (nx < 0 || nx >= w_ || ny < 0 || ny >= h_)
          continue;
        std::uint32_t j = static_cast<std::uint32_t>(ny) * w_ + nx;
        if (label_[j] == none_ && mask_[j] == fg) {
          label_[j] = id;
          stack_.push_back(j);
        }
      }
    }
    std::sort(px.begin(), px.end());
  }

  void build_adjacency(std::uint32_t K, std::uint32_t ext) {
    pairs_.clear();
    auto note = [&](std::uint32_t a, std::uint32_t b) {
      if (a != b)
        pairs_.push_back((static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b));
    };
    for (int y = 0; y < h_; ++y)
      for (int x = 0; x < w_; ++x) {
        std::uint32_t c = label_[static_cast<std::size_t>(y) * w_ + x];
        if (x + 1 < w_) note(c, label_[static_cast<std::size_t>(y) * w_ + x + 1]);
        if (y + 1 < h_) {
          note(c, label_[(static_cast<std::size_t>(y) + 1) * w_ + x]);
          if (x + 1 < w_) note(c, label_[(static_cast<std::size_t>(y) + 1) * w_ + x + 1]);
          if (x > 0) note(c, label_[(static_cast<std::size_t>(y) + 1) * w_ + x - 1]);
        }
        if (x == 0 || x == w_ - 1 || y == 0 || y == h_ - 1)
          note(c, ext);
      }
    std::sort(pairs_.begin(), pairs_.end());
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());

    adj_offsets_.assign(K + 2, 0);
    for (std::uint64_t p : pairs_) {
      ++adj_offsets_[(p >> 32) + 1];
      ++adj_offsets_[(p & 0xffffffffu) + 1];
    }
    for (std::size_t i = 0; i + 1 < adj_offsets_.size(); ++i)
      adj_offsets_[i + 1] += adj_offsets_[i];
    adj_.resize(pairs_.size() * 2);
    fill_ = adj_offsets_;
    for (std::uint64_t p : pairs_) {
      std::uint32_t a = static_cast<std::uint32_t>(p >> 32);
      std::uint32_t b = static_cast<std::uint32_t>(p & 0xffffffffu);
      adj_[fill_[a]++] = b;
      adj_[fill_[b]++] = a;
    }
  }

  void dfs(std::uint32_t K, std::uint32_t ext) {
    std::uint32_t total = K + 1;
    disc_.assign(total, none_);
    low_.assign(total, 0);
    tree_parent_.assign(total, none_);
    euler_.clear();
    euler_.reserve(total);
    edge_it_ = adj_offsets_;

    dfs_stack_.clear();
    dfs_stack_.push_back(ext);
    disc_[ext] = 0;
    low_[ext] = 0;
    euler_.push_back(ext);
    std::uint32_t clock = 1;
    while (!dfs_stack_.empty()) {
      std::uint32_t v = dfs_stack_.back();
      if (edge_it_[v] < adj_offsets_[v + 1]) {
        std::uint32_t u = adj_[edge_it_[v]++];
        if (disc_[u] == none_) {
          disc_[u] = clock++;
          low_[u] = disc_[u];
          tree_parent_[u] = v;
          euler_.push_back(u);
          dfs_stack_.push_back(u);
        } else if (u != tree_parent_[v]) {
          low_[v] = std::min(low_[v], disc_[u]);
        }
      } else {
        dfs_stack_.pop_back();
        if (!dfs_stack_.empty()) {
          std::uint32_t p = dfs_stack_.back();
          low_[p] = std::min(low_[p], low_[v]);
        }
      }
    }

    // preorder intervals; children grouped per parent
    tin_.assign(total, 0);
    subtree_size_.assign(total, 1);
    for (std::uint32_t i = 0; i < euler_.size(); ++i)
      tin_[euler_[i]] = i;
    for (std::uint32_t i = static_cast<std::uint32_t>(euler_.size()); i-- > 1;) {
      std::uint32_t v = euler_[i];
      if (tree_parent_[v] != none_)
        subtree_size_[tree_parent_[v]] += subtree_size_[v];
    }
    tout_.assign(total, 0);
    for (std::uint32_t v = 0; v < total; ++v)
      tout_[v] = tin_[v] + subtree_size_[v];

    child_offsets_.assign(total + 1, 0);
    for (std::uint32_t v = 0; v < total; ++v)
      if (tree_parent_[v] != none_)
        ++child_offsets_[tree_parent_[v] + 1];
    for (std::size_t i = 0; i + 1 < child_offsets_.size(); ++i)
      child_offsets_[i + 1] += child_offsets_[i];
    child_list_.resize(euler_.empty() ? 0 : euler_.size() - 1);
    fill_ = child_offsets_;
    for (std::uint32_t i = 1; i < euler_.size(); ++i) {
      std::uint32_t v = euler_[i];
      child_list_[fill_[tree_parent_[v]]++] = v;
    }
  }

  std::span<const std::uint32_t> tree_children(std::uint32_t v) const {
    return {child_list_.data() + child_offsets_[v], child_list_.data() + child_offsets_[v + 1]};
  }

  int w_, h_;
  std::size_t n_;
  std::vector<char> mask_;
  std::vector<std::uint32_t> label_, stack_;
  std::vector<std::vector<std::uint32_t>> comp_pixels_;
  std::vector<char> comp_is_fg_;
  std::vector<std::uint64_t> pairs_;
  std::vector<std::uint32_t> adj_, adj_offsets_, fill_, edge_it_;
  std::vector<std::uint32_t> disc_, low_, tree_parent_, euler_, tin_, tout_, subtree_size_;
  std::vector<std::uint32_t> child_offsets_, child_list_;
  std::vector<std::uint32_t> dfs_stack_;
  std::vector<std::uint32_t> sat_;
};

} // namespace detail

/// Self-dual tree of shapes: saturated components of every upper threshold
/// set (C4) and lower threshold set (C8), deduplicated and ordered by
/// inclusion. The image is embedded in a one-pixel frame at the median of
/// its border values; the root is the full domain at that median. A shape
/// generated from upper sets takes the highest level at which its set
/// occurs, from lower sets the lowest, and upper wins when both exist.
inline ComponentTree build_tree_of_shapes(const Image& img) {
  const int w = img.width, h = img.height;
  const int we = w + 2, he = h + 2;

  std::vector<std::uint8_t> border;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (x == 0 || x == w - 1 || y == 0 || y == h - 1)
        border.push_back(img.at(x, y));
  std::sort(border.begin(), border.end());
  const std::uint8_t median = border[(border.size() - 1) / 2];

  std::vector<std::uint8_t> ext(static_cast<std::size_t>(we) * he, median);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      ext[static_cast<std::size_t>(y + 1) * we + (x + 1)] = img.at(x, y);

  bool present[256] = {};
  for (std::uint8_t v : ext)
    present[v] = true;

  // core (w x h) indices of an extended-domain pixel list
  auto to_core = [&](const std::vector<std::uint32_t>& px) {
    std::vector<std::uint32_t> out;
    out.reserve(px.size());
    for (std::uint32_t i : px) {
      int x = static_cast<int>(i % we) - 1, y = static_cast<int>(i / we) - 1;
      out.push_back(static_cast<std::uint32_t>(y) * w + x);
    }
    return out;
  };

  std::unordered_map<std::vector<std::uint32_t>, detail::ShapeOccurrence, detail::PixelSetHash> shapes;
  bool root_seen = false;

  detail::LevelSweep sweep(we, he);
  auto record = [&](const std::vector<std::uint32_t>* px, bool upper, int level) {
    if (px == nullptr || px->size() == static_cast<std::size_t>(we) * he) {
      root_seen = true;
      return;
    }
    shapes[to_core(*px)].note(upper, level);
  };
  for (int level = 0; level < 256; ++level) {
    if (!present[level])
      continue;
    sweep.run(ext, level, /*upper=*/true, record);
    sweep.run(ext, level, /*upper=*/false, record);
  }
  (void)root_seen; // the lower sweep at the maximum always yields it

  struct Entry {
    std::vector<std::uint32_t> pixels;
    double level;
  };
  std::vector<Entry> entries;
  entries.reserve(shapes.size() + 1);
  {
    std::vector<std::uint32_t> all(static_cast<std::size_t>(w) * h);
    for (std::uint32_t i = 0; i < all.size(); ++i)
      all[i] = i;
    entries.push_back({std::move(all), static_cast<double>(median)});
  }
  for (auto& [px, occ] : shapes) {
    if (px.size() == static_cast<std::size_t>(w) * h)
      continue; // full-domain duplicates collapse into the root
    double level = occ.has_upper ? occ.max_upper : occ.min_lower;
    entries.push_back({px, level});
  }

  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.pixels.size() != b.pixels.size())
      return a.pixels.size() > b.pixels.size();
    if (a.level != b.level)
      return a.level < b.level;
    return a.pixels.front() < b.pixels.front();
  });

  ComponentTree t;
  t.kind = TreeKind::tree_of_shapes;
  t.parent.resize(entries.size());
  t.level.resize(entries.size());
  t.node_of_vertex.assign(static_cast<std::size_t>(w) * h, 0);

  std::vector<std::uint32_t>& owner = t.node_of_vertex;
  t.parent[0] = 0;
  t.level[0] = entries[0].level;
  for (std::uint32_t i = 1; i < entries.size(); ++i) {
    t.level[i] = entries[i].level;
    t.parent[i] = owner[entries[i].pixels.front()];
    for (std::uint32_t p : entries[i].pixels)
      owner[p] = i;
  }
  return t;
}

} // namespace morpho
