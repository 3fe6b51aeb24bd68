#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "filter.hpp"
#include "pnm.hpp"

namespace morpho::cli {

namespace detail {

struct IoFailure {
  std::string message;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoFailure{"cannot open '" + path + "' for reading"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoFailure{"cannot open '" + path + "' for writing"};
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw IoFailure{"write to '" + path + "' failed"};
}

inline Image load_image(const std::string& path) {
  try {
    return read_pnm(read_file(path));
  } catch (const PnmError& e) {
    throw IoFailure{"'" + path + "': " + e.what()};
  }
}

inline TreeKind parse_tree(const std::string& s) {
  if (s == "min") return TreeKind::min_tree;
  if (s == "max") return TreeKind::max_tree;
  if (s == "tos") return TreeKind::tree_of_shapes;
  throw CLI::ValidationError("--tree", "must be one of min|max|tos");
}

inline AttributeKind parse_attr(const std::string& s) {
  if (s == "area") return AttributeKind::area;
  if (s == "circularity") return AttributeKind::circularity;
  if (s == "elongation") return AttributeKind::elongation;
  if (s == "inertia_over_area2") return AttributeKind::inertia_over_area2;
  if (s == "contour") return AttributeKind::contour_length;
  throw CLI::ValidationError("--attr", "must be one of area|circularity|elongation|inertia_over_area2|contour");
}

inline SecondAttributeKind parse_aa(const std::string& s) {
  if (s == "height") return SecondAttributeKind::height;
  if (s == "node_count") return SecondAttributeKind::node_count;
  if (s == "pixel_area") return SecondAttributeKind::pixel_area;
  throw CLI::ValidationError("--aa", "must be one of height|node_count|pixel_area");
}

inline double parse_real(const std::string& s, const char* flag) {
  if (s == "inf" || s == "+inf")
    return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size())
      throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw CLI::ValidationError(flag, "expected a real number");
  }
}

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// One object per line, fixed key order.
inline std::string detection_json_line(const DetectedObject& d) {
  char buf[256];
  std::string ext = d.extinction == std::numeric_limits<double>::infinity()
                        ? "\"inf\""
                        : format_real(d.extinction);
  std::snprintf(buf, sizeof buf,
                "{\"id\":%u,\"level\":%lld,\"area\":%lld,\"centroid\":[%.6f,%.6f],"
                "\"attribute\":%s,\"extinction\":%s,\"attr\":\"%s\"}",
                d.node, static_cast<long long>(std::llround(d.level)),
                static_cast<long long>(d.area), d.centroid_x, d.centroid_y,
                format_real(d.attribute_value).c_str(), ext.c_str(),
                attribute_name(d.attribute));
  return buf;
}

inline RgbImage render_overlay(const Image& img, const DetectionRun& run) {
  static constexpr std::uint8_t colors[6][3] = {
      {255, 0, 0}, {0, 255, 0}, {0, 0, 255}, {255, 255, 0}, {255, 0, 255}, {0, 255, 255}};
  RgbImage overlay(img);
  TreeTopology topo = TreeTopology::compute(run.tree);

  // stable color per attribute in order of first appearance
  std::vector<AttributeKind> attrs;
  for (const DetectedObject& d : run.objects)
    if (std::find(attrs.begin(), attrs.end(), d.attribute) == attrs.end())
      attrs.push_back(d.attribute);

  std::vector<char> mask(img.size());
  for (const DetectedObject& d : run.objects) {
    std::size_t ci = std::find(attrs.begin(), attrs.end(), d.attribute) - attrs.begin();
    const std::uint8_t* c = colors[ci % 6];
    std::fill(mask.begin(), mask.end(), 0);
    for (std::uint32_t p : subtree_vertices(run.tree, topo, d.node))
      mask[p] = 1;
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x) {
        std::size_t i = static_cast<std::size_t>(y) * img.width + x;
        if (!mask[i])
          continue;
        bool boundary = x == 0 || x == img.width - 1 || y == 0 || y == img.height - 1 ||
                        !mask[i - 1] || !mask[i + 1] || !mask[i - img.width] || !mask[i + img.width];
        if (boundary)
          overlay.set(x, y, c[0], c[1], c[2]);
      }
  }
  return overlay;
}

inline int run_filter(const std::string& input, const std::string& output, const std::string& tree,
                      int conn, const std::string& attr, const std::string& strategy,
                      const std::string& param, const std::string& aa, const std::string& mode,
                      const std::string& tophat, const std::string& tophat_kind, bool list_range,
                      std::ostream& out) {
  FilterSpec spec;
  spec.tree = parse_tree(tree);
  spec.connectivity = conn == 8 ? Connectivity::c8 : Connectivity::c4;
  spec.attribute = parse_attr(attr);
  spec.mode = mode == "remove" ? FilterMode::remove : FilterMode::preserve;

  Image img = load_image(input);

  if (list_range) {
    ComponentTree t = build_tree(img, spec.tree, spec.connectivity);
    AttributeMap a = attribute(t, spec.attribute, img.width, img.height);
    double sign = a.orientation == Orientation::relevant_is_high ? -1.0 : 1.0;
    double lo = sign * a.values[0], hi = lo;
    for (double v : a.values) {
      lo = std::min(lo, sign * v);
      hi = std::max(hi, sign * v);
    }
    out << "min " << format_real(lo) << "\n";
    out << "max " << format_real(hi) << "\n";
    return 0;
  }

  if (param.empty())
    throw CLI::RequiredError("--param");
  double p = parse_real(param, "--param");
  if (strategy == "threshold")
    spec.strategy = ThresholdStrategy{p};
  else if (strategy == "closing")
    spec.strategy = ClosingStrategy{parse_aa(aa), p};
  else if (strategy == "extinction")
    spec.strategy = ExtinctionStrategy{p};
  else
    throw CLI::ValidationError("--strategy", "must be one of threshold|closing|extinction");

  Image filtered = shape_filter(img, spec);
  write_file(output, write_pnm(filtered));

  if (!tophat.empty()) {
    TopHatMode th = TopHatMode::absolute;
    if (tophat_kind == "input-minus-output")
      th = TopHatMode::input_minus_output;
    else if (tophat_kind == "output-minus-input")
      th = TopHatMode::output_minus_input;
    else if (tophat_kind != "abs")
      throw CLI::ValidationError("--tophat-kind", "must be abs|input-minus-output|output-minus-input");
    write_file(tophat, write_pnm(top_hat(img, filtered, th)));
  }
  return 0;
}

inline int run_detect(const std::string& input, const std::string& attrs_csv,
                      const std::string& eps, const std::string& json_path,
                      const std::string& overlay_path) {
  std::vector<AttributeKind> kinds;
  std::string item;
  std::istringstream ss(attrs_csv);
  while (std::getline(ss, item, ','))
    if (!item.empty())
      kinds.push_back(parse_attr(item));
  if (kinds.empty())
    throw CLI::ValidationError("--attr", "expected a comma-separated attribute list");

  double epsilon = parse_real(eps, "--eps");
  Image img = load_image(input);
  DetectionRun run = run_detection(img, kinds, epsilon);

  std::stable_sort(run.objects.begin(), run.objects.end(),
                   [](const DetectedObject& a, const DetectedObject& b) {
                     if (a.extinction != b.extinction)
                       return a.extinction > b.extinction;
                     if (a.node != b.node)
                       return a.node < b.node;
                     return static_cast<int>(a.attribute) < static_cast<int>(b.attribute);
                   });

  std::string json;
  for (const DetectedObject& d : run.objects) {
    json += detection_json_line(d);
    json += '\n';
  }
  write_file(json_path, json);

  if (!overlay_path.empty())
    write_file(overlay_path, write_ppm(render_overlay(img, run)));
  return 0;
}

inline int run_tree_stats(const std::string& input, const std::string& tree, int conn,
                          std::ostream& out) {
  Image img = load_image(input);
  ComponentTree t = build_tree(img, parse_tree(tree), conn == 8 ? Connectivity::c8 : Connectivity::c4);
  TreeTopology topo = TreeTopology::compute(t);
  std::uint32_t max_depth = 0;
  for (std::uint32_t d : topo.depth)
    max_depth = std::max(max_depth, d);
  out << "nodes " << t.node_count() << "\n";
  out << "leaves " << topo.leaf_count() << "\n";
  out << "depth " << (max_depth + 1) << "\n";
  return 0;
}

} // namespace detail

/// Entry point shared by the binary and the tests. argv excludes the program
/// name. Exit codes: 0 success, 1 usage error, 2 I/O or format error.
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"tree-based connected filters in image space and in shape space"};
  app.require_subcommand(1);

  std::string input, output, tree = "min", attr = "area", strategy = "threshold";
  std::string param, aa = "height", mode = "preserve", tophat, tophat_kind = "abs";
  std::string eps = "0", json_path, overlay_path, attrs_csv;
  int conn = 4;
  bool list_range = false;

  CLI::App* filter = app.add_subcommand("filter", "run a shape-space filter over an image");
  filter->add_option("-i,--input", input, "input PGM (P2 or P5)")->required();
  filter->add_option("-o,--output", output, "output PGM (P5)");
  filter->add_option("--tree", tree, "base tree: min|max|tos");
  filter->add_option("--conn", conn, "pixel connectivity: 4|8")->check(CLI::IsMember({4, 8}));
  filter->add_option("--attr", attr, "attribute: area|circularity|elongation|inertia_over_area2|contour");
  filter->add_option("--strategy", strategy, "threshold|closing|extinction");
  filter->add_option("--param", param, "strategy parameter (lambda or epsilon)");
  filter->add_option("--aa", aa, "closing attribute: height|node_count|pixel_area");
  filter->add_option("--mode", mode, "preserve|remove")->check(CLI::IsMember({"preserve", "remove"}));
  filter->add_option("--tophat", tophat, "also write the top-hat residue here");
  filter->add_option("--tophat-kind", tophat_kind, "abs|input-minus-output|output-minus-input");
  filter->add_flag("--list-range", list_range, "print the oriented attribute range and exit");

  CLI::App* detect = app.add_subcommand("detect", "extinction-based object detection (tree of shapes)");
  detect->add_option("-i,--input", input, "input PGM (P2 or P5)")->required();
  detect->add_option("--attr", attrs_csv, "comma-separated attribute list")->required();
  detect->add_option("--eps", eps, "extinction threshold (real or 'inf')")->required();
  detect->add_option("--json", json_path, "JSON-lines output path")->required();
  detect->add_option("--overlay", overlay_path, "optional P6 overlay with component contours");

  CLI::App* stats = app.add_subcommand("tree-stats", "print node, leaf, and depth counts");
  stats->add_option("-i,--input", input, "input PGM (P2 or P5)")->required();
  stats->add_option("--tree", tree, "base tree: min|max|tos");
  stats->add_option("--conn", conn, "pixel connectivity: 4|8")->check(CLI::IsMember({4, 8}));

  std::vector<const char*> cargv;
  cargv.push_back("morpho");
  for (const std::string& a : argv)
    cargv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
    if (filter->parsed()) {
      if (output.empty() && !list_range)
        throw CLI::RequiredError("--output");
      return detail::run_filter(input, output, tree, conn, attr, strategy, param, aa, mode,
                                tophat, tophat_kind, list_range, out);
    }
    if (detect->parsed())
      return detail::run_detect(input, attrs_csv, eps, json_path, overlay_path);
    return detail::run_tree_stats(input, tree, conn, out);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 1;
  } catch (const detail::IoFailure& e) {
    err << "error: " << e.message << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace morpho::cli
