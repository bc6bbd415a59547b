#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pixflow/image.hpp"
#include "pixflow/pixel_graph.hpp"

namespace pixflow::testing {

inline PixelGraph path_graph(int n, double spacing = 1.0) {
  std::vector<GraphNode> nodes;
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (int i = 0; i < n; ++i) nodes.push_back({i * spacing, 0.0});
  for (int i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
  return PixelGraph::from_pairs(nodes, pairs);
}

/// Hub 0 at the origin, leaves 1..k at unit distance.
inline PixelGraph star_graph(int k) {
  std::vector<GraphNode> nodes{{0.0, 0.0}};
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (int i = 0; i < k; ++i) {
    const double a = 2.0 * M_PI * i / k;
    nodes.push_back({std::cos(a), std::sin(a)});
    pairs.emplace_back(0, i + 1);
  }
  return PixelGraph::from_pairs(nodes, pairs);
}

/// Leaves A=0, B=1, C=2 and hub 3, unit-length spokes; edges (A,hub),(B,hub),(C,hub).
inline PixelGraph y_graph() {
  std::vector<GraphNode> nodes{{-1.0, 0.0}, {0.5, std::sqrt(3.0) / 2}, {0.5, -std::sqrt(3.0) / 2}, {0.0, 0.0}};
  std::vector<std::pair<NodeId, NodeId>> pairs{{0, 3}, {1, 3}, {2, 3}};
  return PixelGraph::from_pairs(nodes, pairs);
}

/// Connected random graph: a random spanning tree plus extra edges, random
/// positions in [0,1]^2 and weights in [0.05, 1].
inline PixelGraph random_connected_graph(std::mt19937_64& gen, int n, int extra) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<GraphNode> nodes(static_cast<std::size_t>(n));
  for (auto& nd : nodes) nd = {unit(gen), unit(gen)};
  std::vector<std::pair<NodeId, NodeId>> pairs;
  auto has = [&](int a, int b) {
    for (auto [x, y] : pairs) {
      if ((x == a && y == b) || (x == b && y == a)) return true;
    }
    return false;
  };
  for (int i = 1; i < n; ++i) {
    const int j = static_cast<int>(gen() % static_cast<std::uint64_t>(i));
    pairs.emplace_back(std::min(i, j), std::max(i, j));
  }
  for (int k = 0, tries = 0; k < extra && tries < 50 * (extra + 1); ++tries) {
    const int a = static_cast<int>(gen() % static_cast<std::uint64_t>(n));
    const int b = static_cast<int>(gen() % static_cast<std::uint64_t>(n));
    if (a == b || has(a, b)) continue;
    pairs.emplace_back(std::min(a, b), std::max(a, b));
    ++k;
  }
  std::vector<double> w;
  for (std::size_t i = 0; i < pairs.size(); ++i) w.push_back(0.05 + 0.95 * unit(gen));
  // Coincident positions would give zero lengths.
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i].x += 1e-3 * static_cast<double>(i);
  return PixelGraph::from_pairs(nodes, pairs, w);
}

/// Black canvas with a white rectangle outline of the given stroke.
inline RasterImage rectangle_outline(int size, int x0, int y0, int x1, int y1, int stroke) {
  RasterImage img(size, size, 0.0);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const bool inner = x >= x0 + stroke && x <= x1 - stroke && y >= y0 + stroke && y <= y1 - stroke;
      if (!inner) img.at(x, y) = 1.0;
    }
  }
  return img;
}

/// One-pixel Y: two 45-degree arms meeting a vertical stem at (cx, cy).
inline RasterImage y_shape(int size, int cx, int cy, int arm, int stem) {
  RasterImage img(size, size, 0.0);
  for (int k = 0; k <= arm; ++k) {
    img.at(cx - k, cy - k) = 1.0;
    img.at(cx + k, cy - k) = 1.0;
  }
  for (int k = 0; k <= stem; ++k) img.at(cx, cy + k) = 1.0;
  return img;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("pixflow-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::FILE* f = std::fopen(p.string().c_str(), "rb");
  if (!f) return {};
  std::string s;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, f)) > 0;) s.append(buf, n);
  std::fclose(f);
  return s;
}

}  // namespace pixflow::testing
