#pragma once

// Brute-force reference implementations shared by the unit and acceptance
// suites. They follow the definitions directly and are only fit for tiny inputs.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pixflow/image.hpp"
#include "pixflow/network.hpp"
#include "pixflow/pixel_graph.hpp"
#include "pixflow/subgraph.hpp"

namespace pixflow::oracle {

// Optimal Steiner tree: for every vertex superset of T, the minimum spanning
// tree of the induced subgraph if it is connected.
inline double steiner_cost(const PixelGraph& g, const std::vector<double>& cost, const std::vector<NodeId>& terms) {
  const std::size_t n = g.node_count();
  std::uint32_t need = 0;
  for (NodeId t : terms) need |= 1u << t;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if ((mask & need) != need) continue;
    std::vector<EdgeId> cand;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const auto& ed = g.edges()[e];
      if ((mask >> ed.a & 1u) && (mask >> ed.b & 1u)) cand.push_back(static_cast<EdgeId>(e));
    }
    std::sort(cand.begin(), cand.end(), [&](EdgeId a, EdgeId b) { return cost[static_cast<std::size_t>(a)] < cost[static_cast<std::size_t>(b)]; });
    UnionFind uf(n);
    double c = 0.0;
    std::size_t merges = 0;
    for (EdgeId e : cand) {
      if (uf.unite(static_cast<std::size_t>(g.edge(e).a), static_cast<std::size_t>(g.edge(e).b))) {
        c += cost[static_cast<std::size_t>(e)];
        ++merges;
      }
    }
    if (merges + 1 == static_cast<std::size_t>(__builtin_popcount(mask))) best = std::min(best, c);
  }
  return best;
}

// Membership straight from the definition: [k/g, (k+1)/g), last cell closed.
inline bool in_cell(double t, int k, int g) {
  const double lo = static_cast<double>(k) / g;
  const double hi = static_cast<double>(k + 1) / g;
  return t >= lo && (t < hi || (k == g - 1 && t <= hi));
}

struct Scores {
  double binary;
  double weighted;
};

inline Scores similarity(const ExtractedNetwork& net, const RasterImage& img, double delta, int g) {
  double sb = 0.0, sw = 0.0;
  for (int cy = 0; cy < g; ++cy) {
    for (int cx = 0; cx < g; ++cx) {
      double a = 0, aw = 0, b = 0, bw = 0;
      for (const auto& e : net.edges) {
        const NetworkNode* p = nullptr;
        const NetworkNode* q = nullptr;
        for (const auto& n : net.nodes) {
          if (n.id == e.source) p = &n;
          if (n.id == e.target) q = &n;
        }
        const double mx = 0.5 * (p->x + q->x), my = 0.5 * (p->y + q->y);
        if (in_cell(mx, cx, g) && in_cell(my, cy, g)) {
          a += 1;
          aw += e.weight;
        }
      }
      for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
          if (!in_cell((x + 0.5) / img.width, cx, g) || !in_cell((y + 0.5) / img.height, cy, g)) continue;
          b += img.at(x, y) > delta;
          bw += img.at(x, y);
        }
      }
      sb += (a - b) * (a - b);
      sw += (aw - bw) * (aw - bw);
    }
  }
  const double p = static_cast<double>(g) * g;
  return {std::sqrt(sb) / p, std::sqrt(sw) / p};
}

}  // namespace pixflow::oracle
