#pragma once

#include <numeric>
#include <span>
#include <vector>

#include "pixflow/pixel_graph.hpp"

namespace pixflow {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rank_;
};

/// A set of edges of a parent graph with one weight per selected edge. Edge
/// ids are kept sorted so set operations and serialization are canonical.
struct WeightedSubgraph {
  std::vector<EdgeId> edges;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const noexcept { return edges.size(); }
  [[nodiscard]] bool empty() const noexcept { return edges.empty(); }

  /// Sorted ids of nodes touched by at least one edge.
  [[nodiscard]] std::vector<NodeId> nodes(const PixelGraph& parent) const;
  /// Degree per parent node within this subgraph.
  [[nodiscard]] std::vector<int> degrees(const PixelGraph& parent) const;
  /// Nodes of degree exactly one.
  [[nodiscard]] std::vector<NodeId> leaves(const PixelGraph& parent) const;
  [[nodiscard]] bool is_forest(const PixelGraph& parent) const;
  [[nodiscard]] std::size_t component_count(const PixelGraph& parent) const;
  [[nodiscard]] double total_weight() const;
};

/// Kruskal over `candidates` (parent edge ids), heaviest first, ties by lower
/// edge id. Returned weights are taken from `weight` (indexed by edge id).
WeightedSubgraph maximum_spanning_forest(const PixelGraph& graph, std::span<const EdgeId> candidates,
                                         std::span<const double> weight);

/// Nodes reachable from `root` through the subgraph's edges; the result keeps
/// only edges with both endpoints in that component.
WeightedSubgraph component_containing(const PixelGraph& graph, const WeightedSubgraph& sub,
                                      NodeId root);

}  // namespace pixflow
