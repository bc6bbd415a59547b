#include <algorithm>

#include "pixflow/subgraph.hpp"

namespace pixflow {

std::vector<NodeId> WeightedSubgraph::nodes(const PixelGraph& parent) const {
  std::vector<char> seen(parent.node_count(), 0);
  for (EdgeId e : edges) {
    seen[static_cast<std::size_t>(parent.edge(e).a)] = 1;
    seen[static_cast<std::size_t>(parent.edge(e).b)] = 1;
  }
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i]) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

std::vector<int> WeightedSubgraph::degrees(const PixelGraph& parent) const {
  std::vector<int> deg(parent.node_count(), 0);
  for (EdgeId e : edges) {
    ++deg[static_cast<std::size_t>(parent.edge(e).a)];
    ++deg[static_cast<std::size_t>(parent.edge(e).b)];
  }
  return deg;
}

std::vector<NodeId> WeightedSubgraph::leaves(const PixelGraph& parent) const {
  const auto deg = degrees(parent);
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < deg.size(); ++i) {
    if (deg[i] == 1) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

bool WeightedSubgraph::is_forest(const PixelGraph& parent) const {
  UnionFind uf(parent.node_count());
  for (EdgeId e : edges) {
    if (!uf.unite(static_cast<std::size_t>(parent.edge(e).a), static_cast<std::size_t>(parent.edge(e).b))) {
      return false;
    }
  }
  return true;
}

std::size_t WeightedSubgraph::component_count(const PixelGraph& parent) const {
  UnionFind uf(parent.node_count());
  std::size_t merges = 0;
  for (EdgeId e : edges) {
    if (uf.unite(static_cast<std::size_t>(parent.edge(e).a), static_cast<std::size_t>(parent.edge(e).b))) {
      ++merges;
    }
  }
  return nodes(parent).size() - merges;
}

double WeightedSubgraph::total_weight() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

WeightedSubgraph maximum_spanning_forest(const PixelGraph& graph, std::span<const EdgeId> candidates,
                                         std::span<const double> weight) {
  std::vector<EdgeId> order(candidates.begin(), candidates.end());
  std::stable_sort(order.begin(), order.end(), [&](EdgeId lhs, EdgeId rhs) {
    const double wl = weight[static_cast<std::size_t>(lhs)];
    const double wr = weight[static_cast<std::size_t>(rhs)];
    return wl != wr ? wl > wr : lhs < rhs;
  });
  UnionFind uf(graph.node_count());
  std::vector<EdgeId> kept;
  for (EdgeId e : order) {
    if (uf.unite(static_cast<std::size_t>(graph.edge(e).a), static_cast<std::size_t>(graph.edge(e).b))) {
      kept.push_back(e);
    }
  }
  std::sort(kept.begin(), kept.end());
  WeightedSubgraph out;
  out.edges = std::move(kept);
  out.weights.reserve(out.edges.size());
  for (EdgeId e : out.edges) out.weights.push_back(weight[static_cast<std::size_t>(e)]);
  return out;
}

WeightedSubgraph component_containing(const PixelGraph& graph, const WeightedSubgraph& sub,
                                      NodeId root) {
  UnionFind uf(graph.node_count());
  for (EdgeId e : sub.edges) {
    uf.unite(static_cast<std::size_t>(graph.edge(e).a), static_cast<std::size_t>(graph.edge(e).b));
  }
  const auto target = uf.find(static_cast<std::size_t>(root));
  WeightedSubgraph out;
  for (std::size_t i = 0; i < sub.edges.size(); ++i) {
    if (uf.find(static_cast<std::size_t>(graph.edge(sub.edges[i]).a)) == target) {
      out.edges.push_back(sub.edges[i]);
      out.weights.push_back(sub.weights[i]);
    }
  }
  return out;
}

}  // namespace pixflow
