#include <algorithm>
#include <map>

#include "pixflow/network.hpp"

namespace pixflow {
namespace {

template <typename WeightOf>
ExtractedNetwork merge(const PixelGraph& parent, std::span<const WeightedSubgraph> trees,
                       WeightOf weight_of) {
  std::map<EdgeId, double> total;
  for (const auto& tree : trees) {
    for (std::size_t i = 0; i < tree.edges.size(); ++i) {
      auto [it, inserted] = total.emplace(tree.edges[i], 0.0);
      it->second = weight_of(it->second, tree.edges[i], tree.weights[i], inserted);
    }
  }
  ExtractedNetwork net;
  std::vector<char> used(parent.node_count(), 0);
  // Edge ids ascend with (a, b) in pixel graphs but not in general.
  for (const auto& [id, w] : total) {
    const auto& e = parent.edge(id);
    net.edges.push_back({e.a, e.b, w, e.length});
    used[static_cast<std::size_t>(e.a)] = 1;
    used[static_cast<std::size_t>(e.b)] = 1;
  }
  std::sort(net.edges.begin(), net.edges.end(), [](const NetworkEdge& l, const NetworkEdge& r) {
    return l.source != r.source ? l.source < r.source : l.target < r.target;
  });
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (!used[i]) continue;
    const auto& n = parent.nodes()[i];
    net.nodes.push_back({static_cast<NodeId>(i), n.x, n.y});
  }
  return net;
}

}  // namespace

ExtractedNetwork superimpose(const PixelGraph& parent, std::span<const WeightedSubgraph> trees) {
  return merge(parent, trees, [](double acc, EdgeId, double w, bool) { return acc + w; });
}

ExtractedNetwork superimpose_with_parent_weights(const PixelGraph& parent,
                                                 std::span<const WeightedSubgraph> trees) {
  return merge(parent, trees,
               [&](double, EdgeId id, double, bool) { return parent.edge(id).weight; });
}

}  // namespace pixflow
