#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pixflow/network.hpp"
#include "pixflow/pixel_graph.hpp"
#include "pixflow/subgraph.hpp"

namespace pixflow {

/// Maximum spanning tree over the intensity weights, ties by lowest edge id.
/// Throws Disconnected unless the graph is connected.
WeightedSubgraph spanning_tree(const PixelGraph& gpe);

/// Uniform subset of the tree's leaves of size max(2, round_half_up(fraction * leaves)),
/// returned sorted. Throws TooFewLeaves below 2 leaves.
std::vector<NodeId> sample_terminals(const PixelGraph& gpe, const WeightedSubgraph& tree,
                                     double fraction, std::uint64_t seed);

std::size_t terminal_sample_size(std::size_t leaves, double fraction);

/// (1 - w_e) + 1e-9 * l_e, clamped at zero.
std::vector<double> steiner_costs(const PixelGraph& graph);

struct SteinerInstance {
  const PixelGraph& graph;
  std::vector<double> cost;  // per edge, >= 0
  std::vector<NodeId> terminals;
};

/// Metric-closure 2-approximation. The returned weights are the parent edge weights.
WeightedSubgraph steiner_approx(const SteinerInstance& instance);

double subgraph_cost(const WeightedSubgraph& sub, std::span<const double> cost);

struct MstOptions {
  std::size_t n_runs = 5;
  double fraction = 0.025;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  /// Sum G^pe weights across runs instead of keeping the single G^pe weight.
  bool summed_weights = false;
};

ExtractedNetwork extract_network_mst(const PixelGraph& gpe, const MstOptions& options = {});

}  // namespace pixflow
