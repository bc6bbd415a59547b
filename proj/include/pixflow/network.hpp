#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pixflow/pixel_graph.hpp"
#include "pixflow/subgraph.hpp"

namespace pixflow {

struct NetworkNode {
  NodeId id = 0;  // id in the pre-extracted graph
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const NetworkNode&, const NetworkNode&) = default;
};

struct NetworkEdge {
  NodeId source = 0;
  NodeId target = 0;
  double weight = 0.0;
  double length = 0.0;
  friend bool operator==(const NetworkEdge&, const NetworkEdge&) = default;
};

struct RunRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  NodeId source = -1;
  bool succeeded = false;
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t terminals = 0;
  std::string error;
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// How a network was produced. `config` holds caller-level settings rendered
/// as text (input paths, preprocessing), in insertion order.
struct Provenance {
  std::string extractor;
  double delta = 0.0;
  double beta = 0.0;
  std::size_t n_runs = 0;
  std::uint64_t seed = 0;
  std::size_t successful_runs = 0;
  std::size_t terminal_count = 0;
  std::vector<RunRecord> runs;
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, std::string>> config;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Final weighted graph G(V, E, W) with node ids from the pre-extracted graph.
struct ExtractedNetwork {
  std::vector<NetworkNode> nodes;  // sorted by id
  std::vector<NetworkEdge> edges;  // sorted by (source, target), source < target
  Provenance meta;

  friend bool operator==(const ExtractedNetwork&, const ExtractedNetwork&) = default;
};

/// Union of per-run trees over one parent graph; weights of shared edges add
/// up in run order, absent edges contribute zero.
ExtractedNetwork superimpose(const PixelGraph& parent, std::span<const WeightedSubgraph> trees);

/// Same union but every edge keeps its parent-graph weight.
ExtractedNetwork superimpose_with_parent_weights(const PixelGraph& parent,
                                                 std::span<const WeightedSubgraph> trees);

}  // namespace pixflow
