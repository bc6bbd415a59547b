#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pixflow/image.hpp"

namespace pixflow {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;

struct GraphNode {
  double x = 0.0;  // barycenter, normalized to [0,1]
  double y = 0.0;
  std::int32_t pixel_x = -1;  // source pixel, -1 for hand-built graphs
  std::int32_t pixel_y = -1;
};

struct GraphEdge {
  NodeId a = 0;  // a < b
  NodeId b = 0;
  double length = 0.0;
  double weight = 0.0;
};

/// Undirected spatial graph with dense node ids and a CSR neighbor index.
class PixelGraph {
 public:
  struct Incident {
    NodeId node;
    EdgeId edge;
  };

  PixelGraph() = default;
  /// Edge lengths are taken as given; use add_edge-style helpers via the
  /// factory below to derive them from coordinates.
  PixelGraph(std::vector<GraphNode> nodes, std::vector<GraphEdge> edges);

  /// Builds a graph from node positions and endpoint pairs; lengths are
  /// Euclidean distances, weights default to 1.
  static PixelGraph from_pairs(std::vector<GraphNode> nodes,
                               std::span<const std::pair<NodeId, NodeId>> pairs,
                               std::span<const double> weights = {});

  [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
  [[nodiscard]] const std::vector<GraphNode>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] const std::vector<GraphEdge>& edges() const noexcept { return edges_; }
  [[nodiscard]] const GraphNode& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  [[nodiscard]] const GraphEdge& edge(EdgeId id) const { return edges_[static_cast<std::size_t>(id)]; }

  [[nodiscard]] std::span<const Incident> incident(NodeId id) const {
    const auto i = static_cast<std::size_t>(id);
    return {incidence_.data() + offsets_[i], incidence_.data() + offsets_[i + 1]};
  }
  [[nodiscard]] std::size_t degree(NodeId id) const { return incident(id).size(); }

  /// Dense edge weights in edge-id order.
  [[nodiscard]] std::vector<double> weights() const;
  [[nodiscard]] std::vector<double> lengths() const;

  /// Throws InvalidConfig on self-loops, duplicates, bad lengths or ids.
  void validate() const;

 private:
  void build_index();

  std::vector<GraphNode> nodes_;
  std::vector<GraphEdge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Incident> incidence_;
};

enum class Connectivity { Four = 4, Eight = 8 };

struct PixelGraphOptions {
  Connectivity connectivity = Connectivity::Eight;
};

/// Pre-extracted graph: one node per pixel brighter than delta, edges between
/// neighboring retained pixels, restricted to the largest component.
PixelGraph build_pixel_graph(const RasterImage& image, double delta,
                             PixelGraphOptions options = {});

/// Signed node-by-edge incidence: +1 on the lower-id endpoint, -1 on the other.
class IncidenceMatrix {
 public:
  explicit IncidenceMatrix(const PixelGraph& graph);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return plus_.size(); }
  [[nodiscard]] int entry(NodeId node, EdgeId edge) const;
  [[nodiscard]] NodeId plus_row(EdgeId e) const { return plus_[static_cast<std::size_t>(e)]; }
  [[nodiscard]] NodeId minus_row(EdgeId e) const { return minus_[static_cast<std::size_t>(e)]; }

  /// B * edge_values, a per-node vector.
  [[nodiscard]] std::vector<double> apply(std::span<const double> edge_values) const;
  /// B^T * node_values, a per-edge vector.
  [[nodiscard]] std::vector<double> apply_transpose(std::span<const double> node_values) const;

 private:
  std::size_t rows_ = 0;
  std::vector<NodeId> plus_;
  std::vector<NodeId> minus_;
};

IncidenceMatrix incidence_matrix(const PixelGraph& graph);

/// Component label per node (labels ordered by lowest member id), considering
/// only edges for which keep(edge) holds.
template <typename KeepEdge>
std::vector<std::int32_t> component_labels(const PixelGraph& graph, KeepEdge keep);

std::vector<std::int32_t> component_labels(const PixelGraph& graph);

}  // namespace pixflow

#include "pixflow/detail/components.inl"
