#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "pixflow/error.hpp"
#include "pixflow/pixel_graph.hpp"

namespace pixflow {

PixelGraph::PixelGraph(std::vector<GraphNode> nodes, std::vector<GraphEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.a > e.b) std::swap(e.a, e.b);
  }
  validate();
  build_index();
}

PixelGraph PixelGraph::from_pairs(std::vector<GraphNode> nodes,
                                  std::span<const std::pair<NodeId, NodeId>> pairs,
                                  std::span<const double> weights) {
  std::vector<GraphEdge> edges;
  edges.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [a, b] = pairs[i];
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= nodes.size() ||
        static_cast<std::size_t>(b) >= nodes.size()) {
      throw Error(ErrorCode::InvalidConfig, "edge endpoint out of range");
    }
    const auto& na = nodes[static_cast<std::size_t>(a)];
    const auto& nb = nodes[static_cast<std::size_t>(b)];
    const double len = std::hypot(na.x - nb.x, na.y - nb.y);
    edges.push_back({std::min(a, b), std::max(a, b), len, weights.empty() ? 1.0 : weights[i]});
  }
  return PixelGraph(std::move(nodes), std::move(edges));
}

std::vector<double> PixelGraph::weights() const {
  std::vector<double> w(edges_.size());
  std::transform(edges_.begin(), edges_.end(), w.begin(), [](const GraphEdge& e) { return e.weight; });
  return w;
}

std::vector<double> PixelGraph::lengths() const {
  std::vector<double> l(edges_.size());
  std::transform(edges_.begin(), edges_.end(), l.begin(), [](const GraphEdge& e) { return e.length; });
  return l;
}

void PixelGraph::validate() const {
  std::set<std::pair<NodeId, NodeId>> seen;
  const auto n = static_cast<NodeId>(nodes_.size());
  for (const auto& e : edges_) {
    if (e.a < 0 || e.b >= n || e.a >= e.b) {
      throw Error(ErrorCode::InvalidConfig,
                  "bad edge (" + std::to_string(e.a) + "," + std::to_string(e.b) + ")");
    }
    if (!seen.emplace(e.a, e.b).second) {
      throw Error(ErrorCode::InvalidConfig, "duplicate edge (" + std::to_string(e.a) + "," +
                                                std::to_string(e.b) + ")");
    }
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      throw Error(ErrorCode::InvalidConfig, "edge length must be positive");
    }
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorCode::InvalidConfig, "edge weight must be finite and >= 0");
    }
  }
}

void PixelGraph::build_index() {
  const auto n = nodes_.size();
  offsets_.assign(n + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[static_cast<std::size_t>(e.a) + 1];
    ++offsets_[static_cast<std::size_t>(e.b) + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  incidence_.resize(offsets_[n]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t id = 0; id < edges_.size(); ++id) {
    const auto& e = edges_[id];
    const auto eid = static_cast<EdgeId>(id);
    incidence_[cursor[static_cast<std::size_t>(e.a)]++] = {e.b, eid};
    incidence_[cursor[static_cast<std::size_t>(e.b)]++] = {e.a, eid};
  }
}

std::vector<std::int32_t> component_labels(const PixelGraph& graph) {
  return component_labels(graph, [](EdgeId) { return true; });
}

PixelGraph build_pixel_graph(const RasterImage& image, double delta, PixelGraphOptions options) {
  image.validate();
  if (image.width != image.height) {
    throw Error(ErrorCode::InvalidConfig, "pixel graph needs a square image");
  }
  if (!(delta >= 0.0 && delta <= 1.0)) throw Error(ErrorCode::InvalidConfig, "delta outside [0,1]");

  const int w = image.width;
  struct Offset {
    int dx, dy;
  };
  // Forward half of the stencil, so every pair is visited once with a < b.
  static constexpr Offset kEight[] = {{1, 0}, {-1, 1}, {0, 1}, {1, 1}};
  static constexpr Offset kFour[] = {{1, 0}, {0, 1}};
  const std::span<const Offset> stencil =
      options.connectivity == Connectivity::Eight ? std::span<const Offset>(kEight)
                                                  : std::span<const Offset>(kFour);

  std::vector<NodeId> node_of(image.size(), -1);
  std::vector<GraphNode> nodes;
  for (int y = 0; y < w; ++y) {
    for (int x = 0; x < w; ++x) {
      if (image.at(x, y) > delta) {
        node_of[image.index(x, y)] = static_cast<NodeId>(nodes.size());
        nodes.push_back({(x + 0.5) / w, (y + 0.5) / w, x, y});
      }
    }
  }
  std::vector<GraphEdge> edges;
  for (const auto& nd : nodes) {
    const NodeId a = node_of[image.index(nd.pixel_x, nd.pixel_y)];
    for (const auto& off : stencil) {
      const int nx = nd.pixel_x + off.dx;
      const int ny = nd.pixel_y + off.dy;
      if (nx < 0 || nx >= w || ny >= w) continue;
      const NodeId b = node_of[image.index(nx, ny)];
      if (b < 0) continue;
      const double len = std::hypot(static_cast<double>(off.dx), static_cast<double>(off.dy)) / w;
      const double weight = 0.5 * (image.at(nd.pixel_x, nd.pixel_y) + image.at(nx, ny));
      edges.push_back({a, b, len, weight});
    }
  }
  if (edges.empty()) {
    throw Error(ErrorCode::EmptyGraph, "no pair of neighboring pixels exceeds delta=" +
                                           std::to_string(delta));
  }

  PixelGraph full(std::move(nodes), std::move(edges));
  const auto label = component_labels(full);
  std::vector<std::size_t> sizes;
  for (auto l : label) {
    if (static_cast<std::size_t>(l) >= sizes.size()) sizes.resize(static_cast<std::size_t>(l) + 1, 0);
    ++sizes[static_cast<std::size_t>(l)];
  }
  // first maximum: ties go to the component with the lowest member id
  const auto keep = static_cast<std::int32_t>(
      std::distance(sizes.begin(), std::max_element(sizes.begin(), sizes.end())));
  if (sizes.size() == 1) return full;

  std::vector<NodeId> remap(full.node_count(), -1);
  std::vector<GraphNode> kept_nodes;
  for (std::size_t i = 0; i < full.node_count(); ++i) {
    if (label[i] == keep) {
      remap[i] = static_cast<NodeId>(kept_nodes.size());
      kept_nodes.push_back(full.nodes()[i]);
    }
  }
  std::vector<GraphEdge> kept_edges;
  for (const auto& e : full.edges()) {
    if (label[static_cast<std::size_t>(e.a)] == keep) {
      kept_edges.push_back({remap[static_cast<std::size_t>(e.a)], remap[static_cast<std::size_t>(e.b)],
                            e.length, e.weight});
    }
  }
  return PixelGraph(std::move(kept_nodes), std::move(kept_edges));
}

IncidenceMatrix::IncidenceMatrix(const PixelGraph& graph) : rows_(graph.node_count()) {
  if (graph.node_count() == 0) throw Error(ErrorCode::EmptyGraph, "incidence of an empty graph");
  plus_.reserve(graph.edge_count());
  minus_.reserve(graph.edge_count());
  for (const auto& e : graph.edges()) {
    plus_.push_back(e.a);
    minus_.push_back(e.b);
  }
}

int IncidenceMatrix::entry(NodeId node, EdgeId edge) const {
  if (plus_row(edge) == node) return 1;
  if (minus_row(edge) == node) return -1;
  return 0;
}

std::vector<double> IncidenceMatrix::apply(std::span<const double> edge_values) const {
  std::vector<double> out(rows_, 0.0);
  for (std::size_t e = 0; e < plus_.size(); ++e) {
    out[static_cast<std::size_t>(plus_[e])] += edge_values[e];
    out[static_cast<std::size_t>(minus_[e])] -= edge_values[e];
  }
  return out;
}

std::vector<double> IncidenceMatrix::apply_transpose(std::span<const double> node_values) const {
  std::vector<double> out(plus_.size());
  for (std::size_t e = 0; e < plus_.size(); ++e) {
    out[e] = node_values[static_cast<std::size_t>(plus_[e])] -
             node_values[static_cast<std::size_t>(minus_[e])];
  }
  return out;
}

IncidenceMatrix incidence_matrix(const PixelGraph& graph) { return IncidenceMatrix(graph); }

}  // namespace pixflow
