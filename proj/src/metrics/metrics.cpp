#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "pixflow/error.hpp"
#include "pixflow/metrics.hpp"
#include "pixflow/simd/kernels.hpp"
#include "pixflow/subgraph.hpp"

namespace pixflow {
namespace {

std::unordered_map<NodeId, std::size_t> node_index(const ExtractedNetwork& net) {
  std::unordered_map<NodeId, std::size_t> index;
  index.reserve(net.nodes.size());
  for (std::size_t i = 0; i < net.nodes.size(); ++i) index.emplace(net.nodes[i].id, i);
  return index;
}

// Adds t-portions of segment p->q to the cells it crosses.
template <typename Add>
void split_segment(double px, double py, double qx, double qy, const CellPartition& part, Add add) {
  std::vector<double> cuts{0.0, 1.0};
  auto crossings = [&](double a, double b) {
    if (a == b) return;
    const double lo = std::min(a, b) * part.grid;
    const double hi = std::max(a, b) * part.grid;
    for (double k = std::floor(lo) + 1.0; k < hi; k += 1.0) {
      cuts.push_back((k / part.grid - a) / (b - a));
    }
  };
  crossings(px, qx);
  crossings(py, qy);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double t0 = cuts[i];
    const double t1 = cuts[i + 1];
    if (t1 <= t0) continue;
    const double tm = 0.5 * (t0 + t1);
    add(part.cell_of(px + tm * (qx - px), py + tm * (qy - py)), t1 - t0);
  }
}

double score(const std::vector<double>& a, const std::vector<double>& b, std::size_t cells) {
  const double ss = simd::kernels().sum_sq_diff(a.data(), b.data(), a.size());
  return std::sqrt(ss) / static_cast<double>(cells);
}

}  // namespace

int CellPartition::axis_index(double t) const noexcept {
  const double scaled = std::floor(t * grid);
  if (!(scaled > 0.0)) return 0;
  return scaled >= grid ? grid - 1 : static_cast<int>(scaled);
}

std::size_t CellPartition::cell_of(double x, double y) const noexcept {
  return static_cast<std::size_t>(axis_index(y)) * static_cast<std::size_t>(grid) +
         static_cast<std::size_t>(axis_index(x));
}

void CellPartition::validate() const {
  if (grid < 1) throw Error(ErrorCode::InvalidConfig, "partition grid must be at least 1");
}

EdgeTally tally_edges(const ExtractedNetwork& network, const CellPartition& partition,
                      EdgeAssignment assignment) {
  partition.validate();
  EdgeTally t{std::vector<double>(partition.cells(), 0.0), std::vector<double>(partition.cells(), 0.0)};
  const auto index = node_index(network);
  for (const auto& e : network.edges) {
    const auto ia = index.find(e.source);
    const auto ib = index.find(e.target);
    if (ia == index.end() || ib == index.end()) {
      throw Error(ErrorCode::InvalidConfig, "edge references a node missing from the network");
    }
    const auto& a = network.nodes[ia->second];
    const auto& b = network.nodes[ib->second];
    if (assignment == EdgeAssignment::Midpoint) {
      const auto c = partition.cell_of(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
      t.count[c] += 1.0;
      t.weight[c] += e.weight;
    } else {
      split_segment(a.x, a.y, b.x, b.y, partition, [&](std::size_t c, double share) {
        t.count[c] += share;
        t.weight[c] += share * e.weight;
      });
    }
  }
  return t;
}

PixelTally tally_pixels(const RasterImage& image, double delta, const CellPartition& partition) {
  partition.validate();
  image.validate();
  PixelTally t{std::vector<double>(partition.cells(), 0.0), std::vector<double>(partition.cells(), 0.0)};
  for (int y = 0; y < image.height; ++y) {
    const double cy = (y + 0.5) / image.height;
    for (int x = 0; x < image.width; ++x) {
      const double v = image.at(x, y);
      const auto c = partition.cell_of((x + 0.5) / image.width, cy);
      if (v > delta) t.above[c] += 1.0;
      t.intensity[c] += v;
    }
  }
  return t;
}

double binary_similarity(const ExtractedNetwork& network, const RasterImage& image, double delta,
                         const CellPartition& partition, EdgeAssignment assignment) {
  const auto edges = tally_edges(network, partition, assignment);
  const auto pixels = tally_pixels(image, delta, partition);
  return score(edges.count, pixels.above, partition.cells());
}

double weighted_similarity(const ExtractedNetwork& network, const RasterImage& image,
                           const CellPartition& partition, EdgeAssignment assignment) {
  const auto edges = tally_edges(network, partition, assignment);
  const auto pixels = tally_pixels(image, 0.0, partition);
  return score(edges.weight, pixels.intensity, partition.cells());
}

SimilarityReport compare_to_ground_truth(const ExtractedNetwork& network, const RasterImage& image,
                                         double delta, const CellPartition& partition,
                                         EdgeAssignment assignment) {
  auto edges = tally_edges(network, partition, assignment);
  auto pixels = tally_pixels(image, delta, partition);
  SimilarityReport r;
  r.binary = score(edges.count, pixels.above, partition.cells());
  r.weighted = score(edges.weight, pixels.intensity, partition.cells());
  r.delta = delta;
  r.grid = partition.grid;
  r.assignment = assignment;
  r.edge_counts = std::move(edges.count);
  r.edge_weights = std::move(edges.weight);
  r.pixel_counts = std::move(pixels.above);
  r.pixel_sums = std::move(pixels.intensity);
  return r;
}

NetworkStats network_stats(const ExtractedNetwork& network) {
  NetworkStats s;
  s.nodes = network.nodes.size();
  s.edges = network.edges.size();
  const auto index = node_index(network);
  UnionFind uf(network.nodes.size());
  std::size_t merges = 0;
  for (const auto& e : network.edges) {
    s.total_length += e.length;
    if (uf.unite(index.at(e.source), index.at(e.target))) ++merges;
  }
  s.components = s.nodes - merges;
  s.cyclomatic = static_cast<long long>(s.edges) - static_cast<long long>(s.nodes) +
                 static_cast<long long>(s.components);
  return s;
}

}  // namespace pixflow
