#pragma once

#include <vector>

#include "pixflow/image.hpp"
#include "pixflow/network.hpp"

namespace pixflow {

/// g x g grid over [0,1]^2. Cells are half-open except along the upper edges.
struct CellPartition {
  int grid = 14;

  [[nodiscard]] std::size_t cells() const noexcept {
    return static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid);
  }
  [[nodiscard]] int axis_index(double t) const noexcept;
  [[nodiscard]] std::size_t cell_of(double x, double y) const noexcept;
  void validate() const;
};

enum class EdgeAssignment { Midpoint, FractionalLength };

/// Per-cell edge tallies: `count` adds 1 per edge, `weight` adds its weight.
/// Fractional assignment splits both by the share of length inside each cell.
struct EdgeTally {
  std::vector<double> count;
  std::vector<double> weight;
};
EdgeTally tally_edges(const ExtractedNetwork& network, const CellPartition& partition,
                      EdgeAssignment assignment = EdgeAssignment::Midpoint);

struct PixelTally {
  std::vector<double> above;  // pixels brighter than delta
  std::vector<double> intensity;
};
PixelTally tally_pixels(const RasterImage& image, double delta, const CellPartition& partition);

double binary_similarity(const ExtractedNetwork& network, const RasterImage& image, double delta,
                         const CellPartition& partition = {},
                         EdgeAssignment assignment = EdgeAssignment::Midpoint);
double weighted_similarity(const ExtractedNetwork& network, const RasterImage& image,
                           const CellPartition& partition = {},
                           EdgeAssignment assignment = EdgeAssignment::Midpoint);

struct SimilarityReport {
  double binary = 0.0;
  double weighted = 0.0;
  double delta = 0.0;
  int grid = 14;
  EdgeAssignment assignment = EdgeAssignment::Midpoint;
  std::vector<double> edge_counts;
  std::vector<double> pixel_counts;
  std::vector<double> edge_weights;
  std::vector<double> pixel_sums;
};

/// Both scores of `network` against `image` (the input or a hand labeling).
SimilarityReport compare_to_ground_truth(const ExtractedNetwork& network, const RasterImage& image,
                                         double delta, const CellPartition& partition = {},
                                         EdgeAssignment assignment = EdgeAssignment::Midpoint);

struct NetworkStats {
  double total_length = 0.0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t components = 0;
  long long cyclomatic = 0;
};

NetworkStats network_stats(const ExtractedNetwork& network);

}  // namespace pixflow
