#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pixflow/dynamics.hpp"
#include "pixflow/image.hpp"
#include "pixflow/network.hpp"
#include "pixflow/pixel_graph.hpp"

namespace pixflow {

enum class InitialConductivity { PixelWeight, Uniform };

/// Leaves of the all-sinks filtered tree of G^pe.
struct TerminalSet {
  std::vector<NodeId> nodes;  // sorted
  std::uint64_t seed = 0;
  NodeId source = -1;  // source of the selection run
  WeightedSubgraph tree;
  std::size_t iterations = 0;
  bool converged = false;

  [[nodiscard]] bool contains(NodeId id) const;
};

struct FilteredRun {
  WeightedSubgraph tree;  // weights are converged conductivities
  std::size_t iterations = 0;
  bool converged = false;
};

/// mu0 for runs on `graph`: pixel weights floored at 1e-6, or all ones.
std::vector<double> initial_conductivities(const PixelGraph& graph, InitialConductivity mode);

/// Random source drawn from `seed`, every other node a sink.
TerminalSet select_terminals(const PixelGraph& gpe, double beta, std::uint64_t seed,
                             const SolverParams& params = {},
                             InitialConductivity mu0 = InitialConductivity::PixelWeight,
                             double eps_rel = 1e-6);

/// Same with the source fixed by the caller.
TerminalSet select_terminals_from(const PixelGraph& gpe, double beta, NodeId source,
                                  const SolverParams& params = {},
                                  InitialConductivity mu0 = InitialConductivity::PixelWeight,
                                  double eps_rel = 1e-6);

/// Unit source at `source`, the other terminals share the sink equally.
FilteredRun run_filtered(const PixelGraph& gpe, const TerminalSet& terminals, NodeId source,
                         double beta, const SolverParams& params = {},
                         InitialConductivity mu0 = InitialConductivity::PixelWeight,
                         double eps_rel = 1e-6);

struct ExtractionOptions {
  double beta = 1.5;
  std::size_t n_runs = 5;
  std::uint64_t seed = 0;
  SolverParams params;
  double eps_rel = 1e-6;
  InitialConductivity mu0 = InitialConductivity::PixelWeight;
  /// Worker threads for the filtered runs; 0 picks the hardware count.
  std::size_t threads = 0;
  /// Skips terminal selection when set.
  std::optional<std::vector<NodeId>> terminals;
};

/// Source of run r for r in [0, n_runs): without replacement from the sorted
/// terminals while any are left, then with replacement. Each run reads only
/// its own derived seed, so the first k sources never depend on n_runs.
std::vector<NodeId> run_sources(std::span<const NodeId> terminals, std::uint64_t master_seed,
                                std::size_t n_runs);

ExtractedNetwork extract_network(const PixelGraph& gpe, const ExtractionOptions& options = {});

ExtractedNetwork extract_network(const RasterImage& image, double delta,
                                 const ExtractionOptions& options = {},
                                 PixelGraphOptions graph_options = {});

/// Calls fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace pixflow
