#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "pixflow/error.hpp"
#include "pixflow/pipeline.hpp"
#include "pixflow/rng.hpp"

namespace pixflow {

bool TerminalSet::contains(NodeId id) const {
  return std::binary_search(nodes.begin(), nodes.end(), id);
}

std::vector<double> initial_conductivities(const PixelGraph& graph, InitialConductivity mode) {
  std::vector<double> mu0(graph.edge_count(), 1.0);
  if (mode == InitialConductivity::PixelWeight) {
    for (std::size_t e = 0; e < mu0.size(); ++e) mu0[e] = std::max(graph.edges()[e].weight, 1e-6);
  }
  return mu0;
}

TerminalSet select_terminals(const PixelGraph& gpe, double beta, std::uint64_t seed,
                             const SolverParams& params, InitialConductivity mu0, double eps_rel) {
  if (gpe.node_count() < 2) {
    throw Error(ErrorCode::PreconditionViolation, "terminal selection needs at least 2 nodes");
  }
  std::mt19937_64 gen(derive_seed(seed, "terminal-source"));
  const auto source = static_cast<NodeId>(uniform_index(gen, gpe.node_count()));
  auto set = select_terminals_from(gpe, beta, source, params, mu0, eps_rel);
  set.seed = seed;
  return set;
}

TerminalSet select_terminals_from(const PixelGraph& gpe, double beta, NodeId source,
                                  const SolverParams& params, InitialConductivity mu0,
                                  double eps_rel) {
  const std::size_t n = gpe.node_count();
  if (n < 2) throw Error(ErrorCode::PreconditionViolation, "terminal selection needs at least 2 nodes");
  if (source < 0 || static_cast<std::size_t>(source) >= n) {
    throw Error(ErrorCode::PreconditionViolation, "source " + std::to_string(source) + " is not a node");
  }
  TransportProblem problem{gpe, std::vector<double>(n, -1.0 / static_cast<double>(n - 1)), beta,
                           initial_conductivities(gpe, mu0)};
  problem.forcing[static_cast<std::size_t>(source)] = 1.0;
  const auto state = run_dynamics(problem, params);
  if (!state.converged) {
    throw Error(ErrorCode::NotConverged, "terminal selection did not converge in " +
                                             std::to_string(state.iteration) + " iterations");
  }
  TerminalSet set;
  set.source = source;
  set.iterations = state.iteration;
  set.converged = true;
  set.tree = filter_to_tree(gpe, state.mu, eps_rel, source);
  set.nodes = set.tree.leaves(gpe);
  if (set.nodes.size() < 2) {
    throw Error(ErrorCode::DegenerateTree, "filtered tree has fewer than 2 leaves");
  }
  return set;
}

FilteredRun run_filtered(const PixelGraph& gpe, const TerminalSet& terminals, NodeId source,
                         double beta, const SolverParams& params, InitialConductivity mu0,
                         double eps_rel) {
  if (terminals.nodes.size() < 2) {
    throw Error(ErrorCode::PreconditionViolation, "a filtered run needs at least 2 terminals");
  }
  if (!terminals.contains(source)) {
    throw Error(ErrorCode::PreconditionViolation,
                "source " + std::to_string(source) + " is not a terminal");
  }
  TransportProblem problem{gpe, std::vector<double>(gpe.node_count(), 0.0), beta,
                           initial_conductivities(gpe, mu0)};
  const double sink = -1.0 / static_cast<double>(terminals.nodes.size() - 1);
  for (NodeId t : terminals.nodes) {
    if (t < 0 || static_cast<std::size_t>(t) >= gpe.node_count()) {
      throw Error(ErrorCode::PreconditionViolation, "terminal " + std::to_string(t) + " is not a node");
    }
    problem.forcing[static_cast<std::size_t>(t)] = t == source ? 1.0 : sink;
  }
  const auto state = run_dynamics(problem, params);
  if (!state.converged) {
    throw Error(ErrorCode::NotConverged,
                "run did not converge in " + std::to_string(state.iteration) + " iterations");
  }
  return {filter_to_tree(gpe, state.mu, eps_rel, source), state.iteration, true};
}

std::vector<NodeId> run_sources(std::span<const NodeId> terminals, std::uint64_t master_seed,
                                std::size_t n_runs) {
  std::vector<NodeId> pool(terminals.begin(), terminals.end());
  std::sort(pool.begin(), pool.end());
  const std::vector<NodeId> all = pool;
  std::vector<NodeId> sources;
  sources.reserve(n_runs);
  for (std::size_t r = 0; r < n_runs; ++r) {
    std::mt19937_64 gen(derive_seed(master_seed, "run-source", r));
    if (!pool.empty()) {
      const auto i = uniform_index(gen, pool.size());
      sources.push_back(pool[i]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      sources.push_back(all[uniform_index(gen, all.size())]);
    }
  }
  return sources;
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

ExtractedNetwork extract_network(const PixelGraph& gpe, const ExtractionOptions& options) {
  if (options.n_runs == 0) throw Error(ErrorCode::InvalidConfig, "n_runs must be at least 1");
  TerminalSet terminals;
  std::vector<std::string> warnings;
  if (options.terminals) {
    terminals.nodes = *options.terminals;
    std::sort(terminals.nodes.begin(), terminals.nodes.end());
    terminals.nodes.erase(std::unique(terminals.nodes.begin(), terminals.nodes.end()),
                          terminals.nodes.end());
    if (terminals.nodes.size() < 2) {
      throw Error(ErrorCode::PreconditionViolation, "at least 2 distinct terminals are required");
    }
  } else {
    terminals = select_terminals(gpe, options.beta, options.seed, options.params, options.mu0,
                                 options.eps_rel);
  }
  if (options.n_runs > terminals.nodes.size()) {
    warnings.push_back("n_runs " + std::to_string(options.n_runs) + " exceeds the " +
                       std::to_string(terminals.nodes.size()) +
                       " terminals; sources repeat after they are exhausted");
  }

  const auto sources = run_sources(terminals.nodes, options.seed, options.n_runs);
  std::vector<FilteredRun> results(options.n_runs);
  std::vector<RunRecord> records(options.n_runs);
  parallel_for(options.n_runs, options.threads, [&](std::size_t r) {
    auto& rec = records[r];
    rec.index = r;
    rec.seed = derive_seed(options.seed, "run-source", r);
    rec.source = sources[r];
    rec.terminals = terminals.nodes.size();
    try {
      results[r] = run_filtered(gpe, terminals, sources[r], options.beta, options.params,
                                options.mu0, options.eps_rel);
      rec.succeeded = true;
      rec.converged = results[r].converged;
      rec.iterations = results[r].iterations;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotConverged && e.code() != ErrorCode::SolveFailure &&
          e.code() != ErrorCode::EmptyFilter && e.code() != ErrorCode::DisconnectedForcing) {
        throw;
      }
      rec.error = e.what();
    }
  });

  std::vector<WeightedSubgraph> trees;
  for (std::size_t r = 0; r < options.n_runs; ++r) {
    if (records[r].succeeded) {
      trees.push_back(std::move(results[r].tree));
    } else {
      warnings.push_back("run " + std::to_string(r) + " dropped: " + records[r].error);
    }
  }
  if (trees.empty()) throw Error(ErrorCode::AllRunsFailed, "every filtered run failed");

  auto net = superimpose(gpe, trees);
  net.meta.extractor = "image2net";
  net.meta.beta = options.beta;
  net.meta.n_runs = options.n_runs;
  net.meta.seed = options.seed;
  net.meta.successful_runs = trees.size();
  net.meta.terminal_count = terminals.nodes.size();
  net.meta.runs = std::move(records);
  net.meta.warnings = std::move(warnings);
  return net;
}

ExtractedNetwork extract_network(const RasterImage& image, double delta,
                                 const ExtractionOptions& options, PixelGraphOptions graph_options) {
  const auto gpe = build_pixel_graph(image, delta, graph_options);
  auto net = extract_network(gpe, options);
  net.meta.delta = delta;
  return net;
}

}  // namespace pixflow
