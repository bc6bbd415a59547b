#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <tuple>

#include "pixflow/baseline.hpp"
#include "pixflow/error.hpp"
#include "pixflow/pipeline.hpp"
#include "pixflow/rng.hpp"

namespace pixflow {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ShortestPaths {
  std::vector<double> dist;
  std::vector<EdgeId> via;  // edge into each node on its shortest path, -1 at the root
};

// Dijkstra; among equal distances the predecessor with the lower id wins, so
// paths are a function of the graph alone.
ShortestPaths dijkstra(const PixelGraph& g, std::span<const double> cost, NodeId root) {
  ShortestPaths sp{std::vector<double>(g.node_count(), kInf), std::vector<EdgeId>(g.node_count(), -1)};
  std::vector<NodeId> pred(g.node_count(), -1);
  std::vector<char> done(g.node_count(), 0);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  sp.dist[static_cast<std::size_t>(root)] = 0.0;
  heap.emplace(0.0, root);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (done[static_cast<std::size_t>(v)]) continue;
    done[static_cast<std::size_t>(v)] = 1;
    for (const auto& inc : g.incident(v)) {
      const double nd = d + cost[static_cast<std::size_t>(inc.edge)];
      auto& cur = sp.dist[static_cast<std::size_t>(inc.node)];
      auto& p = pred[static_cast<std::size_t>(inc.node)];
      if (nd < cur) {
        cur = nd;
        p = v;
        sp.via[static_cast<std::size_t>(inc.node)] = inc.edge;
        heap.emplace(nd, inc.node);
      } else if (nd == cur && v < p && !done[static_cast<std::size_t>(inc.node)]) {
        p = v;
        sp.via[static_cast<std::size_t>(inc.node)] = inc.edge;
      }
    }
  }
  return sp;
}

WeightedSubgraph with_parent_weights(const PixelGraph& g, std::vector<EdgeId> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  WeightedSubgraph out;
  out.edges = std::move(edges);
  for (EdgeId e : out.edges) out.weights.push_back(g.edge(e).weight);
  return out;
}

}  // namespace

WeightedSubgraph spanning_tree(const PixelGraph& gpe) {
  if (gpe.node_count() == 0) throw Error(ErrorCode::Disconnected, "graph has no nodes");
  std::vector<EdgeId> all(gpe.edge_count());
  std::iota(all.begin(), all.end(), 0);
  const auto w = gpe.weights();
  auto tree = maximum_spanning_forest(gpe, all, w);
  if (tree.size() + 1 != gpe.node_count()) {
    throw Error(ErrorCode::Disconnected, "graph is not connected");
  }
  return tree;
}

std::size_t terminal_sample_size(std::size_t leaves, double fraction) {
  const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(leaves) + 0.5));
  return std::min(leaves, std::max<std::size_t>(2, k));
}

std::vector<NodeId> sample_terminals(const PixelGraph& gpe, const WeightedSubgraph& tree,
                                     double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "terminal fraction must lie in (0, 1]");
  }
  auto leaves = tree.leaves(gpe);
  if (leaves.size() < 2) throw Error(ErrorCode::TooFewLeaves, "tree has fewer than 2 leaves");
  const std::size_t k = terminal_sample_size(leaves.size(), fraction);
  std::mt19937_64 gen(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + uniform_index(gen, leaves.size() - i);
    std::swap(leaves[i], leaves[j]);
  }
  leaves.resize(k);
  std::sort(leaves.begin(), leaves.end());
  return leaves;
}

std::vector<double> steiner_costs(const PixelGraph& graph) {
  std::vector<double> c(graph.edge_count());
  for (std::size_t e = 0; e < c.size(); ++e) {
    const auto& ed = graph.edges()[e];
    c[e] = std::max(0.0, 1.0 - ed.weight) + 1e-9 * ed.length;
  }
  return c;
}

double subgraph_cost(const WeightedSubgraph& sub, std::span<const double> cost) {
  double s = 0.0;
  for (EdgeId e : sub.edges) s += cost[static_cast<std::size_t>(e)];
  return s;
}

WeightedSubgraph steiner_approx(const SteinerInstance& instance) {
  const PixelGraph& g = instance.graph;
  if (instance.cost.size() != g.edge_count()) {
    throw Error(ErrorCode::InvalidConfig, "cost vector does not match the edge count");
  }
  std::vector<NodeId> terms = instance.terminals;
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  if (terms.size() < 2) throw Error(ErrorCode::PreconditionViolation, "need at least 2 terminals");
  for (NodeId t : terms) {
    if (t < 0 || static_cast<std::size_t>(t) >= g.node_count()) {
      throw Error(ErrorCode::PreconditionViolation, "terminal " + std::to_string(t) + " is not a node");
    }
  }
  const std::size_t k = terms.size();
  std::vector<ShortestPaths> sp;
  sp.reserve(k);
  for (NodeId t : terms) sp.push_back(dijkstra(g, instance.cost, t));

  // MST of the metric closure; ties by (i, j).
  std::vector<std::tuple<double, std::size_t, std::size_t>> closure;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double d = sp[i].dist[static_cast<std::size_t>(terms[j])];
      if (d == kInf) throw Error(ErrorCode::Disconnected, "terminals lie in different components");
      closure.emplace_back(d, i, j);
    }
  }
  std::sort(closure.begin(), closure.end());
  UnionFind uf(k);
  std::vector<EdgeId> expanded;
  for (const auto& [d, i, j] : closure) {
    if (!uf.unite(i, j)) continue;
    for (NodeId v = terms[j]; v != terms[i];) {
      const EdgeId e = sp[i].via[static_cast<std::size_t>(v)];
      expanded.push_back(e);
      const auto& ed = g.edge(e);
      v = ed.a == v ? ed.b : ed.a;
    }
  }
  std::sort(expanded.begin(), expanded.end());
  expanded.erase(std::unique(expanded.begin(), expanded.end()), expanded.end());

  // Minimum spanning forest of the expanded subgraph (Kruskal on cost).
  std::stable_sort(expanded.begin(), expanded.end(), [&](EdgeId a, EdgeId b) {
    return instance.cost[static_cast<std::size_t>(a)] < instance.cost[static_cast<std::size_t>(b)];
  });
  UnionFind forest(g.node_count());
  std::vector<EdgeId> kept;
  for (EdgeId e : expanded) {
    if (forest.unite(static_cast<std::size_t>(g.edge(e).a), static_cast<std::size_t>(g.edge(e).b))) {
      kept.push_back(e);
    }
  }

  // Prune non-terminal leaves until none remain.
  std::vector<char> is_term(g.node_count(), 0);
  for (NodeId t : terms) is_term[static_cast<std::size_t>(t)] = 1;
  std::vector<int> deg(g.node_count(), 0);
  for (EdgeId e : kept) {
    ++deg[static_cast<std::size_t>(g.edge(e).a)];
    ++deg[static_cast<std::size_t>(g.edge(e).b)];
  }
  std::vector<char> alive(g.edge_count(), 0);
  for (EdgeId e : kept) alive[static_cast<std::size_t>(e)] = 1;
  std::vector<NodeId> stack;
  for (std::size_t v = 0; v < deg.size(); ++v) {
    if (deg[v] == 1 && !is_term[v]) stack.push_back(static_cast<NodeId>(v));
  }
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    if (deg[static_cast<std::size_t>(v)] != 1) continue;
    for (const auto& inc : g.incident(v)) {
      if (!alive[static_cast<std::size_t>(inc.edge)]) continue;
      alive[static_cast<std::size_t>(inc.edge)] = 0;
      --deg[static_cast<std::size_t>(v)];
      if (--deg[static_cast<std::size_t>(inc.node)] == 1 && !is_term[static_cast<std::size_t>(inc.node)]) {
        stack.push_back(inc.node);
      }
      break;
    }
  }
  std::vector<EdgeId> result;
  for (EdgeId e : kept) {
    if (alive[static_cast<std::size_t>(e)]) result.push_back(e);
  }
  return with_parent_weights(g, std::move(result));
}

ExtractedNetwork extract_network_mst(const PixelGraph& gpe, const MstOptions& options) {
  if (options.n_runs == 0) throw Error(ErrorCode::InvalidConfig, "n_runs must be at least 1");
  const auto tree = spanning_tree(gpe);
  const auto cost = steiner_costs(gpe);
  const auto leaf_count = tree.leaves(gpe).size();

  std::vector<WeightedSubgraph> runs(options.n_runs);
  std::vector<RunRecord> records(options.n_runs);
  parallel_for(options.n_runs, options.threads, [&](std::size_t r) {
    const auto seed = derive_seed(options.seed, "mst-terminals", r);
    SteinerInstance inst{gpe, cost, sample_terminals(gpe, tree, options.fraction, seed)};
    runs[r] = steiner_approx(inst);
    records[r] = RunRecord{r, seed, inst.terminals.front(), true, true, 0, inst.terminals.size(), {}};
  });

  auto net = options.summed_weights ? superimpose(gpe, runs) : superimpose_with_parent_weights(gpe, runs);
  net.meta.extractor = "mst-steiner";
  net.meta.beta = 0.0;
  net.meta.n_runs = options.n_runs;
  net.meta.seed = options.seed;
  net.meta.successful_runs = options.n_runs;
  net.meta.terminal_count = terminal_sample_size(leaf_count, options.fraction);
  net.meta.runs = std::move(records);
  return net;
}

}  // namespace pixflow
