#include <doctest.h>

#include <map>
#include <numeric>
#include <set>

#include "pixflow/baseline.hpp"
#include "pixflow/error.hpp"
#include "pixflow/metrics.hpp"
#include "pixflow/subgraph.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace pixflow;

namespace {

bool spans_connected(const PixelGraph& g, const std::vector<EdgeId>& edges) {
  UnionFind uf(g.node_count());
  std::size_t merges = 0;
  for (EdgeId e : edges) merges += uf.unite(static_cast<std::size_t>(g.edge(e).a), static_cast<std::size_t>(g.edge(e).b));
  return merges + 1 == g.node_count();
}

// Best spanning tree weight by enumerating all (n-1)-edge subsets.
double brute_force_max_spanning_weight(const PixelGraph& g) {
  const std::size_t m = g.edge_count(), k = g.node_count() - 1;
  std::vector<int> pick(m, 0);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), 1);
  double best = -1.0;
  do {
    std::vector<EdgeId> edges;
    double w = 0.0;
    for (std::size_t e = 0; e < m; ++e) {
      if (pick[e]) {
        edges.push_back(static_cast<EdgeId>(e));
        w += g.edge(static_cast<EdgeId>(e)).weight;
      }
    }
    if (spans_connected(g, edges)) best = std::max(best, w);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

}  // namespace

TEST_SUITE("baseline") {

TEST_CASE("triangle keeps the two heaviest edges") {
  std::vector<GraphNode> nodes{{0, 0}, {1, 0}, {0, 1}};
  std::vector<std::pair<NodeId, NodeId>> pairs{{0, 1}, {1, 2}, {0, 2}};
  const std::vector<double> w{0.9, 0.5, 0.2};
  const auto g = PixelGraph::from_pairs(nodes, pairs, w);
  const auto t = spanning_tree(g);
  CHECK(t.edges == std::vector<EdgeId>{0, 1});
  CHECK(t.weights == std::vector<double>{0.9, 0.5});
}

TEST_CASE("spanning tree of a tree is the identity") {
  const auto g = testing::star_graph(6);
  CHECK(spanning_tree(g).edges == std::vector<EdgeId>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("spanning tree matches exhaustive enumeration on random 8-node graphs") {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = testing::random_connected_graph(gen, 8, 5);
    const auto t = spanning_tree(g);
    CHECK(t.size() == 7);
    CHECK(spans_connected(g, t.edges));
    CHECK(std::abs(t.total_weight() - brute_force_max_spanning_weight(g)) <= 1e-12);
  }
}

TEST_CASE("disconnected graphs are rejected") {
  std::vector<GraphNode> nodes{{0, 0}, {1, 0}, {5, 5}, {6, 5}};
  std::vector<std::pair<NodeId, NodeId>> pairs{{0, 1}, {2, 3}};
  const auto g = PixelGraph::from_pairs(nodes, pairs);
  try {
    (void)spanning_tree(g);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Disconnected);
  }
}

TEST_CASE("terminal sample sizes") {
  CHECK(terminal_sample_size(100, 0.025) == 3);  // round(2.5) = 3, half up
  CHECK(terminal_sample_size(4, 0.025) == 2);
  CHECK(terminal_sample_size(200, 0.025) == 5);
  CHECK(terminal_sample_size(2, 1.0) == 2);
  CHECK(MstOptions{}.fraction == 0.025);
}

TEST_CASE("sample_terminals draws distinct leaves deterministically") {
  const auto g = testing::star_graph(100);
  const auto t = spanning_tree(g);
  const auto a = sample_terminals(g, t, 0.025, 9);
  CHECK(a.size() == 3);
  CHECK(std::set<NodeId>(a.begin(), a.end()).size() == 3);
  for (NodeId v : a) CHECK(v != 0);
  CHECK(sample_terminals(g, t, 0.025, 9) == a);
  const auto path = testing::path_graph(2);
  WeightedSubgraph single{{0}, {1.0}};
  CHECK(sample_terminals(path, single, 0.5, 1).size() == 2);
  WeightedSubgraph none;
  try {
    (void)sample_terminals(path, none, 0.5, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewLeaves);
  }
}

TEST_CASE("two-terminal Steiner tree is the shortest path") {
  // Square with a cheap detour: 0-1-2 costs 0.2, direct 0-2 costs 0.5.
  std::vector<GraphNode> nodes{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<std::pair<NodeId, NodeId>> pairs{{0, 1}, {1, 2}, {0, 2}, {2, 3}};
  const auto g = PixelGraph::from_pairs(nodes, pairs);
  const auto tree = steiner_approx({g, {0.1, 0.1, 0.5, 0.3}, {0, 2}});
  CHECK(tree.edges == std::vector<EdgeId>{0, 1});
}

TEST_CASE("opposite corners of a unit 4-cycle") {
  std::vector<GraphNode> nodes{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<std::pair<NodeId, NodeId>> pairs{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  const auto g = PixelGraph::from_pairs(nodes, pairs);
  const auto a = steiner_approx({g, std::vector<double>(4, 1.0), {0, 2}});
  const auto b = steiner_approx({g, std::vector<double>(4, 1.0), {0, 2}});
  CHECK(a.size() == 2);
  CHECK(a.edges == b.edges);
  // Lower-id predecessor wins: 2 is reached through 1.
  CHECK(a.edges == std::vector<EdgeId>{0, 1});
}

TEST_CASE("Steiner approximation within twice the optimum on random small graphs") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 5 + trial % 5;
    const auto g = testing::random_connected_graph(gen, n, 4);
    const auto cost = steiner_costs(g);
    std::vector<NodeId> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), gen);
    const std::vector<NodeId> terms(all.begin(), all.begin() + 2 + trial % 3);
    const auto tree = steiner_approx({g, cost, terms});
    CHECK(tree.is_forest(g));
    CHECK(tree.component_count(g) == 1);
    const auto deg = tree.degrees(g);
    for (NodeId t : terms) CHECK(deg[static_cast<std::size_t>(t)] >= 1);
    for (NodeId v : tree.leaves(g)) CHECK(std::find(terms.begin(), terms.end(), v) != terms.end());
    for (std::size_t i = 0; i < tree.size(); ++i) CHECK(tree.weights[i] == g.edge(tree.edges[i]).weight);
    CHECK(subgraph_cost(tree, cost) <= 2.0 * oracle::steiner_cost(g, cost, terms) + 1e-12);
  }
}

TEST_CASE("MST extraction: determinism, G^pe weights, tree input stays acyclic") {
  std::mt19937_64 gen(6);
  const auto g = testing::random_connected_graph(gen, 40, 30);
  MstOptions opts;
  opts.n_runs = 4;
  opts.fraction = 0.3;
  opts.seed = 3;
  const auto a = extract_network_mst(g, opts);
  const auto b = extract_network_mst(g, opts);
  CHECK(a == b);
  std::map<std::pair<NodeId, NodeId>, double> w;
  for (const auto& e : g.edges()) w[{e.a, e.b}] = e.weight;
  for (const auto& e : a.edges) CHECK(e.weight == w.at({e.source, e.target}));

  const auto tree_graph = testing::star_graph(30);
  const auto t = extract_network_mst(tree_graph, opts);
  CHECK(network_stats(t).cyclomatic == 0);
}

TEST_CASE("single run with two terminals is a shortest path") {
  const auto g = testing::path_graph(7, 0.1);
  MstOptions opts;
  opts.n_runs = 1;
  const auto net = extract_network_mst(g, opts);
  CHECK(net.edges.size() == 6);
  CHECK(net.meta.extractor == "mst-steiner");
}

TEST_CASE("summed weights option adds G^pe weights per run") {
  const auto g = testing::path_graph(4, 0.1);
  MstOptions opts;
  opts.n_runs = 3;
  opts.summed_weights = true;
  const auto net = extract_network_mst(g, opts);
  for (const auto& e : net.edges) CHECK(e.weight == 3.0);
}

}
