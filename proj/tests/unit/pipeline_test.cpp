#include <doctest.h>

#include <map>
#include <set>

#include "pixflow/error.hpp"
#include "pixflow/metrics.hpp"
#include "pixflow/pipeline.hpp"
#include "support.hpp"

using namespace pixflow;

namespace {

WeightedSubgraph sub(std::vector<EdgeId> e, std::vector<double> w) { return {std::move(e), std::move(w)}; }

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("terminals of a path are its endpoints") {
  const auto g = testing::path_graph(3);
  for (NodeId src : {0, 1, 2}) {
    const auto t = select_terminals_from(g, 1.5, src);
    CHECK(t.nodes == std::vector<NodeId>{0, 2});
  }
}

TEST_CASE("terminals of a star from its center are the spoke tips") {
  const auto g = testing::star_graph(5);
  const auto t = select_terminals_from(g, 1.5, 0);
  CHECK(t.nodes == std::vector<NodeId>{1, 2, 3, 4, 5});
  CHECK(t.converged);
}

TEST_CASE("terminal selection is deterministic per seed") {
  std::mt19937_64 gen(3);
  const auto g = testing::random_connected_graph(gen, 20, 12);
  const auto a = select_terminals(g, 1.5, 1234);
  const auto b = select_terminals(g, 1.5, 1234);
  CHECK(a.nodes == b.nodes);
  CHECK(a.source == b.source);
  CHECK(a.tree.edges == b.tree.edges);
  for (NodeId v : a.nodes) CHECK(a.tree.degrees(g)[static_cast<std::size_t>(v)] == 1);
}

TEST_CASE("run_filtered on the Y graph reaches the analytic weights") {
  const auto g = testing::y_graph();
  TerminalSet t;
  t.nodes = {0, 1, 2};
  const auto run = run_filtered(g, t, 0, 1.5);
  REQUIRE(run.tree.size() == 3);
  CHECK(std::abs(run.tree.weights[0] - 1.0) <= 1e-5);
  CHECK(std::abs(run.tree.weights[1] - std::pow(0.5, 1.5)) <= 1e-5);
  CHECK(std::abs(run.tree.weights[2] - std::pow(0.5, 1.5)) <= 1e-5);
}

TEST_CASE("two terminals on a path give the path with unit weights") {
  const auto g = testing::path_graph(5, 0.25);
  TerminalSet t;
  t.nodes = {0, 4};
  const auto run = run_filtered(g, t, 4, 1.5);
  CHECK(run.tree.edges == std::vector<EdgeId>{0, 1, 2, 3});
  for (double w : run.tree.weights) CHECK(std::abs(w - 1.0) <= 1e-5);
}

TEST_CASE("source outside the terminals violates the precondition") {
  const auto g = testing::path_graph(4);
  TerminalSet t;
  t.nodes = {0, 3};
  try {
    (void)run_filtered(g, t, 1, 1.5);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionViolation);
  }
  t.nodes = {0};
  CHECK_THROWS_AS(run_filtered(g, t, 0, 1.5), Error);
}

TEST_CASE("superposition arithmetic") {
  std::mt19937_64 gen(1);
  const auto g = testing::random_connected_graph(gen, 12, 10);
  const auto one = sub({1, 4, 6}, {0.25, 0.5, 0.125});
  const auto alone = superimpose(g, std::vector<WeightedSubgraph>{one});
  REQUIRE(alone.edges.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& ge = g.edge(one.edges[i]);
    CHECK(alone.edges[i].source == ge.a);
    CHECK(alone.edges[i].target == ge.b);
    CHECK(alone.edges[i].weight == one.weights[i]);
    CHECK(alone.edges[i].length == ge.length);
  }
  CHECK(alone.nodes.size() == one.nodes(g).size());

  const auto two = sub({4, 9}, {0.5, 0.375});
  const auto merged = superimpose(g, std::vector<WeightedSubgraph>{one, two});
  CHECK(merged.edges.size() == 4);
  for (const auto& e : merged.edges) {
    if (e.source == g.edge(4).a && e.target == g.edge(4).b) CHECK(e.weight == 1.0);
  }
}

TEST_CASE("shared edge weights add up") {
  // Edge (3,7) present in two runs with 0.3 and 0.5.
  std::vector<GraphNode> nodes(8);
  for (int i = 0; i < 8; ++i) nodes[static_cast<std::size_t>(i)] = {0.1 * i, 0.01 * i * i};
  std::vector<std::pair<NodeId, NodeId>> pairs{{3, 7}, {0, 3}, {5, 7}};
  const auto g = PixelGraph::from_pairs(nodes, pairs);
  const auto net = superimpose(g, std::vector<WeightedSubgraph>{sub({0, 1}, {0.3, 1.0}), sub({0, 2}, {0.5, 1.0})});
  const auto it = std::find_if(net.edges.begin(), net.edges.end(),
                               [](const NetworkEdge& e) { return e.source == 3 && e.target == 7; });
  REQUIRE(it != net.edges.end());
  CHECK(it->weight == 0.3 + 0.5);
}

TEST_CASE("two edge-disjoint paths superimpose into a loop") {
  std::vector<GraphNode> nodes{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<std::pair<NodeId, NodeId>> pairs{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  const auto sq = PixelGraph::from_pairs(nodes, pairs);
  const auto net = superimpose(sq, std::vector<WeightedSubgraph>{sub({0, 1}, {1, 1}), sub({2, 3}, {1, 1})});
  CHECK(network_stats(net).cyclomatic == 1);
}

TEST_CASE("run sources: without replacement then with, prefix stable") {
  const std::vector<NodeId> terms{9, 2, 5};
  const auto s3 = run_sources(terms, 77, 3);
  CHECK(std::set<NodeId>(s3.begin(), s3.end()) == std::set<NodeId>{2, 5, 9});
  const auto s7 = run_sources(terms, 77, 7);
  CHECK(std::equal(s3.begin(), s3.end(), s7.begin()));
  for (NodeId s : s7) CHECK(std::find(terms.begin(), terms.end(), s) != terms.end());
  CHECK(run_sources(terms, 78, 3) != s3);
}

TEST_CASE("extract_network is deterministic and independent of threads") {
  const auto img = testing::rectangle_outline(32, 6, 8, 25, 23, 2);
  ExtractionOptions opts;
  opts.n_runs = 4;
  opts.seed = 5;
  opts.threads = 1;
  const auto a = extract_network(img, 0.3, opts);
  opts.threads = 4;
  const auto b = extract_network(img, 0.3, opts);
  CHECK(a == b);
  CHECK(a.meta.successful_runs == 4);
  CHECK(a.meta.runs.size() == 4);
  CHECK(a.meta.delta == 0.3);
}

TEST_CASE("edge sets grow with n_runs and stay inside G^pe") {
  const auto img = testing::rectangle_outline(32, 6, 8, 25, 23, 2);
  const auto gpe = build_pixel_graph(img, 0.3);
  std::set<std::pair<NodeId, NodeId>> gpe_edges;
  for (const auto& e : gpe.edges()) gpe_edges.insert({e.a, e.b});
  std::set<std::pair<NodeId, NodeId>> previous;
  for (std::size_t k = 1; k <= 4; ++k) {
    ExtractionOptions opts;
    opts.n_runs = k;
    opts.seed = 11;
    const auto net = extract_network(gpe, opts);
    std::set<std::pair<NodeId, NodeId>> edges;
    for (const auto& e : net.edges) edges.insert({e.source, e.target});
    CHECK(std::includes(edges.begin(), edges.end(), previous.begin(), previous.end()));
    CHECK(std::includes(gpe_edges.begin(), gpe_edges.end(), edges.begin(), edges.end()));
    previous = edges;
  }
}

TEST_CASE("final weights are exact sums of per-run conductivities") {
  const auto img = testing::rectangle_outline(24, 4, 4, 19, 19, 2);
  const auto gpe = build_pixel_graph(img, 0.3);
  ExtractionOptions opts;
  opts.n_runs = 3;
  opts.seed = 2;
  const auto net = extract_network(gpe, opts);
  const auto terms = select_terminals(gpe, 1.5, 2);
  const auto sources = run_sources(terms.nodes, 2, 3);
  std::map<std::pair<NodeId, NodeId>, double> sum;
  for (NodeId s : sources) {
    const auto run = run_filtered(gpe, terms, s, 1.5);
    for (std::size_t i = 0; i < run.tree.size(); ++i) {
      const auto& e = gpe.edge(run.tree.edges[i]);
      sum[{e.a, e.b}] += run.tree.weights[i];
    }
  }
  REQUIRE(sum.size() == net.edges.size());
  for (const auto& e : net.edges) CHECK(e.weight == sum.at({e.source, e.target}));
}

TEST_CASE("user terminals bypass selection") {
  const auto g = testing::path_graph(6, 0.2);
  ExtractionOptions opts;
  opts.terminals = std::vector<NodeId>{5, 0};
  opts.n_runs = 2;
  const auto net = extract_network(g, opts);
  CHECK(net.edges.size() == 5);
  CHECK(net.meta.terminal_count == 2);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<int> hits(50, 0);
  parallel_for(50, 4, [&](std::size_t i) { ++hits[i]; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS(parallel_for(10, 3, [](std::size_t i) {
    if (i == 7) throw std::runtime_error("boom");
  }));
}

TEST_CASE("documented defaults") {
  ExtractionOptions opts;
  CHECK(opts.beta == 1.5);
  CHECK(opts.n_runs == 5);
}

}
