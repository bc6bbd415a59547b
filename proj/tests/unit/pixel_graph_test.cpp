#include <doctest.h>

#include <set>

#include "pixflow/error.hpp"
#include "pixflow/pixel_graph.hpp"
#include "support.hpp"

using namespace pixflow;

namespace {

// Every unordered pair of retained pixels within Chebyshev distance 1.
std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> brute_force_pairs(const RasterImage& img,
                                                                                double delta) {
  std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> out;
  for (int y1 = 0; y1 < img.height; ++y1)
    for (int x1 = 0; x1 < img.width; ++x1)
      for (int y2 = 0; y2 < img.height; ++y2)
        for (int x2 = 0; x2 < img.width; ++x2) {
          if (std::pair(y1, x1) >= std::pair(y2, x2)) continue;
          if (std::abs(x1 - x2) > 1 || std::abs(y1 - y2) > 1) continue;
          if (img.at(x1, y1) > delta && img.at(x2, y2) > delta) out.insert({{x1, y1}, {x2, y2}});
        }
  return out;
}

}  // namespace

TEST_SUITE("pixel_graph") {

TEST_CASE("2x2 bright image gives 4 nodes and 6 edges") {
  RasterImage img(2, 2, 1.0);
  const auto g = build_pixel_graph(img, 0.5);
  CHECK(g.node_count() == 4);
  CHECK(g.edge_count() == 6);
  CHECK(g.node(0).x == 0.25);
  CHECK(g.node(3).y == 0.75);
  for (const auto& e : g.edges()) CHECK(e.weight == 1.0);
}

TEST_CASE("3x3 ring around a dark center") {
  RasterImage img(3, 3, 1.0);
  img.at(1, 1) = 0.0;
  const auto g = build_pixel_graph(img, 0.5);
  CHECK(g.node_count() == 8);
  // By hand: 8 side-adjacent pairs around the ring; the only diagonal pairs of
  // retained pixels are the four (corner-free) ones between edge midpoints.
  const auto pairs = brute_force_pairs(img, 0.5);
  CHECK(pairs.size() == 12);
  CHECK(g.edge_count() == pairs.size());
  for (const auto& e : g.edges()) {
    const auto& a = g.node(e.a);
    const auto& b = g.node(e.b);
    CHECK(pairs.count({{a.pixel_x, a.pixel_y}, {b.pixel_x, b.pixel_y}}) == 1);
  }
}

TEST_CASE("uniform dim image is an EmptyGraph") {
  RasterImage img(5, 5, 0.2);
  try {
    (void)build_pixel_graph(img, 0.3);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyGraph);
  }
}

TEST_CASE("full w x w grids match the side plus diagonal count") {
  for (int w = 1; w <= 10; ++w) {
    RasterImage img(w, w, 0.9);
    if (w == 1) {
      CHECK_THROWS(build_pixel_graph(img, 0.5));
      continue;
    }
    const auto g = build_pixel_graph(img, 0.5);
    CHECK(g.node_count() == static_cast<std::size_t>(w * w));
    const std::size_t expect = 2 * w * (w - 1) + 2 * (w - 1) * (w - 1);
    CHECK(g.edge_count() == expect);
    CHECK(g.edge_count() == brute_force_pairs(img, 0.5).size());
    const auto g4 = build_pixel_graph(img, 0.5, {Connectivity::Four});
    CHECK(g4.edge_count() == static_cast<std::size_t>(2 * w * (w - 1)));
  }
}

TEST_CASE("random images agree with brute-force enumeration on the largest component") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    RasterImage img(8, 8);
    for (auto& v : img.intensities) v = u(gen);
    PixelGraph g;
    try {
      g = build_pixel_graph(img, 0.4);
    } catch (const Error&) {
      continue;
    }
    const auto labels = component_labels(g);
    for (auto l : labels) CHECK(l == 0);
    for (const auto& e : g.edges()) {
      const auto& a = g.node(e.a);
      const auto& b = g.node(e.b);
      CHECK(e.a < e.b);
      CHECK(std::abs(e.length - std::hypot(a.x - b.x, a.y - b.y)) < 1e-12);
      CHECK(e.weight == 0.5 * (img.at(a.pixel_x, a.pixel_y) + img.at(b.pixel_x, b.pixel_y)));
    }
    // Edges of the kept component equal the brute-force pairs among its pixels.
    std::set<std::pair<int, int>> kept;
    for (const auto& n : g.nodes()) kept.insert({n.pixel_x, n.pixel_y});
    std::size_t expected = 0;
    for (const auto& [p, q] : brute_force_pairs(img, 0.4)) expected += kept.count(p) && kept.count(q);
    CHECK(g.edge_count() == expected);
  }
}

TEST_CASE("largest component is retained") {
  RasterImage img(6, 6, 0.0);
  img.at(0, 0) = img.at(1, 0) = 1.0;                          // 2 pixels
  img.at(4, 3) = img.at(4, 4) = img.at(5, 5) = 1.0;           // 3 pixels
  const auto g = build_pixel_graph(img, 0.5);
  CHECK(g.node_count() == 3);
  CHECK(g.node(0).pixel_x == 4);
}

TEST_CASE("raising delta never adds nodes or edges") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RasterImage img(16, 16);
  for (auto& v : img.intensities) v = u(gen) * u(gen) + 0.3;
  for (auto& v : img.intensities) v = std::min(v, 1.0);
  std::size_t n = SIZE_MAX, m = SIZE_MAX;
  for (double d : {0.3, 0.35, 0.4, 0.5}) {
    const auto g = build_pixel_graph(img, d);
    CHECK(g.node_count() <= n);
    CHECK(g.edge_count() <= m);
    n = g.node_count();
    m = g.edge_count();
  }
}

TEST_CASE("incidence matrix conventions") {
  const auto single = testing::path_graph(2);
  const auto b1 = incidence_matrix(single);
  CHECK(b1.rows() == 2);
  CHECK(b1.cols() == 1);
  CHECK(b1.entry(0, 0) == 1);
  CHECK(b1.entry(1, 0) == -1);

  const auto path = testing::path_graph(3);
  const auto b = incidence_matrix(path);
  CHECK(b.rows() == 3);
  CHECK(b.cols() == 2);
  std::mt19937_64 gen(1);
  const auto g = testing::random_connected_graph(gen, 12, 10);
  const auto bg = incidence_matrix(g);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    int sum = 0, plus = 0, minus = 0;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      const int x = bg.entry(static_cast<NodeId>(v), static_cast<EdgeId>(e));
      sum += x;
      plus += x == 1;
      minus += x == -1;
    }
    CHECK(sum == 0);
    CHECK(plus == 1);
    CHECK(minus == 1);
    CHECK(bg.plus_row(static_cast<EdgeId>(e)) < bg.minus_row(static_cast<EdgeId>(e)));
  }
  // B^T 1 = 0
  for (double v : bg.apply_transpose(std::vector<double>(g.node_count(), 1.0))) CHECK(v == 0.0);
}

TEST_CASE("graph validation rejects malformed input") {
  std::vector<GraphNode> nodes{{0, 0}, {1, 0}};
  CHECK_THROWS_AS(PixelGraph(nodes, {{0, 0, 1.0, 1.0}}), Error);
  CHECK_THROWS_AS(PixelGraph(nodes, {{0, 1, 1.0, 1.0}, {1, 0, 1.0, 1.0}}), Error);
  CHECK_THROWS_AS(PixelGraph(nodes, {{0, 1, 0.0, 1.0}}), Error);
  CHECK_THROWS_AS(PixelGraph(nodes, {{0, 2, 1.0, 1.0}}), Error);
}

}
