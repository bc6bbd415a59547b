#include <doctest.h>

#include "pixflow/metrics.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace pixflow;

namespace {

ExtractedNetwork random_network(std::mt19937_64& gen, int n, int m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ExtractedNetwork net;
  for (int i = 0; i < n; ++i) net.nodes.push_back({i * 3, u(gen), u(gen)});
  for (int k = 0; k < m; ++k) {
    const int a = static_cast<int>(gen() % static_cast<std::uint64_t>(n));
    int b = static_cast<int>(gen() % static_cast<std::uint64_t>(n));
    if (a == b) b = (a + 1) % n;
    net.edges.push_back({std::min(a, b) * 3, std::max(a, b) * 3, u(gen) * 2.0, 0.1});
  }
  return net;
}

// One node per pixel above delta and one edge per such pixel with its
// midpoint at the pixel barycenter, weight equal to the pixel intensity.
ExtractedNetwork pixel_matched(const RasterImage& img, double delta) {
  ExtractedNetwork net;
  NodeId id = 0;
  const double h = 0.1 / img.width;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double v = img.at(x, y);
      if (!(v > delta)) continue;
      const double cx = (x + 0.5) / img.width, cy = (y + 0.5) / img.height;
      net.nodes.push_back({id, cx - h, cy});
      net.nodes.push_back({id + 1, cx + h, cy});
      net.edges.push_back({id, id + 1, v, 2 * h});
      id += 2;
    }
  }
  return net;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("cell partition boundaries") {
  CellPartition p{14};
  CHECK(p.cells() == 196);
  CHECK(p.axis_index(0.0) == 0);
  CHECK(p.axis_index(1.0) == 13);
  CHECK(p.axis_index(1.0 / 14 * 3) == 3);
  CHECK(p.axis_index(std::nextafter(3.0 / 14, 0.0)) == 2);
  CHECK(p.cell_of(0.99, 0.0) == 13);
  CHECK(CellPartition{}.grid == 14);
}

TEST_CASE("metrics match the per-cell oracle on random pairs") {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int g = trial % 2 ? 14 : 2;
    const auto net = random_network(gen, 30, 40);
    RasterImage img(28, 28);
    for (auto& v : img.intensities) v = u(gen);
    const auto want = oracle::similarity(net, img, 0.5, g);
    CHECK(std::abs(binary_similarity(net, img, 0.5, {g}) - want.binary) <= 1e-12);
    CHECK(std::abs(weighted_similarity(net, img, {g}) - want.weighted) <= 1e-12);
  }
}

TEST_CASE("perfect matches score exactly zero, also under refinement") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RasterImage img(28, 28);
  for (auto& v : img.intensities) v = u(gen) > 0.6 ? 1.0 : 0.0;
  const auto net = pixel_matched(img, 0.5);
  for (int g : {1, 2, 7, 14, 28}) {
    CHECK(binary_similarity(net, img, 0.5, {g}) == 0.0);
    CHECK(weighted_similarity(net, img, {g}) == 0.0);
  }
}

TEST_CASE("one cell off by two") {
  RasterImage img(14, 14, 0.0);
  ExtractedNetwork net;
  net.nodes = {{0, 0.01, 0.01}, {1, 0.02, 0.02}, {2, 0.03, 0.01}};
  net.edges = {{0, 1, 1.0, 0.01}, {1, 2, 1.0, 0.01}};
  CHECK(binary_similarity(net, img, 0.5, {14}) == doctest::Approx(2.0 / 196.0));
  CHECK(std::abs(binary_similarity(net, img, 0.5, {14}) - 0.010204) < 1e-6);
}

TEST_CASE("empty network against pixel counts 3 and 4") {
  RasterImage img(4, 4, 0.0);
  img.at(0, 0) = img.at(1, 0) = img.at(0, 1) = 1.0;               // top-left cell: 3
  img.at(2, 2) = img.at(3, 2) = img.at(2, 3) = img.at(3, 3) = 1.0;  // bottom-right: 4
  const ExtractedNetwork empty;
  CHECK(binary_similarity(empty, img, 0.5, {2}) == 1.25);
}

TEST_CASE("weighted single-cell arithmetic and homogeneity") {
  RasterImage img(1, 1, 0.5);
  ExtractedNetwork net;
  net.nodes = {{0, 0.2, 0.2}, {1, 0.4, 0.4}};
  net.edges = {{0, 1, 2.0, 0.3}};
  CHECK(weighted_similarity(net, img, {1}) == 1.5);

  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  auto rnet = random_network(gen, 10, 15);
  RasterImage rimg(10, 10);
  for (auto& v : rimg.intensities) v = u(gen);
  const double base = weighted_similarity(rnet, rimg, {5});
  for (auto& e : rnet.edges) e.weight *= 2.0;
  for (auto& v : rimg.intensities) v *= 2.0;
  CHECK(weighted_similarity(rnet, rimg, {5}) == doctest::Approx(2.0 * base).epsilon(1e-12));
}

TEST_CASE("invariances and purity") {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto net = random_network(gen, 12, 20);
  RasterImage img(14, 14);
  for (auto& v : img.intensities) v = u(gen);
  const double b = binary_similarity(net, img, 0.4);
  CHECK(binary_similarity(net, img, 0.4) == b);
  const double w = weighted_similarity(net, img);
  auto heavier = net;
  for (auto& e : heavier.edges) e.weight += 1.0;
  CHECK(binary_similarity(heavier, img, 0.4) == b);
  CHECK(compare_to_ground_truth(net, img, 0.1).weighted == compare_to_ground_truth(net, img, 0.9).weighted);
  CHECK(compare_to_ground_truth(net, img, 0.4).weighted == w);
}

TEST_CASE("ground-truth comparisons") {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto net = random_network(gen, 12, 20);
  RasterImage img(14, 14), other(14, 14);
  for (auto& v : img.intensities) v = u(gen);
  for (auto& v : other.intensities) v = u(gen) > 0.5 ? 1.0 : 0.0;
  const auto self = compare_to_ground_truth(net, img, 0.4);
  const auto same = compare_to_ground_truth(net, img, 0.4);
  CHECK(self.binary == same.binary);
  CHECK(self.edge_counts == same.edge_counts);
  CHECK(compare_to_ground_truth(net, other, 0.4).binary != self.binary);

  const RasterImage black(14, 14, 0.0);
  const auto r = compare_to_ground_truth(net, black, 0.4);
  double s = 0;
  for (double a : r.edge_counts) s += a * a;
  CHECK(r.binary == doctest::Approx(std::sqrt(s) / 196.0).epsilon(1e-15));
}

TEST_CASE("fractional assignment splits an edge by length") {
  ExtractedNetwork net;
  net.nodes = {{0, 0.25, 0.25}, {1, 0.75, 0.25}};
  net.edges = {{0, 1, 4.0, 0.5}};
  const auto t = tally_edges(net, {2}, EdgeAssignment::FractionalLength);
  CHECK(t.count[0] == doctest::Approx(0.5));
  CHECK(t.count[1] == doctest::Approx(0.5));
  CHECK(t.weight[1] == doctest::Approx(2.0));
  const auto mid = tally_edges(net, {2});
  CHECK(mid.count[1] == 1.0);  // midpoint x = 0.5 lies in the second column
}

TEST_CASE("network statistics") {
  ExtractedNetwork path;
  path.nodes = {{0, 0, 0}, {1, 1, 0}, {2, 2, 0}};
  path.edges = {{0, 1, 1, 1.0}, {1, 2, 1, 1.0}};
  auto s = network_stats(path);
  CHECK(s.total_length == 2.0);
  CHECK(s.nodes == 3);
  CHECK(s.edges == 2);
  CHECK(s.cyclomatic == 0);

  ExtractedNetwork square;
  square.nodes = {{0, 0, 0}, {1, 1, 0}, {2, 1, 1}, {3, 0, 1}};
  square.edges = {{0, 1, 1, 1.0}, {1, 2, 1, 1.0}, {2, 3, 1, 1.0}, {0, 3, 1, 1.0}};
  s = network_stats(square);
  CHECK(s.total_length == 4.0);
  CHECK(s.cyclomatic == 1);

  s = network_stats(ExtractedNetwork{});
  CHECK(s.total_length == 0.0);
  CHECK(s.nodes == 0);
  CHECK(s.edges == 0);
  CHECK(s.cyclomatic == 0);
}

}
