#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "groupsync/graphs.hpp"

using namespace groupsync;

TEST_CASE("complete graph has every off-diagonal edge") {
  const AdjacencyMatrix a = complete(7);
  CHECK(a.edge_count() == 21);
  CHECK((a.degrees().array() == 6).all());
  CHECK(complete(1).edge_count() == 0);
}

TEST_CASE("ring degrees and cyclic closure") {
  const AdjacencyMatrix a = ring(7);
  CHECK((a.degrees().array() == 2).all());
  CHECK(a.connected(0, 6));
  CHECK(a.connected(3, 4));
  CHECK_FALSE(a.connected(0, 2));
  CHECK_THROWS_AS(ring(2), std::invalid_argument);
}

TEST_CASE("ring minus edge is a path with two endpoints") {
  for (Eigen::Index e = 1; e <= 7; ++e) {
    const AdjacencyMatrix a = ring_minus_edge(7, e);
    CHECK(a.edge_count() == 6);
    const Eigen::VectorXi d = a.degrees();
    CHECK((d.array() == 1).count() == 2);
    const Eigen::Index u = e - 1, v = e % 7;
    CHECK_FALSE(a.connected(u, v));
    CHECK(d(u) == 1);
    CHECK(d(v) == 1);
  }
  CHECK_THROWS(ring_minus_edge(7, 0));
  CHECK_THROWS(ring_minus_edge(7, 8));
}

TEST_CASE("star hub and leaves") {
  const AdjacencyMatrix a = star(7, 3);
  const Eigen::VectorXi d = a.degrees();
  CHECK(d(2) == 6);
  CHECK((d.array() == 1).count() == 6);
  CHECK(a.edge_count() == 6);
  CHECK_THROWS(star(7, 0));
  CHECK_THROWS(star(7, 8));
}

TEST_CASE("custom validation rejects malformed matrices") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  m(0, 1) = 1;
  CHECK_THROWS(custom(m));  // asymmetric
  m(1, 0) = 1;
  CHECK_NOTHROW(custom(m));
  m(2, 2) = 1;
  CHECK_THROWS(custom(m));  // self loop
  m(2, 2) = 0;
  m(0, 2) = m(2, 0) = 0.5;
  CHECK_THROWS(custom(m));  // weighted
  CHECK_THROWS(custom(Eigen::MatrixXd::Zero(2, 3)));
}

TEST_CASE("edges round-trip through 1-based labels") {
  const AdjacencyMatrix a = star(7, 3);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> labels;
  for (const auto& [k, h] : a.edges()) labels.emplace_back(k + 1, h + 1);
  CHECK(from_edges(7, labels) == a);
  CHECK_THROWS(from_edges(3, {{1, 4}}));
  CHECK_THROWS(from_edges(3, {{2, 2}}));
}

TEST_CASE("relabeling preserves degree multiset") {
  std::mt19937_64 rng(3);
  std::vector<Eigen::Index> perm(7);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const AdjacencyMatrix a = ring_minus_edge(7, 7);
  const AdjacencyMatrix b = a.permuted(perm);
  for (Eigen::Index i = 0; i < 7; ++i)
    for (Eigen::Index j = 0; j < 7; ++j) CHECK(b.connected(i, j) == a.connected(perm[i], perm[j]));
  Eigen::VectorXi da = a.degrees(), db = b.degrees();
  std::sort(da.begin(), da.end());
  std::sort(db.begin(), db.end());
  CHECK(da == db);
}
