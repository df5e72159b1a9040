#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace groupsync {

/// Symmetric 0/1 coupling structure over n players with a zero diagonal.
///
/// Node indices are 0-based in the C++ API. Serialized forms (JSON, CSV,
/// CLI) use 1-based player labels.
class AdjacencyMatrix {
 public:
  /// Validates symmetry, zero diagonal and {0,1} entries.
  explicit AdjacencyMatrix(Eigen::MatrixXd a);

  Eigen::Index size() const noexcept { return a_.rows(); }
  const Eigen::MatrixXd& matrix() const noexcept { return a_; }
  bool connected(Eigen::Index k, Eigen::Index h) const { return a_(k, h) != 0.0; }

  Eigen::VectorXi degrees() const;
  std::size_t edge_count() const;

  /// Undirected edges (k < h), 0-based.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> edges() const;

  /// Same graph with players relabeled: new node i is old node perm[i].
  AdjacencyMatrix permuted(const std::vector<Eigen::Index>& perm) const;

  friend bool operator==(const AdjacencyMatrix& x, const AdjacencyMatrix& y) {
    return x.a_ == y.a_;
  }

 private:
  Eigen::MatrixXd a_;
};

AdjacencyMatrix complete(Eigen::Index n);

/// Cycle 1-2-...-n-1. Requires n >= 3.
AdjacencyMatrix ring(Eigen::Index n);

/// Ring with the cyclic edge (edge_index, edge_index + 1 mod n) removed.
/// `edge_index` is a 1-based player label; edge n joins players n and 1.
AdjacencyMatrix ring_minus_edge(Eigen::Index n, Eigen::Index edge_index);

/// Hub-and-leaves graph around the 1-based player label `center`.
AdjacencyMatrix star(Eigen::Index n, Eigen::Index center);

/// Arbitrary topology from a dense matrix; same validation as the constructor.
AdjacencyMatrix custom(const Eigen::MatrixXd& a);

/// Builds from 1-based undirected edge labels.
AdjacencyMatrix from_edges(Eigen::Index n,
                           const std::vector<std::pair<Eigen::Index, Eigen::Index>>& edges);

}  // namespace groupsync
