#include "groupsync/graphs.hpp"

#include <string>

#include "groupsync/error.hpp"

namespace groupsync {

AdjacencyMatrix::AdjacencyMatrix(Eigen::MatrixXd a) : a_(std::move(a)) {
  if (a_.rows() < 1 || a_.rows() != a_.cols()) {
    throw InvalidArgument("adjacency matrix must be square with n >= 1");
  }
  const Eigen::Index n = a_.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (a_(k, k) != 0.0) {
      throw InvalidArgument("adjacency matrix must have a zero diagonal");
    }
    for (Eigen::Index h = 0; h < n; ++h) {
      const double v = a_(k, h);
      if (v != 0.0 && v != 1.0) {
        throw InvalidArgument("adjacency entries must be 0 or 1");
      }
      if (v != a_(h, k)) {
        throw InvalidArgument("adjacency matrix must be symmetric");
      }
    }
  }
}

Eigen::VectorXi AdjacencyMatrix::degrees() const {
  return a_.rowwise().sum().cast<int>();
}

std::size_t AdjacencyMatrix::edge_count() const {
  return static_cast<std::size_t>(a_.sum()) / 2;
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> AdjacencyMatrix::edges() const {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  for (Eigen::Index k = 0; k < size(); ++k) {
    for (Eigen::Index h = k + 1; h < size(); ++h) {
      if (connected(k, h)) out.emplace_back(k, h);
    }
  }
  return out;
}

AdjacencyMatrix AdjacencyMatrix::permuted(const std::vector<Eigen::Index>& perm) const {
  const Eigen::Index n = size();
  if (static_cast<Eigen::Index>(perm.size()) != n) {
    throw ShapeError("permutation length must equal player count");
  }
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = a_(perm[i], perm[j]);
  }
  return AdjacencyMatrix(std::move(out));
}

AdjacencyMatrix complete(Eigen::Index n) {
  if (n < 1) throw InvalidArgument("complete graph needs n >= 1");
  Eigen::MatrixXd a = Eigen::MatrixXd::Ones(n, n);
  a.diagonal().setZero();
  return AdjacencyMatrix(std::move(a));
}

AdjacencyMatrix ring(Eigen::Index n) {
  if (n < 3) throw InvalidArgument("ring graph needs n >= 3");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index next = (k + 1) % n;
    a(k, next) = a(next, k) = 1.0;
  }
  return AdjacencyMatrix(std::move(a));
}

AdjacencyMatrix ring_minus_edge(Eigen::Index n, Eigen::Index edge_index) {
  if (n < 3) throw InvalidArgument("ring graph needs n >= 3");
  if (edge_index < 1 || edge_index > n) {
    throw InvalidArgument("edge index " + std::to_string(edge_index) + " outside 1.." +
                          std::to_string(n));
  }
  Eigen::MatrixXd a = ring(n).matrix();
  const Eigen::Index k = edge_index - 1;
  const Eigen::Index h = edge_index % n;
  a(k, h) = a(h, k) = 0.0;
  return AdjacencyMatrix(std::move(a));
}

AdjacencyMatrix star(Eigen::Index n, Eigen::Index center) {
  if (n < 2) throw InvalidArgument("star graph needs n >= 2");
  if (center < 1 || center > n) {
    throw InvalidArgument("star center " + std::to_string(center) + " outside 1.." +
                          std::to_string(n));
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  a.row(center - 1).setOnes();
  a.col(center - 1).setOnes();
  a(center - 1, center - 1) = 0.0;
  return AdjacencyMatrix(std::move(a));
}

AdjacencyMatrix custom(const Eigen::MatrixXd& a) { return AdjacencyMatrix(a); }

AdjacencyMatrix from_edges(Eigen::Index n,
                           const std::vector<std::pair<Eigen::Index, Eigen::Index>>& edges) {
  if (n < 1) throw InvalidArgument("graph needs n >= 1");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [k, h] : edges) {
    if (k < 1 || k > n || h < 1 || h > n) {
      throw InvalidArgument("edge label outside 1.." + std::to_string(n));
    }
    if (k == h) throw InvalidArgument("self-loops are not allowed");
    a(k - 1, h - 1) = a(h - 1, k - 1) = 1.0;
  }
  return AdjacencyMatrix(std::move(a));
}

}  // namespace groupsync
