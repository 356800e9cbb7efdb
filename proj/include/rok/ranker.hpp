// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#ifndef ROK_RANKER_HPP_
#define ROK_RANKER_HPP_

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rok/error.hpp"
#include "rok/linker.hpp"
#include "rok/paths.hpp"

namespace rok {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Directed edge between local node indices.
using LocalEdge = std::pair<Eigen::Index, Eigen::Index>;

// Column-stochastic transition matrix: M(to, from) = w / L(from), where L is
// the number of edges leaving `from`. Columns of dangling nodes stay empty and
// are flagged in `dangling`.
template <typename Scalar>
Eigen::SparseMatrix<Scalar> transition_matrix(Eigen::Index n,
                                              std::span<const LocalEdge> edges,
                                              Eigen::Array<bool, Eigen::Dynamic, 1> *dangling) {
  Vector<Scalar> out_degree = Vector<Scalar>::Zero(n);
  for (const auto &[from, to] : edges) out_degree[from] += Scalar(1);

  std::vector<Eigen::Triplet<Scalar>> entries;
  entries.reserve(edges.size());
  for (const auto &[from, to] : edges) {
    entries.emplace_back(to, from, Scalar(1) / out_degree[from]);
  }
  Eigen::SparseMatrix<Scalar> m(n, n);
  m.setFromTriplets(entries.begin(), entries.end());  // duplicates are summed
  if (dangling) *dangling = (out_degree.array() == Scalar(0));
  return m;
}

template <typename Scalar>
struct PowerIteration {
  Vector<Scalar> scores;
  int iterations = 0;
  Scalar residual = Scalar(0);
  bool converged = false;
};

// PR_t = d (M PR_{t-1} + dangling mass spread uniformly) + (1 - d)/n, starting
// from the uniform vector. Stops once the L1 change drops below `tol` or after
// `max_iter` steps. `observe(iteration, scores)` runs after every step.
template <typename Scalar, typename Observer>
PowerIteration<Scalar> power_iterate(const Eigen::SparseMatrix<Scalar> &m,
                                     const Eigen::Array<bool, Eigen::Dynamic, 1> &dangling,
                                     Scalar damping, Scalar tol, int max_iter,
                                     Observer &&observe) {
  const Eigen::Index n = m.cols();
  const Scalar inv_n = Scalar(1) / Scalar(n);
  PowerIteration<Scalar> result;
  result.scores = Vector<Scalar>::Constant(n, inv_n);
  Vector<Scalar> next(n);
  while (result.iterations < max_iter) {
    const Scalar dangling_mass =
        dangling.select(result.scores.array(), Scalar(0)).sum();
    next.noalias() = damping * (m * result.scores);
    next.array() += damping * dangling_mass * inv_n + (Scalar(1) - damping) * inv_n;
    result.residual = (next - result.scores).template lpNorm<1>();
    result.scores.swap(next);
    ++result.iterations;
    observe(result.iterations, std::as_const(result.scores));
    if (result.residual < tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

template <typename Scalar>
PowerIteration<Scalar> power_iterate(const Eigen::SparseMatrix<Scalar> &m,
                                     const Eigen::Array<bool, Eigen::Dynamic, 1> &dangling,
                                     Scalar damping, Scalar tol, int max_iter) {
  return power_iterate(m, dangling, damping, tol, max_iter,
                       [](int, const Vector<Scalar> &) {});
}

struct PageRankOptions {
  double damping = 0.85;
  double tol = 1e-8;
  int max_iter = 100;
  // Undirected: every triple contributes an edge both ways.
  bool directed = false;
};

// PageRank over the nodes of one subgraph. nodes[i] is scored by scores[i].
struct PageRankScores {
  std::vector<EntityId> nodes;
  Eigen::VectorXd scores;
  double damping = 0.85;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;

  std::size_t size() const { return nodes.size(); }
  std::optional<double> find(EntityId e) const;
  // Throws ScoringError if `e` is not a subgraph node.
  double at(EntityId e) const;
};

// Local edge list of a subgraph under the given traversal mode. Undirected
// self-loops contribute one edge.
std::vector<LocalEdge> subgraph_edges(const Subgraph &sub, bool directed);

using IterationObserver = std::function<void(int, const Eigen::VectorXd &)>;

PageRankScores pagerank(const Subgraph &sub, const PageRankOptions &opts,
                        const IterationObserver &observe = {});

// Sets avg_pr to the mean score of each path's nodes.
std::vector<ReasoningPath> score_paths(std::vector<ReasoningPath> paths,
                                       const PageRankScores &pr);

// Within-bucket order: higher avg_pr first, then node sequence, then steps.
bool bucket_order(const ReasoningPath &a, const ReasoningPath &b);

struct BucketedPaths {
  // key_count -> paths in bucket_order, iterated from the largest bucket.
  std::map<int, std::vector<ReasoningPath>, std::greater<>> buckets;
  int key_entities = 0;

  std::size_t total() const;
};

BucketedPaths bucket_paths(std::vector<ReasoningPath> paths, int key_entities);

// Top-k paths: fill from the highest key_count bucket downward.
std::vector<ReasoningPath> bucket_select(std::vector<ReasoningPath> paths,
                                         int key_entities, std::size_t k);
std::vector<ReasoningPath> bucket_select(std::vector<ReasoningPath> paths,
                                         const LinkedEntitySet &e_cand,
                                         std::size_t k);

}  // namespace rok

#endif  // ROK_RANKER_HPP_
