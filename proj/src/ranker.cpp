// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#include "rok/ranker.hpp"

#include <algorithm>

namespace rok {

std::optional<double> PageRankScores::find(EntityId e) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), e);
  if (it == nodes.end() || *it != e) return std::nullopt;
  return scores[it - nodes.begin()];
}

double PageRankScores::at(EntityId e) const {
  if (auto s = find(e)) return *s;
  throw ScoringError("entity id " + std::to_string(e.value) +
                     " has no PageRank score");
}

std::vector<LocalEdge> subgraph_edges(const Subgraph &sub, bool directed) {
  auto local = [&](EntityId e) {
    return static_cast<Eigen::Index>(
        std::lower_bound(sub.nodes.begin(), sub.nodes.end(), e) - sub.nodes.begin());
  };
  std::vector<LocalEdge> edges;
  edges.reserve(sub.triples.size() * (directed ? 1 : 2));
  for (const Triple &t : sub.triples) {
    const auto h = local(t.head);
    const auto tl = local(t.tail);
    edges.emplace_back(h, tl);
    if (!directed && h != tl) edges.emplace_back(tl, h);
  }
  return edges;
}

PageRankScores pagerank(const Subgraph &sub, const PageRankOptions &opts,
                        const IterationObserver &observe) {
  if (sub.empty()) throw EmptyInputError("PageRank needs a non-empty subgraph");
  if (!(opts.damping >= 0.0 && opts.damping <= 1.0)) {
    throw ConfigError("ranker.damping", "must lie in [0, 1]");
  }
  if (!(opts.tol > 0.0)) throw ConfigError("ranker.tol", "must be positive");
  if (opts.max_iter < 1) throw ConfigError("ranker.max_iter", "must be positive");

  const auto n = static_cast<Eigen::Index>(sub.nodes.size());
  const auto edges = subgraph_edges(sub, opts.directed);
  Eigen::Array<bool, Eigen::Dynamic, 1> dangling;
  const auto m = transition_matrix<double>(n, edges, &dangling);

  auto result = power_iterate<double>(
      m, dangling, opts.damping, opts.tol, opts.max_iter,
      [&](int it, const Eigen::VectorXd &x) {
        if (observe) observe(it, x);
      });

  PageRankScores pr;
  pr.nodes = sub.nodes;
  pr.scores = std::move(result.scores);
  pr.damping = opts.damping;
  pr.iterations = result.iterations;
  pr.residual = result.residual;
  pr.converged = result.converged;
  return pr;
}

std::vector<ReasoningPath> score_paths(std::vector<ReasoningPath> paths,
                                       const PageRankScores &pr) {
  for (auto &p : paths) {
    if (p.nodes.empty()) throw ScoringError("path has no nodes");
    double sum = 0.0;
    for (EntityId n : p.nodes) sum += pr.at(n);
    p.avg_pr = sum / static_cast<double>(p.nodes.size());
  }
  return paths;
}

bool bucket_order(const ReasoningPath &a, const ReasoningPath &b) {
  if (a.avg_pr != b.avg_pr) return a.avg_pr > b.avg_pr;
  if (a.nodes != b.nodes) return a.nodes < b.nodes;
  return a.steps < b.steps;
}

std::size_t BucketedPaths::total() const {
  std::size_t n = 0;
  for (const auto &[count, paths] : buckets) n += paths.size();
  return n;
}

BucketedPaths bucket_paths(std::vector<ReasoningPath> paths, int key_entities) {
  BucketedPaths out;
  out.key_entities = key_entities;
  for (auto &p : paths) {
    if (p.key_count < 0 || p.key_count > key_entities) {
      throw ScoringError("path key_count " + std::to_string(p.key_count) +
                         " outside bucket range 0.." + std::to_string(key_entities));
    }
    out.buckets[p.key_count].push_back(std::move(p));
  }
  for (auto &[count, bucket] : out.buckets) {
    std::sort(bucket.begin(), bucket.end(), bucket_order);
  }
  return out;
}

std::vector<ReasoningPath> bucket_select(std::vector<ReasoningPath> paths,
                                         int key_entities, std::size_t k) {
  if (k < 1) throw ConfigError("ranker.top_k", "must be at least 1");
  auto buckets = bucket_paths(std::move(paths), key_entities);
  std::vector<ReasoningPath> selected;
  for (auto &[count, bucket] : buckets.buckets) {
    for (auto &p : bucket) {
      if (selected.size() == k) return selected;
      selected.push_back(std::move(p));
    }
  }
  return selected;
}

std::vector<ReasoningPath> bucket_select(std::vector<ReasoningPath> paths,
                                         const LinkedEntitySet &e_cand,
                                         std::size_t k) {
  return bucket_select(std::move(paths), static_cast<int>(e_cand.size()), k);
}

}  // namespace rok
