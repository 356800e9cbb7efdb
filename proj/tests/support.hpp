// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

// Shared fixtures and independent reference implementations for the unit
// tests and the acceptance gate. Nothing here calls into the engine code it
// is used to check.

#ifndef ROK_TESTS_SUPPORT_HPP_
#define ROK_TESTS_SUPPORT_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rok/kg_store.hpp"
#include "rok/paths.hpp"

namespace rok::testing {

inline std::filesystem::path data_dir() { return ROK_DATA_DIR; }
inline std::filesystem::path fixture_dir() { return ROK_FIXTURE_DIR; }

inline std::string read_file(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

using NamedTriple = std::tuple<std::string, std::string, std::string>;

inline KnowledgeGraph graph_of(const std::vector<NamedTriple> &triples) {
  GraphBuilder b;
  for (const auto &[h, r, t] : triples) b.add_triple(h, r, t);
  return std::move(b).build();
}

// Random simple digraph on `n` nodes named e0..e{n-1}; every ordered pair
// gets an edge with probability `density`, under one of `relations` labels.
inline std::vector<NamedTriple> random_triples(std::mt19937 &rng, int n, double density,
                                               int relations = 3) {
  std::bernoulli_distribution edge(density);
  std::uniform_int_distribution<int> rel(0, relations - 1);
  std::vector<NamedTriple> out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && edge(rng)) {
        out.emplace_back("e" + std::to_string(i), "r" + std::to_string(rel(rng)),
                         "e" + std::to_string(j));
      }
    }
  }
  return out;
}

// Random connected graph: a random spanning tree plus extra edges.
inline std::vector<NamedTriple> random_connected_triples(std::mt19937 &rng, int n,
                                                         double extra_density) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  auto name = [](int i) { return "e" + std::to_string(i); };
  std::vector<NamedTriple> out;
  std::bernoulli_distribution flip(0.5);
  for (int i = 1; i < n; ++i) {
    const int parent = order[std::uniform_int_distribution<int>(0, i - 1)(rng)];
    if (flip(rng)) {
      out.emplace_back(name(parent), "r0", name(order[i]));
    } else {
      out.emplace_back(name(order[i]), "r0", name(parent));
    }
  }
  std::bernoulli_distribution extra(extra_density);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && extra(rng)) out.emplace_back(name(i), "r1", name(j));
    }
  }
  return out;
}

inline Subgraph whole_graph(const KnowledgeGraph &g) {
  Subgraph s;
  s.triples.assign(g.triples().begin(), g.triples().end());
  for (std::uint32_t i = 0; i < g.num_entities(); ++i) s.nodes.push_back(EntityId{i});
  return s;
}

// ---------------------------------------------------------------------------
// Path oracle: plain recursive DFS over the triple list.

using OracleStep = std::pair<Triple, bool>;  // triple, traversed tail-to-head
using OraclePath = std::vector<OracleStep>;

inline std::set<OraclePath> dfs_paths(const KnowledgeGraph &g, EntityId a, EntityId b,
                                      int max_hop, bool directed = false) {
  std::set<OraclePath> found;
  std::vector<EntityId> visited{a};
  OraclePath current;
  std::function<void(EntityId)> walk = [&](EntityId at) {
    if (at == b && !current.empty()) {
      found.insert(current);
      return;
    }
    if (static_cast<int>(current.size()) == max_hop) return;
    for (const Triple &t : g.triples()) {
      if (t.head == t.tail) continue;
      for (bool reversed : {false, true}) {
        if (reversed && directed) continue;
        const EntityId from = reversed ? t.tail : t.head;
        const EntityId to = reversed ? t.head : t.tail;
        if (from != at) continue;
        if (std::find(visited.begin(), visited.end(), to) != visited.end()) continue;
        visited.push_back(to);
        current.emplace_back(t, reversed);
        walk(to);
        current.pop_back();
        visited.pop_back();
      }
    }
  };
  walk(a);
  return found;
}

inline OraclePath as_oracle_path(const ReasoningPath &p) {
  OraclePath out;
  for (const auto &s : p.steps) out.emplace_back(s.triple, s.reversed);
  return out;
}

// ---------------------------------------------------------------------------
// PageRank oracle: dense transition matrix and a direct linear solve of
// x = d M x + d (dangling . x)/n 1 + (1 - d)/n 1 with sum(x) = 1.

inline Eigen::MatrixXd dense_transition(const Subgraph &sub, bool directed,
                                        Eigen::VectorXd *dangling) {
  const auto n = static_cast<Eigen::Index>(sub.nodes.size());
  auto idx = [&](EntityId e) {
    return static_cast<Eigen::Index>(std::find(sub.nodes.begin(), sub.nodes.end(), e) -
                                     sub.nodes.begin());
  };
  Eigen::MatrixXd count = Eigen::MatrixXd::Zero(n, n);  // count(to, from)
  for (const Triple &t : sub.triples) {
    count(idx(t.tail), idx(t.head)) += 1.0;
    if (!directed && t.head != t.tail) count(idx(t.head), idx(t.tail)) += 1.0;
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd dang = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double out = count.col(j).sum();
    if (out == 0.0) {
      dang[j] = 1.0;
    } else {
      m.col(j) = count.col(j) / out;
    }
  }
  if (dangling) *dangling = dang;
  return m;
}

inline Eigen::VectorXd pagerank_solve(const Subgraph &sub, double d, bool directed = false) {
  Eigen::VectorXd dang;
  const Eigen::MatrixXd m = dense_transition(sub, directed, &dang);
  const auto n = m.rows();
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - d * m -
                            (d / static_cast<double>(n)) * Eigen::VectorXd::Ones(n) *
                                dang.transpose();
  const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(n, (1.0 - d) / static_cast<double>(n));
  return a.fullPivLu().solve(rhs);
}

// Stationary distribution of a column-stochastic matrix via its eigenvector
// for the eigenvalue closest to 1.
inline Eigen::VectorXd stationary_eigen(const Eigen::MatrixXd &m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i) {
    if (std::abs(es.eigenvalues()[i] - 1.0) < std::abs(es.eigenvalues()[best] - 1.0)) best = i;
  }
  Eigen::VectorXd v = es.eigenvectors().col(best).real();
  return v / v.sum();
}

// ---------------------------------------------------------------------------
// Selection oracle: one full sort by (key_count desc, avg_pr desc, node
// sequence, steps) and a prefix cut.

inline std::vector<ReasoningPath> full_sort_select(std::vector<ReasoningPath> paths,
                                                   std::size_t k) {
  auto key = [](const ReasoningPath &p) {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, bool>> steps;
    for (const auto &s : p.steps) {
      steps.emplace_back(s.triple.head.value, s.triple.relation.value, s.triple.tail.value,
                         s.reversed);
    }
    std::vector<std::uint32_t> nodes;
    for (auto e : p.nodes) nodes.push_back(e.value);
    return std::make_tuple(-p.key_count, -p.avg_pr, nodes, steps);
  };
  std::sort(paths.begin(), paths.end(),
            [&](const ReasoningPath &a, const ReasoningPath &b) { return key(a) < key(b); });
  if (paths.size() > k) paths.resize(k);
  return paths;
}

// Random scored paths over `n_nodes` entity ids. Scores are drawn from a
// coarse grid so that ties in avg_pr are common.
inline std::vector<ReasoningPath> random_scored_paths(std::mt19937 &rng, std::size_t count,
                                                      int key_entities, int n_nodes = 8) {
  std::uniform_int_distribution<int> len(1, 3);
  std::uniform_int_distribution<int> kc(0, key_entities);
  std::uniform_int_distribution<int> grid(1, 6);
  std::vector<ReasoningPath> out;
  for (std::size_t i = 0; i < count; ++i) {
    ReasoningPath p;
    std::vector<std::uint32_t> ids(n_nodes);
    for (int j = 0; j < n_nodes; ++j) ids[j] = static_cast<std::uint32_t>(j);
    std::shuffle(ids.begin(), ids.end(), rng);
    const int l = len(rng);
    for (int j = 0; j <= l; ++j) p.nodes.push_back(EntityId{ids[j]});
    for (int j = 0; j < l; ++j) {
      const bool rev = rng() % 2 == 1;
      const EntityId a = p.nodes[j], b = p.nodes[j + 1];
      p.steps.push_back(PathStep{Triple{rev ? b : a, RelationId{static_cast<std::uint32_t>(rng() % 2)},
                                        rev ? a : b},
                                 rev});
    }
    p.key_count = kc(rng);
    p.avg_pr = grid(rng) * 0.05;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace rok::testing

#endif  // ROK_TESTS_SUPPORT_HPP_
