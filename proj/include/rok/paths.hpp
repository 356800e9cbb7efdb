// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#ifndef ROK_PATHS_HPP_
#define ROK_PATHS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rok/kg_store.hpp"
#include "rok/linker.hpp"

namespace rok {

// One hop of a path. `reversed` means the stored triple was walked from tail
// to head.
struct PathStep {
  Triple triple;
  bool reversed = false;
  auto operator<=>(const PathStep &) const = default;
};

// A simple path through the graph. nodes.size() == steps.size() + 1 and
// consecutive steps share the connecting node.
struct ReasoningPath {
  std::vector<PathStep> steps;
  std::vector<EntityId> nodes;
  int key_count = 0;
  double avg_pr = 0.0;

  std::size_t length() const { return steps.size(); }
  EntityId source() const { return nodes.front(); }
  EntityId target() const { return nodes.back(); }
};

// Total order used everywhere paths are listed: shorter first, then node
// sequence, relation sequence and traversal directions lexicographically.
bool path_order(const ReasoningPath &a, const ReasoningPath &b);
bool same_path(const ReasoningPath &a, const ReasoningPath &b);

struct PathSearchOptions {
  int max_hop = 3;
  std::size_t cap = 10000;
  // Directed traversal follows triples head -> tail only.
  bool directed = false;
};

struct PathSearchResult {
  std::vector<ReasoningPath> paths;
  bool truncated = false;
};

// All simple paths from `a` to `b` of at most max_hop triples, in path_order,
// truncated to the first `cap`.
PathSearchResult find_paths_between(const KnowledgeGraph &g, EntityId a,
                                    EntityId b, const PathSearchOptions &opts);

// Candidate subgraph. Both vectors are sorted and unique.
struct Subgraph {
  std::vector<Triple> triples;
  std::vector<EntityId> nodes;

  bool empty() const { return nodes.empty(); }
  bool contains(EntityId e) const;
  bool contains(const Triple &t) const;
};

Subgraph subgraph_of(std::span<const ReasoningPath> paths);

struct FrontierRound {
  EntityId source;
  std::vector<EntityId> targets;
  std::vector<EntityId> matched;
  std::size_t paths = 0;
  // The frontier was empty and the next unused candidate was taken instead.
  bool restarted = false;
};

struct MainCandidates {
  std::vector<ReasoningPath> paths;
  Subgraph subgraph;
  std::vector<FrontierRound> rounds;
  bool truncated = false;
  // One key entity only: the subgraph is its one-hop neighbourhood.
  bool fallback = false;
  // Two or more key entities but no pair within max_hop.
  bool disconnected = false;
};

// Frontier expansion over the key entities: search from the current source to
// every remaining candidate, retire the source, queue the newly matched
// candidates. Paths from every round are kept.
MainCandidates gen_main_candidates(const KnowledgeGraph &g,
                                   std::span<const EntityId> key_entities,
                                   const PathSearchOptions &opts);
MainCandidates gen_main_candidates(const KnowledgeGraph &g,
                                   const LinkedEntitySet &e_cand,
                                   const PathSearchOptions &opts);

int count_key_entities(const ReasoningPath &p, std::span<const EntityId> keys);

struct NeighborTriple {
  Triple triple;
  EntityId source;
};

struct NeighborTripleSet {
  std::vector<NeighborTriple> triples;
  // Dropped because the triple is on a main path.
  std::size_t on_main_path = 0;
  // Dropped by the same-relation rule.
  std::size_t shadowed = 0;

  bool empty() const { return triples.empty(); }
};

// One-hop triples of each key entity, minus main-path triples, minus the
// off-path neighbours reached through a relation (and direction) that also
// connects the key entity to a main-path entity.
NeighborTripleSet gen_neighbor_candidates(const KnowledgeGraph &g,
                                          std::span<const EntityId> key_entities,
                                          std::span<const ReasoningPath> main);

}  // namespace rok

#endif  // ROK_PATHS_HPP_
