// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#include "rok/paths.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>

#include "rok/error.hpp"

namespace rok {

bool path_order(const ReasoningPath &a, const ReasoningPath &b) {
  if (a.length() != b.length()) return a.length() < b.length();
  if (a.nodes != b.nodes) return a.nodes < b.nodes;
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    const auto &x = a.steps[i];
    const auto &y = b.steps[i];
    if (x.triple.relation != y.triple.relation) {
      return x.triple.relation < y.triple.relation;
    }
    if (x.reversed != y.reversed) return y.reversed;
  }
  return false;
}

bool same_path(const ReasoningPath &a, const ReasoningPath &b) {
  return a.steps == b.steps && a.nodes == b.nodes;
}

namespace {

constexpr int kUnreached = std::numeric_limits<int>::max();

// Hop distance from every node to `target`, bounded by `limit`.
std::vector<int> distances_to(const KnowledgeGraph &g, EntityId target,
                              int limit, bool directed) {
  std::vector<int> dist(g.num_entities(), kUnreached);
  std::deque<EntityId> queue{target};
  dist[target.value] = 0;
  while (!queue.empty()) {
    const EntityId u = queue.front();
    queue.pop_front();
    if (dist[u.value] >= limit) continue;
    auto visit = [&](std::span<const Edge> edges) {
      for (const Edge &e : edges) {
        if (dist[e.other.value] == kUnreached) {
          dist[e.other.value] = dist[u.value] + 1;
          queue.push_back(e.other);
        }
      }
    };
    // Walking backwards from the target: predecessors come from in-edges.
    visit(g.in_edges(u));
    if (!directed) visit(g.out_edges(u));
  }
  return dist;
}

class ExactLengthSearch {
 public:
  ExactLengthSearch(const KnowledgeGraph &g, EntityId target,
                    const std::vector<int> &dist, bool directed)
      : g_(g), target_(target), dist_(dist), directed_(directed),
        on_path_(g.num_entities(), false) {}

  std::vector<ReasoningPath> run(EntityId source, int length) {
    found_.clear();
    current_ = ReasoningPath{};
    current_.nodes.push_back(source);
    on_path_[source.value] = true;
    extend(source, length);
    on_path_[source.value] = false;
    return std::move(found_);
  }

 private:
  void extend(EntityId u, int remaining) {
    if (remaining == 0) {
      if (u == target_) found_.push_back(current_);
      return;
    }
    if (u == target_) return;
    for (const Edge &e : g_.out_edges(u)) step(e, false, remaining);
    if (!directed_) {
      for (const Edge &e : g_.in_edges(u)) step(e, true, remaining);
    }
  }

  void step(const Edge &e, bool reversed, int remaining) {
    const EntityId v = e.other;
    if (on_path_[v.value] || dist_[v.value] > remaining - 1) return;
    on_path_[v.value] = true;
    current_.steps.push_back(PathStep{g_.triple(e.triple), reversed});
    current_.nodes.push_back(v);
    extend(v, remaining - 1);
    current_.nodes.pop_back();
    current_.steps.pop_back();
    on_path_[v.value] = false;
  }

  const KnowledgeGraph &g_;
  EntityId target_;
  const std::vector<int> &dist_;
  bool directed_;
  std::vector<bool> on_path_;
  ReasoningPath current_;
  std::vector<ReasoningPath> found_;
};

}  // namespace

PathSearchResult find_paths_between(const KnowledgeGraph &g, EntityId a,
                                    EntityId b, const PathSearchOptions &opts) {
  if (!g.valid(a) || !g.valid(b)) throw LookupError("unknown entity in path search");
  if (a == b) throw DegeneratePairError("path search needs two distinct entities");
  if (opts.max_hop < 1) throw Error("max_hop must be at least 1");
  if (opts.cap < 1) throw Error("path cap must be at least 1");

  PathSearchResult result;
  const auto dist = distances_to(g, b, opts.max_hop, opts.directed);
  if (dist[a.value] == kUnreached) return result;

  ExactLengthSearch search(g, b, dist, opts.directed);
  for (int length = dist[a.value]; length <= opts.max_hop; ++length) {
    auto layer = search.run(a, length);
    std::sort(layer.begin(), layer.end(), path_order);
    const std::size_t room = opts.cap - result.paths.size();
    if (layer.size() > room) {
      layer.resize(room);
      result.truncated = true;
    }
    std::move(layer.begin(), layer.end(), std::back_inserter(result.paths));
    if (result.truncated || result.paths.size() == opts.cap) {
      // Longer layers may still hold paths; a full cap means they were cut.
      for (int l = length + 1; !result.truncated && l <= opts.max_hop; ++l) {
        result.truncated = !search.run(a, l).empty();
      }
      break;
    }
  }
  return result;
}

bool Subgraph::contains(EntityId e) const {
  return std::binary_search(nodes.begin(), nodes.end(), e);
}

bool Subgraph::contains(const Triple &t) const {
  return std::binary_search(triples.begin(), triples.end(), t);
}

Subgraph subgraph_of(std::span<const ReasoningPath> paths) {
  Subgraph sub;
  for (const auto &p : paths) {
    for (const auto &s : p.steps) sub.triples.push_back(s.triple);
    sub.nodes.insert(sub.nodes.end(), p.nodes.begin(), p.nodes.end());
  }
  std::sort(sub.triples.begin(), sub.triples.end());
  sub.triples.erase(std::unique(sub.triples.begin(), sub.triples.end()),
                    sub.triples.end());
  std::sort(sub.nodes.begin(), sub.nodes.end());
  sub.nodes.erase(std::unique(sub.nodes.begin(), sub.nodes.end()),
                  sub.nodes.end());
  return sub;
}

int count_key_entities(const ReasoningPath &p, std::span<const EntityId> keys) {
  int count = 0;
  for (EntityId n : p.nodes) {
    if (std::find(keys.begin(), keys.end(), n) != keys.end()) ++count;
  }
  return count;
}

MainCandidates gen_main_candidates(const KnowledgeGraph &g,
                                   std::span<const EntityId> key_entities,
                                   const PathSearchOptions &opts) {
  if (key_entities.empty()) {
    throw EmptyInputError("main path generation needs at least one key entity");
  }
  for (EntityId e : key_entities) {
    if (!g.valid(e)) throw LookupError("unknown key entity id " + std::to_string(e.value));
  }

  MainCandidates out;
  if (key_entities.size() == 1) {
    out.fallback = true;
    const EntityId e = key_entities.front();
    out.subgraph.triples = one_hop_triples(g, e);
    std::set<EntityId> nodes{e};
    for (const Triple &t : out.subgraph.triples) {
      nodes.insert(t.head);
      nodes.insert(t.tail);
    }
    out.subgraph.nodes.assign(nodes.begin(), nodes.end());
    return out;
  }

  std::vector<EntityId> remaining(key_entities.begin(), key_entities.end());
  std::deque<EntityId> frontier{remaining.front()};
  std::set<EntityId> queued{remaining.front()};

  while (!remaining.empty()) {
    FrontierRound round;
    if (frontier.empty()) {
      round.restarted = true;
      frontier.push_back(remaining.front());
      queued.insert(remaining.front());
    }
    round.source = frontier.front();
    frontier.pop_front();

    for (EntityId target : remaining) {
      if (target == round.source) continue;
      round.targets.push_back(target);
      auto found = find_paths_between(g, round.source, target, opts);
      out.truncated = out.truncated || found.truncated;
      if (found.paths.empty()) continue;
      round.matched.push_back(target);
      round.paths += found.paths.size();
      for (auto &p : found.paths) {
        p.key_count = count_key_entities(p, key_entities);
        out.paths.push_back(std::move(p));
      }
    }
    std::erase(remaining, round.source);
    for (EntityId m : round.matched) {
      if (queued.insert(m).second) frontier.push_back(m);
    }
    out.rounds.push_back(std::move(round));
  }

  out.subgraph = subgraph_of(out.paths);
  out.disconnected = out.paths.empty();
  return out;
}

MainCandidates gen_main_candidates(const KnowledgeGraph &g,
                                   const LinkedEntitySet &e_cand,
                                   const PathSearchOptions &opts) {
  const auto ids = e_cand.ids();
  return gen_main_candidates(g, ids, opts);
}

NeighborTripleSet gen_neighbor_candidates(const KnowledgeGraph &g,
                                          std::span<const EntityId> key_entities,
                                          std::span<const ReasoningPath> main) {
  std::set<Triple> main_triples;
  std::set<EntityId> main_nodes;
  for (const auto &p : main) {
    for (const auto &s : p.steps) main_triples.insert(s.triple);
    main_nodes.insert(p.nodes.begin(), p.nodes.end());
  }

  NeighborTripleSet out;
  std::set<Triple> kept;
  for (EntityId key : key_entities) {
    const auto incident = one_hop_triples(g, key);
    auto other_end = [&](const Triple &t) { return t.head == key ? t.tail : t.head; };
    auto role = [&](const Triple &t) {
      return std::make_pair(t.relation, t.head == key);
    };

    // (relation, key-is-head) pairs that already lead to a main-path entity.
    std::set<std::pair<RelationId, bool>> shadowing;
    for (const Triple &t : incident) {
      if (main_nodes.contains(other_end(t))) shadowing.insert(role(t));
    }

    for (const Triple &t : incident) {
      if (main_triples.contains(t)) {
        ++out.on_main_path;
        continue;
      }
      if (shadowing.contains(role(t)) && !main_nodes.contains(other_end(t))) {
        ++out.shadowed;
        continue;
      }
      if (kept.insert(t).second) out.triples.push_back(NeighborTriple{t, key});
    }
  }
  return out;
}

}  // namespace rok
