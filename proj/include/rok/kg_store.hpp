// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#ifndef ROK_KG_STORE_HPP_
#define ROK_KG_STORE_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rok {

// Dense entity handle. Ids are assigned in byte order of the entity surface
// names, so comparing ids is the same as comparing names.
struct EntityId {
  std::uint32_t value = 0;
  auto operator<=>(const EntityId &) const = default;
};

struct RelationId {
  std::uint32_t value = 0;
  auto operator<=>(const RelationId &) const = default;
};

struct Triple {
  EntityId head;
  RelationId relation;
  EntityId tail;
  auto operator<=>(const Triple &) const = default;
};

// One adjacency entry: the relation, the entity at the other end, and the
// index of the stored triple it came from.
struct Edge {
  RelationId relation;
  EntityId other;
  std::uint32_t triple = 0;
};

enum class TripleFormat { kTsv, kJsonLines };

struct LoadStats {
  std::size_t lines = 0;
  std::size_t duplicates = 0;
};

class KnowledgeGraph;

// Accumulates named triples and freezes them into an indexed graph.
class GraphBuilder {
 public:
  // Registers an entity without any incident triple. Returns false when the
  // name normalizes to the empty string.
  bool add_entity(std::string_view surface);
  bool add_relation(std::string_view surface);

  // Returns false if the triple was already present.
  bool add_triple(std::string_view head, std::string_view relation,
                  std::string_view tail);

  std::size_t duplicates() const { return duplicates_; }

  KnowledgeGraph build(LoadStats stats = {}) &&;

 private:
  std::uint32_t intern_entity(std::string_view surface);
  std::uint32_t intern_relation(std::string_view surface);

  std::vector<std::string> entity_surface_;
  std::unordered_map<std::string, std::uint32_t> entity_by_key_;
  std::vector<std::string> relation_surface_;
  std::unordered_map<std::string, std::uint32_t> relation_by_name_;
  std::vector<std::array<std::uint32_t, 3>> triples_;
  std::set<std::array<std::uint32_t, 3>> seen_;
  std::size_t duplicates_ = 0;
};

// Immutable, indexed triple store. Safe for concurrent readers.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;

  std::size_t num_entities() const { return entity_surface_.size(); }
  std::size_t num_relations() const { return relation_surface_.size(); }
  std::size_t num_triples() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }

  // Sorted by (head, relation, tail).
  std::span<const Triple> triples() const { return triples_; }
  const Triple &triple(std::uint32_t index) const { return triples_[index]; }

  const std::string &surface(EntityId e) const;
  const std::string &surface(RelationId r) const;
  // Normalized identity key of an entity.
  const std::string &key(EntityId e) const;

  bool valid(EntityId e) const { return e.value < entity_surface_.size(); }

  std::optional<EntityId> find_entity(std::string_view name) const;
  std::optional<RelationId> find_relation(std::string_view name) const;
  // Like find_entity but throws LookupError.
  EntityId entity(std::string_view name) const;

  std::span<const Edge> out_edges(EntityId e) const;
  std::span<const Edge> in_edges(EntityId e) const;

  std::optional<std::uint32_t> index_of(const Triple &t) const;
  bool contains(const Triple &t) const { return index_of(t).has_value(); }

  const LoadStats &load_stats() const { return stats_; }

 private:
  friend class GraphBuilder;

  std::vector<std::string> entity_surface_;
  std::vector<std::string> entity_key_;
  std::unordered_map<std::string, std::uint32_t> entity_by_key_;
  std::vector<std::string> relation_surface_;
  std::unordered_map<std::string, std::uint32_t> relation_by_name_;
  std::vector<Triple> triples_;
  // CSR adjacency.
  std::vector<std::uint32_t> out_offsets_, in_offsets_;
  std::vector<Edge> out_edges_, in_edges_;
  LoadStats stats_;
};

KnowledgeGraph load_graph(const std::filesystem::path &path,
                          std::optional<TripleFormat> format = std::nullopt);
KnowledgeGraph parse_graph(std::istream &in, TripleFormat format);
TripleFormat format_for_path(const std::filesystem::path &path);

// One triple per line, head\trelation\ttail, surfaces as stored.
void write_tsv(const KnowledgeGraph &g, std::ostream &out);

// Every stored triple with `e` as head or tail, in stored order.
std::vector<Triple> one_hop_triples(const KnowledgeGraph &g, EntityId e);

struct ValidationReport {
  std::vector<Triple> self_loops;
  std::vector<EntityId> isolated_entities;
  // Catalog relations with no triple.
  std::vector<RelationId> unused_relations;
  // Entities with no outgoing triple (sinks under directed traversal).
  std::size_t sink_entities = 0;
  std::map<std::string, std::size_t> triples_per_relation;
};

ValidationReport validate_graph(const KnowledgeGraph &g);

std::string to_string(const KnowledgeGraph &g, const Triple &t);

}  // namespace rok

#endif  // ROK_KG_STORE_HPP_
