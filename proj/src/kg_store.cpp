// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#include "rok/kg_store.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>

#include "json.hpp"
#include "rok/error.hpp"
#include "rok/text.hpp"

namespace rok {

std::uint32_t GraphBuilder::intern_entity(std::string_view surface) {
  const std::string_view trimmed = trim(surface);
  std::string key = normalize(trimmed);
  if (key.empty()) throw Error("entity name is empty after normalization");
  auto [it, inserted] = entity_by_key_.try_emplace(
      std::move(key), static_cast<std::uint32_t>(entity_surface_.size()));
  if (inserted) entity_surface_.emplace_back(trimmed);
  return it->second;
}

std::uint32_t GraphBuilder::intern_relation(std::string_view surface) {
  std::string name(trim(surface));
  if (name.empty()) throw Error("relation name is empty");
  auto [it, inserted] = relation_by_name_.try_emplace(
      name, static_cast<std::uint32_t>(relation_surface_.size()));
  if (inserted) relation_surface_.push_back(std::move(name));
  return it->second;
}

bool GraphBuilder::add_entity(std::string_view surface) {
  if (normalize(surface).empty()) return false;
  intern_entity(surface);
  return true;
}

bool GraphBuilder::add_relation(std::string_view surface) {
  if (trim(surface).empty()) return false;
  intern_relation(surface);
  return true;
}

bool GraphBuilder::add_triple(std::string_view head, std::string_view relation,
                              std::string_view tail) {
  const std::array<std::uint32_t, 3> t{intern_entity(head),
                                       intern_relation(relation),
                                       intern_entity(tail)};
  if (!seen_.insert(t).second) {
    ++duplicates_;
    return false;
  }
  triples_.push_back(t);
  return true;
}

namespace {

// Returns old-id -> new-id where new ids follow byte order of the names.
std::vector<std::uint32_t> sorted_remap(const std::vector<std::string> &names) {
  std::vector<std::uint32_t> order(names.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return names[a] < names[b]; });
  std::vector<std::uint32_t> remap(names.size());
  for (std::uint32_t rank = 0; rank < order.size(); ++rank) {
    remap[order[rank]] = rank;
  }
  return remap;
}

void build_csr(std::size_t n, const std::vector<Triple> &triples, bool out,
               std::vector<std::uint32_t> *offsets, std::vector<Edge> *edges) {
  offsets->assign(n + 1, 0);
  for (const Triple &t : triples) {
    ++(*offsets)[(out ? t.head : t.tail).value + 1];
  }
  std::partial_sum(offsets->begin(), offsets->end(), offsets->begin());
  edges->resize(triples.size());
  std::vector<std::uint32_t> cursor(offsets->begin(), offsets->end() - 1);
  for (std::uint32_t i = 0; i < triples.size(); ++i) {
    const Triple &t = triples[i];
    const EntityId self = out ? t.head : t.tail;
    const EntityId other = out ? t.tail : t.head;
    (*edges)[cursor[self.value]++] = Edge{t.relation, other, i};
  }
}

}  // namespace

KnowledgeGraph GraphBuilder::build(LoadStats stats) && {
  KnowledgeGraph g;
  const auto entity_remap = sorted_remap(entity_surface_);
  const auto relation_remap = sorted_remap(relation_surface_);

  g.entity_surface_.resize(entity_surface_.size());
  g.entity_key_.resize(entity_surface_.size());
  for (std::uint32_t old = 0; old < entity_surface_.size(); ++old) {
    g.entity_surface_[entity_remap[old]] = std::move(entity_surface_[old]);
  }
  for (auto &[key, old] : entity_by_key_) {
    g.entity_key_[entity_remap[old]] = key;
    g.entity_by_key_.emplace(key, entity_remap[old]);
  }
  g.relation_surface_.resize(relation_surface_.size());
  for (std::uint32_t old = 0; old < relation_surface_.size(); ++old) {
    g.relation_surface_[relation_remap[old]] = relation_surface_[old];
    g.relation_by_name_.emplace(relation_surface_[old], relation_remap[old]);
  }

  g.triples_.reserve(triples_.size());
  for (const auto &t : triples_) {
    g.triples_.push_back(Triple{EntityId{entity_remap[t[0]]},
                                RelationId{relation_remap[t[1]]},
                                EntityId{entity_remap[t[2]]}});
  }
  std::sort(g.triples_.begin(), g.triples_.end());

  build_csr(g.num_entities(), g.triples_, true, &g.out_offsets_,
            &g.out_edges_);
  build_csr(g.num_entities(), g.triples_, false, &g.in_offsets_,
            &g.in_edges_);

  stats.duplicates = duplicates_;
  g.stats_ = stats;
  return g;
}

const std::string &KnowledgeGraph::surface(EntityId e) const {
  if (!valid(e)) throw LookupError("unknown entity id " + std::to_string(e.value));
  return entity_surface_[e.value];
}

const std::string &KnowledgeGraph::surface(RelationId r) const {
  if (r.value >= relation_surface_.size()) {
    throw LookupError("unknown relation id " + std::to_string(r.value));
  }
  return relation_surface_[r.value];
}

const std::string &KnowledgeGraph::key(EntityId e) const {
  if (!valid(e)) throw LookupError("unknown entity id " + std::to_string(e.value));
  return entity_key_[e.value];
}

std::optional<EntityId> KnowledgeGraph::find_entity(std::string_view name) const {
  auto it = entity_by_key_.find(normalize(name));
  if (it == entity_by_key_.end()) return std::nullopt;
  return EntityId{it->second};
}

std::optional<RelationId> KnowledgeGraph::find_relation(
    std::string_view name) const {
  auto it = relation_by_name_.find(std::string(trim(name)));
  if (it == relation_by_name_.end()) return std::nullopt;
  return RelationId{it->second};
}

EntityId KnowledgeGraph::entity(std::string_view name) const {
  auto e = find_entity(name);
  if (!e) throw LookupError("unknown entity '" + std::string(name) + "'");
  return *e;
}

std::span<const Edge> KnowledgeGraph::out_edges(EntityId e) const {
  if (!valid(e)) throw LookupError("unknown entity id " + std::to_string(e.value));
  return std::span<const Edge>(out_edges_).subspan(
      out_offsets_[e.value], out_offsets_[e.value + 1] - out_offsets_[e.value]);
}

std::span<const Edge> KnowledgeGraph::in_edges(EntityId e) const {
  if (!valid(e)) throw LookupError("unknown entity id " + std::to_string(e.value));
  return std::span<const Edge>(in_edges_).subspan(
      in_offsets_[e.value], in_offsets_[e.value + 1] - in_offsets_[e.value]);
}

std::optional<std::uint32_t> KnowledgeGraph::index_of(const Triple &t) const {
  auto it = std::lower_bound(triples_.begin(), triples_.end(), t);
  if (it == triples_.end() || *it != t) return std::nullopt;
  return static_cast<std::uint32_t>(it - triples_.begin());
}

TripleFormat format_for_path(const std::filesystem::path &path) {
  const auto ext = path.extension().string();
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") {
    return TripleFormat::kJsonLines;
  }
  return TripleFormat::kTsv;
}

namespace {

void check_field(std::size_t line_no, std::string_view value, const char *name,
                 bool entity) {
  const bool empty = entity ? normalize(value).empty() : trim(value).empty();
  if (empty) throw ParseError(line_no, std::string("empty ") + name);
}

}  // namespace

KnowledgeGraph parse_graph(std::istream &in, TripleFormat format) {
  GraphBuilder builder;
  LoadStats stats;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!is_valid_utf8(line)) throw ParseError(line_no, "invalid UTF-8");
    ++stats.lines;

    std::string head, relation, tail;
    if (format == TripleFormat::kTsv) {
      auto fields = split(line, '\t');
      if (fields.size() != 3) {
        throw ParseError(line_no, "expected 3 tab-separated fields, got " +
                                      std::to_string(fields.size()));
      }
      head = std::move(fields[0]);
      relation = std::move(fields[1]);
      tail = std::move(fields[2]);
    } else {
      nlohmann::json obj;
      try {
        obj = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
      }
      if (!obj.is_object() || obj.size() != 3 || !obj.contains("h") ||
          !obj.contains("r") || !obj.contains("t") || !obj["h"].is_string() ||
          !obj["r"].is_string() || !obj["t"].is_string()) {
        throw ParseError(line_no,
                         "expected an object with string keys h, r, t");
      }
      head = obj["h"].get<std::string>();
      relation = obj["r"].get<std::string>();
      tail = obj["t"].get<std::string>();
    }
    check_field(line_no, head, "head", true);
    check_field(line_no, relation, "relation", false);
    check_field(line_no, tail, "tail", true);
    builder.add_triple(head, relation, tail);
  }
  if (stats.lines == 0) throw EmptyGraphError("graph file contains no triples");
  return std::move(builder).build(stats);
}

KnowledgeGraph load_graph(const std::filesystem::path &path,
                          std::optional<TripleFormat> format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open graph file " + path.string());
  return parse_graph(in, format.value_or(format_for_path(path)));
}

void write_tsv(const KnowledgeGraph &g, std::ostream &out) {
  for (const Triple &t : g.triples()) {
    out << g.surface(t.head) << '\t' << g.surface(t.relation) << '\t'
        << g.surface(t.tail) << '\n';
  }
}

std::vector<Triple> one_hop_triples(const KnowledgeGraph &g, EntityId e) {
  std::vector<std::uint32_t> indices;
  for (const Edge &edge : g.out_edges(e)) indices.push_back(edge.triple);
  for (const Edge &edge : g.in_edges(e)) indices.push_back(edge.triple);
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  std::vector<Triple> result;
  result.reserve(indices.size());
  for (auto i : indices) result.push_back(g.triple(i));
  return result;
}

ValidationReport validate_graph(const KnowledgeGraph &g) {
  ValidationReport report;
  std::vector<std::size_t> relation_use(g.num_relations(), 0);
  for (const Triple &t : g.triples()) {
    if (t.head == t.tail) report.self_loops.push_back(t);
    ++relation_use[t.relation.value];
  }
  for (std::uint32_t i = 0; i < g.num_entities(); ++i) {
    const EntityId e{i};
    const auto out = g.out_edges(e).size();
    if (out == 0 && g.in_edges(e).empty()) report.isolated_entities.push_back(e);
    if (out == 0) ++report.sink_entities;
  }
  for (std::uint32_t i = 0; i < g.num_relations(); ++i) {
    if (relation_use[i] == 0) report.unused_relations.push_back(RelationId{i});
    report.triples_per_relation[g.surface(RelationId{i})] = relation_use[i];
  }
  return report;
}

std::string to_string(const KnowledgeGraph &g, const Triple &t) {
  return "(" + g.surface(t.head) + ", " + g.surface(t.relation) + ", " +
         g.surface(t.tail) + ")";
}

}  // namespace rok
