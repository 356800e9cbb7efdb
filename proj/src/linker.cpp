// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#include "rok/linker.hpp"

#include <algorithm>

#include "rok/error.hpp"
#include "rok/text.hpp"

namespace rok {

const char *to_string(MentionSource source) {
  return source == MentionSource::kQuestion ? "question" : "cot";
}

bool MentionSet::add(std::string_view text, MentionSource source) {
  std::string key = normalize(text);
  if (key.empty()) return false;
  if (std::find(keys_.begin(), keys_.end(), key) != keys_.end()) return false;
  keys_.push_back(std::move(key));
  mentions_.push_back(Mention{std::string(trim(text)), source});
  return true;
}

namespace {

std::vector<std::string> token_set(std::string_view normalized) {
  auto tokens = tokenize(normalized);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return tokens;
}

}  // namespace

double jaccard(const std::vector<std::string> &a,
               const std::vector<std::string> &b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(common) /
         static_cast<double>(a.size() + b.size() - common);
}

double JaccardScorer::score(std::string_view mention,
                            std::string_view entity) const {
  return jaccard(token_set(mention), token_set(entity));
}

std::vector<EntityId> LinkedEntitySet::ids() const {
  std::vector<EntityId> out;
  out.reserve(entities.size());
  for (const auto &e : entities) out.push_back(e.entity);
  return out;
}

bool LinkedEntitySet::contains(EntityId e) const {
  return std::any_of(entities.begin(), entities.end(),
                     [&](const LinkedEntity &l) { return l.entity == e; });
}

Linker::Linker(const KnowledgeGraph &g, double threshold,
               std::shared_ptr<const MentionScorer> scorer)
    : graph_(&g), threshold_(threshold), scorer_(std::move(scorer)) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ConfigError("linker.threshold", "must lie in [0, 1]");
  }
  if (g.num_entities() == 0) throw LinkError("cannot link against an empty graph");
  if (!scorer_) {
    entity_tokens_.reserve(g.num_entities());
    for (std::uint32_t i = 0; i < g.num_entities(); ++i) {
      entity_tokens_.push_back(token_set(g.key(EntityId{i})));
    }
  }
}

std::optional<std::pair<EntityId, double>> Linker::best_match(
    std::string_view normalized_mention) const {
  const auto mention_tokens =
      scorer_ ? std::vector<std::string>{} : token_set(normalized_mention);
  std::optional<std::pair<EntityId, double>> best;
  // Ids follow surface byte order, so scanning upward and replacing only on a
  // strictly higher score keeps the smallest surface among ties.
  for (std::uint32_t i = 0; i < graph_->num_entities(); ++i) {
    const EntityId e{i};
    const double s = scorer_ ? scorer_->score(normalized_mention, graph_->key(e))
                             : jaccard(mention_tokens, entity_tokens_[i]);
    if (s <= 0.0) continue;
    if (!best || s > best->second) best = std::make_pair(e, s);
  }
  return best;
}

LinkedEntitySet Linker::link(const MentionSet &mentions) const {
  LinkedEntitySet result;
  for (const Mention &m : mentions.mentions()) {
    MentionResolution res{m, LinkStatus::kUnmatched, std::nullopt, 0.0};
    const std::string key = normalize(m.text);
    if (auto exact = graph_->find_entity(key)) {
      res.entity = *exact;
      res.score = 1.0;
    } else if (auto best = best_match(key); best && best->second >= threshold_) {
      res.entity = best->first;
      res.score = best->second;
    }
    if (res.entity) {
      if (result.contains(*res.entity)) {
        res.status = LinkStatus::kDuplicate;
      } else {
        res.status = LinkStatus::kLinked;
        result.entities.push_back(
            LinkedEntity{*res.entity, m.text, m.source, res.score});
      }
    }
    result.resolutions.push_back(std::move(res));
  }
  return result;
}

LinkedEntitySet link(const MentionSet &mentions, const KnowledgeGraph &g,
                     double threshold) {
  return Linker(g, threshold).link(mentions);
}

std::vector<std::string> scan_entity_mentions(std::string_view text,
                                              const KnowledgeGraph &g,
                                              std::size_t max_tokens) {
  const auto tokens = tokenize(normalize(text));
  std::vector<std::string> found;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t matched = 0;
    for (std::size_t len = std::min(max_tokens, tokens.size() - i); len > 0;
         --len) {
      std::string phrase = tokens[i];
      for (std::size_t k = 1; k < len; ++k) phrase += " " + tokens[i + k];
      if (auto e = g.find_entity(phrase)) {
        const std::string &surface = g.surface(*e);
        if (std::find(found.begin(), found.end(), surface) == found.end()) {
          found.push_back(surface);
        }
        matched = len;
        break;
      }
    }
    i += matched > 0 ? matched : 1;
  }
  return found;
}

}  // namespace rok
