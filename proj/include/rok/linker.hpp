// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#ifndef ROK_LINKER_HPP_
#define ROK_LINKER_HPP_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rok/kg_store.hpp"

namespace rok {

enum class MentionSource { kQuestion, kCot };

const char *to_string(MentionSource source);

struct Mention {
  std::string text;
  MentionSource source = MentionSource::kQuestion;
};

// Mentions deduplicated by normalized form, first appearance wins.
class MentionSet {
 public:
  // Returns false if the mention was empty or already present.
  bool add(std::string_view text, MentionSource source);

  const std::vector<Mention> &mentions() const { return mentions_; }
  std::size_t size() const { return mentions_.size(); }
  bool empty() const { return mentions_.empty(); }

 private:
  std::vector<Mention> mentions_;
  std::vector<std::string> keys_;
};

// Similarity between a normalized mention and a normalized entity key.
class MentionScorer {
 public:
  virtual ~MentionScorer() = default;
  virtual double score(std::string_view mention, std::string_view entity) const = 0;
};

// |A ∩ B| / |A ∪ B| over token sets.
double jaccard(const std::vector<std::string> &a, const std::vector<std::string> &b);

class JaccardScorer final : public MentionScorer {
 public:
  double score(std::string_view mention, std::string_view entity) const override;
};

struct LinkedEntity {
  EntityId entity;
  std::string mention;
  MentionSource source = MentionSource::kQuestion;
  double score = 0.0;
};

enum class LinkStatus { kLinked, kDuplicate, kUnmatched };

struct MentionResolution {
  Mention mention;
  LinkStatus status = LinkStatus::kUnmatched;
  std::optional<EntityId> entity;
  double score = 0.0;
};

// E_cand: unique entities in mention order, each above the threshold.
struct LinkedEntitySet {
  std::vector<LinkedEntity> entities;
  std::vector<MentionResolution> resolutions;

  std::vector<EntityId> ids() const;
  bool contains(EntityId e) const;
  std::size_t size() const { return entities.size(); }
  bool empty() const { return entities.empty(); }
};

inline constexpr double kDefaultLinkThreshold = 0.8;

// Resolves mentions against the entity catalog of one graph. Entity token sets
// are computed once at construction.
class Linker {
 public:
  explicit Linker(const KnowledgeGraph &g, double threshold = kDefaultLinkThreshold,
                  std::shared_ptr<const MentionScorer> scorer = nullptr);

  LinkedEntitySet link(const MentionSet &mentions) const;

  // Best non-exact candidate for one normalized mention: highest score, ties
  // to the smallest surface. Empty when nothing scores above zero.
  std::optional<std::pair<EntityId, double>> best_match(
      std::string_view normalized_mention) const;

 private:
  const KnowledgeGraph *graph_;
  double threshold_;
  std::shared_ptr<const MentionScorer> scorer_;
  std::vector<std::vector<std::string>> entity_tokens_;
};

LinkedEntitySet link(const MentionSet &mentions, const KnowledgeGraph &g,
                     double threshold = kDefaultLinkThreshold);

// Entity names occurring as whole-token runs in `text`, by first position.
std::vector<std::string> scan_entity_mentions(std::string_view text,
                                              const KnowledgeGraph &g,
                                              std::size_t max_tokens = 6);

}  // namespace rok

#endif  // ROK_LINKER_HPP_
