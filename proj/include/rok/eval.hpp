// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#ifndef ROK_EVAL_HPP_
#define ROK_EVAL_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rok/pipeline.hpp"

namespace rok {

inline constexpr const char *kEntityCategories[] = {"disease", "medication", "test"};

struct EvalRecord {
  std::string id;
  std::string answer;
  GoldLabels gold;
  bool degraded = false;
};

EvalRecord eval_record_from(const AnswerRecord &r);
// Reads the JSONL written by `batch`: needs "answer" and "gold"; "status"
// other than "ok" marks the run degraded.
std::vector<EvalRecord> read_eval_records(std::istream &in);
std::vector<EvalRecord> read_eval_records(const std::filesystem::path &path);

// Canonical name (normalized) -> extra surface forms.
using AliasTable = std::map<std::string, std::vector<std::string>>;
AliasTable read_aliases(const std::filesystem::path &path);
AliasTable aliases_from_json(const nlohmann::json &j);

// Whole-token match of `entity` or any of its aliases inside `answer`.
bool entity_hit(std::string_view answer, std::string_view entity,
                const AliasTable &aliases = {});

struct QuestionScore {
  std::string id;
  std::map<std::string, double> category_rates;
  std::optional<bool> hit_at_1;
  bool degraded = false;
};

struct EvalReport {
  std::map<std::string, double> category_rates;
  std::map<std::string, std::size_t> category_counts;
  // Macro average over the categories that have gold labels.
  std::optional<double> overall;
  // Hits over all gold entities, pooled across categories.
  std::optional<double> micro;
  std::optional<double> hits_at_1;
  std::size_t records = 0;
  std::size_t degraded = 0;
  std::vector<QuestionScore> questions;

  nlohmann::ordered_json to_json() const;
};

EvalReport entity_match_accuracy(std::span<const EvalRecord> records,
                                 const AliasTable &aliases = {});

// Gold for each record is the union of its labels across categories. The
// record scores when its first listed entity, or failing that the whole
// answer, equals a gold name or alias after normalization.
EvalReport hits_at_1(std::span<const EvalRecord> records,
                     const AliasTable &aliases = {});

}  // namespace rok

#endif  // ROK_EVAL_HPP_
