// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#include "rok/eval.hpp"

#include <fstream>

#include "rok/error.hpp"
#include "rok/llm.hpp"
#include "rok/text.hpp"

namespace rok {

EvalRecord eval_record_from(const AnswerRecord &r) {
  return EvalRecord{r.id, r.answer, r.gold, r.status != RunStatus::kOk};
}

std::vector<EvalRecord> read_eval_records(std::istream &in) {
  std::vector<EvalRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      EvalRecord r;
      r.id = j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>()
                                                      : std::to_string(out.size() + 1);
      if (j.contains("answer") && j["answer"].is_string()) r.answer = j["answer"];
      if (j.contains("gold")) {
        for (const auto &[category, values] : j["gold"].items()) {
          auto &list = r.gold[category];
          if (values.is_string()) {
            list.push_back(values.get<std::string>());
          } else {
            for (const auto &v : values) list.push_back(v.get<std::string>());
          }
        }
      }
      r.degraded = j.contains("status") && j["status"] != "ok";
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

std::vector<EvalRecord> read_eval_records(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw EvalError("cannot open results file " + path.string());
  return read_eval_records(in);
}

AliasTable aliases_from_json(const nlohmann::json &j) {
  if (!j.is_object()) throw EvalError("alias file must be a JSON object");
  AliasTable table;
  for (const auto &[name, values] : j.items()) {
    if (!values.is_array()) throw EvalError("aliases for '" + name + "' must be a list");
    auto &list = table[normalize(name)];
    for (const auto &v : values) list.push_back(v.get<std::string>());
  }
  return table;
}

AliasTable read_aliases(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw EvalError("cannot open alias file " + path.string());
  try {
    return aliases_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception &e) {
    throw EvalError(std::string("alias file: ") + e.what());
  }
}

namespace {

std::vector<std::string> forms_of(std::string_view entity, const AliasTable &aliases) {
  std::vector<std::string> forms{normalize(entity)};
  if (auto it = aliases.find(forms.front()); it != aliases.end()) {
    for (const auto &a : it->second) forms.push_back(normalize(a));
  }
  return forms;
}

}  // namespace

bool entity_hit(std::string_view answer, std::string_view entity, const AliasTable &aliases) {
  const std::string text = normalize(answer);
  for (const auto &form : forms_of(entity, aliases)) {
    if (!form.empty() && contains_token_run(text, form)) return true;
  }
  return false;
}

EvalReport entity_match_accuracy(std::span<const EvalRecord> records,
                                 const AliasTable &aliases) {
  EvalReport report;
  report.records = records.size();
  std::map<std::string, double> sums;
  std::size_t gold_total = 0;
  std::size_t hit_total = 0;

  for (const auto &r : records) {
    if (r.degraded) ++report.degraded;
    QuestionScore q;
    q.id = r.id;
    q.degraded = r.degraded;
    for (const char *category : kEntityCategories) {
      auto it = r.gold.find(category);
      if (it == r.gold.end() || it->second.empty()) continue;
      std::size_t hits = 0;
      for (const auto &entity : it->second) hits += entity_hit(r.answer, entity, aliases);
      const double rate = static_cast<double>(hits) / static_cast<double>(it->second.size());
      q.category_rates[category] = rate;
      sums[category] += rate;
      ++report.category_counts[category];
      gold_total += it->second.size();
      hit_total += hits;
    }
    report.questions.push_back(std::move(q));
  }
  if (report.category_counts.empty()) {
    throw EvalError("no disease, medication or test gold labels in any record");
  }

  double macro = 0.0;
  for (const auto &[category, count] : report.category_counts) {
    const double rate = sums[category] / static_cast<double>(count);
    report.category_rates[category] = rate;
    macro += rate;
  }
  report.overall = macro / static_cast<double>(report.category_counts.size());
  report.micro = static_cast<double>(hit_total) / static_cast<double>(gold_total);
  return report;
}

EvalReport hits_at_1(std::span<const EvalRecord> records, const AliasTable &aliases) {
  EvalReport report;
  report.records = records.size();
  std::size_t scored = 0;
  std::size_t hits = 0;
  for (const auto &r : records) {
    if (r.degraded) ++report.degraded;
    QuestionScore q;
    q.id = r.id;
    q.degraded = r.degraded;

    std::vector<std::string> gold;
    for (const auto &[category, names] : r.gold) {
      for (const auto &name : names) {
        for (auto &form : forms_of(name, aliases)) gold.push_back(std::move(form));
      }
    }
    if (!gold.empty()) {
      const auto listed = parse_entity_list(r.answer);
      const std::string first = listed.empty() ? normalize(r.answer) : normalize(listed.front());
      const std::string whole = normalize(r.answer);
      bool hit = false;
      for (const auto &g : gold) hit = hit || g == first || g == whole;
      q.hit_at_1 = hit;
      ++scored;
      hits += hit;
    }
    report.questions.push_back(std::move(q));
  }
  if (scored == 0) throw EvalError("no gold labels in any record");
  report.hits_at_1 = static_cast<double>(hits) / static_cast<double>(scored);
  return report;
}

nlohmann::ordered_json EvalReport::to_json() const {
  using json = nlohmann::ordered_json;
  auto opt = [](const std::optional<double> &v) { return v ? json(*v) : json(nullptr); };
  json j;
  j["records"] = records;
  j["degraded"] = degraded;
  j["category_rates"] = category_rates;
  j["category_counts"] = category_counts;
  j["overall"] = opt(overall);
  j["micro"] = opt(micro);
  j["hits_at_1"] = opt(hits_at_1);
  j["questions"] = json::array();
  for (const auto &q : questions) {
    json row = {{"id", q.id}, {"degraded", q.degraded}};
    if (!q.category_rates.empty()) row["category_rates"] = q.category_rates;
    if (q.hit_at_1) row["hit_at_1"] = *q.hit_at_1;
    j["questions"].push_back(std::move(row));
  }
  return j;
}

}  // namespace rok
