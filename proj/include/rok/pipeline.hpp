// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#ifndef ROK_PIPELINE_HPP_
#define ROK_PIPELINE_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rok/config.hpp"
#include "rok/kg_store.hpp"
#include "rok/linker.hpp"
#include "rok/llm.hpp"
#include "rok/paths.hpp"
#include "rok/ranker.hpp"

namespace rok {

// Gold answers by category: "disease", "medication", "test" or "open".
using GoldLabels = std::map<std::string, std::vector<std::string>>;

struct QuestionRecord {
  std::string id;
  std::string question;
  GoldLabels gold;
};

QuestionRecord question_from_json(const nlohmann::json &j);
// One JSON object per line: {"id", "question", "gold"?}.
std::vector<QuestionRecord> read_questions(std::istream &in);
std::vector<QuestionRecord> read_questions(const std::filesystem::path &path);

struct PipelineOptions {
  PathSearchOptions paths;
  PageRankOptions ranker;
  std::size_t top_k = 5;
  double link_threshold = kDefaultLinkThreshold;
  bool merged_expand_extract = false;
  std::size_t budget = 4;
  // Vanilla reference mode: one final_answer call without graph context.
  bool no_kg = false;
  TemplateSet templates;

  static PipelineOptions from_config(const RunConfig &cfg);
};

enum class RunStatus { kOk, kDegraded, kFailed };
const char *to_string(RunStatus s);

struct StageTiming {
  std::string stage;
  double ms = 0.0;
};

struct AnswerRecord {
  std::string id;
  std::string question;
  GoldLabels gold;

  std::string answer;
  RunStatus status = RunStatus::kOk;
  // Conditions that reduced the context given to the final answer.
  std::vector<std::string> degradations;
  // Informational events (fallbacks, truncation, skipped stages).
  std::vector<std::string> notes;
  std::vector<std::string> warnings;
  std::string error;

  std::vector<Mention> mentions;
  LinkedEntitySet linked;
  std::size_t candidate_paths = 0;
  std::vector<ReasoningPath> main_paths;
  std::size_t neighbor_candidates = 0;
  std::vector<NeighborTriple> neighbors;
  LlmTranscript transcript;
  std::vector<StageTiming> timings;

  bool degraded() const { return status != RunStatus::kOk; }
};

// "a -[r]-> b <-[s]- c"
std::string format_path(const KnowledgeGraph &g, const ReasoningPath &p);
// "(h, r, t)"
std::string format_triple(const KnowledgeGraph &g, const Triple &t);

std::string serialize_main_paths(const KnowledgeGraph &g,
                                 std::span<const ReasoningPath> paths);
std::string serialize_neighbor_triples(const KnowledgeGraph &g,
                                       std::span<const NeighborTriple> neighbors);
// Main paths then neighbour triples, each under its own heading.
std::string serialize_paths(const KnowledgeGraph &g,
                            std::span<const ReasoningPath> paths,
                            std::span<const NeighborTriple> neighbors);

// Candidates the filter response keeps, matched by normalized "(h, r, t)"
// text and returned in candidate order. Lines that match nothing are reported
// in `warnings`.
std::vector<NeighborTriple> accept_filtered_triples(
    const KnowledgeGraph &g, std::span<const NeighborTriple> candidates,
    std::string_view response, std::vector<std::string> *warnings = nullptr);

AnswerRecord run_question(const QuestionRecord &q, const KnowledgeGraph &g,
                          const PipelineOptions &opts, LlmBackend &backend);

// Runs every question in isolation; output order follows input order. The
// backend must tolerate concurrent calls when jobs > 1.
std::vector<AnswerRecord> run_batch(std::span<const QuestionRecord> questions,
                                    const KnowledgeGraph &g,
                                    const PipelineOptions &opts,
                                    LlmBackend &backend, std::size_t jobs = 1);

// Stable JSON form of a record. Timings and call latencies vary between runs
// and are only included on request.
nlohmann::ordered_json to_json(const AnswerRecord &r, const KnowledgeGraph &g,
                               bool with_timings = false);

void write_jsonl(std::ostream &out, std::span<const AnswerRecord> records,
                 const KnowledgeGraph &g, bool with_timings = false);

std::unique_ptr<LlmBackend> make_backend(const RunConfig &cfg);

}  // namespace rok

#endif  // ROK_PIPELINE_HPP_
