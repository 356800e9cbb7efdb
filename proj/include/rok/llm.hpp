// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#ifndef ROK_LLM_HPP_
#define ROK_LLM_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace rok {

enum class TemplateId { kCotExpand, kExtractEntities, kFilterTriples, kFinalAnswer };

inline constexpr std::array<TemplateId, 4> kAllTemplates = {
    TemplateId::kCotExpand, TemplateId::kExtractEntities,
    TemplateId::kFilterTriples, TemplateId::kFinalAnswer};

const char *to_string(TemplateId id);
std::optional<TemplateId> parse_template_id(std::string_view name);

// Template text with {name} placeholders. A brace pair counts as a
// placeholder only when it encloses [a-z_]+.
struct PromptTemplate {
  TemplateId id = TemplateId::kCotExpand;
  std::string text;

  // In order of first appearance, without repeats.
  std::vector<std::string> placeholders() const;
};

using Bindings = std::map<std::string, std::string, std::less<>>;

// Substitutes every placeholder. Throws RenderError naming the first
// placeholder without a binding. Empty bindings are allowed and reported
// through `warnings`.
std::string render(const PromptTemplate &t, const Bindings &bindings,
                   std::vector<std::string> *warnings = nullptr);

// The shipped medical-domain templates.
const PromptTemplate &default_template(TemplateId id);

// Example appended to the filter_triples prompt as its in-context shot.
std::string_view default_filter_one_shot();

// Instruction appended to the cot_expand prompt when expansion and entity
// extraction share one call.
std::string_view default_merged_suffix();

// Per-run template table, defaulting to the shipped templates.
class TemplateSet {
 public:
  TemplateSet();
  const PromptTemplate &get(TemplateId id) const;
  void set(TemplateId id, std::string text);

  std::string filter_one_shot;
  std::string merged_suffix;

 private:
  std::array<PromptTemplate, 4> templates_;
};

struct LlmCall {
  TemplateId template_id = TemplateId::kCotExpand;
  std::string prompt;
  std::string response;
  double latency_ms = 0.0;
};

// Append-only record of the calls made for one question. Never holds more
// than `budget` calls.
class LlmTranscript {
 public:
  explicit LlmTranscript(std::size_t budget = 4) : budget_(budget) {}

  std::size_t budget() const { return budget_; }
  std::size_t size() const { return calls_.size(); }
  std::size_t remaining() const { return budget_ - calls_.size(); }
  const std::vector<LlmCall> &calls() const { return calls_; }
  std::vector<TemplateId> template_ids() const;

  // Throws BudgetError when full.
  void append(LlmCall call);

 private:
  std::size_t budget_;
  std::vector<LlmCall> calls_;
};

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual std::string complete(TemplateId id, const std::string &prompt) = 0;
  virtual std::string kind() const = 0;
};

// Hex SHA-256 of the rendered prompt; the key used by scripted responses.
std::string prompt_hash(std::string_view prompt);

// Scripted responses keyed by template id and prompt hash, with a "default"
// fallback per template. The script is read-only after construction, so one
// instance can serve concurrent questions.
class MockBackend final : public LlmBackend {
 public:
  static constexpr std::string_view kDefaultKey = "default";

  MockBackend() = default;
  // {"cot_expand": {"default": "...", "<sha256>": "..."}, ...}
  static MockBackend from_json(const nlohmann::json &script);
  static MockBackend from_file(const std::filesystem::path &path);

  void add(TemplateId id, std::string key, std::string response);
  std::string complete(TemplateId id, const std::string &prompt) override;
  std::string kind() const override { return "mock"; }

  nlohmann::json to_json() const;

 private:
  std::array<std::map<std::string, std::string, std::less<>>, 4> script_;
};

struct HttpOptions {
  // Full URL of a chat-completions endpoint, http:// or https://.
  std::string endpoint;
  std::string model = "gpt-3.5-turbo";
  std::string api_key;
  double temperature = 0.0;
  int timeout_seconds = 60;
  int max_retries = 2;
  int backoff_ms = 500;
};

// Chat-completions JSON over HTTP. Transport failures, 429 and 5xx are
// retried with exponential backoff; retries are not charged to the budget.
class HttpBackend final : public LlmBackend {
 public:
  explicit HttpBackend(HttpOptions opts);
  std::string complete(TemplateId id, const std::string &prompt) override;
  std::string kind() const override { return "http"; }

  static nlohmann::json request_body(const HttpOptions &opts, const std::string &prompt);
  static std::string parse_response(const std::string &body);

 private:
  HttpOptions opts_;
  std::string scheme_host_port_;
  std::string path_;
};

// Renders `t`, dispatches it and records the call. Throws BudgetError before
// dispatch when the transcript is full.
std::string call(LlmBackend &backend, LlmTranscript &transcript,
                 const PromptTemplate &t, const Bindings &bindings);

// Dispatches an already rendered prompt under the given template id.
std::string call_rendered(LlmBackend &backend, LlmTranscript &transcript,
                          TemplateId id, std::string prompt);

// Lenient list parse: newline, comma or semicolon separated; numbering,
// bullets, quotes and "label:" prefixes are stripped; header lines ending in a
// colon are skipped.
std::vector<std::string> parse_entity_list(std::string_view response);

// For merged expand+extract responses: the list after a "Key entities:"
// marker, or the whole response when no marker is present.
std::vector<std::string> parse_merged_entities(std::string_view response);

}  // namespace rok

#endif  // ROK_LLM_HPP_
