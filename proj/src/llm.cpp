// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#include "rok/llm.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <regex>
#include <thread>

#include "httplib.h"
#include "prompts.inc"
#include "rok/error.hpp"
#include "rok/text.hpp"

namespace rok {

const char *to_string(TemplateId id) {
  switch (id) {
    case TemplateId::kCotExpand: return "cot_expand";
    case TemplateId::kExtractEntities: return "extract_entities";
    case TemplateId::kFilterTriples: return "filter_triples";
    case TemplateId::kFinalAnswer: return "final_answer";
  }
  return "unknown";
}

std::optional<TemplateId> parse_template_id(std::string_view name) {
  for (TemplateId id : kAllTemplates) {
    if (name == to_string(id)) return id;
  }
  return std::nullopt;
}

namespace {

bool is_placeholder_char(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }

// Calls on_text for literal runs and on_slot for each placeholder name.
template <typename OnText, typename OnSlot>
void scan_template(std::string_view text, OnText &&on_text, OnSlot &&on_slot) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto open = text.find('{', pos);
    if (open == std::string_view::npos) break;
    std::size_t end = open + 1;
    while (end < text.size() && is_placeholder_char(text[end])) ++end;
    if (end < text.size() && text[end] == '}' && end > open + 1) {
      on_text(text.substr(pos, open - pos));
      on_slot(text.substr(open + 1, end - open - 1));
      pos = end + 1;
    } else {
      on_text(text.substr(pos, open + 1 - pos));
      pos = open + 1;
    }
  }
  on_text(text.substr(std::min(pos, text.size())));
}

constexpr std::string_view kFilterOneShot = R"(    Patent’s question:
    ###I have had a runny nose, a cough and a mild fever for three days.
    background knowledge:
    ###common cold -[has_symptom]-> cough
    Triplets:
    ###(common cold, has_symptom, fever)
    (common cold, need_medication, ibuprofen)
    (migraine, has_symptom, headache)
    Output:
    (common cold, has_symptom, fever)
    (common cold, need_medication, ibuprofen)
)";

constexpr std::string_view kMergedSuffix = R"(
    After the analysis, extract the key entities of the question and of your analysis, related to disease diagnosis, treatment protocols, medications, tests that need to be done, possible disease names, etc. List them one per line after a line reading "Key entities:".
)";

}  // namespace

std::vector<std::string> PromptTemplate::placeholders() const {
  std::vector<std::string> names;
  scan_template(
      text, [](std::string_view) {},
      [&](std::string_view name) {
        if (std::find(names.begin(), names.end(), name) == names.end()) {
          names.emplace_back(name);
        }
      });
  return names;
}

std::string render(const PromptTemplate &t, const Bindings &bindings,
                   std::vector<std::string> *warnings) {
  std::string out;
  out.reserve(t.text.size());
  scan_template(
      t.text, [&](std::string_view s) { out.append(s); },
      [&](std::string_view name) {
        auto it = bindings.find(name);
        if (it == bindings.end()) throw RenderError(std::string(name));
        if (it->second.empty() && warnings) {
          warnings->push_back(std::string(to_string(t.id)) + ": placeholder {" +
                              std::string(name) + "} rendered empty");
        }
        out.append(it->second);
      });
  return out;
}

const PromptTemplate &default_template(TemplateId id) {
  static const std::array<PromptTemplate, 4> kDefaults = {
      PromptTemplate{TemplateId::kCotExpand, std::string(prompts::kCotExpandText)},
      PromptTemplate{TemplateId::kExtractEntities,
                     std::string(prompts::kExtractEntitiesText)},
      PromptTemplate{TemplateId::kFilterTriples,
                     std::string(prompts::kFilterTriplesText)},
      PromptTemplate{TemplateId::kFinalAnswer, std::string(prompts::kFinalAnswerText)},
  };
  return kDefaults[static_cast<std::size_t>(id)];
}

std::string_view default_filter_one_shot() { return kFilterOneShot; }
std::string_view default_merged_suffix() { return kMergedSuffix; }

TemplateSet::TemplateSet()
    : filter_one_shot(kFilterOneShot), merged_suffix(kMergedSuffix) {
  for (TemplateId id : kAllTemplates) {
    templates_[static_cast<std::size_t>(id)] = default_template(id);
  }
}

const PromptTemplate &TemplateSet::get(TemplateId id) const {
  return templates_[static_cast<std::size_t>(id)];
}

void TemplateSet::set(TemplateId id, std::string text) {
  templates_[static_cast<std::size_t>(id)] = PromptTemplate{id, std::move(text)};
}

std::vector<TemplateId> LlmTranscript::template_ids() const {
  std::vector<TemplateId> ids;
  for (const auto &c : calls_) ids.push_back(c.template_id);
  return ids;
}

void LlmTranscript::append(LlmCall call) {
  if (calls_.size() >= budget_) {
    throw BudgetError("LLM call budget of " + std::to_string(budget_) +
                      " exhausted");
  }
  calls_.push_back(std::move(call));
}

std::string prompt_hash(std::string_view prompt) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(prompt.data(), prompt.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

MockBackend MockBackend::from_json(const nlohmann::json &script) {
  if (!script.is_object()) throw Error("mock script must be a JSON object");
  MockBackend mock;
  for (const auto &[name, table] : script.items()) {
    auto id = parse_template_id(name);
    if (!id) throw Error("mock script: unknown template id '" + name + "'");
    if (!table.is_object()) {
      throw Error("mock script: entry for '" + name + "' must be an object");
    }
    for (const auto &[key, response] : table.items()) {
      if (!response.is_string()) {
        throw Error("mock script: response " + name + "/" + key + " must be a string");
      }
      mock.add(*id, key, response.get<std::string>());
    }
  }
  return mock;
}

MockBackend MockBackend::from_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mock script " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception &e) {
    throw Error("mock script " + path.string() + ": " + e.what());
  }
}

void MockBackend::add(TemplateId id, std::string key, std::string response) {
  script_[static_cast<std::size_t>(id)][std::move(key)] = std::move(response);
}

std::string MockBackend::complete(TemplateId id, const std::string &prompt) {
  const auto &table = script_[static_cast<std::size_t>(id)];
  if (auto it = table.find(prompt_hash(prompt)); it != table.end()) return it->second;
  if (auto it = table.find(kDefaultKey); it != table.end()) return it->second;
  throw ScriptedGapError(std::string("no scripted response for ") + to_string(id) +
                         " prompt " + prompt_hash(prompt));
}

nlohmann::json MockBackend::to_json() const {
  nlohmann::json out = nlohmann::json::object();
  for (TemplateId id : kAllTemplates) {
    const auto &table = script_[static_cast<std::size_t>(id)];
    if (table.empty()) continue;
    auto &entry = out[to_string(id)];
    for (const auto &[key, response] : table) entry[key] = response;
  }
  return out;
}

HttpBackend::HttpBackend(HttpOptions opts) : opts_(std::move(opts)) {
  const auto scheme_end = opts_.endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("llm.endpoint", "expected an http:// or https:// URL");
  }
  const auto scheme = opts_.endpoint.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ConfigError("llm.endpoint", "unsupported scheme '" + scheme + "'");
  }
  const auto path_start = opts_.endpoint.find('/', scheme_end + 3);
  scheme_host_port_ = opts_.endpoint.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : opts_.endpoint.substr(path_start);
}

nlohmann::json HttpBackend::request_body(const HttpOptions &opts,
                                         const std::string &prompt) {
  return {{"model", opts.model},
          {"temperature", opts.temperature},
          {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};
}

std::string HttpBackend::parse_response(const std::string &body) {
  const auto json = nlohmann::json::parse(body);
  return json.at("choices").at(0).at("message").at("content").get<std::string>();
}

std::string HttpBackend::complete(TemplateId, const std::string &prompt) {
  const std::string body = request_body(opts_, prompt).dump();
  httplib::Headers headers;
  if (!opts_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + opts_.api_key);
  }

  std::string last_error;
  for (int attempt = 0; attempt <= opts_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(opts_.backoff_ms << (attempt - 1)));
    }
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(opts_.timeout_seconds);
    client.set_read_timeout(opts_.timeout_seconds);
    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
      last_error = "HTTP transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw TransportError("HTTP status " + std::to_string(res->status) + ": " +
                               res->body.substr(0, 200),
                           attempt);
    }
    try {
      return parse_response(res->body);
    } catch (const nlohmann::json::exception &e) {
      throw TransportError(std::string("malformed chat response: ") + e.what(), attempt);
    }
  }
  throw TransportError(last_error, opts_.max_retries);
}

std::string call_rendered(LlmBackend &backend, LlmTranscript &transcript,
                          TemplateId id, std::string prompt) {
  if (transcript.remaining() == 0) {
    throw BudgetError("LLM call budget of " + std::to_string(transcript.budget()) +
                      " exhausted before " + to_string(id));
  }
  const auto start = std::chrono::steady_clock::now();
  std::string response = backend.complete(id, prompt);
  const std::chrono::duration<double, std::milli> elapsed =
      std::chrono::steady_clock::now() - start;
  transcript.append(LlmCall{id, std::move(prompt), response, elapsed.count()});
  return response;
}

std::string call(LlmBackend &backend, LlmTranscript &transcript,
                 const PromptTemplate &t, const Bindings &bindings) {
  return call_rendered(backend, transcript, t.id, render(t, bindings));
}

namespace {

std::string strip_item(std::string_view item) {
  std::string_view s = trim(item);
  constexpr std::string_view kWrap = "\"'`*_";
  while (!s.empty() && kWrap.find(s.front()) != std::string_view::npos) s.remove_prefix(1);
  while (!s.empty() && (kWrap.find(s.back()) != std::string_view::npos || s.back() == '.')) {
    s.remove_suffix(1);
  }
  return std::string(trim(s));
}

std::size_t word_count(std::string_view s) {
  std::size_t words = 0;
  bool in_word = false;
  for (char c : s) {
    const bool space = std::isspace(static_cast<unsigned char>(c));
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  return words;
}

}  // namespace

std::vector<std::string> parse_entity_list(std::string_view response) {
  static const std::regex kMarker(R"(^(?:(?:-|\*|\+|•|·)+|\(?\d+[.)]))");
  std::vector<std::string> items;
  for (const auto &raw : split(response, '\n')) {
    std::string line(trim(raw));
    // Bullet or numbering markers, possibly nested ("- 1. x").
    for (std::smatch m; std::regex_search(line, m, kMarker) && m.length(0) > 0;) {
      line = std::string(trim(line.substr(m.length(0))));
    }
    if (line.empty() || line.back() == ':') continue;
    if (const auto colon = line.find(':'); colon != std::string::npos) {
      const std::string_view label = trim(std::string_view(line).substr(0, colon));
      if (word_count(label) <= 3) line = std::string(trim(line.substr(colon + 1)));
    }
    std::replace(line.begin(), line.end(), ';', ',');
    for (const auto &part : split(line, ',')) {
      if (auto item = strip_item(part); !item.empty()) items.push_back(std::move(item));
    }
  }
  return items;
}

std::vector<std::string> parse_merged_entities(std::string_view response) {
  std::string lower(response);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  constexpr std::string_view kKey = "key entities:";
  const auto pos = lower.rfind(kKey);
  if (pos == std::string::npos) return parse_entity_list(response);
  return parse_entity_list(response.substr(pos + kKey.size()));
}

}  // namespace rok
