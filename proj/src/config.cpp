// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#include "rok/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "rok/error.hpp"
#include "rok/text.hpp"

namespace rok {

const char *to_string(Provenance p) {
  switch (p) {
    case Provenance::kDefault: return "default";
    case Provenance::kFile: return "file";
    case Provenance::kFlag: return "flag";
  }
  return "unknown";
}

namespace {

struct KeySpec {
  std::string_view default_value;
  // Returns an error message, or empty when the value is acceptable.
  std::function<std::string(const std::string &)> check;
};

std::optional<long long> as_int(const std::string &s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> as_real(const std::string &s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception &) {
    return std::nullopt;
  }
}

std::optional<bool> as_bool(const std::string &s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  return std::nullopt;
}

auto int_at_least(long long lo) {
  return [lo](const std::string &s) -> std::string {
    auto v = as_int(s);
    if (!v) return "expected an integer, got '" + s + "'";
    if (*v < lo) return "must be at least " + std::to_string(lo);
    return {};
  };
}

auto real_in(double lo, double hi, bool open_lo = false) {
  return [=](const std::string &s) -> std::string {
    auto v = as_real(s);
    if (!v) return "expected a number, got '" + s + "'";
    if (open_lo ? !(*v > lo) : !(*v >= lo)) return "out of range";
    if (!(*v <= hi)) return "out of range";
    return {};
  };
}

std::string boolean(const std::string &s) {
  return as_bool(s) ? std::string() : "expected true or false, got '" + s + "'";
}

std::string anything(const std::string &) { return {}; }

const std::map<std::string, KeySpec, std::less<>> &schema() {
  static const std::map<std::string, KeySpec, std::less<>> kSchema = {
      {"paths.max_hop", {"3", int_at_least(1)}},
      {"paths.cap", {"10000", int_at_least(1)}},
      {"paths.directed", {"false", boolean}},
      {"ranker.damping", {"0.85", real_in(0.0, 1.0)}},
      {"ranker.tol", {"1e-8", real_in(0.0, 1.0, true)}},
      {"ranker.max_iter", {"100", int_at_least(1)}},
      {"ranker.top_k", {"5", int_at_least(1)}},
      {"linker.threshold", {"0.8", real_in(0.0, 1.0)}},
      {"llm.kind", {"mock",
                    [](const std::string &s) -> std::string {
                      return s == "mock" || s == "http" ? "" : "expected mock or http";
                    }}},
      {"llm.endpoint", {"https://api.openai.com/v1/chat/completions", anything}},
      {"llm.model", {"gpt-3.5-turbo", anything}},
      {"llm.mock_file", {"", anything}},
      {"llm.merged_expand_extract", {"false", boolean}},
      {"llm.budget", {"4", int_at_least(1)}},
      {"llm.max_retries", {"2", int_at_least(0)}},
      {"llm.timeout", {"60", int_at_least(1)}},
      {"templates.cot_expand", {"", anything}},
      {"templates.extract_entities", {"", anything}},
      {"templates.filter_triples", {"", anything}},
      {"templates.final_answer", {"", anything}},
      {"templates.filter_one_shot", {"", anything}},
      {"pipeline.no_kg", {"false", boolean}},
      {"batch.jobs", {"1", int_at_least(1)}},
  };
  return kSchema;
}

const KeySpec &spec_for(const std::string &key) {
  auto it = schema().find(key);
  if (it == schema().end()) throw ConfigError(key, "unknown configuration key");
  return it->second;
}

}  // namespace

RunConfig::RunConfig() {
  for (const auto &[key, spec] : schema()) {
    entries_[key] = Entry{std::string(spec.default_value), Provenance::kDefault};
  }
}

std::vector<std::string> RunConfig::keys() {
  std::vector<std::string> out;
  for (const auto &[key, spec] : schema()) out.push_back(key);
  return out;
}

bool RunConfig::known(std::string_view key) { return schema().contains(key); }

void RunConfig::set(const std::string &key, const std::string &value, Provenance p) {
  const KeySpec &spec = spec_for(key);
  if (auto problem = spec.check(value); !problem.empty()) {
    throw ConfigError(key, problem);
  }
  entries_[key] = Entry{value, p};
}

void RunConfig::merge_stream(std::istream &in, const std::string &origin,
                             const std::filesystem::path &base_dir) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error &e) {
    throw ConfigError(origin + ":" + std::to_string(e.line()), e.message());
  }
  auto apply = [&](const std::string &key, std::string_view value) {
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    std::string resolved(value);
    const bool is_path = key == "llm.mock_file" || key.starts_with("templates.");
    if (is_path && !resolved.empty() && !base_dir.empty() &&
        std::filesystem::path(resolved).is_relative()) {
      resolved = (base_dir / resolved).lexically_normal().string();
    }
    set(key, resolved, Provenance::kFile);
  };
  for (const auto &[name, node] : tree) {
    if (node.empty()) {
      apply(name, node.data());  // key outside any section
      continue;
    }
    for (const auto &[key, leaf] : node) apply(name + "." + key, leaf.data());
  }
}

void RunConfig::merge_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  merge_stream(in, path.string(), path.parent_path());
}

const RunConfig::Entry &RunConfig::entry(const std::string &key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError(key, "unknown configuration key");
  return it->second;
}

int RunConfig::get_int(const std::string &key) const {
  auto v = as_int(get(key));
  if (!v) throw ConfigError(key, "not an integer");
  return static_cast<int>(*v);
}

double RunConfig::get_double(const std::string &key) const {
  auto v = as_real(get(key));
  if (!v) throw ConfigError(key, "not a number");
  return *v;
}

bool RunConfig::get_bool(const std::string &key) const {
  auto v = as_bool(get(key));
  if (!v) throw ConfigError(key, "not a boolean");
  return *v;
}

}  // namespace rok
