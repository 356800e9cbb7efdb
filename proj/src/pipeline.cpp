// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#include "rok/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include "rok/error.hpp"
#include "rok/text.hpp"

namespace rok {

QuestionRecord question_from_json(const nlohmann::json &j) {
  if (!j.is_object()) throw Error("question record must be a JSON object");
  QuestionRecord q;
  if (j.contains("id")) {
    q.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
  }
  if (!j.contains("question") || !j["question"].is_string()) {
    throw Error("question record needs a string 'question'");
  }
  q.question = j["question"].get<std::string>();
  if (trim(q.question).empty()) throw Error("question text is empty");
  if (j.contains("gold") && !j["gold"].is_null()) {
    for (const auto &[category, values] : j["gold"].items()) {
      std::vector<std::string> list;
      if (values.is_string()) {
        list.push_back(values.get<std::string>());
      } else {
        for (const auto &v : values) list.push_back(v.get<std::string>());
      }
      if (list.empty()) throw Error("gold category '" + category + "' is empty");
      q.gold[category] = std::move(list);
    }
  }
  return q;
}

std::vector<QuestionRecord> read_questions(std::istream &in) {
  std::vector<QuestionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(question_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(line_no, e.what());
    } catch (const ParseError &) {
      throw;
    } catch (const Error &e) {
      throw ParseError(line_no, e.what());
    }
    if (out.back().id.empty()) out.back().id = std::to_string(out.size());
  }
  return out;
}

std::vector<QuestionRecord> read_questions(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open questions file " + path.string());
  return read_questions(in);
}

namespace {

std::string slurp(const std::string &path, const std::string &key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(key, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

PipelineOptions PipelineOptions::from_config(const RunConfig &cfg) {
  PipelineOptions o;
  o.paths.max_hop = cfg.get_int("paths.max_hop");
  o.paths.cap = static_cast<std::size_t>(cfg.get_int("paths.cap"));
  o.paths.directed = cfg.get_bool("paths.directed");
  o.ranker.damping = cfg.get_double("ranker.damping");
  o.ranker.tol = cfg.get_double("ranker.tol");
  o.ranker.max_iter = cfg.get_int("ranker.max_iter");
  o.ranker.directed = o.paths.directed;
  o.top_k = static_cast<std::size_t>(cfg.get_int("ranker.top_k"));
  o.link_threshold = cfg.get_double("linker.threshold");
  o.merged_expand_extract = cfg.get_bool("llm.merged_expand_extract");
  o.budget = static_cast<std::size_t>(cfg.get_int("llm.budget"));
  o.no_kg = cfg.get_bool("pipeline.no_kg");
  for (TemplateId id : kAllTemplates) {
    const std::string key = std::string("templates.") + to_string(id);
    if (const auto &path = cfg.get(key); !path.empty()) {
      o.templates.set(id, slurp(path, key));
    }
  }
  if (const auto &path = cfg.get("templates.filter_one_shot"); !path.empty()) {
    o.templates.filter_one_shot = slurp(path, "templates.filter_one_shot");
  }
  return o;
}

const char *to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kOk: return "ok";
    case RunStatus::kDegraded: return "degraded";
    case RunStatus::kFailed: return "failed";
  }
  return "unknown";
}

std::string format_triple(const KnowledgeGraph &g, const Triple &t) {
  return to_string(g, t);
}

std::string format_path(const KnowledgeGraph &g, const ReasoningPath &p) {
  std::string out = g.surface(p.nodes.front());
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const auto &rel = g.surface(p.steps[i].triple.relation);
    out += p.steps[i].reversed ? " <-[" + rel + "]- " : " -[" + rel + "]-> ";
    out += g.surface(p.nodes[i + 1]);
  }
  return out;
}

std::string serialize_main_paths(const KnowledgeGraph &g,
                                 std::span<const ReasoningPath> paths) {
  std::string out = "Main reasoning paths:\n";
  if (paths.empty()) out += "(none)\n";
  for (const auto &p : paths) out += format_path(g, p) + "\n";
  return out;
}

std::string serialize_neighbor_triples(const KnowledgeGraph &g,
                                       std::span<const NeighborTriple> neighbors) {
  std::string out = "Neighbor triples:\n";
  if (neighbors.empty()) out += "(none)\n";
  for (const auto &n : neighbors) out += format_triple(g, n.triple) + "\n";
  return out;
}

std::string serialize_paths(const KnowledgeGraph &g,
                            std::span<const ReasoningPath> paths,
                            std::span<const NeighborTriple> neighbors) {
  return serialize_main_paths(g, paths) + serialize_neighbor_triples(g, neighbors);
}

std::vector<NeighborTriple> accept_filtered_triples(
    const KnowledgeGraph &g, std::span<const NeighborTriple> candidates,
    std::string_view response, std::vector<std::string> *warnings) {
  auto key_of = [](std::string_view text) {
    std::string_view s = trim(text);
    while (!s.empty() && (s.front() == '(' || s.front() == '[')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ')' || s.back() == ']' || s.back() == '.' ||
                          s.back() == ',')) {
      s.remove_suffix(1);
    }
    return normalize(s);
  };

  std::vector<std::string> candidate_keys;
  for (const auto &c : candidates) {
    const Triple &t = c.triple;
    candidate_keys.push_back(key_of(g.surface(t.head) + ", " + g.surface(t.relation) +
                                    ", " + g.surface(t.tail)));
  }

  std::vector<bool> accepted(candidates.size(), false);
  static const std::regex kMarker(R"(^(?:(?:-|\*|\+|•|·)+|\(?\d+[.)]))");
  for (const auto &raw : split(response, '\n')) {
    std::string line(trim(raw));
    for (std::smatch m; std::regex_search(line, m, kMarker) && m.length(0) > 0;) {
      line = std::string(trim(line.substr(m.length(0))));
    }
    if (line.empty() || line.back() == ':') continue;

    // A line may carry several "(h, r, t)" groups.
    std::vector<std::string> pieces;
    for (std::size_t pos = 0; (pos = line.find('(', pos)) != std::string::npos;) {
      const auto close = line.find(')', pos);
      if (close == std::string::npos) break;
      pieces.push_back(line.substr(pos, close - pos + 1));
      pos = close + 1;
    }
    if (pieces.empty()) pieces.push_back(line);

    for (const auto &piece : pieces) {
      const std::string key = key_of(piece);
      auto it = std::find(candidate_keys.begin(), candidate_keys.end(), key);
      if (it == candidate_keys.end()) {
        if (warnings) warnings->push_back("filter_triples: dropped unmatched line '" + piece + "'");
        continue;
      }
      accepted[it - candidate_keys.begin()] = true;
    }
  }

  std::vector<NeighborTriple> kept;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (accepted[i]) kept.push_back(candidates[i]);
  }
  return kept;
}

namespace {

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming> *sink) : sink_(sink) {}

  template <typename F>
  decltype(auto) run(const char *stage, F &&f) {
    const auto start = std::chrono::steady_clock::now();
    struct Record {
      StageClock *clock;
      const char *stage;
      std::chrono::steady_clock::time_point start;
      ~Record() {
        const std::chrono::duration<double, std::milli> ms =
            std::chrono::steady_clock::now() - start;
        clock->sink_->push_back(StageTiming{stage, ms.count()});
      }
    } record{this, stage, start};
    return f();
  }

 private:
  std::vector<StageTiming> *sink_;
};

void degrade(AnswerRecord &r, std::string why) {
  r.degradations.push_back(std::move(why));
  if (r.status == RunStatus::kOk) r.status = RunStatus::kDegraded;
}

std::string final_answer(const QuestionRecord &q, const KnowledgeGraph &g,
                         const PipelineOptions &opts, LlmBackend &backend,
                         AnswerRecord &r, StageClock &clock) {
  Bindings b{{"question", q.question}};
  if (opts.no_kg) {
    b["main_paths"] = "";
    b["neighbor_triples"] = "";
  } else {
    b["main_paths"] = serialize_main_paths(g, r.main_paths);
    b["neighbor_triples"] = serialize_neighbor_triples(g, r.neighbors);
  }
  const auto &tpl = opts.templates.get(TemplateId::kFinalAnswer);
  return clock.run("final_answer", [&] {
    return call_rendered(backend, r.transcript, tpl.id, render(tpl, b, &r.warnings));
  });
}

void run_stages(const QuestionRecord &q, const KnowledgeGraph &g,
                const PipelineOptions &opts, LlmBackend &backend, AnswerRecord &r) {
  StageClock clock(&r.timings);
  if (opts.no_kg) {
    r.notes.push_back("no_kg");
    r.answer = final_answer(q, g, opts, backend, r, clock);
    return;
  }

  // Stages 1-2: chain-of-thought expansion and key entity extraction.
  std::vector<std::string> extracted;
  std::string cot;
  const auto &expand = opts.templates.get(TemplateId::kCotExpand);
  if (opts.merged_expand_extract) {
    std::string prompt = render(expand, {{"question", q.question}}, &r.warnings) +
                         opts.templates.merged_suffix;
    cot = clock.run("cot_expand", [&] {
      return call_rendered(backend, r.transcript, expand.id, std::move(prompt));
    });
    extracted = parse_merged_entities(cot);
  } else {
    cot = clock.run("cot_expand", [&] {
      return call_rendered(backend, r.transcript, expand.id,
                           render(expand, {{"question", q.question}}, &r.warnings));
    });
    const auto &extract = opts.templates.get(TemplateId::kExtractEntities);
    const std::string response = clock.run("extract_entities", [&] {
      return call_rendered(backend, r.transcript, extract.id,
                           render(extract, {{"text", q.question + "\n" + cot}},
                                  &r.warnings));
    });
    extracted = parse_entity_list(response);
  }

  // Stage 3: linking. A mention found in the question text counts as a
  // question mention; everything else came from the expansion.
  MentionSet mentions;
  const std::string question_key = normalize(q.question);
  for (const auto &m : extracted) {
    const bool in_question = contains_token_run(question_key, normalize(m));
    mentions.add(m, in_question ? MentionSource::kQuestion : MentionSource::kCot);
  }
  r.mentions = mentions.mentions();
  try {
    r.linked = clock.run("link", [&] {
      return Linker(g, opts.link_threshold).link(mentions);
    });
  } catch (const LinkError &e) {
    degrade(r, std::string("link_failed: ") + e.what());
  }

  const auto keys = r.linked.ids();
  if (keys.empty()) {
    if (r.degradations.empty()) degrade(r, "no_linked_entities");
    r.notes.push_back("filter_triples skipped: no candidates");
    r.answer = final_answer(q, g, opts, backend, r, clock);
    return;
  }

  // Stages 4-5: candidate paths, PageRank over the subgraph, bucket selection.
  MainCandidates candidates = clock.run("main_paths", [&] {
    return gen_main_candidates(g, keys, opts.paths);
  });
  r.candidate_paths = candidates.paths.size();
  if (candidates.fallback) r.notes.push_back("single_key_entity_fallback");
  if (candidates.truncated) r.notes.push_back("path_search_truncated");
  if (candidates.disconnected) degrade(r, "no_main_paths");

  if (!candidates.paths.empty()) {
    clock.run("rank", [&] {
      const auto pr = pagerank(candidates.subgraph, opts.ranker);
      if (!pr.converged) r.notes.push_back("pagerank_not_converged");
      auto scored = score_paths(std::move(candidates.paths), pr);
      r.main_paths = bucket_select(std::move(scored), static_cast<int>(keys.size()),
                                   opts.top_k);
    });
  }

  // Stage 6: neighbour triples, filtered by one batched call.
  const NeighborTripleSet neighbor_set = clock.run("neighbors", [&] {
    return gen_neighbor_candidates(g, keys, r.main_paths);
  });
  r.neighbor_candidates = neighbor_set.triples.size();
  if (neighbor_set.empty()) {
    r.notes.push_back("filter_triples skipped: no candidates");
  } else {
    std::string listing;
    for (const auto &n : neighbor_set.triples) listing += format_triple(g, n.triple) + "\n";
    const auto &filter = opts.templates.get(TemplateId::kFilterTriples);
    const Bindings b{{"question", q.question},
                     {"background", serialize_main_paths(g, r.main_paths)},
                     {"triples", listing},
                     {"one_shot", opts.templates.filter_one_shot}};
    const std::string response = clock.run("filter_triples", [&] {
      return call_rendered(backend, r.transcript, filter.id, render(filter, b, &r.warnings));
    });
    r.neighbors = accept_filtered_triples(g, neighbor_set.triples, response, &r.warnings);
  }

  // Stage 7: final answer over both path sets.
  r.answer = final_answer(q, g, opts, backend, r, clock);
}

}  // namespace

AnswerRecord run_question(const QuestionRecord &q, const KnowledgeGraph &g,
                          const PipelineOptions &opts, LlmBackend &backend) {
  AnswerRecord r;
  r.id = q.id;
  r.question = q.question;
  r.gold = q.gold;
  r.transcript = LlmTranscript(opts.budget);
  try {
    run_stages(q, g, opts, backend, r);
  } catch (const std::exception &e) {
    r.status = RunStatus::kFailed;
    r.error = e.what();
  }
  return r;
}

std::vector<AnswerRecord> run_batch(std::span<const QuestionRecord> questions,
                                    const KnowledgeGraph &g,
                                    const PipelineOptions &opts,
                                    LlmBackend &backend, std::size_t jobs) {
  std::vector<AnswerRecord> records(questions.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < questions.size();) {
      records[i] = run_question(questions[i], g, opts, backend);
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, questions.size()));
  if (jobs == 1) {
    worker();
    return records;
  }
  std::vector<std::jthread> pool;
  for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  pool.clear();
  return records;
}

namespace {

nlohmann::ordered_json triple_json(const KnowledgeGraph &g, const Triple &t) {
  return {{"h", g.surface(t.head)}, {"r", g.surface(t.relation)}, {"t", g.surface(t.tail)}};
}

}  // namespace

nlohmann::ordered_json to_json(const AnswerRecord &r, const KnowledgeGraph &g,
                               bool with_timings) {
  using json = nlohmann::ordered_json;
  json j;
  j["id"] = r.id;
  j["question"] = r.question;
  j["status"] = to_string(r.status);
  j["answer"] = r.answer;
  j["degradations"] = r.degradations;
  j["notes"] = r.notes;
  j["warnings"] = r.warnings;
  j["error"] = r.error.empty() ? json(nullptr) : json(r.error);

  j["mentions"] = json::array();
  for (const auto &m : r.mentions) {
    j["mentions"].push_back({{"text", m.text}, {"source", to_string(m.source)}});
  }
  j["linked"] = json::array();
  for (const auto &l : r.linked.entities) {
    j["linked"].push_back({{"mention", l.mention},
                           {"source", to_string(l.source)},
                           {"entity", g.surface(l.entity)},
                           {"score", l.score}});
  }
  j["unmatched"] = json::array();
  for (const auto &res : r.linked.resolutions) {
    if (res.status == LinkStatus::kUnmatched) j["unmatched"].push_back(res.mention.text);
  }

  j["candidate_paths"] = r.candidate_paths;
  j["main_paths"] = json::array();
  for (const auto &p : r.main_paths) {
    json steps = json::array();
    for (const auto &s : p.steps) {
      json t = triple_json(g, s.triple);
      t["reversed"] = s.reversed;
      steps.push_back(std::move(t));
    }
    j["main_paths"].push_back({{"path", format_path(g, p)},
                               {"key_count", p.key_count},
                               {"avg_pr", p.avg_pr},
                               {"triples", std::move(steps)}});
  }
  j["neighbor_candidates"] = r.neighbor_candidates;
  j["neighbors"] = json::array();
  for (const auto &n : r.neighbors) {
    json t = triple_json(g, n.triple);
    t["source"] = g.surface(n.source);
    j["neighbors"].push_back(std::move(t));
  }

  j["transcript"] = json::array();
  for (const auto &c : r.transcript.calls()) {
    json call = {{"template_id", to_string(c.template_id)},
                 {"prompt", c.prompt},
                 {"response", c.response}};
    if (with_timings) call["latency_ms"] = c.latency_ms;
    j["transcript"].push_back(std::move(call));
  }
  if (!r.gold.empty()) j["gold"] = r.gold;
  if (with_timings) {
    json t = json::array();
    for (const auto &s : r.timings) t.push_back({{"stage", s.stage}, {"ms", s.ms}});
    j["timings"] = std::move(t);
  }
  return j;
}

void write_jsonl(std::ostream &out, std::span<const AnswerRecord> records,
                 const KnowledgeGraph &g, bool with_timings) {
  for (const auto &r : records) out << to_json(r, g, with_timings).dump() << '\n';
}

std::unique_ptr<LlmBackend> make_backend(const RunConfig &cfg) {
  if (cfg.get("llm.kind") == "mock") {
    const auto &file = cfg.get("llm.mock_file");
    if (file.empty()) throw ConfigError("llm.mock_file", "required when llm.kind is mock");
    return std::make_unique<MockBackend>(MockBackend::from_file(file));
  }
  HttpOptions http;
  http.endpoint = cfg.get("llm.endpoint");
  http.model = cfg.get("llm.model");
  http.max_retries = cfg.get_int("llm.max_retries");
  http.timeout_seconds = cfg.get_int("llm.timeout");
  if (const char *key = std::getenv("ROK_LLM_API_KEY")) http.api_key = key;
  return std::make_unique<HttpBackend>(std::move(http));
}

}  // namespace rok
