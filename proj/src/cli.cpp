// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#include "rok/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"
#include "rok/config.hpp"
#include "rok/error.hpp"
#include "rok/eval.hpp"
#include "rok/kg_store.hpp"
#include "rok/linker.hpp"
#include "rok/paths.hpp"
#include "rok/pipeline.hpp"
#include "rok/ranker.hpp"
#include "rok/text.hpp"

namespace rok {
namespace {

using ojson = nlohmann::ordered_json;

std::string fixed(double v, int digits = 6) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

std::string read_text(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// State shared by every subcommand: global flags plus config overrides
// collected from subcommand flags.
struct Session {
  std::ostream &out;
  std::ostream &err;
  bool json = false;
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;

  RunConfig config() const {
    RunConfig cfg;
    std::string path = config_path;
    if (path.empty()) {
      if (const char *env = std::getenv("ROK_CONFIG"); env && *env) path = env;
    }
    if (!path.empty()) cfg.merge_file(path);
    for (const auto &[key, value] : overrides) cfg.set(key, value, Provenance::kFlag);
    return cfg;
  }

  void emit(const ojson &j) const { out << j.dump(2) << '\n'; }
};

// Adds a subcommand flag that overrides a configuration key.
void bind(CLI::App *cmd, Session &s, const std::string &flag, const std::string &key,
          const std::string &help) {
  cmd->add_option_function<std::string>(
      flag, [&s, key](const std::string &v) { s.overrides.emplace_back(key, v); }, help);
}

void bind_switch(CLI::App *cmd, Session &s, const std::string &flag, const std::string &key,
                 const std::string &help) {
  cmd->add_flag_callback(flag, [&s, key] { s.overrides.emplace_back(key, "true"); }, help);
}

int cmd_graph_stats(Session &s, const std::string &path) {
  const auto g = load_graph(path);
  if (s.json) {
    s.emit({{"entities", g.num_entities()},
            {"relations", g.num_relations()},
            {"triples", g.num_triples()}});
  } else {
    s.out << "entities=" << g.num_entities() << ", relations=" << g.num_relations()
          << ", triples=" << g.num_triples() << '\n';
  }
  return kExitOk;
}

int cmd_graph_validate(Session &s, const std::string &path) {
  const auto g = load_graph(path);
  const auto report = validate_graph(g);
  if (s.json) {
    ojson j = {{"entities", g.num_entities()},
               {"relations", g.num_relations()},
               {"triples", g.num_triples()},
               {"lines", g.load_stats().lines},
               {"duplicates", g.load_stats().duplicates}};
    j["self_loops"] = ojson::array();
    for (const auto &t : report.self_loops) j["self_loops"].push_back(to_string(g, t));
    j["isolated_entities"] = ojson::array();
    for (auto e : report.isolated_entities) j["isolated_entities"].push_back(g.surface(e));
    j["unused_relations"] = ojson::array();
    for (auto r : report.unused_relations) j["unused_relations"].push_back(g.surface(r));
    j["sink_entities"] = report.sink_entities;
    j["triples_per_relation"] = report.triples_per_relation;
    s.emit(j);
    return kExitOk;
  }
  s.out << "entities=" << g.num_entities() << ", relations=" << g.num_relations()
        << ", triples=" << g.num_triples() << '\n';
  s.out << "lines=" << g.load_stats().lines << ", duplicates=" << g.load_stats().duplicates
        << '\n';
  s.out << "self_loops=" << report.self_loops.size()
        << ", isolated_entities=" << report.isolated_entities.size()
        << ", unused_relations=" << report.unused_relations.size()
        << ", sink_entities=" << report.sink_entities << '\n';
  for (const auto &t : report.self_loops) s.out << "self_loop\t" << to_string(g, t) << '\n';
  for (auto e : report.isolated_entities) s.out << "isolated\t" << g.surface(e) << '\n';
  for (auto r : report.unused_relations) s.out << "unused_relation\t" << g.surface(r) << '\n';
  for (const auto &[rel, n] : report.triples_per_relation) {
    s.out << "relation\t" << rel << '\t' << n << '\n';
  }
  return kExitOk;
}

struct LinkArgs {
  std::string graph;
  std::string question;
  std::string cot_file;
  std::vector<std::string> mentions;
};

int cmd_link(Session &s, const LinkArgs &a) {
  const RunConfig cfg = s.config();
  const auto g = load_graph(a.graph);

  // Without an LLM in the loop, mentions come from a gazetteer scan of the
  // question and optional expansion text, unless given explicitly.
  MentionSet mentions;
  if (!a.mentions.empty()) {
    for (const auto &m : a.mentions) mentions.add(m, MentionSource::kQuestion);
  } else {
    for (const auto &m : scan_entity_mentions(a.question, g)) {
      mentions.add(m, MentionSource::kQuestion);
    }
    if (!a.cot_file.empty()) {
      for (const auto &m : scan_entity_mentions(read_text(a.cot_file), g)) {
        mentions.add(m, MentionSource::kCot);
      }
    }
  }
  const auto linked = Linker(g, cfg.get_double("linker.threshold")).link(mentions);

  auto status_name = [](LinkStatus st) {
    switch (st) {
      case LinkStatus::kLinked: return "linked";
      case LinkStatus::kDuplicate: return "duplicate";
      case LinkStatus::kUnmatched: return "unmatched";
    }
    return "unknown";
  };
  if (s.json) {
    ojson j = ojson::array();
    for (const auto &r : linked.resolutions) {
      j.push_back({{"mention", r.mention.text},
                   {"source", to_string(r.mention.source)},
                   {"status", status_name(r.status)},
                   {"entity", r.entity ? ojson(g.surface(*r.entity)) : ojson(nullptr)},
                   {"score", r.score}});
    }
    s.emit(j);
    return kExitOk;
  }
  s.out << "mention\tsource\tstatus\tentity\tscore\n";
  for (const auto &r : linked.resolutions) {
    s.out << r.mention.text << '\t' << to_string(r.mention.source) << '\t'
          << status_name(r.status) << '\t' << (r.entity ? g.surface(*r.entity) : "-") << '\t'
          << fixed(r.score, 4) << '\n';
  }
  return kExitOk;
}

struct PathsArgs {
  std::string graph;
  std::vector<std::string> entities;
};

int cmd_paths(Session &s, const PathsArgs &a) {
  const RunConfig cfg = s.config();
  const auto opts = PipelineOptions::from_config(cfg);
  const auto g = load_graph(a.graph);

  std::vector<EntityId> keys;
  for (const auto &name : a.entities) {
    const EntityId e = g.entity(name);
    if (std::find(keys.begin(), keys.end(), e) == keys.end()) keys.push_back(e);
  }
  auto cands = gen_main_candidates(g, keys, opts.paths);
  const std::size_t candidate_count = cands.paths.size();

  std::optional<PageRankScores> pr;
  std::vector<ReasoningPath> selected;
  if (!cands.paths.empty()) {
    pr = pagerank(cands.subgraph, opts.ranker);
    auto scored = score_paths(std::move(cands.paths), *pr);
    selected = bucket_select(std::move(scored), static_cast<int>(keys.size()), opts.top_k);
  }

  if (s.json) {
    ojson j;
    j["key_entities"] = ojson::array();
    for (auto e : keys) j["key_entities"].push_back(g.surface(e));
    j["fallback"] = cands.fallback;
    j["truncated"] = cands.truncated;
    j["disconnected"] = cands.disconnected;
    j["candidate_paths"] = candidate_count;
    j["subgraph"] = {{"nodes", ojson::array()}, {"triples", ojson::array()}};
    for (auto e : cands.subgraph.nodes) j["subgraph"]["nodes"].push_back(g.surface(e));
    for (const auto &t : cands.subgraph.triples) {
      j["subgraph"]["triples"].push_back(to_string(g, t));
    }
    if (pr) {
      j["pagerank"] = {{"iterations", pr->iterations},
                       {"residual", pr->residual},
                       {"converged", pr->converged},
                       {"scores", ojson::object()}};
      for (std::size_t i = 0; i < pr->nodes.size(); ++i) {
        j["pagerank"]["scores"][g.surface(pr->nodes[i])] = pr->scores[static_cast<Eigen::Index>(i)];
      }
    }
    j["selected"] = ojson::array();
    for (const auto &p : selected) {
      j["selected"].push_back(
          {{"path", format_path(g, p)}, {"bucket", p.key_count}, {"avg_pr", p.avg_pr}});
    }
    s.emit(j);
    return kExitOk;
  }

  s.out << "key entities: ";
  for (std::size_t i = 0; i < keys.size(); ++i) {
    s.out << (i ? ", " : "") << g.surface(keys[i]);
  }
  s.out << '\n';
  if (cands.fallback) {
    s.out << "fallback: one-hop subgraph of " << g.surface(keys.front()) << '\n';
  }
  if (cands.disconnected) s.out << "note: some key entities are not connected within max_hop\n";
  if (cands.truncated) s.out << "note: path search truncated at paths.cap\n";
  s.out << "candidate paths: " << candidate_count << '\n';
  s.out << "subgraph: " << cands.subgraph.nodes.size() << " nodes, "
        << cands.subgraph.triples.size() << " triples\n";
  for (const auto &t : cands.subgraph.triples) s.out << "  " << to_string(g, t) << '\n';
  if (pr) {
    s.out << "pagerank: iterations=" << pr->iterations
          << ", converged=" << (pr->converged ? "true" : "false") << '\n';
    for (std::size_t i = 0; i < pr->nodes.size(); ++i) {
      s.out << "  " << g.surface(pr->nodes[i]) << '\t'
            << fixed(pr->scores[static_cast<Eigen::Index>(i)]) << '\n';
    }
    s.out << "selected paths (top " << opts.top_k << "):\n";
    for (const auto &p : selected) {
      s.out << "  [bucket " << p.key_count << "] avg_pr=" << fixed(p.avg_pr) << "  "
            << format_path(g, p) << '\n';
    }
  }
  return kExitOk;
}

struct AnswerArgs {
  std::string graph;
  std::string question;
  bool timings = false;
};

int cmd_answer(Session &s, const AnswerArgs &a) {
  const RunConfig cfg = s.config();
  const auto opts = PipelineOptions::from_config(cfg);
  const auto g = load_graph(a.graph);
  auto backend = make_backend(cfg);
  const auto record = run_question(QuestionRecord{"1", a.question, {}}, g, opts, *backend);

  if (s.json) {
    s.emit(to_json(record, g, a.timings));
  } else {
    s.out << serialize_main_paths(g, record.main_paths)
          << serialize_neighbor_triples(g, record.neighbors) << "Answer:\n"
          << record.answer << '\n';
  }
  for (const auto &d : record.degradations) s.err << "degraded: " << d << '\n';
  for (const auto &w : record.warnings) s.err << "warning: " << w << '\n';
  if (record.status == RunStatus::kFailed) {
    s.err << "error: " << record.error << '\n';
    return kExitDomainError;
  }
  return kExitOk;
}

struct BatchArgs {
  std::string graph;
  std::string questions;
  std::string out;
  bool timings = false;
};

int cmd_batch(Session &s, const BatchArgs &a) {
  const RunConfig cfg = s.config();
  const auto opts = PipelineOptions::from_config(cfg);
  const auto g = load_graph(a.graph);
  const auto questions = read_questions(std::filesystem::path(a.questions));
  auto backend = make_backend(cfg);
  const auto records = run_batch(questions, g, opts, *backend,
                                 static_cast<std::size_t>(cfg.get_int("batch.jobs")));

  std::ofstream file(a.out, std::ios::binary);
  if (!file) throw Error("cannot write " + a.out);
  write_jsonl(file, records, g, a.timings);

  std::size_t counts[3] = {0, 0, 0};
  for (const auto &r : records) ++counts[static_cast<int>(r.status)];
  if (s.json) {
    s.emit({{"questions", records.size()},
            {"ok", counts[0]},
            {"degraded", counts[1]},
            {"failed", counts[2]},
            {"out", a.out}});
  } else {
    s.out << "questions=" << records.size() << ", ok=" << counts[0]
          << ", degraded=" << counts[1] << ", failed=" << counts[2] << '\n';
  }
  for (const auto &r : records) {
    if (r.status == RunStatus::kFailed) s.err << "failed " << r.id << ": " << r.error << '\n';
  }
  return kExitOk;
}

struct EvalArgs {
  std::string results;
  std::string metric = "entity-match";
  std::string aliases;
  std::string out;
  bool micro = false;
};

int cmd_eval(Session &s, const EvalArgs &a) {
  const auto records = read_eval_records(std::filesystem::path(a.results));
  const AliasTable aliases = a.aliases.empty() ? AliasTable{} : read_aliases(a.aliases);
  const EvalReport report = a.metric == "hits1" ? hits_at_1(records, aliases)
                                                : entity_match_accuracy(records, aliases);
  ojson j = report.to_json();
  j["metric"] = a.metric;
  if (!a.out.empty()) {
    std::ofstream file(a.out, std::ios::binary);
    if (!file) throw Error("cannot write " + a.out);
    file << j.dump(2) << '\n';
  }
  if (s.json) {
    s.emit(j);
    return kExitOk;
  }
  s.out << "records=" << report.records << ", degraded=" << report.degraded << '\n';
  for (const auto &[category, rate] : report.category_rates) {
    s.out << category << "=" << fixed(rate) << " (n=" << report.category_counts.at(category)
          << ")\n";
  }
  if (report.overall) {
    if (a.micro) {
      s.out << "overall_micro=" << fixed(*report.micro) << '\n';
    } else {
      s.out << "overall=" << fixed(*report.overall) << '\n';
    }
  }
  if (report.hits_at_1) s.out << "hits@1=" << fixed(*report.hits_at_1) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  Session s{out, err, false, {}, {}};
  CLI::App app{"Knowledge-graph reasoning paths for LLM question answering", "rok"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", s.json, "Machine-readable JSON output");
  app.add_option("--config", s.config_path, "Config file (default: $ROK_CONFIG)");
  app.add_option_function<std::vector<std::string>>(
      "--set",
      [&s](const std::vector<std::string> &kvs) {
        for (const auto &kv : kvs) {
          const auto eq = kv.find('=');
          if (eq == std::string::npos) throw CLI::ValidationError("--set", "expected key=value");
          s.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
        }
      },
      "Override a config key (key=value)");

  std::function<int()> action;

  auto *graph = app.add_subcommand("graph", "Inspect a triple file");
  graph->require_subcommand(1);
  std::string graph_path;
  auto *validate = graph->add_subcommand("validate", "Validation report");
  validate->add_option("path", graph_path, "TSV or JSON-lines triple file")->required();
  validate->callback([&] { action = [&] { return cmd_graph_validate(s, graph_path); }; });
  auto *stats = graph->add_subcommand("stats", "Entity, relation and triple counts");
  stats->add_option("path", graph_path, "TSV or JSON-lines triple file")->required();
  stats->callback([&] { action = [&] { return cmd_graph_stats(s, graph_path); }; });

  LinkArgs link_args;
  auto *link_cmd = app.add_subcommand("link", "Link question mentions to graph entities");
  link_cmd->add_option("--graph", link_args.graph)->required();
  link_cmd->add_option("--question", link_args.question)->required();
  link_cmd->add_option("--cot-file", link_args.cot_file, "Expansion text to scan as well");
  link_cmd->add_option("--mentions", link_args.mentions, "Explicit mentions")->delimiter(',');
  bind(link_cmd, s, "--threshold", "linker.threshold", "Jaccard threshold");
  link_cmd->callback([&] { action = [&] { return cmd_link(s, link_args); }; });

  PathsArgs paths_args;
  auto *paths_cmd = app.add_subcommand("paths", "Candidate, ranked and selected paths");
  paths_cmd->add_option("--graph", paths_args.graph)->required();
  paths_cmd->add_option("--entities", paths_args.entities, "Key entities, comma separated")
      ->required()
      ->delimiter(',');
  bind(paths_cmd, s, "--max-hop", "paths.max_hop", "Maximum path length");
  bind(paths_cmd, s, "--cap", "paths.cap", "Paths kept per entity pair");
  bind_switch(paths_cmd, s, "--directed", "paths.directed", "Follow edge direction");
  bind(paths_cmd, s, "--top-k", "ranker.top_k", "Paths to select");
  bind(paths_cmd, s, "--damping", "ranker.damping", "PageRank damping");
  paths_cmd->callback([&] { action = [&] { return cmd_paths(s, paths_args); }; });

  auto bind_llm = [&](CLI::App *cmd) {
    bind(cmd, s, "--mock", "llm.mock_file", "Scripted response file");
    bind(cmd, s, "--llm", "llm.kind", "mock or http");
    bind(cmd, s, "--endpoint", "llm.endpoint", "Chat completions URL");
    bind(cmd, s, "--model", "llm.model", "Model name");
    bind_switch(cmd, s, "--merged", "llm.merged_expand_extract",
                "Expand and extract in one call");
    bind_switch(cmd, s, "--no-kg", "pipeline.no_kg", "Answer without graph context");
    bind(cmd, s, "--max-hop", "paths.max_hop", "Maximum path length");
    bind(cmd, s, "--top-k", "ranker.top_k", "Paths to select");
  };

  AnswerArgs answer_args;
  auto *answer_cmd = app.add_subcommand("answer", "Answer one question");
  answer_cmd->add_option("--graph", answer_args.graph)->required();
  answer_cmd->add_option("--question", answer_args.question)->required();
  answer_cmd->add_flag("--timings", answer_args.timings, "Include stage timings in JSON");
  bind_llm(answer_cmd);
  answer_cmd->callback([&] { action = [&] { return cmd_answer(s, answer_args); }; });

  BatchArgs batch_args;
  auto *batch_cmd = app.add_subcommand("batch", "Answer a JSON-lines question file");
  batch_cmd->add_option("--graph", batch_args.graph)->required();
  batch_cmd->add_option("--questions", batch_args.questions)->required();
  batch_cmd->add_option("--out", batch_args.out)->required();
  batch_cmd->add_flag("--timings", batch_args.timings, "Include timings and latencies");
  bind(batch_cmd, s, "--jobs", "batch.jobs", "Worker threads");
  bind_llm(batch_cmd);
  batch_cmd->callback([&] { action = [&] { return cmd_batch(s, batch_args); }; });

  EvalArgs eval_args;
  auto *eval_cmd = app.add_subcommand("eval", "Score batch output");
  eval_cmd->add_option("--results", eval_args.results)->required();
  eval_cmd->add_option("--metric", eval_args.metric)
      ->check(CLI::IsMember({"entity-match", "hits1"}));
  eval_cmd->add_option("--aliases", eval_args.aliases, "JSON map entity -> [aliases]");
  eval_cmd->add_option("--out", eval_args.out, "Write the JSON report here");
  eval_cmd->add_flag("--micro", eval_args.micro, "Report the micro average");
  eval_cmd->callback([&] { action = [&] { return cmd_eval(s, eval_args); }; });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, err, err);
    return kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const ConfigError &e) {
    err << "config error [" << e.key() << "]: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
}

}  // namespace rok
