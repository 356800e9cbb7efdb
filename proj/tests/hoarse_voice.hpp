// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

// Expected engine output for the hoarse-voice case on data/toy_medical.tsv,
// produced by tests/oracles/rok_oracle.py and frozen here. Shared by the unit
// tests and the acceptance gate.

#ifndef ROK_TESTS_HOARSE_VOICE_HPP_
#define ROK_TESTS_HOARSE_VOICE_HPP_

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "rok/pipeline.hpp"
#include "rok/ranker.hpp"
#include "support.hpp"

namespace rok::testing::hoarse_voice {

inline constexpr double kScoreTol = 1e-9;

inline const std::vector<std::string> kKeys = {"hoarse voice", "sore throat", "laryngitis",
                                               "laryngoscopy", "dexamethasone"};

inline const std::vector<std::string> kCandidatePaths = {
    "hoarse voice <-[has_symptom]- laryngitis -[has_symptom]-> sore throat",
    "hoarse voice <-[has_symptom]- gastroesophageal reflux disease -[can_cause]-> laryngitis -[has_symptom]-> sore throat",
    "hoarse voice <-[has_symptom]- laryngitis",
    "hoarse voice <-[has_symptom]- gastroesophageal reflux disease -[can_cause]-> laryngitis",
    "hoarse voice <-[has_symptom]- vocal cord polyp <-[can_check_disease]- laryngoscopy <-[need_medical_test]- laryngitis",
    "hoarse voice <-[has_symptom]- vocal cord polyp -[need_medical_test]-> laryngoscopy <-[need_medical_test]- laryngitis",
    "hoarse voice <-[has_symptom]- laryngitis -[need_medical_test]-> laryngoscopy",
    "hoarse voice <-[has_symptom]- vocal cord polyp <-[can_check_disease]- laryngoscopy",
    "hoarse voice <-[has_symptom]- vocal cord polyp -[need_medical_test]-> laryngoscopy",
    "hoarse voice <-[has_symptom]- gastroesophageal reflux disease -[can_cause]-> laryngitis -[need_medical_test]-> laryngoscopy",
    "hoarse voice <-[has_symptom]- laryngitis -[need_medication]-> dexamethasone",
    "hoarse voice <-[has_symptom]- laryngitis <-[possible_cure_disease]- dexamethasone",
    "hoarse voice <-[has_symptom]- gastroesophageal reflux disease -[can_cause]-> laryngitis -[need_medication]-> dexamethasone",
    "hoarse voice <-[has_symptom]- gastroesophageal reflux disease -[can_cause]-> laryngitis <-[possible_cure_disease]- dexamethasone",
    "sore throat <-[has_symptom]- laryngitis",
    "sore throat <-[has_symptom]- common cold -[has_symptom]-> cough <-[has_symptom]- laryngitis",
    "sore throat <-[has_symptom]- pharyngitis -[need_medication]-> amoxicillin <-[need_medication]- laryngitis",
    "sore throat <-[has_symptom]- laryngitis -[need_medical_test]-> laryngoscopy",
    "sore throat <-[has_symptom]- laryngitis -[need_medication]-> dexamethasone",
    "sore throat <-[has_symptom]- laryngitis <-[possible_cure_disease]- dexamethasone",
    "laryngitis -[need_medical_test]-> laryngoscopy",
    "laryngitis -[has_symptom]-> hoarse voice <-[has_symptom]- vocal cord polyp <-[can_check_disease]- laryngoscopy",
    "laryngitis -[has_symptom]-> hoarse voice <-[has_symptom]- vocal cord polyp -[need_medical_test]-> laryngoscopy",
    "laryngitis -[need_medication]-> dexamethasone",
    "laryngitis <-[possible_cure_disease]- dexamethasone",
    "laryngoscopy <-[need_medical_test]- laryngitis -[need_medication]-> dexamethasone",
    "laryngoscopy <-[need_medical_test]- laryngitis <-[possible_cure_disease]- dexamethasone",
};

inline const std::vector<std::string> kSubgraphTriples = {
    "(common cold, has_symptom, cough)",
    "(common cold, has_symptom, sore throat)",
    "(dexamethasone, possible_cure_disease, laryngitis)",
    "(gastroesophageal reflux disease, can_cause, laryngitis)",
    "(gastroesophageal reflux disease, has_symptom, hoarse voice)",
    "(laryngitis, has_symptom, cough)",
    "(laryngitis, has_symptom, hoarse voice)",
    "(laryngitis, has_symptom, sore throat)",
    "(laryngitis, need_medical_test, laryngoscopy)",
    "(laryngitis, need_medication, amoxicillin)",
    "(laryngitis, need_medication, dexamethasone)",
    "(laryngoscopy, can_check_disease, vocal cord polyp)",
    "(pharyngitis, has_symptom, sore throat)",
    "(pharyngitis, need_medication, amoxicillin)",
    "(vocal cord polyp, has_symptom, hoarse voice)",
    "(vocal cord polyp, need_medical_test, laryngoscopy)",
};

inline const std::vector<std::pair<std::string, double>> kPageRank = {
    {"amoxicillin", 0.06794486990295101},
    {"common cold", 0.07021958861311675},
    {"cough", 0.06794486990295101},
    {"dexamethasone", 0.06256672584838914},
    {"gastroesophageal reflux disease", 0.06377892426099704},
    {"hoarse voice", 0.09062604535983758},
    {"laryngitis", 0.2302605280565906},
    {"laryngoscopy", 0.08893846035545129},
    {"pharyngitis", 0.07021958861311675},
    {"sore throat", 0.09778819506352564},
    {"vocal cord polyp", 0.08971220402307335},
};

struct Selected {
  std::string path;
  int key_count;
  double avg_pr;
};

inline const std::vector<Selected> kSelected = {
    {"hoarse voice <-[has_symptom]- laryngitis -[has_symptom]-> sore throat", 3, 0.1395582561599846},
    {"sore throat <-[has_symptom]- laryngitis -[need_medical_test]-> laryngoscopy", 3, 0.13899572782518918},
    {"hoarse voice <-[has_symptom]- laryngitis -[need_medical_test]-> laryngoscopy", 3, 0.13660834459062648},
    {"sore throat <-[has_symptom]- laryngitis <-[possible_cure_disease]- dexamethasone", 3, 0.13020514965616845},
    {"sore throat <-[has_symptom]- laryngitis -[need_medication]-> dexamethasone", 3, 0.13020514965616845},
};

inline const std::vector<std::pair<std::string, std::string>> kNeighbors = {
    {"(gastroesophageal reflux disease, can_cause, laryngitis)", "laryngitis"},
    {"(smoking, can_cause, laryngitis)", "laryngitis"},
    {"(laryngoscopy, can_check_disease, vocal cord polyp)", "laryngoscopy"},
};

// Runs the graph stages on the toy graph and lists every difference from the
// frozen values. Empty means the engine agrees.
inline std::vector<std::string> mismatches(const KnowledgeGraph &g) {
  std::vector<std::string> diff;
  auto expect = [&](bool ok, const std::string &what) {
    if (!ok) diff.push_back(what);
  };
  std::vector<EntityId> keys;
  for (const auto &k : kKeys) keys.push_back(g.entity(k));

  const auto cand = gen_main_candidates(g, keys, PathSearchOptions{});
  std::vector<std::string> paths;
  for (const auto &p : cand.paths) paths.push_back(format_path(g, p));
  expect(paths == kCandidatePaths, "candidate paths");

  std::vector<std::string> sub;
  for (const auto &t : cand.subgraph.triples) sub.push_back(format_triple(g, t));
  expect(sub == kSubgraphTriples, "subgraph triples");

  const auto pr = pagerank(cand.subgraph, PageRankOptions{});
  expect(pr.converged, "pagerank converged");
  expect(pr.size() == kPageRank.size(), "pagerank node count");
  for (const auto &[name, score] : kPageRank) {
    const auto got = pr.find(g.entity(name));
    expect(got && std::abs(*got - score) < kScoreTol, "pagerank of " + name);
  }

  const auto selected =
      bucket_select(score_paths(cand.paths, pr), static_cast<int>(keys.size()), 5);
  expect(selected.size() == kSelected.size(), "selected count");
  for (std::size_t i = 0; i < std::min(selected.size(), kSelected.size()); ++i) {
    const auto tag = "selected path " + std::to_string(i + 1);
    expect(format_path(g, selected[i]) == kSelected[i].path, tag);
    expect(selected[i].key_count == kSelected[i].key_count, tag + " key_count");
    expect(std::abs(selected[i].avg_pr - kSelected[i].avg_pr) < kScoreTol, tag + " avg_pr");
  }

  const auto neighbors = gen_neighbor_candidates(g, keys, selected);
  expect(neighbors.triples.size() == kNeighbors.size(), "neighbor count");
  for (std::size_t i = 0; i < std::min(neighbors.triples.size(), kNeighbors.size()); ++i) {
    expect(format_triple(g, neighbors.triples[i].triple) == kNeighbors[i].first &&
               g.surface(neighbors.triples[i].source) == kNeighbors[i].second,
           "neighbor " + std::to_string(i + 1));
  }
  return diff;
}

}  // namespace rok::testing::hoarse_voice

#endif  // ROK_TESTS_HOARSE_VOICE_HPP_
