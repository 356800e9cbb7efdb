// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 RoK Contributors

#include <random>

#include "doctest.h"
#include "rok/error.hpp"
#include "rok/eval.hpp"
#include "support.hpp"

using namespace rok;
using namespace rok::testing;

namespace {

constexpr double kTol = 1e-12;

EvalRecord rec(std::string answer, GoldLabels gold, bool degraded = false) {
  return EvalRecord{"", std::move(answer), std::move(gold), degraded};
}

std::vector<EvalRecord> fixture(const char *name) {
  return read_eval_records(fixture_dir() / name);
}

}  // namespace

TEST_CASE("single-record examples") {
  const std::vector<EvalRecord> one = {
      rec("Take ibuprofen and rest.", {{"medication", {"ibuprofen"}}})};
  const auto r1 = entity_match_accuracy(one);
  CHECK(r1.category_rates.at("medication") == 1.0);
  CHECK(*r1.overall == 1.0);

  const std::vector<EvalRecord> two = {
      rec("This looks like laryngitis.", {{"disease", {"laryngitis", "pharyngitis"}}})};
  CHECK(entity_match_accuracy(two).category_rates.at("disease") == doctest::Approx(0.5).epsilon(kTol));
}

TEST_CASE("ten-question fixture, rates computed by hand") {
  const auto records = fixture("eval_ten.jsonl");
  REQUIRE(records.size() == 10);
  const auto r = entity_match_accuracy(records);
  // disease: 1, 1/2, 1, 0, 0, 1, 1, 0 over 8 questions
  CHECK(r.category_counts.at("disease") == 8);
  CHECK(std::abs(r.category_rates.at("disease") - 9.0 / 16.0) < kTol);
  // medication: 1/2, 1, 1, 1/3
  CHECK(std::abs(r.category_rates.at("medication") - 17.0 / 24.0) < kTol);
  // test: 1/2, 0, 2/3, 0
  CHECK(std::abs(r.category_rates.at("test") - 7.0 / 24.0) < kTol);
  CHECK(std::abs(*r.overall - 25.0 / 48.0) < kTol);
  CHECK(std::abs(*r.micro - 12.0 / 23.0) < kTol);

  const auto aliases = read_aliases(fixture_dir() / "aliases.json");
  const auto with = entity_match_accuracy(records, aliases);
  CHECK(std::abs(with.category_rates.at("disease") - 11.0 / 16.0) < kTol);
  CHECK(std::abs(*with.overall - 9.0 / 16.0) < kTol);
  CHECK(std::abs(*with.micro - 13.0 / 23.0) < kTol);
}

TEST_CASE("hits@1 on twenty records") {
  const auto records = fixture("hits_twenty.jsonl");
  REQUIRE(records.size() == 20);
  const auto aliases = read_aliases(fixture_dir() / "aliases.json");
  CHECK(std::abs(*hits_at_1(records, aliases).hits_at_1 - 0.65) < kTol);
  CHECK(std::abs(*hits_at_1(records).hits_at_1 - 0.60) < kTol);
}

TEST_CASE("matching is whole-token") {
  CHECK(entity_hit("Laryngitis!", "laryngitis"));
  CHECK_FALSE(entity_hit("laryngitises", "laryngitis"));
  CHECK_FALSE(entity_hit("polyp", "vocal cord polyp"));
  CHECK(entity_hit("the VOCAL cord polyp", "Vocal Cord Polyp"));
}

TEST_CASE("no gold labels is an error") {
  const std::vector<EvalRecord> none = {rec("x", {}), rec("y", {{"symptom", {"fever"}}})};
  CHECK_THROWS_AS(entity_match_accuracy(none), EvalError);
  CHECK_THROWS_AS(hits_at_1(std::vector<EvalRecord>{rec("x", {})}), EvalError);
}

TEST_CASE("degraded records are scored and counted") {
  const std::vector<EvalRecord> records = {rec("ibuprofen", {{"medication", {"ibuprofen"}}}, true),
                                           rec("", {{"medication", {"ibuprofen"}}})};
  const auto r = entity_match_accuracy(records);
  CHECK(r.degraded == 1);
  CHECK(*r.overall == 0.5);
  std::istringstream in(R"({"id":"a","status":"degraded","answer":"x","gold":{"test":"mri"}})");
  const auto parsed = read_eval_records(in);
  CHECK(parsed[0].degraded);
  CHECK(parsed[0].gold.at("test") == std::vector<std::string>{"mri"});
}

TEST_CASE("property: bounds, permutation invariance and monotonicity") {
  std::mt19937 rng(11);
  const std::vector<std::string> vocab = {"laryngitis", "migraine", "ibuprofen", "mri",
                                          "common cold", "omeprazole", "biopsy"};
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::uniform_int_distribution<int> count(1, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<EvalRecord> records;
    const int n = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) {
      EvalRecord r;
      for (const char *c : kEntityCategories) {
        if (rng() % 2) continue;
        for (int j = count(rng); j > 0; --j) r.gold[c].push_back(vocab[pick(rng)]);
      }
      if (r.gold.empty()) r.gold["disease"].push_back(vocab[pick(rng)]);
      for (int j = count(rng) - 1; j > 0; --j) r.answer += vocab[pick(rng)] + ". ";
      records.push_back(std::move(r));
    }
    const auto base = entity_match_accuracy(records);
    CHECK(*base.overall >= 0.0);
    CHECK(*base.overall <= 1.0);

    auto shuffled = records;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(std::abs(*entity_match_accuracy(shuffled).overall - *base.overall) < kTol);

    // Mentioning one more gold entity never lowers the score.
    auto better = records;
    auto &target = better[rng() % better.size()];
    target.answer += " " + target.gold.begin()->second.front();
    const auto improved = entity_match_accuracy(better);
    CHECK(*improved.overall >= *base.overall - kTol);
    for (const auto &[c, rate] : base.category_rates) {
      CHECK(improved.category_rates.at(c) >= rate - kTol);
    }
  }
}

TEST_CASE("report json") {
  const auto j = entity_match_accuracy(fixture("eval_ten.jsonl")).to_json();
  CHECK(j["records"] == 10);
  CHECK(j["questions"].size() == 10);
  CHECK(j["hits_at_1"].is_null());
}
