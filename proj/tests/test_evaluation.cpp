// Copyright 2026 The qrelx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "oracles.hpp"
#include "qrelx/errors.hpp"
#include "qrelx/evaluation.hpp"

using namespace qrelx;

namespace {

Run run_of(const std::string& tag, std::vector<std::pair<std::string, std::vector<std::string>>> per_query) {
  Run r{tag, {}};
  for (auto& [q, docs] : per_query) {
    for (std::size_t i = 0; i < docs.size(); ++i) {
      r.entries.push_back({q, docs[i], static_cast<int>(i + 1), 100.0 - i, tag});
    }
  }
  return r;
}

std::vector<SystemScore> scores_of(const std::vector<double>& maps) {
  std::vector<SystemScore> s;
  for (std::size_t i = 0; i < maps.size(); ++i) s.push_back({"s" + std::to_string(i), maps[i], {}});
  return s;
}

}  // namespace

TEST_CASE("average_precision examples") {
  std::vector<std::string> r{"d1", "d2", "d3"};
  std::vector<QrelRecord> q1{{"q", "d1", 1}, {"q", "d3", 1}};
  CHECK(average_precision(r, q1) == doctest::Approx((1.0 + 2.0 / 3.0) / 2.0).epsilon(1e-15));
  CHECK(average_precision(r, q1) == doctest::Approx(0.833333).epsilon(1e-6));
  std::vector<QrelRecord> q2{{"q", "d1", 1}, {"q", "d4", 1}};
  CHECK(average_precision(r, q2) == 0.5);
  std::vector<QrelRecord> q3{{"q", "d1", 1}, {"q", "d2", 2}};
  CHECK(average_precision(r, q3) == 1.0);
  std::vector<QrelRecord> none{{"q", "d1", 0}};
  CHECK_THROWS_AS(average_precision(r, none), DataError);
  CHECK(average_precision(r, q1, 1) == 0.5);
}

TEST_CASE("average_precision equals the prefix oracle (exhaustive, n <= 6)") {
  for (int n = 1; n <= 6; ++n) {
    std::vector<std::string> docs;
    for (int i = 0; i < n; ++i) docs.push_back("d" + std::to_string(i));
    for (int mask = 1; mask < (1 << (n + 1)); ++mask) {
      // bit n marks an extra relevant document that is never retrieved
      std::set<std::string> rel;
      for (int i = 0; i <= n; ++i) {
        if (mask & (1 << i)) rel.insert("d" + std::to_string(i));
      }
      auto perm = docs;
      do {
        std::unordered_set<std::string> urel(rel.begin(), rel.end());
        const double got = average_precision(perm, urel, 1000);
        const double want = oracle::average_precision(perm, rel, 1000);
        REQUIRE(std::abs(got - want) < 1e-12);
      } while (std::next_permutation(perm.begin(), perm.end()) && n <= 5);
    }
  }
}

TEST_CASE("AP invariances") {
  std::vector<std::string> r{"a", "x", "b", "y", "z"};
  std::unordered_set<std::string> rel{"a", "b"};
  const double ap = average_precision(r, rel);
  std::vector<std::string> r2{"a", "x", "b", "z", "y"};
  CHECK(average_precision(r2, rel) == ap);
  // a never-retrieved relevant doc can only lower AP
  std::unordered_set<std::string> more{"a", "b", "w"};
  CHECK(average_precision(r, more) < ap);
  CHECK(ap >= 0.0);
  CHECK(ap <= 1.0);
}

TEST_CASE("mean_average_precision examples") {
  std::vector<QrelRecord> q{{"1", "a", 1}, {"1", "b", 1}, {"2", "c", 1}, {"3", "z", 0}};
  // q1: a at 1, b missing -> 0.5; q2: c at 1 -> 1.0
  const auto s = mean_average_precision(run_of("t", {{"1", {"a", "x"}}, {"2", {"c"}}}), q);
  CHECK(s.map == 0.75);
  CHECK(s.per_query_ap.size() == 2);  // query 3 has no positive

  const auto missing = mean_average_precision(run_of("t", {{"1", {"a", "b"}}}), q);
  CHECK(missing.per_query_ap.at("2") == 0.0);
  CHECK(missing.map == 0.5);

  const auto ideal = mean_average_precision(run_of("t", {{"1", {"b", "a"}}, {"2", {"c"}}}), q);
  CHECK(ideal.map == 1.0);

  std::vector<QrelRecord> negative_only{{"1", "a", 0}};
  CHECK_THROWS_AS(mean_average_precision(run_of("t", {}), negative_only), DataError);
}

TEST_CASE("rank_systems ordering and errors") {
  std::vector<QrelRecord> q{{"1", "a", 1}, {"1", "b", 1}, {"1", "c", 1}};
  std::vector<Run> runs{run_of("low", {{"1", {"x", "y", "a"}}}), run_of("high", {{"1", {"a", "b", "c"}}}),
                        run_of("mid", {{"1", {"a", "x", "b"}}}), run_of("amid", {{"1", {"a", "x", "b"}}})};
  const auto s = rank_systems(runs, q);
  REQUIRE(s.size() == 4);
  CHECK(s[0].run_tag == "high");
  CHECK(s[1].run_tag == "amid");
  CHECK(s[2].run_tag == "mid");
  CHECK(s[3].run_tag == "low");
  runs.push_back(run_of("low", {}));
  CHECK_THROWS_AS(rank_systems(runs, q), DataError);
}

TEST_CASE("kendall_tau examples") {
  CHECK(kendall_tau(scores_of({3, 2, 1}), scores_of({3, 2, 1})).tau == 1.0);
  CHECK(kendall_tau(scores_of({3, 2, 1}), scores_of({1, 2, 3})).tau == -1.0);
  const auto swap = kendall_tau(scores_of({3, 2, 1}), scores_of({3, 1, 2}));
  CHECK(swap.tau == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(swap.concordant == 2);
  CHECK(swap.discordant == 1);

  CHECK_THROWS_AS(kendall_tau(scores_of({1, 2}), scores_of({1, 2, 3})), DataError);
  auto renamed = scores_of({1, 2});
  renamed[1].run_tag = "other";
  CHECK_THROWS_AS(kendall_tau(scores_of({1, 2}), renamed), DataError);
  CHECK_THROWS_AS(kendall_tau(scores_of({1, 1, 1}), scores_of({1, 2, 3})), NumericError);
}

TEST_CASE("kendall_tau matches O(n^2) counting, symmetric") {
  SplitMix64 rng(31);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.below(60);
    std::vector<double> a(n), b(n);
    const std::uint64_t levels = 1 + rng.below(8);
    for (auto& x : a) x = static_cast<double>(rng.below(levels * 3));
    for (auto& x : b) x = static_cast<double>(rng.below(levels * 3));
    const auto c = oracle::kendall(a, b);
    auto sa = scores_of(a), sb = scores_of(b);
    std::reverse(sb.begin(), sb.end());  // order of the inputs must not matter
    const bool defined = (c.concordant + c.discordant + c.ties_b) > 0 && (c.concordant + c.discordant + c.ties_a) > 0;
    if (!defined) {
      CHECK_THROWS_AS(kendall_tau(sa, sb), NumericError);
      continue;
    }
    const auto k = kendall_tau(sa, sb);
    CHECK(k.concordant == c.concordant);
    CHECK(k.discordant == c.discordant);
    CHECK(k.ties_a == c.ties_a);
    CHECK(k.ties_b == c.ties_b);
    CHECK(k.ties_both == c.ties_both);
    CHECK(k.concordant + k.discordant + k.ties_a + k.ties_b + k.ties_both == n * (n - 1) / 2);
    CHECK(k.tau == c.tau);
    CHECK(kendall_tau(sb, sa).tau == k.tau);
  }
}

TEST_CASE("scores CSV round trip") {
  std::vector<SystemScore> s{{"BM25", 0.25, {{"1", 0.5}, {"2", 0.0}}}, {"TF,IDF", 0.125, {}}};
  std::stringstream buf;
  write_scores_csv(buf, s);
  CHECK(buf.str() == "run_tag,map\nBM25,0.250000000\n\"TF,IDF\",0.125000000\n");
  const auto back = read_scores_csv(buf);
  REQUIRE(back.size() == 2);
  CHECK(back[1].run_tag == "TF,IDF");
  CHECK(back[1].map == 0.125);
  std::stringstream pq;
  write_per_query_csv(pq, s);
  CHECK(pq.str() == "run_tag,query_id,ap\nBM25,1,0.500000000\nBM25,2,0.000000000\n");
}
