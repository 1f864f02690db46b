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

#include <sstream>

#include "oracles.hpp"
#include "qrelx/errors.hpp"
#include "qrelx/expansion.hpp"
#include "qrelx/vector_io.hpp"

using namespace qrelx;

namespace {

Run make_run(const std::string& tag, const std::string& q, int n, const std::string& prefix = "d") {
  Run r{tag, {}};
  for (int i = 1; i <= n; ++i) r.entries.push_back({q, prefix + std::to_string(i), i, 1.0 / i, tag});
  return r;
}

DocumentVectors vecs(std::vector<std::pair<std::string, std::vector<double>>> items) {
  std::vector<std::string> ids;
  RowMatrix m(static_cast<Eigen::Index>(items.size()), static_cast<Eigen::Index>(items[0].second.size()));
  for (std::size_t i = 0; i < items.size(); ++i) {
    ids.push_back(items[i].first);
    for (std::size_t j = 0; j < items[i].second.size(); ++j) m(i, j) = items[i].second[j];
  }
  return DocumentVectors(ids, m);
}

std::vector<ScoredCandidate> flat(int n, double dist = 0.5) {
  std::vector<ScoredCandidate> s;
  for (int i = 0; i < n; ++i) s.push_back({"q" + std::to_string(i % 3), "d" + std::to_string(100 + i), dist});
  std::sort(s.begin(), s.end(), scored_less);
  return s;
}

}  // namespace

TEST_CASE("pool_candidates examples") {
  std::vector<Run> one{make_run("a", "1", 150)};
  auto pool = pool_candidates(one, 100);
  CHECK(pool["1"].size() == 100);
  std::vector<Run> two{make_run("a", "1", 150), make_run("b", "1", 150)};
  CHECK(pool_candidates(two, 100) == pool);
  std::vector<Run> mixed{make_run("a", "1", 5), make_run("b", "1", 5, "x"), make_run("c", "2", 3)};
  auto m = pool_candidates(mixed, 2);
  CHECK(m["1"] == std::set<std::string>{"d1", "d2", "x1", "x2"});
  CHECK(m["2"].size() == 2);
  CHECK_THROWS_AS(pool_candidates(one, 0), std::invalid_argument);
}

TEST_CASE("pool_from_qrels caps in file order") {
  std::vector<QrelRecord> q{{"1", "z", 1}, {"1", "a", 0}, {"1", "m", 1}, {"2", "b", 1}};
  auto p = pool_from_qrels(q, 2);
  CHECK(p["1"] == std::set<std::string>{"z", "a"});
  CHECK(p["2"] == std::set<std::string>{"b"});
  CHECK(pool_from_qrels(q, std::nullopt)["1"].size() == 3);
}

TEST_CASE("score_candidates examples") {
  auto v = vecs({{"p1", {1, 0}}, {"p2", {0, 1}}, {"c1", {1, 0}}, {"c2", {1, 1}}, {"c3", {-1, 0}}});
  CandidatePool pool{{"q", {"c1", "c2", "c3", "p1"}}};
  std::vector<QrelRecord> pos{{"q", "p1", 1}, {"q", "p2", 1}};
  const auto s = score_candidates(pool, pos, v);
  REQUIRE(s.size() == 3);  // p1 excluded
  CHECK(s[0].doc_id == "c1");
  CHECK(s[0].min_distance == 0.0);
  CHECK(s[1].doc_id == "c2");
  CHECK(s[1].min_distance == doctest::Approx(1 - 1 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(s[2].doc_id == "c3");
  CHECK(s[2].min_distance == doctest::Approx(1.0).epsilon(1e-12));

  CandidatePool orphan{{"other", {"c1"}}};
  CHECK_THROWS_AS(score_candidates(orphan, pos, v), DataError);
  CandidatePool missing{{"q", {"ghost"}}};
  CHECK_THROWS_AS(score_candidates(missing, pos, v), DataError);
}

TEST_CASE("minimum over positives: 0.3 and 0.7 gives 0.3") {
  // construct vectors at cosine distances 0.3 and 0.7 from the candidate
  auto at = [](double d) { return std::vector<double>{1 - d, std::sqrt(1 - (1 - d) * (1 - d))}; };
  auto v = vecs({{"c", {1, 0}}, {"a", at(0.3)}, {"b", at(0.7)}});
  CandidatePool pool{{"q", {"c"}}};
  std::vector<QrelRecord> pos{{"q", "a", 1}, {"q", "b", 1}};
  const auto s = score_candidates(pool, pos, v);
  REQUIRE(s.size() == 1);
  CHECK(s[0].min_distance == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("score_candidates brute-force and monotonicity properties") {
  SplitMix64 rng(21);
  std::vector<std::pair<std::string, std::vector<double>>> items;
  for (int i = 0; i < 60; ++i) {
    std::vector<double> x(6);
    for (auto& t : x) t = rng.uniform() - 0.3;
    items.push_back({"d" + std::to_string(i), x});
  }
  const auto v = vecs(items);
  CandidatePool pool;
  std::vector<QrelRecord> pos;
  for (int q = 0; q < 4; ++q) {
    for (int j = 0; j < 15; ++j) pool["q" + std::to_string(q)].insert("d" + std::to_string(rng.below(60)));
    for (int j = 0; j < 3; ++j) {
      QrelRecord r{"q" + std::to_string(q), "d" + std::to_string(rng.below(60)), 1};
      if (std::find(pos.begin(), pos.end(), r) == pos.end()) pos.push_back(r);
    }
  }
  const auto s = score_candidates(pool, pos, v);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK_FALSE(scored_less(s[i], s[i - 1]));
  for (const auto& c : s) {
    for (const auto& p : pos) {
      if (p.query_id != c.query_id) continue;
      CHECK(p.doc_id != c.doc_id);
      CHECK(c.min_distance <= cosine_distance(v.row(*v.find(c.doc_id)), v.row(*v.find(p.doc_id))));
    }
  }
  // adding a positive never raises a distance
  auto more = pos;
  more.push_back({"q0", "d59", 1});
  const auto s2 = score_candidates(pool, more, v);
  std::map<std::pair<std::string, std::string>, double> before;
  for (const auto& c : s) before[{c.query_id, c.doc_id}] = c.min_distance;
  for (const auto& c : s2) {
    auto it = before.find({c.query_id, c.doc_id});
    REQUIRE(it != before.end());
    CHECK(c.min_distance <= it->second);
  }
}

TEST_CASE("decile_table examples and invariants") {
  auto ten = flat(10);
  auto r = decile_table(ten, {});
  for (const auto& row : r) CHECK(row.pair_count == 1);

  std::vector<ScoredCandidate> twenty;
  for (int i = 0; i < 20; ++i) twenty.push_back({"q", "d" + std::to_string(10 + i), i * 0.01});
  std::vector<QrelRecord> truth{{"q", "d10", 1}, {"q", "d11", 1}, {"q", "d12", 0}};
  r = decile_table(twenty, truth);
  CHECK(r[0].positive_fraction == 1.0);
  for (int d = 1; d < 10; ++d) CHECK(r[d].positive_fraction == 0.0);
  CHECK(r[0].decile == 1);
  CHECK(r[9].decile == 10);

  CHECK_THROWS_AS(decile_table({}, truth), DataError);

  for (int n = 1; n <= 57; ++n) {
    const auto s = flat(n);
    const auto rep = decile_table(s, {});
    std::size_t total = 0, lo = n, hi = 0;
    for (const auto& row : rep) {
      total += row.pair_count;
      lo = std::min(lo, row.pair_count);
      hi = std::max(hi, row.pair_count);
    }
    CHECK(total == static_cast<std::size_t>(n));
    CHECK(hi - lo <= 1);
  }
}

TEST_CASE("select_pseudo_qrels examples") {
  CHECK(select_pseudo_qrels(flat(100), 10).size() == 10);
  CHECK(select_pseudo_qrels(flat(100), 0).empty());
  CHECK(select_pseudo_qrels(flat(37), 100).size() == 37);
  CHECK(select_pseudo_qrels(flat(100), 29).size() == 29);
  CHECK(select_pseudo_qrels(flat(7), 50).size() == 3);
  CHECK_THROWS_AS(select_pseudo_qrels(flat(3), 101), std::invalid_argument);
  CHECK_THROWS_AS(select_pseudo_qrels(flat(3), -1), std::invalid_argument);

  // all distances equal, N=10, K=50 -> 5 smallest by (query, doc)
  const auto s = flat(10);
  const auto p = select_pseudo_qrels(s, 50);
  REQUIRE(p.size() == 5);
  std::vector<std::pair<std::string, std::string>> keys;
  for (const auto& c : s) keys.push_back({c.query_id, c.doc_id});
  std::sort(keys.begin(), keys.end());
  for (int i = 0; i < 5; ++i) {
    CHECK(p[i].query_id == keys[i].first);
    CHECK(p[i].doc_id == keys[i].second);
    CHECK(p[i].relevance == 1);
  }

  for (int n = 0; n < 60; ++n) {
    for (double k : {0.0, 1.0, 2.5, 5.0, 10.0, 33.3, 100.0}) {
      const auto want = static_cast<std::size_t>(std::floor(k * n / 100.0 + 1e-12));
      CHECK(select_pseudo_qrels(flat(n), k).size() == want);
    }
  }
}

TEST_CASE("merge_qrels examples") {
  std::vector<QrelRecord> x{{"1", "a", 2}, {"1", "b", 0}};
  std::vector<QrelRecord> p{{"1", "b", 1}, {"2", "c", 1}};
  CHECK(merge_qrels(x, {}) == x);
  CHECK(merge_qrels({}, p) == p);
  std::size_t collisions = 99;
  const auto m = merge_qrels(x, p, &collisions);
  CHECK(collisions == 1);
  REQUIRE(m.size() == 3);
  CHECK(m[1] == QrelRecord{"1", "b", 0});
  std::vector<QrelRecord> same{{"1", "a", 1}};
  CHECK(merge_qrels(same, same).size() == 1);
  CHECK(merge_qrels(same, same)[0].relevance == 1);
}

TEST_CASE("scored CSV round trip and deciles CSV") {
  std::vector<ScoredCandidate> s{{"q,1", "d\"x", 0.123456789}, {"q2", "d", 1.0}};
  std::stringstream buf;
  write_scored_csv(buf, s);
  CHECK(buf.str().find("query_id,doc_id,min_distance\n") == 0);
  CHECK(buf.str().find("0.123456789") != std::string::npos);
  const auto back = read_scored_csv(buf);
  REQUIRE(back.size() == 2);
  CHECK(back[0].query_id == "q,1");
  CHECK(back[0].doc_id == "d\"x");

  std::stringstream d;
  write_deciles_csv(d, decile_table(flat(10), {}));
  CHECK(d.str().rfind("decile,count,positive_fraction\n1,1,0.000000000\n", 0) == 0);
}

TEST_CASE("vector set binary round trip") {
  auto v = vecs({{"a", {1.5, -2}}, {"b", {0, 3}}});
  std::stringstream buf;
  save_vectors(buf, v);
  CHECK(buf.str().substr(0, 4) == "QXV1");
  const auto back = load_vectors(buf);
  CHECK(back.ids() == v.ids());
  CHECK(back.matrix() == v.matrix());
}
