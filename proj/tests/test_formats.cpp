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
#include <regex>
#include <set>
#include <sstream>

#include "qrelx/errors.hpp"
#include "qrelx/formats.hpp"
#include "qrelx/random.hpp"
#include "qrelx/text.hpp"

using namespace qrelx;

namespace {

std::vector<QrelRecord> qrels_from(const std::string& s) {
  std::istringstream in(s);
  return parse_qrels(in);
}

std::vector<RunEntry> run_from(const std::string& s, Warnings* w = nullptr) {
  std::istringstream in(s);
  return parse_run(in, w);
}

}  // namespace

TEST_CASE("parse_qrels examples") {
  auto q = qrels_from("1 0 87049087 1\n");
  REQUIRE(q.size() == 1);
  CHECK(q[0] == QrelRecord{"1", "87049087", 1});

  q = qrels_from("401 0 FBIS3-10082 0\n");
  CHECK(q[0] == QrelRecord{"401", "FBIS3-10082", 0});
  CHECK_FALSE(q[0].relevant());

  CHECK_THROWS_AS(qrels_from("1 0 d1 1\n1 0 d1 1\n"), DuplicateError);
}

TEST_CASE("parse_qrels errors carry the line number") {
  try {
    qrels_from("1 0 d1 1\n\n1 0 d2\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(qrels_from("1 0 d1 x\n"), ParseError);
  CHECK_THROWS_AS(qrels_from("1 0 d1 -1\n"), ParseError);
  CHECK_THROWS_AS(qrels_from("1 0 d1 1 extra\n"), ParseError);
  CHECK(qrels_from("").empty());
  CHECK(qrels_from("\n  \n").size() == 0);
}

TEST_CASE("parse_run examples") {
  auto r = run_from("401 Q0 FBIS3-10082 1 13.74 BM25\n");
  REQUIRE(r.size() == 1);
  CHECK(r[0] == RunEntry{"401", "FBIS3-10082", 1, 13.74, "BM25"});

  CHECK_THROWS_AS(run_from("1 Q0 d9 2 0.5 t\n1 Q0 d9 3 0.4 t\n"), DataError);
  CHECK(run_from("").empty());
  CHECK_THROWS_AS(run_from("1 Q0 d1 one 0.5 t\n"), ParseError);
  CHECK_THROWS_AS(run_from("1 Q0 d1 1 abc t\n"), ParseError);
  CHECK_THROWS_AS(run_from("1 Q0 d1 1 0.5\n"), ParseError);
}

TEST_CASE("parse_run recomputes inconsistent ranks with a warning") {
  Warnings w;
  auto r = run_from("1 Q0 a 1 0.1 t\n1 Q0 b 2 0.9 t\n1 Q0 c 3 0.9 t\n", &w);
  REQUIRE(r.size() == 3);
  CHECK(r[0].doc_id == "b");
  CHECK(r[1].doc_id == "c");
  CHECK(r[2].doc_id == "a");
  CHECK(r[0].rank == 1);
  CHECK(r[2].rank == 3);
  CHECK_FALSE(w.empty());

  w.clear();
  run_from("1 Q0 a 1 0.9 t\n1 Q0 b 2 0.1 t\n", &w);
  CHECK(w.empty());
}

TEST_CASE("parse_run groups queries in input order") {
  auto r = run_from("2 Q0 a 1 1 t\n1 Q0 b 1 1 t\n2 Q0 c 2 0.5 t\n");
  REQUIRE(r.size() == 3);
  CHECK(r[0].query_id == "2");
  CHECK(r[1].query_id == "2");
  CHECK(r[2].query_id == "1");
}

TEST_CASE("write_qrels examples") {
  std::vector<QrelRecord> one{{"1", "d1", 1}};
  CHECK(write_qrels(one) == "1 0 d1 1\n");
  CHECK(write_qrels({}) == "");
  std::vector<QrelRecord> two{{"2", "b", 1}, {"1", "a", 1}};
  CHECK(write_qrels(two) == "1 0 a 1\n2 0 b 1\n");
}

TEST_CASE("write_run examples") {
  std::vector<RunEntry> one{{"1", "d1", 1, 2.0, "t"}};
  CHECK(write_run(one) == "1 Q0 d1 1 2 t\n");
  CHECK(write_run({}) == "");
  std::vector<RunEntry> two{{"2", "x", 1, 1.0, "t"}, {"1", "y", 1, 1.0, "t"}};
  CHECK(write_run(two) == "1 Q0 y 1 1 t\n2 Q0 x 1 1 t\n");
}

TEST_CASE("format_score") {
  CHECK(format_score(2.0) == "2");
  CHECK(format_score(13.74) == "13.74");
  CHECK(format_score(0.1234567) == "0.123457");
  CHECK(format_score(-0.0) == "0");
  CHECK(format_score(1234567.0) == "1.23457e+06");
}

TEST_CASE("qrels round trip property") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<QrelRecord> recs;
    std::set<std::pair<std::string, std::string>> seen;
    const int n = static_cast<int>(rng.below(40));
    while (static_cast<int>(recs.size()) < n) {
      QrelRecord r{"q" + std::to_string(rng.below(5)), "doc" + std::to_string(rng.below(30)),
                   static_cast<int>(rng.below(3))};
      if (seen.insert({r.query_id, r.doc_id}).second) recs.push_back(r);
    }
    const auto text = write_qrels(recs);
    auto parsed = qrels_from(text);
    auto sorted = recs;
    std::sort(sorted.begin(), sorted.end(), qrel_less);
    CHECK(parsed == sorted);
    CHECK(write_qrels(parsed) == text);
  }
}

TEST_CASE("run write is idempotent for arbitrary scores") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<RunEntry> entries;
    for (int q = 0; q < 3; ++q) {
      const int n = 1 + static_cast<int>(rng.below(15));
      for (int i = 0; i < n; ++i) {
        entries.push_back({"q" + std::to_string(q), "d" + std::to_string(i), 0, rng.uniform() * 100.0 - 20.0, "sys"});
      }
      auto first = entries.end() - n;
      std::sort(first, entries.end(), [](const RunEntry& a, const RunEntry& b) {
        return a.score != b.score ? a.score > b.score : a.doc_id < b.doc_id;
      });
      for (int i = 0; i < n; ++i) first[i].rank = i + 1;
    }
    const auto w1 = write_run(entries);
    const auto w2 = write_run(run_from(w1));
    const auto w3 = write_run(run_from(w2));
    CHECK(w2 == w3);
  }
}

TEST_CASE("split_runs keeps tags in first-seen order") {
  auto runs = split_runs(run_from("1 Q0 a 1 1 zeta\n1 Q0 a 1 1 alpha\n2 Q0 b 1 1 zeta\n"));
  REQUIRE(runs.size() == 2);
  CHECK(runs[0].tag == "zeta");
  CHECK(runs[0].entries.size() == 2);
  CHECK(runs[1].tag == "alpha");
}

TEST_CASE("parse_ohsumed") {
  const std::string two =
      ".I 1\n.U\n87049087\n.S\nAm J Emerg Med 8703; 4(6):491-5\n.M\nAcetaminophen.\n.T\nRefibrillation.\n"
      ".P\nJOURNAL ARTICLE.\n.W\nSixty patients were studied.\n.A\nStueven HA.\n"
      ".I 2\n.U\n87049088\n.T\nA title only.\n";
  std::istringstream in(two);
  Warnings w;
  const auto docs = parse_ohsumed(in, &w);
  REQUIRE(docs.size() == 2);
  CHECK(docs[0] == RawDocument{"87049087", "Sixty patients were studied."});
  CHECK(docs[1] == RawDocument{"87049088", ""});
  CHECK(w.empty());

  std::istringstream missing(".I 1\n.T\ntitle\n.W\nabstract\n");
  CHECK_THROWS_AS(parse_ohsumed(missing), ParseError);

  std::istringstream unknown(".I 1\n.U\n5\n.X\nsomething\n.W\nabc\n");
  w.clear();
  const auto u = parse_ohsumed(unknown, &w);
  REQUIRE(u.size() == 1);
  CHECK(u[0].text == "abc");
  CHECK(w.size() == 1);
}

TEST_CASE("parse_trec_sgml") {
  std::istringstream in("<DOC>\n<DOCNO> FBIS3-1 </DOCNO>\n<TEXT>\nplain line\n</TEXT>\n</DOC>\n");
  const auto docs = parse_trec_sgml(in);
  REQUIRE(docs.size() == 1);
  CHECK(docs[0] == RawDocument{"FBIS3-1", "plain line"});

  std::istringstream tagged("<DOC>\n<DOCNO>X</DOCNO>\n<P>one</P>\n<F P=100>two</F>\n</DOC>\n");
  const auto t = parse_trec_sgml(tagged);
  REQUIRE(t.size() == 1);
  CHECK(t[0].text == "");

  std::istringstream kept("<DOC>\n<DOCNO>Y</DOCNO>\ncost < 5 and > 3\nsecond\n</DOC>\n");
  const auto k = parse_trec_sgml(kept);
  REQUIRE(k.size() == 1);
  CHECK(k[0].text == "cost < 5 and > 3\nsecond");

  std::istringstream no_id("<DOC>\n<TEXT>\nx\n</TEXT>\n</DOC>\n");
  CHECK_THROWS_AS(parse_trec_sgml(no_id), ParseError);
  std::istringstream open("<DOC>\n<DOCNO>Z</DOCNO>\ntext\n");
  CHECK_THROWS_AS(parse_trec_sgml(open), ParseError);
}

TEST_CASE("has_markup matches the line pattern") {
  const std::regex pattern("<[A-Za-z/][^>]*>");
  const std::vector<std::string> lines{"cost < 5 and > 3", "<p>", "</TEXT>", "a <b c> d", "<1>", "<>", "< a>",
                                       "x<y", "<a", "a>b<c", "<a\nb>", "<<a>"};
  for (const auto& l : lines) {
    CHECK_MESSAGE(has_markup(l) == std::regex_search(l, pattern), l);
  }
  SplitMix64 rng(3);
  const std::string alphabet = "<>/aZ1 x";
  for (int i = 0; i < 2000; ++i) {
    std::string l;
    const auto n = rng.below(10);
    for (std::uint64_t j = 0; j < n; ++j) l += alphabet[rng.below(alphabet.size())];
    CHECK_MESSAGE(has_markup(l) == std::regex_search(l, pattern), l);
  }
}

TEST_CASE("parse_trec_sgml never emits markup lines") {
  SplitMix64 rng(5);
  const std::vector<std::string> pieces{"<P>", "</P>", "plain", "a < b", "x > y", "<F P=1>", "tag<i>x</i>", ""};
  for (int trial = 0; trial < 200; ++trial) {
    std::string doc = "<DOC>\n<DOCNO>D" + std::to_string(trial) + "</DOCNO>\n";
    const auto n = rng.below(8);
    for (std::uint64_t j = 0; j < n; ++j) doc += pieces[rng.below(pieces.size())] + "\n";
    doc += "</DOC>\n";
    std::istringstream in(doc);
    const auto docs = parse_trec_sgml(in);
    REQUIRE(docs.size() == 1);
    std::istringstream body(docs[0].text);
    std::string line;
    while (std::getline(body, line)) CHECK_FALSE(has_markup(line));
  }
}

TEST_CASE("corpus TSV round trip with escapes") {
  std::vector<RawDocument> docs{{"a", "tab\there"}, {"b", "line\nbreak\\slash\r"}, {"c", ""}};
  const auto text = write_corpus_tsv(docs);
  std::istringstream in(text);
  CHECK(parse_corpus_tsv(in) == docs);
}

TEST_CASE("invalid UTF-8 is replaced") {
  std::string bad = "ab\xff\xfe" "c";
  const auto s = text::sanitize_utf8(bad);
  CHECK(s == "ab\xEF\xBF\xBD\xEF\xBF\xBD" "c");
  CHECK(text::sanitize_utf8("h\xC3\xA9llo") == "h\xC3\xA9llo");
}

TEST_CASE("parsers are pure") {
  const std::string q = "3 0 z 1\n1 0 a 2\n";
  CHECK(qrels_from(q) == qrels_from(q));
  const std::string r = "1 Q0 a 1 0.5 t\n";
  CHECK(run_from(r) == run_from(r));
}
