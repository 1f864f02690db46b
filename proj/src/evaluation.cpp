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

#include "qrelx/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "qrelx/csv.hpp"
#include "qrelx/errors.hpp"
#include "qrelx/text.hpp"

namespace qrelx {

RelevanceIndex::RelevanceIndex(std::span<const QrelRecord> qrels) {
  for (const auto& r : qrels) {
    if (r.relevant()) relevant_[r.query_id].insert(r.doc_id);
  }
  queries_.reserve(relevant_.size());
  for (const auto& [q, docs] : relevant_) queries_.push_back(q);
  std::sort(queries_.begin(), queries_.end());
}

const std::unordered_set<std::string>* RelevanceIndex::relevant(const std::string& query) const {
  auto it = relevant_.find(query);
  return it == relevant_.end() ? nullptr : &it->second;
}

double average_precision(std::span<const std::string> ranked_docs, const std::unordered_set<std::string>& relevant,
                         int depth) {
  if (relevant.empty()) throw DataError("average precision is undefined without relevant documents");
  const std::size_t limit = std::min(ranked_docs.size(), static_cast<std::size_t>(std::max(depth, 0)));
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < limit; ++i) {
    if (relevant.contains(ranked_docs[i])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(relevant.size());
}

double average_precision(std::span<const std::string> ranked_docs, std::span<const QrelRecord> qrels_for_query,
                         int depth) {
  std::unordered_set<std::string> relevant;
  for (const auto& r : qrels_for_query) {
    if (r.relevant()) relevant.insert(r.doc_id);
  }
  return average_precision(ranked_docs, relevant, depth);
}

SystemScore mean_average_precision(const Run& run, const RelevanceIndex& qrels, int depth) {
  if (qrels.queries().empty()) throw DataError("qrels contain no relevant judgement");

  std::unordered_map<std::string, std::vector<const RunEntry*>> by_query;
  for (const auto& e : run.entries) by_query[e.query_id].push_back(&e);

  SystemScore score{run.tag, 0.0, {}};
  std::vector<std::string> ranked;
  double total = 0.0;
  for (const auto& q : qrels.queries()) {
    double ap = 0.0;
    if (auto it = by_query.find(q); it != by_query.end()) {
      auto& es = it->second;
      std::stable_sort(es.begin(), es.end(), [](auto* a, auto* b) { return a->rank < b->rank; });
      ranked.clear();
      for (auto* e : es) ranked.push_back(e->doc_id);
      ap = average_precision(ranked, *qrels.relevant(q), depth);
    }
    score.per_query_ap.emplace(q, ap);
    total += ap;
  }
  score.map = total / static_cast<double>(qrels.queries().size());
  return score;
}

SystemScore mean_average_precision(const Run& run, std::span<const QrelRecord> qrels, int depth) {
  return mean_average_precision(run, RelevanceIndex(qrels), depth);
}

std::vector<SystemScore> rank_systems(std::span<const Run> runs, std::span<const QrelRecord> qrels, int depth) {
  std::set<std::string> tags;
  for (const auto& r : runs) {
    if (!tags.insert(r.tag).second) throw DataError("duplicate run tag " + r.tag);
  }
  const RelevanceIndex index(qrels);
  if (index.queries().empty()) throw DataError("qrels contain no relevant judgement");

  std::vector<SystemScore> scores(runs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(runs.size()); ++i) {
    scores[i] = mean_average_precision(runs[i], index, depth);
  }
  std::sort(scores.begin(), scores.end(), [](const SystemScore& a, const SystemScore& b) {
    if (a.map != b.map) return a.map > b.map;
    return a.run_tag < b.run_tag;
  });
  return scores;
}

namespace {

std::uint64_t tied_pairs(std::uint64_t run_length) { return run_length * (run_length - 1) / 2; }

// Sorts `v` ascending and returns the number of inversions removed.
std::uint64_t merge_count(std::vector<double>& v, std::vector<double>& scratch, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = merge_count(v, scratch, lo, mid) + merge_count(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += mid - i;
      scratch[k++] = v[j++];
    } else {
      scratch[k++] = v[i++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo), scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

RankingComparison kendall_tau(std::span<const SystemScore> a, std::span<const SystemScore> b) {
  if (a.size() != b.size()) throw DataError("kendall_tau: the two rankings cover different systems");
  const std::size_t n = a.size();
  if (n < 2) throw DataError("kendall_tau needs at least two systems");

  std::unordered_map<std::string, double> b_map;
  for (const auto& s : b) b_map.emplace(s.run_tag, s.map);
  std::vector<std::pair<double, double>> xy;
  xy.reserve(n);
  for (const auto& s : a) {
    auto it = b_map.find(s.run_tag);
    if (it == b_map.end()) throw DataError("kendall_tau: system " + s.run_tag + " missing from second ranking");
    xy.emplace_back(s.map, it->second);
  }
  if (b_map.size() != n) throw DataError("kendall_tau: duplicate run tags");

  // Knight's algorithm.
  std::sort(xy.begin(), xy.end());
  const std::uint64_t n0 = tied_pairs(n);
  std::uint64_t n1 = 0, n3 = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && xy[j].first == xy[i].first) ++j;
    n1 += tied_pairs(j - i);
    for (std::size_t p = i; p < j;) {
      std::size_t q = p;
      while (q < j && xy[q].second == xy[p].second) ++q;
      n3 += tied_pairs(q - p);
      p = q;
    }
    i = j;
  }
  std::vector<double> ys(n), scratch(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = xy[i].second;
  const std::uint64_t swaps = merge_count(ys, scratch, 0, n);
  std::uint64_t n2 = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && ys[j] == ys[i]) ++j;
    n2 += tied_pairs(j - i);
    i = j;
  }

  RankingComparison r;
  r.n_systems = n;
  r.discordant = swaps;
  r.concordant = n0 - n1 - n2 + n3 - swaps;
  r.ties_a = n1 - n3;
  r.ties_b = n2 - n3;
  r.ties_both = n3;
  const double left = static_cast<double>(r.concordant + r.discordant + r.ties_b);   // n0 - n1
  const double right = static_cast<double>(r.concordant + r.discordant + r.ties_a);  // n0 - n2
  if (left == 0.0 || right == 0.0) throw NumericError("kendall_tau undefined: all values tied on one side");
  r.tau = (static_cast<double>(r.concordant) - static_cast<double>(r.discordant)) / std::sqrt(left * right);
  return r;
}

void write_scores_csv(std::ostream& out, std::span<const SystemScore> scores) {
  out << "run_tag,map\n";
  for (const auto& s : scores) out << csv::row({s.run_tag, csv::real(s.map)});
}

void write_per_query_csv(std::ostream& out, std::span<const SystemScore> scores) {
  out << "run_tag,query_id,ap\n";
  for (const auto& s : scores) {
    for (const auto& [q, ap] : s.per_query_ap) out << csv::row({s.run_tag, q, csv::real(ap)});
  }
}

std::vector<SystemScore> read_scores_csv(std::istream& in) {
  std::vector<SystemScore> out;
  std::vector<std::string> f;
  std::size_t lineno = 0;
  while (csv::read_row(in, f)) {
    ++lineno;
    if (lineno == 1 && !f.empty() && f[0] == "run_tag") continue;
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != 2) throw ParseError("expected 2 CSV columns", lineno);
    const auto m = text::to_real(f[1]);
    if (!m) throw ParseError("bad MAP value '" + f[1] + "'", lineno);
    out.push_back({f[0], *m, {}});
  }
  return out;
}

}  // namespace qrelx
