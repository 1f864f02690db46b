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

#include "qrelx/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "qrelx/csv.hpp"
#include "qrelx/errors.hpp"
#include "qrelx/text.hpp"

namespace qrelx {

DocumentVectors::DocumentVectors(std::vector<std::string> ids, RowMatrix rows)
    : ids_(std::move(ids)), rows_(std::move(rows)) {
  if (static_cast<Eigen::Index>(ids_.size()) != rows_.rows()) {
    throw std::invalid_argument("DocumentVectors: id count does not match row count");
  }
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) throw DuplicateError("duplicate vector for document " + ids_[i]);
  }
}

std::optional<std::size_t> DocumentVectors::find(const std::string& doc_id) const {
  auto it = index_.find(doc_id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> DocumentVectors::row(std::size_t i) const {
  return {rows_.row(static_cast<Eigen::Index>(i)).data(), static_cast<std::size_t>(rows_.cols())};
}

bool scored_less(const ScoredCandidate& a, const ScoredCandidate& b) noexcept {
  if (a.min_distance != b.min_distance) return a.min_distance < b.min_distance;
  if (a.query_id != b.query_id) return a.query_id < b.query_id;
  return a.doc_id < b.doc_id;
}

CandidatePool pool_candidates(std::span<const Run> runs, int depth) {
  if (depth < 1) throw std::invalid_argument("pool depth must be >= 1");
  CandidatePool pool;
  for (const auto& run : runs) {
    for (const auto& e : run.entries) {
      if (e.rank <= depth) pool[e.query_id].insert(e.doc_id);
    }
  }
  return pool;
}

CandidatePool pool_from_qrels(std::span<const QrelRecord> qrels, std::optional<std::size_t> cap) {
  CandidatePool pool;
  std::map<std::string, std::size_t> taken;
  for (const auto& r : qrels) {
    auto& n = taken[r.query_id];
    if (cap && n >= *cap) continue;
    if (pool[r.query_id].insert(r.doc_id).second) ++n;
  }
  return pool;
}

std::vector<ScoredCandidate> score_candidates(const CandidatePool& pool, std::span<const QrelRecord> positive_qrels,
                                              const DocumentVectors& vectors) {
  auto row_of = [&](const std::string& doc) {
    auto r = vectors.find(doc);
    if (!r) throw DataError("no vector for document " + doc);
    return *r;
  };

  std::map<std::string, std::vector<std::size_t>> positive_rows;
  std::map<std::string, std::unordered_set<std::string>> positive_docs;
  for (const auto& q : positive_qrels) {
    if (!q.relevant()) continue;
    if (positive_docs[q.query_id].insert(q.doc_id).second) positive_rows[q.query_id].push_back(row_of(q.doc_id));
  }

  std::vector<ScoredCandidate> out;
  std::vector<MinDistanceJob> jobs;
  for (const auto& [query, docs] : pool) {
    auto it = positive_rows.find(query);
    if (it == positive_rows.end()) throw DataError("query " + query + " has no positive qrels to expand from");
    const auto& known = positive_docs[query];
    for (const auto& doc : docs) {
      if (known.contains(doc)) continue;
      jobs.push_back({row_of(doc), it->second});
      out.push_back({query, doc, 0.0});
    }
  }

  const auto norms = kernels::row_squared_norms(vectors.matrix());
  const auto dist = kernels::min_cosine_distances(vectors.matrix(), norms, jobs);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].min_distance = dist[i];
  std::sort(out.begin(), out.end(), scored_less);
  return out;
}

DecileReport decile_table(std::span<const ScoredCandidate> scored, std::span<const QrelRecord> truth) {
  const std::size_t n = scored.size();
  if (n == 0) throw DataError("decile table needs at least one scored pair");
  std::map<std::pair<std::string, std::string>, int> grade;
  for (const auto& r : truth) grade.emplace(std::make_pair(r.query_id, r.doc_id), r.relevance);

  DecileReport report{};
  auto cut = [n](std::size_t i) { return (i * n + 9) / 10; };  // ceil(i * n / 10)
  for (std::size_t d = 1; d <= 10; ++d) {
    const std::size_t begin = cut(d - 1), end = cut(d);
    std::size_t positives = 0;
    for (std::size_t p = begin; p < end; ++p) {
      auto it = grade.find({scored[p].query_id, scored[p].doc_id});
      if (it != grade.end() && it->second >= 1) ++positives;
    }
    auto& row = report[d - 1];
    row.decile = static_cast<int>(d);
    row.pair_count = end - begin;
    row.positive_fraction = row.pair_count ? static_cast<double>(positives) / static_cast<double>(row.pair_count) : 0.0;
  }
  return report;
}

std::vector<QrelRecord> select_pseudo_qrels(std::span<const ScoredCandidate> scored, double top_percent) {
  if (!(top_percent >= 0.0 && top_percent <= 100.0)) {
    throw std::invalid_argument("top percent must lie in [0, 100]");
  }
  // floor(K * N / 100), absorbing representation error such as 0.29 * 100.
  const double exact = top_percent * static_cast<double>(scored.size()) / 100.0;
  const double nearest = std::round(exact);
  const double count = std::abs(exact - nearest) <= 1e-9 * std::max(1.0, exact) ? nearest : std::floor(exact);
  const auto take = std::min(scored.size(), static_cast<std::size_t>(count));

  std::vector<QrelRecord> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back({scored[i].query_id, scored[i].doc_id, 1});
  return out;
}

std::vector<QrelRecord> merge_qrels(std::span<const QrelRecord> original, std::span<const QrelRecord> pseudo,
                                    std::size_t* collisions) {
  std::map<std::pair<std::string, std::string>, int> merged;
  for (const auto& r : original) merged.emplace(std::make_pair(r.query_id, r.doc_id), r.relevance);
  std::size_t clashes = 0;
  for (const auto& r : pseudo) {
    if (!merged.emplace(std::make_pair(r.query_id, r.doc_id), r.relevance).second) ++clashes;
  }
  if (collisions) *collisions = clashes;

  std::vector<QrelRecord> out;
  out.reserve(merged.size());
  for (auto& [key, rel] : merged) out.push_back({key.first, key.second, rel});
  return out;
}

void write_scored_csv(std::ostream& out, std::span<const ScoredCandidate> scored) {
  out << "query_id,doc_id,min_distance\n";
  for (const auto& s : scored) out << csv::row({s.query_id, s.doc_id, csv::real(s.min_distance)});
}

std::vector<ScoredCandidate> read_scored_csv(std::istream& in) {
  std::vector<ScoredCandidate> out;
  std::vector<std::string> f;
  std::size_t lineno = 0;
  while (csv::read_row(in, f)) {
    ++lineno;
    if (lineno == 1 && !f.empty() && f[0] == "query_id") continue;
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != 3) throw ParseError("expected 3 CSV columns", lineno);
    const auto d = text::to_real(f[2]);
    if (!d) throw ParseError("bad distance '" + f[2] + "'", lineno);
    out.push_back({f[0], f[1], *d});
  }
  std::stable_sort(out.begin(), out.end(), scored_less);
  return out;
}

void write_deciles_csv(std::ostream& out, const DecileReport& report) {
  out << "decile,count,positive_fraction\n";
  for (const auto& r : report) {
    out << csv::row({std::to_string(r.decile), std::to_string(r.pair_count), csv::real(r.positive_fraction)});
  }
}

}  // namespace qrelx
