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

#pragma once

#include <array>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qrelx/formats.hpp"
#include "qrelx/kernels.hpp"

namespace qrelx {

/// query_id -> pooled doc_ids.
using CandidatePool = std::map<std::string, std::set<std::string>>;

/// Dense document vectors addressed by doc_id.
class DocumentVectors {
 public:
  DocumentVectors() = default;
  DocumentVectors(std::vector<std::string> ids, RowMatrix rows);

  std::optional<std::size_t> find(const std::string& doc_id) const;
  std::span<const double> row(std::size_t i) const;
  const RowMatrix& matrix() const noexcept { return rows_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(rows_.cols()); }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  RowMatrix rows_;
};

struct ScoredCandidate {
  std::string query_id;
  std::string doc_id;
  double min_distance = 0.0;

  friend bool operator==(const ScoredCandidate&, const ScoredCandidate&) = default;
};

/// (min_distance, query_id, doc_id) ascending.
bool scored_less(const ScoredCandidate& a, const ScoredCandidate& b) noexcept;

struct DecileRow {
  int decile = 0;
  std::size_t pair_count = 0;
  double positive_fraction = 0.0;
};

using DecileReport = std::array<DecileRow, 10>;

/// Union over runs of each run's top-`depth` documents per query.
CandidatePool pool_candidates(std::span<const Run> runs, int depth);

/// Pool taken from a judgement file itself, keeping at most `cap` documents per
/// query in file order.
CandidatePool pool_from_qrels(std::span<const QrelRecord> qrels, std::optional<std::size_t> cap);

/// Minimum cosine distance from every pooled candidate to the positive qrels of
/// its query. Candidates that already are positives of that query are skipped.
/// Output is sorted by scored_less.
std::vector<ScoredCandidate> score_candidates(const CandidatePool& pool, std::span<const QrelRecord> positive_qrels,
                                              const DocumentVectors& vectors);

/// Ten balanced bins over the sorted pairs; pairs missing from `truth` count
/// as non-relevant. Decile i covers 0-based positions [ceil((i-1)N/10), ceil(iN/10)).
DecileReport decile_table(std::span<const ScoredCandidate> scored, std::span<const QrelRecord> truth);

/// The first floor(K * N / 100) pairs as relevance-1 qrels.
std::vector<QrelRecord> select_pseudo_qrels(std::span<const ScoredCandidate> scored, double top_percent);

/// Union sorted by (query_id, doc_id). On collision the original record is
/// kept; the number of collisions is written to `collisions` when given.
std::vector<QrelRecord> merge_qrels(std::span<const QrelRecord> original, std::span<const QrelRecord> pseudo,
                                    std::size_t* collisions = nullptr);

/// "query_id,doc_id,min_distance" with 9 decimals.
void write_scored_csv(std::ostream& out, std::span<const ScoredCandidate> scored);
std::vector<ScoredCandidate> read_scored_csv(std::istream& in);

/// "decile,count,positive_fraction".
void write_deciles_csv(std::ostream& out, const DecileReport& report);

}  // namespace qrelx
