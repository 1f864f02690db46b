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

#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qrelx/formats.hpp"

namespace qrelx {

/// Default evaluation cutoff (trec_eval convention).
inline constexpr int kDefaultEvalDepth = 1000;

struct SystemScore {
  std::string run_tag;
  double map = 0.0;
  std::map<std::string, double> per_query_ap;
};

struct RankingComparison {
  double tau = 0.0;
  std::size_t n_systems = 0;
  std::uint64_t concordant = 0;
  std::uint64_t discordant = 0;
  std::uint64_t ties_a = 0;     // tied in a only
  std::uint64_t ties_b = 0;     // tied in b only
  std::uint64_t ties_both = 0;  // tied in both
};

/// Relevant document sets per query (grade >= 1 only).
class RelevanceIndex {
 public:
  explicit RelevanceIndex(std::span<const QrelRecord> qrels);

  /// Relevant docs of `query`, or nullptr when it has none.
  const std::unordered_set<std::string>* relevant(const std::string& query) const;
  /// Queries having at least one relevant document, ascending.
  const std::vector<std::string>& queries() const noexcept { return queries_; }

 private:
  std::unordered_map<std::string, std::unordered_set<std::string>> relevant_;
  std::vector<std::string> queries_;
};

/// (1/R) * sum over relevant docs at rank r <= depth of precision@r.
/// Throws DataError when `relevant` is empty.
double average_precision(std::span<const std::string> ranked_docs, const std::unordered_set<std::string>& relevant,
                         int depth = kDefaultEvalDepth);
double average_precision(std::span<const std::string> ranked_docs, std::span<const QrelRecord> qrels_for_query,
                         int depth = kDefaultEvalDepth);

/// Mean AP over queries with >= 1 relevant judgement; such queries missing
/// from the run score 0. Throws DataError if no query has a relevant doc.
SystemScore mean_average_precision(const Run& run, const RelevanceIndex& qrels, int depth = kDefaultEvalDepth);
SystemScore mean_average_precision(const Run& run, std::span<const QrelRecord> qrels,
                                   int depth = kDefaultEvalDepth);

/// Sorted by MAP descending, run_tag ascending on exact ties.
std::vector<SystemScore> rank_systems(std::span<const Run> runs, std::span<const QrelRecord> qrels,
                                      int depth = kDefaultEvalDepth);

/// Kendall's tau-b between the MAP values of the same systems. Pairs are
/// counted with a merge sort, O(n log n).
RankingComparison kendall_tau(std::span<const SystemScore> a, std::span<const SystemScore> b);

/// "run_tag,map".
void write_scores_csv(std::ostream& out, std::span<const SystemScore> scores);
/// "run_tag,query_id,ap".
void write_per_query_csv(std::ostream& out, std::span<const SystemScore> scores);
std::vector<SystemScore> read_scores_csv(std::istream& in);

}  // namespace qrelx
