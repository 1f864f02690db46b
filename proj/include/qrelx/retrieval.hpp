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
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qrelx/formats.hpp"
#include "qrelx/vectorspace.hpp"

namespace qrelx {

struct Posting {
  std::uint32_t doc;  // internal id
  std::uint32_t tf;

  friend bool operator==(const Posting&, const Posting&) = default;
};

/// Term-at-a-time inverted index over tokenized documents. Immutable once built.
class InvertedIndex {
 public:
  InvertedIndex() = default;

  /// Throws DuplicateError on repeated doc ids.
  static InvertedIndex build(std::span<const RawDocument> docs, const StopwordSet& stopwords);
  static InvertedIndex build(std::span<const std::string> doc_ids, std::span<const TokenizedDoc> docs);

  const std::vector<Posting>* postings(const std::string& term) const;
  std::uint64_t collection_frequency(const std::string& term) const;

  std::size_t n_documents() const noexcept { return doc_ids_.size(); }
  std::size_t n_terms() const noexcept { return postings_.size(); }
  std::uint64_t total_tokens() const noexcept { return total_tokens_; }
  double average_doc_length() const noexcept { return average_doc_length_; }
  std::uint32_t doc_length(std::size_t doc) const { return doc_lengths_[doc]; }
  const std::string& doc_id(std::size_t doc) const { return doc_ids_[doc]; }

  /// "QXI1" binary format.
  void save(std::ostream& out) const;
  static InvertedIndex load(std::istream& in);

 private:
  void finish();

  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::unordered_map<std::string, std::uint64_t> cf_;
  std::vector<std::uint32_t> doc_lengths_;
  std::vector<std::string> doc_ids_;
  std::uint64_t total_tokens_ = 0;
  double average_doc_length_ = 0.0;
};

struct WeightingModel {
  enum class Kind { kTfIdf, kBm25, kHiemstraLm, kPl2 };

  Kind kind = Kind::kBm25;
  double k1 = 1.2;
  double b = 0.75;
  double lambda = 0.15;
  double c = 1.0;

  static WeightingModel tf_idf() { return {Kind::kTfIdf}; }
  static WeightingModel bm25(double k1 = 1.2, double b = 0.75) { return {Kind::kBm25, k1, b}; }
  static WeightingModel hiemstra_lm(double lambda = 0.15) { return {Kind::kHiemstraLm, 1.2, 0.75, lambda}; }
  static WeightingModel pl2(double c = 1.0) { return {Kind::kPl2, 1.2, 0.75, 0.15, c}; }

  /// The four implemented models with default parameters.
  static std::vector<WeightingModel> defaults();

  /// Throws std::invalid_argument outside 0<b<=1, 0<lambda<1, c>0, k1>=0.
  void validate() const;

  /// Run tag: model name plus parameters, no whitespace.
  std::string name() const;
};

struct ScoredDoc {
  std::string doc_id;
  double score;
};

/// Documents matching at least one query term, by score desc then doc_id asc,
/// truncated to `depth`.
std::vector<ScoredDoc> score_query(const InvertedIndex& index, const WeightingModel& model,
                                   std::span<const std::string> query_tokens, int depth);

struct Query {
  std::string id;
  std::string text;
};

/// One run per model over all queries.
std::vector<Run> generate_runs(const InvertedIndex& index, std::span<const WeightingModel> models,
                               std::span<const Query> queries, int depth, const StopwordSet& stopwords);

/// `copies` clones of every run whose scores are multiplied by (1 + jitter * u),
/// u uniform in [-1, 1) drawn from SplitMix64 keyed on (variant, query, doc).
/// Clone tags are "<tag>.v<i>". Entries are re-ranked after jittering.
std::vector<Run> jittered_variants(std::span<const Run> runs, int copies, double jitter = 1e-3);

/// 2-column TSV: query_id TAB text.
std::vector<Query> parse_queries_tsv(std::istream& in);

}  // namespace qrelx
