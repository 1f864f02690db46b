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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace qrelx {

using StopwordSet = std::unordered_set<std::string>;

/// The bundled SMART English stoplist.
const StopwordSet& smart_stopwords();

/// One word per line; blank lines and lines starting with '#' are ignored.
/// Entries are lowercased.
StopwordSet load_stopwords(std::istream& in);

/// Maximal runs of Unicode letters/digits, lowercased. Tokens shorter than two
/// code points and stopwords are dropped.
std::vector<std::string> tokenize(std::string_view text, const StopwordSet& stopwords);

using TokenizedDoc = std::vector<std::string>;

class Vocabulary {
 public:
  struct Entry {
    std::uint32_t index;
    std::uint32_t document_frequency;
  };

  Vocabulary() = default;

  /// Indices are assigned in ascending term order.
  static Vocabulary build(std::span<const TokenizedDoc> docs);

  std::optional<Entry> find(std::string_view term) const;
  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t n_documents() const noexcept { return n_documents_; }
  const std::string& term(std::size_t index) const { return terms_[index]; }
  std::uint32_t document_frequency(std::size_t index) const { return df_[index]; }

 private:
  std::map<std::string, std::uint32_t, std::less<>> index_;
  std::vector<std::string> terms_;
  std::vector<std::uint32_t> df_;
  std::size_t n_documents_ = 0;
};

/// Strictly ascending indices, no explicit zeros.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> weights;

  std::size_t nnz() const noexcept { return indices.size(); }
  bool empty() const noexcept { return indices.empty(); }
};

using DenseVector = std::vector<double>;

/// Smoothed idf: ln((1 + N) / (1 + df)) + 1.
double smoothed_idf(std::size_t n_documents, std::size_t document_frequency) noexcept;

/// tf (raw count) x smoothed idf, L2-normalised. Tokens missing from the
/// vocabulary are skipped; empty documents give empty vectors.
SparseVector tfidf_vector(const TokenizedDoc& doc, const Vocabulary& vocab);
std::vector<SparseVector> tfidf_vectors(std::span<const TokenizedDoc> docs, const Vocabulary& vocab);

/// 1 - cos(x, y); 1.0 when either vector has zero norm. Throws
/// std::invalid_argument on a length mismatch.
double cosine_distance(std::span<const double> x, std::span<const double> y);

}  // namespace qrelx
