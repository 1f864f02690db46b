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

#include "qrelx/vectorspace.hpp"

#include <locale.h>
#include <wctype.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "qrelx/text.hpp"

namespace qrelx {
namespace {

constexpr const char* kSmartList[] = {
#include "smart_stopwords.inc"
};

// Unicode character classes come from the C.UTF-8 locale. Without it the
// tokenizer falls back to ASCII classes.
class CharClasses {
 public:
  CharClasses() : loc_(newlocale(LC_CTYPE_MASK, "C.UTF-8", static_cast<locale_t>(0))) {}
  ~CharClasses() {
    if (loc_) freelocale(loc_);
  }
  CharClasses(const CharClasses&) = delete;
  CharClasses& operator=(const CharClasses&) = delete;

  bool alnum(char32_t c) const noexcept {
    if (c < 0x80 || !loc_) return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    return iswalnum_l(static_cast<wint_t>(c), loc_) != 0;
  }

  char32_t lower(char32_t c) const noexcept {
    if (c < 0x80 || !loc_) return (c >= 'A' && c <= 'Z') ? c + ('a' - 'A') : c;
    return static_cast<char32_t>(towlower_l(static_cast<wint_t>(c), loc_));
  }

 private:
  locale_t loc_;
};

const CharClasses& char_classes() {
  static const CharClasses classes;
  return classes;
}

}  // namespace

const StopwordSet& smart_stopwords() {
  static const StopwordSet words(std::begin(kSmartList), std::end(kSmartList));
  return words;
}

StopwordSet load_stopwords(std::istream& in) {
  StopwordSet words;
  std::string line;
  while (text::read_line(in, line)) {
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::string w;
    const auto& cc = char_classes();
    for (std::size_t pos = 0; pos < t.size();) text::append_utf8(w, cc.lower(text::decode_utf8(t, pos)));
    words.insert(std::move(w));
  }
  return words;
}

std::vector<std::string> tokenize(std::string_view raw, const StopwordSet& stopwords) {
  const auto& cc = char_classes();
  std::string storage;
  std::string_view s = raw;
  if (std::any_of(raw.begin(), raw.end(), [](char c) { return static_cast<unsigned char>(c) >= 0x80; })) {
    storage = text::sanitize_utf8(raw);
    s = storage;
  }

  std::vector<std::string> tokens;
  std::string current;
  std::size_t length = 0;
  auto flush = [&] {
    if (length >= 2 && !stopwords.contains(current)) tokens.push_back(current);
    current.clear();
    length = 0;
  };
  for (std::size_t pos = 0; pos < s.size();) {
    const char32_t c = text::decode_utf8(s, pos);
    if (cc.alnum(c)) {
      text::append_utf8(current, cc.lower(c));
      ++length;
    } else if (length > 0 || !current.empty()) {
      flush();
    }
  }
  flush();
  return tokens;
}

Vocabulary Vocabulary::build(std::span<const TokenizedDoc> docs) {
  std::map<std::string, std::uint32_t, std::less<>> df;
  std::vector<std::string_view> unique;
  for (const auto& doc : docs) {
    unique.assign(doc.begin(), doc.end());
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    for (auto t : unique) {
      auto it = df.find(t);
      if (it == df.end()) {
        df.emplace(std::string(t), 1);
      } else {
        ++it->second;
      }
    }
  }

  Vocabulary v;
  v.n_documents_ = docs.size();
  v.terms_.reserve(df.size());
  v.df_.reserve(df.size());
  for (auto& [term, count] : df) {
    v.index_.emplace(term, static_cast<std::uint32_t>(v.terms_.size()));
    v.terms_.push_back(term);
    v.df_.push_back(count);
  }
  return v;
}

std::optional<Vocabulary::Entry> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return Entry{it->second, df_[it->second]};
}

double smoothed_idf(std::size_t n_documents, std::size_t document_frequency) noexcept {
  return std::log((1.0 + static_cast<double>(n_documents)) / (1.0 + static_cast<double>(document_frequency))) + 1.0;
}

SparseVector tfidf_vector(const TokenizedDoc& doc, const Vocabulary& vocab) {
  std::unordered_map<std::uint32_t, std::uint32_t> counts;
  for (const auto& t : doc) {
    if (auto e = vocab.find(t)) ++counts[e->index];
  }
  SparseVector v;
  v.indices.reserve(counts.size());
  for (const auto& [index, count] : counts) v.indices.push_back(index);
  std::sort(v.indices.begin(), v.indices.end());

  v.weights.reserve(v.indices.size());
  double norm2 = 0.0;
  for (auto index : v.indices) {
    const double w = counts[index] * smoothed_idf(vocab.n_documents(), vocab.document_frequency(index));
    v.weights.push_back(w);
    norm2 += w * w;
  }
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& w : v.weights) w *= inv;
  }
  return v;
}

std::vector<SparseVector> tfidf_vectors(std::span<const TokenizedDoc> docs, const Vocabulary& vocab) {
  std::vector<SparseVector> out(docs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(docs.size()); ++i) {
    out[i] = tfidf_vector(docs[i], vocab);
  }
  return out;
}

double cosine_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("cosine_distance: length mismatch (" + std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
  }
  double dot = 0.0, xx = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    xx += x[i] * x[i];
    yy += y[i] * y[i];
  }
  if (xx == 0.0 || yy == 0.0) return 1.0;
  const double d = 1.0 - dot / std::sqrt(xx * yy);
  return std::clamp(d, 0.0, 2.0);
}

}  // namespace qrelx
