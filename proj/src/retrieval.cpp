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

#include "qrelx/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

#include "qrelx/binary_io.hpp"
#include "qrelx/errors.hpp"
#include "qrelx/random.hpp"
#include "qrelx/text.hpp"

namespace qrelx {

InvertedIndex InvertedIndex::build(std::span<const RawDocument> docs, const StopwordSet& stopwords) {
  std::vector<std::string> ids(docs.size());
  std::vector<TokenizedDoc> tokens(docs.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(docs.size()); ++i) {
    ids[i] = docs[i].doc_id;
    tokens[i] = tokenize(docs[i].text, stopwords);
  }
  return build(ids, tokens);
}

InvertedIndex InvertedIndex::build(std::span<const std::string> doc_ids, std::span<const TokenizedDoc> docs) {
  if (doc_ids.size() != docs.size()) throw std::invalid_argument("InvertedIndex::build: size mismatch");
  InvertedIndex index;
  std::unordered_set<std::string> seen;
  std::unordered_map<std::string, std::uint32_t> counts;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (!seen.insert(doc_ids[d]).second) throw DuplicateError("duplicate document id " + doc_ids[d]);
    index.doc_ids_.push_back(doc_ids[d]);
    index.doc_lengths_.push_back(static_cast<std::uint32_t>(docs[d].size()));
    counts.clear();
    for (const auto& t : docs[d]) ++counts[t];
    for (const auto& [term, tf] : counts) {
      index.postings_[term].push_back({static_cast<std::uint32_t>(d), tf});
    }
  }
  index.finish();
  return index;
}

void InvertedIndex::finish() {
  total_tokens_ = 0;
  for (auto len : doc_lengths_) total_tokens_ += len;
  average_doc_length_ = doc_lengths_.empty() ? 0.0 : static_cast<double>(total_tokens_) / doc_lengths_.size();
  cf_.clear();
  for (auto& [term, list] : postings_) {
    std::sort(list.begin(), list.end(), [](const Posting& a, const Posting& b) { return a.doc < b.doc; });
    std::uint64_t cf = 0;
    for (const auto& p : list) cf += p.tf;
    cf_[term] = cf;
  }
}

const std::vector<Posting>* InvertedIndex::postings(const std::string& term) const {
  auto it = postings_.find(term);
  return it == postings_.end() ? nullptr : &it->second;
}

std::uint64_t InvertedIndex::collection_frequency(const std::string& term) const {
  auto it = cf_.find(term);
  return it == cf_.end() ? 0 : it->second;
}

void InvertedIndex::save(std::ostream& out) const {
  binary::Writer w(out);
  w.magic("QXI1");
  w.u64(doc_ids_.size());
  for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
    w.str(doc_ids_[d]);
    w.u32(doc_lengths_[d]);
  }
  std::vector<const std::string*> terms;
  terms.reserve(postings_.size());
  for (const auto& [t, list] : postings_) terms.push_back(&t);
  std::sort(terms.begin(), terms.end(), [](auto* a, auto* b) { return *a < *b; });
  w.u64(terms.size());
  for (const auto* t : terms) {
    const auto& list = postings_.at(*t);
    w.str(*t);
    w.u32(static_cast<std::uint32_t>(list.size()));
    for (const auto& p : list) {
      w.u32(p.doc);
      w.u32(p.tf);
    }
  }
}

InvertedIndex InvertedIndex::load(std::istream& in) {
  binary::Reader r(in);
  r.expect_magic("QXI1");
  InvertedIndex index;
  const auto n_docs = r.u64();
  for (std::uint64_t d = 0; d < n_docs; ++d) {
    index.doc_ids_.push_back(r.str());
    index.doc_lengths_.push_back(r.u32());
  }
  const auto n_terms = r.u64();
  for (std::uint64_t t = 0; t < n_terms; ++t) {
    auto term = r.str();
    const auto n = r.u32();
    auto& list = index.postings_[term];
    list.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto doc = r.u32();
      const auto tf = r.u32();
      if (doc >= n_docs || tf == 0) throw DataError("corrupt posting in index file");
      list.push_back({doc, tf});
    }
  }
  index.finish();
  return index;
}

// ---------------------------------------------------------------------------

std::vector<WeightingModel> WeightingModel::defaults() { return {tf_idf(), bm25(), hiemstra_lm(), pl2()}; }

void WeightingModel::validate() const {
  if (!(b > 0.0 && b <= 1.0)) throw std::invalid_argument("weighting model: b must lie in (0, 1]");
  if (!(k1 >= 0.0)) throw std::invalid_argument("weighting model: k1 must be >= 0");
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("weighting model: lambda must lie in (0, 1)");
  if (!(c > 0.0)) throw std::invalid_argument("weighting model: c must be > 0");
}

std::string WeightingModel::name() const {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
  };
  switch (kind) {
    case Kind::kTfIdf:
      return "TF_IDF";
    case Kind::kBm25:
      return "BM25_k1=" + num(k1) + "_b=" + num(b);
    case Kind::kHiemstraLm:
      return "Hiemstra_LM_lambda=" + num(lambda);
    case Kind::kPl2:
      return "PL2_c=" + num(c);
  }
  return "unknown";
}

namespace {

struct TermStats {
  double n_docs;
  double df;
  double cf;
  double total_tokens;
  double avg_dl;
};

double term_weight(const WeightingModel& m, const TermStats& s, double tf, double dl) {
  switch (m.kind) {
    case WeightingModel::Kind::kTfIdf: {
      const double robertson_tf = m.k1 * tf / (tf + m.k1 * (1.0 - m.b + m.b * dl / s.avg_dl));
      return robertson_tf * std::log2(s.n_docs / s.df + 1.0);
    }
    case WeightingModel::Kind::kBm25: {
      const double idf = std::log(1.0 + (s.n_docs - s.df + 0.5) / (s.df + 0.5));
      return idf * tf * (m.k1 + 1.0) / (tf + m.k1 * (1.0 - m.b + m.b * dl / s.avg_dl));
    }
    case WeightingModel::Kind::kHiemstraLm:
      return std::log2(1.0 + (m.lambda * tf * s.total_tokens) / ((1.0 - m.lambda) * s.cf * dl));
    case WeightingModel::Kind::kPl2: {
      const double tfn = tf * std::log2(1.0 + m.c * s.avg_dl / dl);
      const double mean = s.cf / s.n_docs;
      return (tfn * std::log2(tfn / mean) + (mean - tfn) * std::numbers::log2e +
              0.5 * std::log2(2.0 * std::numbers::pi * tfn)) /
             (tfn + 1.0);
    }
  }
  return 0.0;
}

}  // namespace

std::vector<ScoredDoc> score_query(const InvertedIndex& index, const WeightingModel& model,
                                   std::span<const std::string> query_tokens, int depth) {
  if (depth < 1) throw std::invalid_argument("retrieval depth must be >= 1");
  model.validate();

  std::map<std::string, int> qtf;
  for (const auto& t : query_tokens) ++qtf[t];

  std::vector<double> acc(index.n_documents(), 0.0);
  std::vector<char> hit(index.n_documents(), 0);
  std::vector<std::uint32_t> touched;
  for (const auto& [term, key_frequency] : qtf) {
    const auto* list = index.postings(term);
    if (!list) continue;
    const TermStats stats{static_cast<double>(index.n_documents()), static_cast<double>(list->size()),
                          static_cast<double>(index.collection_frequency(term)),
                          static_cast<double>(index.total_tokens()), index.average_doc_length()};
    for (const auto& p : *list) {
      acc[p.doc] += key_frequency * term_weight(model, stats, p.tf, index.doc_length(p.doc));
      if (!hit[p.doc]) {
        hit[p.doc] = 1;
        touched.push_back(p.doc);
      }
    }
  }

  std::vector<ScoredDoc> ranked;
  ranked.reserve(touched.size());
  for (auto d : touched) ranked.push_back({index.doc_id(d), acc[d]});
  auto better = [](const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  };
  const auto keep = std::min(ranked.size(), static_cast<std::size_t>(depth));
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(), better);
  ranked.resize(keep);
  return ranked;
}

std::vector<Run> generate_runs(const InvertedIndex& index, std::span<const WeightingModel> models,
                               std::span<const Query> queries, int depth, const StopwordSet& stopwords) {
  std::vector<TokenizedDoc> query_tokens;
  query_tokens.reserve(queries.size());
  for (const auto& q : queries) query_tokens.push_back(tokenize(q.text, stopwords));

  const std::size_t jobs = models.size() * queries.size();
  std::vector<std::vector<ScoredDoc>> results(jobs);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(jobs); ++j) {
    const auto m = static_cast<std::size_t>(j) / queries.size();
    const auto q = static_cast<std::size_t>(j) % queries.size();
    results[j] = score_query(index, models[m], query_tokens[q], depth);
  }

  std::vector<Run> runs;
  for (std::size_t m = 0; m < models.size(); ++m) {
    Run run{models[m].name(), {}};
    for (std::size_t q = 0; q < queries.size(); ++q) {
      const auto& ranked = results[m * queries.size() + q];
      for (std::size_t r = 0; r < ranked.size(); ++r) {
        run.entries.push_back({queries[q].id, ranked[r].doc_id, static_cast<int>(r + 1), ranked[r].score, run.tag});
      }
    }
    runs.push_back(std::move(run));
  }
  return runs;
}

std::vector<Run> jittered_variants(std::span<const Run> runs, int copies, double jitter) {
  std::vector<Run> out;
  for (const auto& run : runs) {
    for (int v = 0; v < copies; ++v) {
      Run clone{run.tag + ".v" + std::to_string(v), run.entries};
      for (auto& e : clone.entries) {
        const std::uint64_t key = fnv1a64(run.tag + '\x1f' + e.query_id + '\x1f' + e.doc_id);
        SplitMix64 rng(key ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(v + 1)));
        e.score *= 1.0 + jitter * (2.0 * rng.uniform() - 1.0);
        e.run_tag = clone.tag;
      }
      // Re-rank within each query; entries stay grouped by query.
      auto begin = clone.entries.begin();
      while (begin != clone.entries.end()) {
        auto end = std::find_if(begin, clone.entries.end(),
                                [&](const RunEntry& e) { return e.query_id != begin->query_id; });
        std::sort(begin, end, [](const RunEntry& a, const RunEntry& b) {
          if (a.score != b.score) return a.score > b.score;
          return a.doc_id < b.doc_id;
        });
        int rank = 1;
        for (auto it = begin; it != end; ++it) it->rank = rank++;
        begin = end;
      }
      out.push_back(std::move(clone));
    }
  }
  return out;
}

std::vector<Query> parse_queries_tsv(std::istream& in) {
  std::vector<Query> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (text::read_line(in, line)) {
    ++lineno;
    if (text::is_blank(line)) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected query_id<TAB>text", lineno);
    Query q{std::string(text::trim(std::string_view(line).substr(0, tab))), line.substr(tab + 1)};
    if (q.id.empty()) throw ParseError("empty query id", lineno);
    if (!seen.insert(q.id).second) throw DuplicateError("duplicate query id " + q.id);
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace qrelx
