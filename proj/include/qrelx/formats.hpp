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

#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qrelx {

/// One relevance judgement. Grade >= 1 is relevant, 0 is judged non-relevant.
struct QrelRecord {
  std::string query_id;
  std::string doc_id;
  int relevance = 0;

  bool relevant() const noexcept { return relevance >= 1; }
  friend bool operator==(const QrelRecord&, const QrelRecord&) = default;
};

struct RunEntry {
  std::string query_id;
  std::string doc_id;
  int rank = 0;  // 1-based
  double score = 0.0;
  std::string run_tag;

  friend bool operator==(const RunEntry&, const RunEntry&) = default;
};

/// One system's output. Entries are grouped by query; within a query they are
/// in rank order with ranks 1..n.
struct Run {
  std::string tag;
  std::vector<RunEntry> entries;
};

struct RawDocument {
  std::string doc_id;
  std::string text;

  friend bool operator==(const RawDocument&, const RawDocument&) = default;
};

using Warnings = std::vector<std::string>;

/// 4-column TREC qrels: query_id iteration doc_id relevance.
std::vector<QrelRecord> parse_qrels(std::istream& in);

/// 6-column TREC run: query_id Q0 doc_id rank score tag. Ranks are recomputed
/// from (score desc, doc_id asc); a mismatch with the file's ranks is reported
/// through `warnings` when given.
std::vector<RunEntry> parse_run(std::istream& in, Warnings* warnings = nullptr);

/// Sorted by (query_id, doc_id), one "q 0 d rel" line each.
std::string write_qrels(std::span<const QrelRecord> records);

/// Queries in ascending query_id order, entries in rank order.
std::string write_run(std::span<const RunEntry> entries);

/// Shortest representation with at most 6 significant digits.
std::string format_score(double score);

/// Splits parsed entries into one Run per tag, tags in first-seen order.
std::vector<Run> split_runs(std::vector<RunEntry> entries);

/// Field-tagged OHSUMED records; only the ".W" abstract is kept as text.
std::vector<RawDocument> parse_ohsumed(std::istream& in, Warnings* warnings = nullptr);

/// TREC SGML: <DOC>...</DOC>, id from <DOCNO>, every line with markup dropped.
std::vector<RawDocument> parse_trec_sgml(std::istream& in);

/// True iff the line contains '<', then a letter or '/', then non-'>' chars,
/// then '>'.
bool has_markup(std::string_view line) noexcept;

/// Normalised corpus: one "doc_id TAB text" line per document, with
/// backslash, tab, CR and LF in the text escaped as \\, \t, \r, \n.
std::string write_corpus_tsv(std::span<const RawDocument> docs);
std::vector<RawDocument> parse_corpus_tsv(std::istream& in);

/// Canonical qrel order: (query_id, doc_id) byte-lexicographic.
bool qrel_less(const QrelRecord& a, const QrelRecord& b) noexcept;

}  // namespace qrelx
