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

#include "qrelx/formats.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "qrelx/errors.hpp"
#include "qrelx/text.hpp"

namespace qrelx {

bool qrel_less(const QrelRecord& a, const QrelRecord& b) noexcept {
  if (a.query_id != b.query_id) return a.query_id < b.query_id;
  return a.doc_id < b.doc_id;
}

std::vector<QrelRecord> parse_qrels(std::istream& in) {
  std::vector<QrelRecord> records;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t lineno = 0;
  while (text::read_line(in, line)) {
    ++lineno;
    if (text::is_blank(line)) continue;
    const auto f = text::split_ws(line);
    if (f.size() != 4) {
      throw ParseError("expected 4 fields in qrels line, got " + std::to_string(f.size()), lineno);
    }
    const auto rel = text::to_int(f[3]);
    if (!rel) throw ParseError("non-integer relevance '" + std::string(f[3]) + "'", lineno);
    if (*rel < 0) throw ParseError("negative relevance", lineno);
    QrelRecord r{std::string(f[0]), std::string(f[2]), static_cast<int>(*rel)};
    if (!seen.emplace(r.query_id, r.doc_id).second) {
      throw DuplicateError("line " + std::to_string(lineno) + ": duplicate judgement for query " +
                           r.query_id + ", document " + r.doc_id);
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<RunEntry> parse_run(std::istream& in, Warnings* warnings) {
  struct Group {
    std::vector<RunEntry> entries;
    std::unordered_set<std::string> docs;
  };
  // Keyed by (tag, query) in first-seen order.
  std::vector<Group> groups;
  std::map<std::pair<std::string, std::string>, std::size_t> group_of;

  std::string line;
  std::size_t lineno = 0;
  while (text::read_line(in, line)) {
    ++lineno;
    if (text::is_blank(line)) continue;
    const auto f = text::split_ws(line);
    if (f.size() != 6) {
      throw ParseError("expected 6 fields in run line, got " + std::to_string(f.size()), lineno);
    }
    const auto rank = text::to_int(f[3]);
    if (!rank) throw ParseError("non-numeric rank '" + std::string(f[3]) + "'", lineno);
    const auto score = text::to_real(f[4]);
    if (!score) throw ParseError("non-numeric score '" + std::string(f[4]) + "'", lineno);

    RunEntry e{std::string(f[0]), std::string(f[2]), static_cast<int>(*rank), *score, std::string(f[5])};
    auto key = std::make_pair(e.run_tag, e.query_id);
    auto [it, fresh] = group_of.try_emplace(key, groups.size());
    if (fresh) groups.emplace_back();
    Group& g = groups[it->second];
    if (!g.docs.insert(e.doc_id).second) {
      throw DuplicateError("line " + std::to_string(lineno) + ": document " + e.doc_id +
                           " retrieved twice for query " + e.query_id);
    }
    g.entries.push_back(std::move(e));
  }

  std::vector<RunEntry> out;
  for (Group& g : groups) {
    auto& es = g.entries;
    std::stable_sort(es.begin(), es.end(), [](const RunEntry& a, const RunEntry& b) { return a.rank < b.rank; });
    const auto as_listed = es;
    std::stable_sort(es.begin(), es.end(), [](const RunEntry& a, const RunEntry& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.doc_id < b.doc_id;
    });
    bool consistent = true;
    for (std::size_t i = 0; i < es.size(); ++i) {
      if (es[i].doc_id != as_listed[i].doc_id || as_listed[i].rank != static_cast<int>(i + 1)) consistent = false;
      es[i].rank = static_cast<int>(i + 1);
    }
    if (!consistent && warnings) {
      warnings->push_back("run " + es.front().run_tag + ", query " + es.front().query_id +
                          ": ranks inconsistent with scores, recomputed");
    }
    for (auto& e : es) out.push_back(std::move(e));
  }
  return out;
}

std::string write_qrels(std::span<const QrelRecord> records) {
  std::vector<const QrelRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return qrel_less(*a, *b); });
  std::string out;
  for (const auto* r : sorted) {
    out += r->query_id;
    out += " 0 ";
    out += r->doc_id;
    out += ' ';
    out += std::to_string(r->relevance);
    out += '\n';
  }
  return out;
}

std::string format_score(double score) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", score);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

std::string write_run(std::span<const RunEntry> entries) {
  std::vector<const RunEntry*> sorted;
  sorted.reserve(entries.size());
  for (const auto& e : entries) sorted.push_back(&e);
  std::stable_sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) {
    if (a->query_id != b->query_id) return a->query_id < b->query_id;
    if (a->run_tag != b->run_tag) return a->run_tag < b->run_tag;
    return a->rank < b->rank;
  });
  std::string out;
  for (const auto* e : sorted) {
    out += e->query_id;
    out += " Q0 ";
    out += e->doc_id;
    out += ' ';
    out += std::to_string(e->rank);
    out += ' ';
    out += format_score(e->score);
    out += ' ';
    out += e->run_tag;
    out += '\n';
  }
  return out;
}

std::vector<Run> split_runs(std::vector<RunEntry> entries) {
  std::vector<Run> runs;
  std::unordered_map<std::string, std::size_t> index;
  for (auto& e : entries) {
    auto [it, fresh] = index.try_emplace(e.run_tag, runs.size());
    if (fresh) runs.push_back(Run{e.run_tag, {}});
    runs[it->second].entries.push_back(std::move(e));
  }
  return runs;
}

// ---------------------------------------------------------------------------
// OHSUMED

std::vector<RawDocument> parse_ohsumed(std::istream& in, Warnings* warnings) {
  std::vector<RawDocument> docs;
  std::string line;
  std::size_t lineno = 0;

  bool in_record = false;
  bool have_id = false;
  std::size_t record_line = 0;
  RawDocument current;

  auto finish = [&] {
    if (!in_record) return;
    if (!have_id) throw ParseError("record has no .U field", record_line);
    docs.push_back(std::move(current));
    current = {};
    have_id = false;
  };

  while (text::read_line(in, line)) {
    ++lineno;
    if (line.rfind(".I", 0) == 0 && (line.size() == 2 || line[2] == ' ' || line[2] == '\t')) {
      finish();
      in_record = true;
      record_line = lineno;
      continue;
    }
    if (text::is_blank(line)) continue;
    if (!in_record) throw ParseError("content before the first .I record", lineno);

    const auto tag = text::trim(line);
    if (tag.size() != 2 || tag[0] != '.') {
      throw ParseError("expected a field tag, got '" + std::string(tag) + "'", lineno);
    }
    std::string content;
    if (!text::read_line(in, content)) throw ParseError("field tag without content line", lineno);
    ++lineno;

    switch (tag[1]) {
      case 'U':
        current.doc_id = std::string(text::trim(content));
        if (current.doc_id.empty()) throw ParseError("empty .U field", lineno);
        have_id = true;
        break;
      case 'W':
        current.text = content;
        break;
      case 'T':
      case 'A':
      case 'S':
      case 'M':
      case 'P':
        break;
      default:
        if (warnings) {
          warnings->push_back("line " + std::to_string(lineno - 1) + ": unknown field tag " + std::string(tag) +
                              " skipped");
        }
    }
  }
  finish();
  return docs;
}

// ---------------------------------------------------------------------------
// TREC SGML

bool has_markup(std::string_view line) noexcept {
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    if (line[i] != '<') continue;
    const auto c = static_cast<unsigned char>(line[i + 1]);
    if (!(std::isalpha(c) || c == '/')) continue;
    // '<' X then [^>]* then '>': any later '>' closes it.
    if (line.find('>', i + 2) != std::string_view::npos) return true;
  }
  return false;
}

namespace {

std::optional<std::string> extract_docno(std::string_view line) {
  const auto open = line.find("<DOCNO>");
  if (open == std::string_view::npos) return std::nullopt;
  const auto start = open + 7;
  const auto close = line.find("</DOCNO>", start);
  return std::string(text::trim(line.substr(start, close == std::string_view::npos ? line.npos : close - start)));
}

}  // namespace

std::vector<RawDocument> parse_trec_sgml(std::istream& in) {
  std::vector<RawDocument> docs;
  std::string line;
  std::size_t lineno = 0;

  bool in_doc = false;
  std::size_t doc_line = 0;
  std::optional<std::string> docno;
  std::vector<std::string> kept;

  while (text::read_line(in, line)) {
    ++lineno;
    const auto t = text::trim(line);
    if (!in_doc) {
      if (t.rfind("<DOC>", 0) == 0) {
        in_doc = true;
        doc_line = lineno;
        docno.reset();
        kept.clear();
      }
      continue;
    }
    if (t.rfind("</DOC>", 0) == 0) {
      if (!docno || docno->empty()) throw ParseError("document without DOCNO", doc_line);
      RawDocument d{std::move(*docno), {}};
      for (std::size_t i = 0; i < kept.size(); ++i) {
        if (i) d.text += '\n';
        d.text += kept[i];
      }
      docs.push_back(std::move(d));
      in_doc = false;
      continue;
    }
    if (!docno) {
      if (auto id = extract_docno(line)) {
        docno = std::move(id);
        continue;
      }
    }
    if (!has_markup(line)) kept.push_back(line);
  }
  if (in_doc) throw ParseError("unterminated <DOC>", doc_line);
  return docs;
}

// ---------------------------------------------------------------------------
// Corpus TSV

std::string write_corpus_tsv(std::span<const RawDocument> docs) {
  std::string out;
  for (const auto& d : docs) {
    out += d.doc_id;
    out += '\t';
    for (char c : d.text) {
      switch (c) {
        case '\\': out += "\\\\"; break;
        case '\t': out += "\\t"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
      }
    }
    out += '\n';
  }
  return out;
}

std::vector<RawDocument> parse_corpus_tsv(std::istream& in) {
  std::vector<RawDocument> docs;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (text::read_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) throw ParseError("expected doc_id<TAB>text", lineno);
    RawDocument d{line.substr(0, tab), {}};
    if (!seen.insert(d.doc_id).second) throw DuplicateError("duplicate document id " + d.doc_id);
    for (std::size_t i = tab + 1; i < line.size(); ++i) {
      if (line[i] != '\\' || i + 1 == line.size()) {
        d.text += line[i];
        continue;
      }
      switch (line[++i]) {
        case 't': d.text += '\t'; break;
        case 'n': d.text += '\n'; break;
        case 'r': d.text += '\r'; break;
        case '\\': d.text += '\\'; break;
        default: throw ParseError("bad escape in corpus text", lineno);
      }
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

}  // namespace qrelx
