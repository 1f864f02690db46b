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

// qrelx command line: ingest, vectorize, retrieve, pool, expand, deciles,
// eval, tau, synth, sweep.

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qrelx/embedding.hpp"
#include "qrelx/errors.hpp"
#include "qrelx/evaluation.hpp"
#include "qrelx/expansion.hpp"
#include "qrelx/experiment.hpp"
#include "qrelx/formats.hpp"
#include "qrelx/report.hpp"
#include "qrelx/retrieval.hpp"
#include "qrelx/synthetic.hpp"
#include "qrelx/text.hpp"
#include "qrelx/vector_io.hpp"
#include "qrelx/vectorspace.hpp"

namespace fs = std::filesystem;
using namespace qrelx;

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

// Writes to `path`, or stdout when it is empty or "-".
template <class Fn>
void emit(const std::string& path, Fn&& fill) {
  if (path.empty() || path == "-") {
    fill(std::cout);
    std::cout.flush();
    return;
  }
  auto out = open_out(path);
  fill(out);
  if (!out) throw DataError("error writing " + path);
}

void print_warnings(const Warnings& w) {
  for (const auto& m : w) std::cerr << "warning: " << m << '\n';
}

StopwordSet stopword_set(const std::string& path) {
  if (path.empty()) return smart_stopwords();
  auto in = open_in(path);
  return load_stopwords(in);
}

std::vector<RawDocument> read_corpus(const std::string& path, const std::string& format) {
  auto in = open_in(path);
  if (format == "ohsumed") {
    Warnings w;
    auto docs = parse_ohsumed(in, &w);
    print_warnings(w);
    return docs;
  }
  if (format == "trecsgml") return parse_trec_sgml(in);
  return parse_corpus_tsv(in);
}

std::vector<QrelRecord> read_qrels(const std::string& path) {
  auto in = open_in(path);
  return parse_qrels(in);
}

std::vector<Run> read_runs(const std::vector<std::string>& paths) {
  std::vector<Run> runs;
  for (const auto& p : paths) {
    auto in = open_in(p);
    Warnings w;
    auto entries = parse_run(in, &w);
    for (const auto& m : w) std::cerr << "warning: " << p << ": " << m << '\n';
    for (auto& r : split_runs(std::move(entries))) runs.push_back(std::move(r));
  }
  return runs;
}

// Pool files: "query_id TAB doc_id", sorted.
void write_pool(std::ostream& out, const CandidatePool& pool) {
  for (const auto& [q, docs] : pool) {
    for (const auto& d : docs) out << q << '\t' << d << '\n';
  }
}

CandidatePool read_pool(const std::string& path) {
  auto in = open_in(path);
  CandidatePool pool;
  std::string line;
  std::size_t lineno = 0;
  while (text::read_line(in, line)) {
    ++lineno;
    if (text::is_blank(line)) continue;
    const auto f = text::split_ws(line);
    if (f.size() != 2) throw ParseError("expected query_id<TAB>doc_id", lineno);
    pool[std::string(f[0])].insert(std::string(f[1]));
  }
  return pool;
}

void pool_stats(const CandidatePool& pool) {
  std::size_t pairs = 0;
  for (const auto& [q, docs] : pool) pairs += docs.size();
  const double mean = pool.empty() ? 0.0 : static_cast<double>(pairs) / pool.size();
  std::fprintf(stderr, "pool: %zu queries, %zu pairs, %.2f candidates/query\n", pool.size(), pairs, mean);
}

void qrel_stats(std::span<const QrelRecord> qrels) {
  std::set<std::string> queries;
  std::size_t positives = 0;
  for (const auto& r : qrels) {
    if (!r.relevant()) continue;
    queries.insert(r.query_id);
    ++positives;
  }
  const double mean = queries.empty() ? 0.0 : static_cast<double>(positives) / queries.size();
  std::fprintf(stderr, "qrels: %zu records, %zu queries with positives, %zu positives, %.2f positives/query\n",
               qrels.size(), queries.size(), positives, mean);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qrelx: expand sparse relevance judgements by document distance"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "normalise a collection into corpus TSV");
  std::string in_format = "ohsumed", in_path, in_out, in_qrels;
  ingest->add_option("--format", in_format)->check(CLI::IsMember({"ohsumed", "trecsgml", "tsv"}));
  ingest->add_option("--input", in_path)->required();
  ingest->add_option("--output", in_out);
  ingest->add_option("--qrels", in_qrels, "also report judgement statistics");

  // vectorize
  auto* vectorize = app.add_subcommand("vectorize", "tf.idf + PCA document vectors");
  std::string vz_corpus, vz_pool, vz_qrels, vz_stop, vz_out, vz_model, vz_csv;
  int vz_dims = 200;
  vectorize->add_option("--corpus", vz_corpus)->required();
  vectorize->add_option("--pool", vz_pool, "restrict to pooled documents");
  vectorize->add_option("--qrels", vz_qrels, "restrict to judged documents (union with --pool)");
  vectorize->add_option("--dims", vz_dims)->check(CLI::PositiveNumber);
  vectorize->add_option("--stopwords", vz_stop);
  vectorize->add_option("--output", vz_out)->required();
  vectorize->add_option("--model", vz_model, "write the PCA model");
  vectorize->add_option("--csv", vz_csv, "write vectors as CSV");

  // retrieve
  auto* retrieve = app.add_subcommand("retrieve", "generate runs with the built-in weighting models");
  std::string rt_corpus, rt_queries, rt_stop, rt_out;
  int rt_depth = 1000, rt_variants = 4;
  retrieve->add_option("--corpus", rt_corpus)->required();
  retrieve->add_option("--queries", rt_queries)->required();
  retrieve->add_option("--stopwords", rt_stop);
  retrieve->add_option("--depth", rt_depth)->check(CLI::PositiveNumber);
  retrieve->add_option("--variants", rt_variants)->check(CLI::PositiveNumber);
  retrieve->add_option("--output", rt_out);

  // pool
  auto* pool = app.add_subcommand("pool", "candidate pool from runs or from qrels");
  std::vector<std::string> pl_runs;
  std::string pl_qrels, pl_out;
  int pl_depth = 100;
  std::size_t pl_cap = 0;
  pool->add_option("--runs", pl_runs);
  pool->add_option("--depth", pl_depth)->check(CLI::PositiveNumber);
  pool->add_option("--qrels", pl_qrels, "use judged documents as candidates");
  pool->add_option("--cap", pl_cap, "per-query cap in file order (with --qrels)");
  pool->add_option("--output", pl_out);

  // expand
  auto* expand = app.add_subcommand("expand", "score candidates and add the nearest K% as pseudo-qrels");
  std::string ex_pool, ex_qrels, ex_vectors, ex_out, ex_pseudo, ex_scored;
  double ex_k = 5.0;
  expand->add_option("--pool", ex_pool)->required();
  expand->add_option("--qrels", ex_qrels, "known judgements")->required();
  expand->add_option("--vectors", ex_vectors)->required();
  expand->add_option("--top-percent", ex_k)->check(CLI::Range(0.0, 100.0));
  expand->add_option("--output", ex_out, "merged qrels");
  expand->add_option("--pseudo", ex_pseudo, "pseudo-qrels only");
  expand->add_option("--scored", ex_scored, "scored candidates CSV");

  // deciles
  auto* deciles = app.add_subcommand("deciles", "positive fraction per distance decile");
  std::string dc_scored, dc_truth, dc_out;
  deciles->add_option("--scored", dc_scored)->required();
  deciles->add_option("--truth", dc_truth)->required();
  deciles->add_option("--output", dc_out);

  // eval
  auto* eval = app.add_subcommand("eval", "MAP per run, ranked");
  std::string ev_qrels, ev_out, ev_per_query;
  std::vector<std::string> ev_runs;
  int ev_depth = kDefaultEvalDepth;
  eval->add_option("--qrels", ev_qrels)->required();
  eval->add_option("--runs", ev_runs)->required();
  eval->add_option("--depth", ev_depth)->check(CLI::PositiveNumber);
  eval->add_option("--output", ev_out);
  eval->add_option("--per-query", ev_per_query);

  // tau
  auto* tau = app.add_subcommand("tau", "Kendall's tau-b between two system rankings");
  std::string tau_a, tau_b;
  tau->add_option("--a", tau_a)->required();
  tau->add_option("--b", tau_b)->required();

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic benchmark");
  SyntheticSpec spec;
  std::string sy_dir;
  int sy_depth = 1000, sy_variants = 4;
  bool sy_runs = false;
  synth->add_option("--queries", spec.n_queries);
  synth->add_option("--docs-per-topic", spec.docs_per_topic);
  synth->add_option("--noise-docs", spec.n_noise_docs);
  synth->add_option("--vocabulary", spec.vocabulary_size);
  synth->add_option("--concentration", spec.topic_concentration);
  synth->add_option("--seed", spec.seed);
  synth->add_option("--out-dir", sy_dir)->required();
  synth->add_flag("--runs", sy_runs, "also write generated runs");
  synth->add_option("--depth", sy_depth)->check(CLI::PositiveNumber);
  synth->add_option("--variants", sy_variants)->check(CLI::PositiveNumber);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "full K / fraction / seed experiment");
  std::string sw_config, sw_dir;
  sweep->add_option("--config", sw_config)->required();
  sweep->add_option("--out-dir", sw_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (*ingest) {
      const auto docs = read_corpus(in_path, in_format);
      emit(in_out, [&](std::ostream& o) { o << write_corpus_tsv(docs); });
      std::fprintf(stderr, "documents: %zu\n", docs.size());
      if (!in_qrels.empty()) qrel_stats(read_qrels(in_qrels));
    } else if (*vectorize) {
      const auto stop = stopword_set(vz_stop);
      const auto docs = read_corpus(vz_corpus, "tsv");
      std::set<std::string> keep;
      if (!vz_pool.empty()) {
        for (const auto& [q, ds] : read_pool(vz_pool)) keep.insert(ds.begin(), ds.end());
      }
      if (!vz_qrels.empty()) {
        for (const auto& r : read_qrels(vz_qrels)) keep.insert(r.doc_id);
      }
      const bool restrict = !vz_pool.empty() || !vz_qrels.empty();
      std::vector<std::string> ids;
      std::vector<TokenizedDoc> tokens;
      for (const auto& d : docs) {
        if (restrict && !keep.count(d.doc_id)) continue;
        ids.push_back(d.doc_id);
        tokens.push_back(tokenize(d.text, stop));
      }
      if (ids.empty()) throw DataError("no documents to vectorize");
      const auto emb = embed_documents(ids, tokens, static_cast<std::size_t>(vz_dims));
      emit(vz_out, [&](std::ostream& o) { save_vectors(o, emb.vectors); });
      if (!vz_model.empty()) emit(vz_model, [&](std::ostream& o) { save_pca(o, emb.pca); });
      if (!vz_csv.empty()) emit(vz_csv, [&](std::ostream& o) { write_vectors_csv(o, emb.vectors); });
      std::fprintf(stderr, "vectors: %zu documents, vocabulary %zu, %zu components\n", emb.vectors.size(),
                   emb.vocabulary.size(), emb.pca.k());
    } else if (*retrieve) {
      const auto stop = stopword_set(rt_stop);
      const auto docs = read_corpus(rt_corpus, "tsv");
      auto qin = open_in(rt_queries);
      const auto queries = parse_queries_tsv(qin);
      const auto runs = generate_system_runs(docs, queries, rt_depth, rt_variants, stop);
      std::vector<RunEntry> all;
      for (const auto& r : runs) all.insert(all.end(), r.entries.begin(), r.entries.end());
      emit(rt_out, [&](std::ostream& o) { o << write_run(all); });
      std::fprintf(stderr, "runs: %zu\n", runs.size());
    } else if (*pool) {
      CandidatePool result;
      if (!pl_qrels.empty()) {
        if (!pl_runs.empty()) throw std::invalid_argument("give either --runs or --qrels, not both");
        const auto q = read_qrels(pl_qrels);
        result = pool_from_qrels(q, pl_cap ? std::optional<std::size_t>(pl_cap) : std::nullopt);
      } else {
        if (pl_runs.empty()) throw std::invalid_argument("--runs or --qrels is required");
        result = pool_candidates(read_runs(pl_runs), pl_depth);
      }
      emit(pl_out, [&](std::ostream& o) { write_pool(o, result); });
      pool_stats(result);
    } else if (*expand) {
      const auto p = read_pool(ex_pool);
      const auto known = read_qrels(ex_qrels);
      auto vin = open_in(ex_vectors);
      const auto vectors = load_vectors(vin);
      std::vector<QrelRecord> positives;
      for (const auto& r : known) {
        if (r.relevant()) positives.push_back(r);
      }
      const auto scored = score_candidates(p, positives, vectors);
      const auto pseudo = select_pseudo_qrels(scored, ex_k);
      std::size_t collisions = 0;
      const auto merged = merge_qrels(known, pseudo, &collisions);
      if (!ex_scored.empty()) emit(ex_scored, [&](std::ostream& o) { write_scored_csv(o, scored); });
      if (!ex_pseudo.empty()) emit(ex_pseudo, [&](std::ostream& o) { o << write_qrels(pseudo); });
      emit(ex_out, [&](std::ostream& o) { o << write_qrels(merged); });
      std::fprintf(stderr, "scored %zu pairs, %zu pseudo-qrels, %zu merged records\n", scored.size(), pseudo.size(),
                   merged.size());
    } else if (*deciles) {
      auto sin = open_in(dc_scored);
      auto scored = read_scored_csv(sin);
      std::sort(scored.begin(), scored.end(), scored_less);
      const auto truth = read_qrels(dc_truth);
      const auto report = decile_table(scored, truth);
      emit(dc_out, [&](std::ostream& o) { write_deciles_csv(o, report); });
    } else if (*eval) {
      const auto q = read_qrels(ev_qrels);
      const auto scores = rank_systems(read_runs(ev_runs), q, ev_depth);
      emit(ev_out, [&](std::ostream& o) { write_scores_csv(o, scores); });
      if (!ev_per_query.empty()) emit(ev_per_query, [&](std::ostream& o) { write_per_query_csv(o, scores); });
    } else if (*tau) {
      auto ain = open_in(tau_a);
      auto bin = open_in(tau_b);
      const auto a = read_scores_csv(ain);
      const auto b = read_scores_csv(bin);
      const auto c = kendall_tau(a, b);
      std::printf("tau\t%.9f\nsystems\t%zu\nconcordant\t%llu\ndiscordant\t%llu\nties_a\t%llu\nties_b\t%llu\n",
                  c.tau, c.n_systems, static_cast<unsigned long long>(c.concordant),
                  static_cast<unsigned long long>(c.discordant), static_cast<unsigned long long>(c.ties_a),
                  static_cast<unsigned long long>(c.ties_b));
    } else if (*synth) {
      const auto coll = generate_synthetic(spec);
      const fs::path dir(sy_dir);
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) throw DataError("cannot create " + sy_dir + ": " + ec.message());
      emit((dir / "corpus.tsv").string(), [&](std::ostream& o) { o << write_corpus_tsv(coll.docs); });
      emit((dir / "qrels.txt").string(), [&](std::ostream& o) { o << write_qrels(coll.qrels); });
      emit((dir / "queries.tsv").string(), [&](std::ostream& o) {
        for (const auto& q : coll.queries) o << q.id << '\t' << q.text << '\n';
      });
      if (sy_runs) {
        fs::create_directories(dir / "runs", ec);
        if (ec) throw DataError("cannot create runs directory: " + ec.message());
        const auto runs = generate_system_runs(coll.docs, coll.queries, sy_depth, sy_variants, smart_stopwords());
        for (const auto& r : runs) {
          emit((dir / "runs" / (r.tag + ".run")).string(), [&](std::ostream& o) { o << write_run(r.entries); });
        }
      }
      std::fprintf(stderr, "documents: %zu, queries: %zu, qrels: %zu\n", coll.docs.size(), coll.queries.size(),
                   coll.qrels.size());
    } else if (*sweep) {
      const auto config = load_config(sw_config);
      const auto data = load_dataset(config);
      const auto result = run_experiment(config, data);
      for (const auto& d : result.diagnostics) std::cerr << "diagnostic: " << d << '\n';
      for (const auto& p : emit_report(result, sw_dir)) std::cerr << "wrote " << p.string() << '\n';
    }
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
