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

#include "qrelx/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "qrelx/embedding.hpp"
#include "qrelx/errors.hpp"
#include "qrelx/evaluation.hpp"
#include "qrelx/random.hpp"

namespace qrelx {

std::vector<QrelRecord> subsample_qrels(std::span<const QrelRecord> qrels, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("qrel fraction must lie in (0, 1]");

  std::map<std::string, std::vector<std::string>> positives;
  std::vector<QrelRecord> out;
  for (const auto& r : qrels) {
    if (r.relevant()) {
      positives[r.query_id].push_back(r.doc_id);
    } else {
      out.push_back(r);
    }
  }
  std::map<std::pair<std::string, std::string>, int> grade;
  for (const auto& r : qrels) grade.emplace(std::make_pair(r.query_id, r.doc_id), r.relevance);

  for (auto& [query, docs] : positives) {
    std::sort(docs.begin(), docs.end());
    SplitMix64 rng(seed ^ fnv1a64(query));
    fisher_yates(std::span<std::string>(docs), rng);
    const auto n = docs.size();
    const auto wanted = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5));
    const auto keep = std::min(n, std::max<std::size_t>(1, wanted));
    for (std::size_t i = 0; i < keep; ++i) out.push_back({query, docs[i], grade.at({query, docs[i]})});
  }
  std::sort(out.begin(), out.end(), qrel_less);
  return out;
}

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const {
  if (qrel_fractions.empty()) throw std::invalid_argument("config: qrel_fraction is empty");
  for (double f : qrel_fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw std::invalid_argument("config: qrel_fraction values must lie in (0, 1]");
  }
  std::set<double> distinct;
  for (double k : k_values) {
    if (!(k >= 0.0 && k <= 100.0)) throw std::invalid_argument("config: k_values must lie in [0, 100]");
    if (!distinct.insert(k).second) throw std::invalid_argument("config: k_values must be distinct");
  }
  if (seeds.empty()) throw std::invalid_argument("config: seeds is empty");
  if (pool_depth < 1 || pca_dims < 1 || eval_depth < 1 || retrieval_depth < 1 || n_variants < 1) {
    throw std::invalid_argument("config: depths, pca_dims and n_variants must be >= 1");
  }
  if (candidate_source != "runs" && candidate_source != "qrels") {
    throw std::invalid_argument("config: candidate_source must be \"runs\" or \"qrels\"");
  }
  if (corpus_format != "tsv" && corpus_format != "ohsumed" && corpus_format != "trecsgml") {
    throw std::invalid_argument("config: corpus_format must be tsv, ohsumed or trecsgml");
  }
  if (synthetic) {
    synthetic->validate();
  } else if (corpus.empty() || qrels.empty() || (runs_dir.empty() && queries.empty())) {
    throw std::invalid_argument("config: need corpus, qrels and runs_dir or queries (or a synthetic block)");
  }
}

namespace {

template <typename T>
T get_as(const nlohmann::json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument(std::string("config: wrong type for ") + key);
  }
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known, const char* where) {
  if (!j.is_object()) throw std::invalid_argument(std::string("config: ") + where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw std::invalid_argument(std::string("config: unknown key \"") + key + "\" in " + where);
    }
  }
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
  reject_unknown(j,
                 {"corpus", "corpus_format", "qrels", "runs_dir", "queries", "stopwords", "synthetic", "qrel_fraction",
                  "k_values", "seeds", "pool_depth", "pca_dims", "eval_depth", "retrieval_depth", "n_variants",
                  "candidate_source", "candidate_cap", "decile_analysis"},
                 "top level");
  ExperimentConfig c;
  auto str = [&](const char* key, std::string& dst) {
    if (j.contains(key)) dst = get_as<std::string>(j.at(key), key);
  };
  auto integer = [&](const char* key, int& dst) {
    if (j.contains(key)) dst = get_as<int>(j.at(key), key);
  };
  str("corpus", c.corpus);
  str("corpus_format", c.corpus_format);
  str("qrels", c.qrels);
  str("runs_dir", c.runs_dir);
  str("queries", c.queries);
  str("stopwords", c.stopwords);
  str("candidate_source", c.candidate_source);
  integer("pool_depth", c.pool_depth);
  integer("pca_dims", c.pca_dims);
  integer("eval_depth", c.eval_depth);
  integer("retrieval_depth", c.retrieval_depth);
  integer("n_variants", c.n_variants);
  if (j.contains("qrel_fraction")) {
    const auto& f = j.at("qrel_fraction");
    c.qrel_fractions = f.is_array() ? get_as<std::vector<double>>(f, "qrel_fraction")
                                    : std::vector<double>{get_as<double>(f, "qrel_fraction")};
  }
  if (j.contains("k_values")) c.k_values = get_as<std::vector<double>>(j.at("k_values"), "k_values");
  if (j.contains("seeds")) {
    const auto& s = j.at("seeds");
    if (!s.is_array()) throw std::invalid_argument("config: seeds must be an array");
    c.seeds.clear();
    for (const auto& v : s) {
      if (!v.is_number_integer()) throw std::invalid_argument("config: seeds must be integers");
      c.seeds.push_back(v.is_number_unsigned() ? v.get<std::uint64_t>()
                                               : static_cast<std::uint64_t>(v.get<std::int64_t>()));
    }
  }
  if (j.contains("candidate_cap") && !j.at("candidate_cap").is_null()) {
    c.candidate_cap = get_as<std::size_t>(j.at("candidate_cap"), "candidate_cap");
  }
  if (j.contains("decile_analysis")) c.decile_analysis = get_as<bool>(j.at("decile_analysis"), "decile_analysis");
  if (j.contains("synthetic") && !j.at("synthetic").is_null()) {
    const auto& s = j.at("synthetic");
    reject_unknown(s,
                   {"n_queries", "docs_per_topic", "n_noise_docs", "vocabulary_size", "topic_concentration", "seed"},
                   "synthetic");
    SyntheticSpec spec;
    if (s.contains("n_queries")) spec.n_queries = get_as<int>(s.at("n_queries"), "n_queries");
    if (s.contains("docs_per_topic")) spec.docs_per_topic = get_as<int>(s.at("docs_per_topic"), "docs_per_topic");
    if (s.contains("n_noise_docs")) spec.n_noise_docs = get_as<int>(s.at("n_noise_docs"), "n_noise_docs");
    if (s.contains("vocabulary_size")) spec.vocabulary_size = get_as<int>(s.at("vocabulary_size"), "vocabulary_size");
    if (s.contains("topic_concentration")) {
      spec.topic_concentration = get_as<double>(s.at("topic_concentration"), "topic_concentration");
    }
    if (s.contains("seed")) spec.seed = get_as<std::uint64_t>(s.at("seed"), "seed");
    c.synthetic = spec;
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return parse_config(j);
}

// ---------------------------------------------------------------------------
// Data

namespace {

std::ifstream open_or_throw(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw DataError("cannot open " + p.string());
  return in;
}

}  // namespace

std::vector<Run> generate_system_runs(std::span<const RawDocument> docs, std::span<const Query> queries, int depth,
                                      int n_variants, const StopwordSet& stopwords) {
  const auto index = InvertedIndex::build(docs, stopwords);
  const auto models = WeightingModel::defaults();
  auto runs = generate_runs(index, models, queries, depth, stopwords);
  return n_variants > 1 ? jittered_variants(runs, n_variants) : runs;
}

Dataset make_dataset(std::span<const RawDocument> docs, std::vector<QrelRecord> qrels, std::vector<Run> runs,
                     const StopwordSet& stopwords) {
  Dataset d;
  d.doc_ids.resize(docs.size());
  d.tokens.resize(docs.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(docs.size()); ++i) {
    d.doc_ids[i] = docs[i].doc_id;
    d.tokens[i] = tokenize(docs[i].text, stopwords);
  }
  for (std::size_t i = 0; i < d.doc_ids.size(); ++i) {
    if (!d.doc_index.emplace(d.doc_ids[i], i).second) throw DuplicateError("duplicate document id " + d.doc_ids[i]);
  }
  d.qrels = std::move(qrels);
  d.runs = std::move(runs);
  return d;
}

Dataset load_dataset(const ExperimentConfig& config) {
  StopwordSet stopwords = smart_stopwords();
  if (!config.stopwords.empty()) {
    auto in = open_or_throw(config.stopwords);
    stopwords = load_stopwords(in);
  }

  if (config.synthetic) {
    const auto synth = generate_synthetic(*config.synthetic);
    auto runs = generate_system_runs(synth.docs, synth.queries, config.retrieval_depth, config.n_variants, stopwords);
    return make_dataset(synth.docs, synth.qrels, std::move(runs), stopwords);
  }

  std::vector<RawDocument> docs;
  {
    auto in = open_or_throw(config.corpus);
    if (config.corpus_format == "ohsumed") {
      docs = parse_ohsumed(in);
    } else if (config.corpus_format == "trecsgml") {
      docs = parse_trec_sgml(in);
    } else {
      docs = parse_corpus_tsv(in);
    }
  }
  std::vector<QrelRecord> qrels;
  {
    auto in = open_or_throw(config.qrels);
    qrels = parse_qrels(in);
  }
  std::vector<Run> runs;
  if (!config.runs_dir.empty()) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(config.runs_dir)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      auto in = open_or_throw(f);
      for (auto& r : split_runs(parse_run(in))) runs.push_back(std::move(r));
    }
  } else {
    auto in = open_or_throw(config.queries);
    const auto queries = parse_queries_tsv(in);
    runs = generate_system_runs(docs, queries, config.retrieval_depth, config.n_variants, stopwords);
  }
  return make_dataset(docs, std::move(qrels), std::move(runs), stopwords);
}

// ---------------------------------------------------------------------------
// Sweep

namespace {

struct JobOutput {
  std::vector<SweepRow> rows;
  std::optional<DecileEntry> deciles;
  std::vector<std::string> diagnostics;
};

std::string describe(std::uint64_t seed, double fraction) {
  return "seed " + std::to_string(seed) + ", fraction " + std::to_string(fraction);
}

JobOutput run_job(const ExperimentConfig& config, const Dataset& data, const CandidatePool& full_pool,
                  const std::vector<SystemScore>& reference, std::uint64_t seed, double fraction) {
  JobOutput out;
  const auto subsampled = subsample_qrels(data.qrels, fraction, seed);
  std::vector<QrelRecord> known;
  std::set<std::string> known_queries;
  for (const auto& r : subsampled) {
    if (r.relevant()) {
      known.push_back(r);
      known_queries.insert(r.query_id);
    }
  }

  CandidatePool pool;
  for (const auto& [q, docs] : full_pool) {
    if (known_queries.contains(q)) pool.emplace(q, docs);
  }

  // Fit set: pooled candidates plus known positives.
  std::set<std::string> fit_ids;
  for (const auto& [q, docs] : pool) fit_ids.insert(docs.begin(), docs.end());
  for (const auto& r : known) fit_ids.insert(r.doc_id);
  std::vector<std::string> ids(fit_ids.begin(), fit_ids.end());
  std::vector<TokenizedDoc> tokens;
  tokens.reserve(ids.size());
  for (const auto& id : ids) {
    auto it = data.doc_index.find(id);
    if (it == data.doc_index.end()) throw DataError("document " + id + " is not in the corpus");
    tokens.push_back(data.tokens[it->second]);
  }
  const auto embedding = embed_documents(ids, tokens, static_cast<std::size_t>(config.pca_dims));
  const auto scored = score_candidates(pool, known, embedding.vectors);

  if (config.decile_analysis && !scored.empty()) {
    out.deciles = DecileEntry{seed, fraction, decile_table(scored, data.qrels)};
  }

  const auto baseline = rank_systems(data.runs, subsampled, config.eval_depth);
  const double tau_baseline = kendall_tau(reference, baseline).tau;

  std::vector<double> ks = config.k_values;
  std::sort(ks.begin(), ks.end());
  for (double k : ks) {
    SweepRow row;
    row.seed = seed;
    row.fraction = fraction;
    row.k = k;
    row.tau_baseline = tau_baseline;
    row.n_scored = scored.size();
    row.n_subsampled = subsampled.size();

    try {
      const auto pseudo = select_pseudo_qrels(scored, k);
      const auto merged = merge_qrels(subsampled, pseudo, &row.collisions);
      row.n_pseudo = pseudo.size();
      row.n_merged = merged.size();
      std::set<std::string> receiving;
      for (const auto& p : pseudo) receiving.insert(p.query_id);
      row.n_zero_queries = known_queries.size() - receiving.size();
      row.tau_expanded = kendall_tau(reference, rank_systems(data.runs, merged, config.eval_depth)).tau;
      out.rows.push_back(row);
    } catch (const std::exception& e) {
      out.diagnostics.push_back(describe(seed, fraction) + ", K " + std::to_string(k) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

SweepResult run_experiment(const ExperimentConfig& config, const Dataset& data) {
  config.validate();
  if (data.runs.size() < 2) throw DataError("an experiment needs at least two runs");

  const CandidatePool full_pool = config.candidate_source == "qrels"
                                      ? pool_from_qrels(data.qrels, config.candidate_cap)
                                      : pool_candidates(data.runs, config.pool_depth);
  const auto reference = rank_systems(data.runs, data.qrels, config.eval_depth);

  struct Job {
    std::uint64_t seed;
    double fraction;
  };
  std::vector<Job> jobs;
  for (auto seed : config.seeds) {
    for (double f : config.qrel_fractions) jobs.push_back({seed, f});
  }

  std::vector<JobOutput> outputs(jobs.size());
#pragma omp parallel for schedule(dynamic) if (jobs.size() > 1)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(jobs.size()); ++i) {
    try {
      outputs[i] = run_job(config, data, full_pool, reference, jobs[i].seed, jobs[i].fraction);
    } catch (const std::exception& e) {
      outputs[i].diagnostics.push_back(describe(jobs[i].seed, jobs[i].fraction) + ": " + e.what());
    }
  }

  SweepResult result;
  for (auto& o : outputs) {
    result.rows.insert(result.rows.end(), o.rows.begin(), o.rows.end());
    if (o.deciles) result.deciles.push_back(*o.deciles);
    result.diagnostics.insert(result.diagnostics.end(), o.diagnostics.begin(), o.diagnostics.end());
  }
  std::sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.seed != b.seed) return a.seed < b.seed;
    if (a.fraction != b.fraction) return a.fraction < b.fraction;
    return a.k < b.k;
  });
  std::sort(result.deciles.begin(), result.deciles.end(), [](const DecileEntry& a, const DecileEntry& b) {
    if (a.seed != b.seed) return a.seed < b.seed;
    return a.fraction < b.fraction;
  });
  return result;
}

}  // namespace qrelx
