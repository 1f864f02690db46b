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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "qrelx/expansion.hpp"
#include "qrelx/formats.hpp"
#include "qrelx/retrieval.hpp"
#include "qrelx/synthetic.hpp"
#include "qrelx/vectorspace.hpp"

namespace qrelx {

/// Keeps max(1, floor(fraction * n + 0.5)) of each query's n positives: the
/// positives are sorted by doc_id, shuffled by Fisher-Yates with
/// SplitMix64(seed ^ fnv1a64(query_id)), and the prefix is kept. Judged
/// non-relevant records pass through. Output is in canonical order.
std::vector<QrelRecord> subsample_qrels(std::span<const QrelRecord> qrels, double fraction, std::uint64_t seed);

struct ExperimentConfig {
  // Real data. Ignored when `synthetic` is set.
  std::string corpus;
  std::string corpus_format = "tsv";  // tsv | ohsumed | trecsgml
  std::string qrels;
  std::string runs_dir;  // every regular file is parsed as a TREC run
  std::string queries;   // TSV; used to generate runs when runs_dir is empty
  std::string stopwords;  // empty: bundled SMART list

  std::optional<SyntheticSpec> synthetic;

  std::vector<double> qrel_fractions{0.05};
  std::vector<double> k_values{0.0, 1.0, 2.0, 5.0, 10.0};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int pool_depth = 100;
  int pca_dims = 200;
  int eval_depth = 1000;
  int retrieval_depth = 1000;
  /// Clones per generated run (jittered); 4 models x 4 gives 16 systems.
  int n_variants = 4;
  /// "runs": pool the systems' top documents. "qrels": candidates are the
  /// judged documents themselves, optionally capped per query in file order.
  std::string candidate_source = "runs";
  std::optional<std::size_t> candidate_cap;
  bool decile_analysis = true;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

/// Strict: unknown keys and wrong types are rejected.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Everything an experiment reads, already tokenized.
struct Dataset {
  std::vector<std::string> doc_ids;
  std::unordered_map<std::string, std::size_t> doc_index;
  std::vector<TokenizedDoc> tokens;
  std::vector<QrelRecord> qrels;  // full judgements, file order
  std::vector<Run> runs;
};

Dataset load_dataset(const ExperimentConfig& config);
Dataset make_dataset(std::span<const RawDocument> docs, std::vector<QrelRecord> qrels, std::vector<Run> runs,
                     const StopwordSet& stopwords);

/// Four default models over the collection, each cloned `n_variants` times.
std::vector<Run> generate_system_runs(std::span<const RawDocument> docs, std::span<const Query> queries,
                                      int depth, int n_variants, const StopwordSet& stopwords);

struct SweepRow {
  std::uint64_t seed = 0;
  double fraction = 0.0;
  double k = 0.0;
  double tau_baseline = 0.0;
  double tau_expanded = 0.0;
  std::size_t n_pseudo = 0;
  std::size_t n_zero_queries = 0;
  std::size_t n_scored = 0;     // candidate pairs scored (N)
  std::size_t n_subsampled = 0;  // |subsampled qrels|
  std::size_t n_merged = 0;      // |merged qrels|
  std::size_t collisions = 0;
};

struct DecileEntry {
  std::uint64_t seed = 0;
  double fraction = 0.0;
  DecileReport report{};
};

struct SweepResult {
  std::vector<SweepRow> rows;        // sorted by (seed, fraction, K)
  std::vector<DecileEntry> deciles;  // sorted by (seed, fraction)
  std::vector<std::string> diagnostics;
};

/// One job per (seed, fraction): subsample, embed pool + known positives,
/// score, then for every K select, merge and compare system rankings against
/// the ranking under the full qrels.
SweepResult run_experiment(const ExperimentConfig& config, const Dataset& data);

}  // namespace qrelx
