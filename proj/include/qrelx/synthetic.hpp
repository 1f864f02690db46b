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
#include <vector>

#include "qrelx/formats.hpp"
#include "qrelx/retrieval.hpp"

namespace qrelx {

/// Desk-scale stand-in for a judged test collection: one topic per query,
/// topical relevant documents and a shared pool of background documents.
struct SyntheticSpec {
  int n_queries = 25;
  int docs_per_topic = 20;
  int n_noise_docs = 2000;
  int vocabulary_size = 5000;
  /// Probability that a token of a relevant document is drawn from its topic.
  double topic_concentration = 0.35;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SyntheticCollection {
  std::vector<RawDocument> docs;
  std::vector<Query> queries;
  std::vector<QrelRecord> qrels;  // positives only, grade 1
};

/// Deterministic under `spec.seed`.
SyntheticCollection generate_synthetic(const SyntheticSpec& spec);

}  // namespace qrelx
