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

#include <span>
#include <string>

#include "qrelx/expansion.hpp"
#include "qrelx/pca.hpp"
#include "qrelx/vectorspace.hpp"

namespace qrelx {

/// Vocabulary, PCA basis and reduced vectors of one document set.
struct Embedding {
  Vocabulary vocabulary;
  PcaModel pca;
  DocumentVectors vectors;
};

/// tf.idf over `docs`, PCA fitted on the same documents, every document
/// projected to min(dims, V, n) components.
Embedding embed_documents(std::span<const std::string> ids, std::span<const TokenizedDoc> docs, std::size_t dims,
                          const PcaOptions& options = {});

}  // namespace qrelx
