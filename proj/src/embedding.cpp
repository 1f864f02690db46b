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

#include "qrelx/embedding.hpp"

#include <stdexcept>

namespace qrelx {

Embedding embed_documents(std::span<const std::string> ids, std::span<const TokenizedDoc> docs, std::size_t dims,
                          const PcaOptions& options) {
  if (ids.size() != docs.size()) throw std::invalid_argument("embed_documents: size mismatch");
  Embedding e;
  e.vocabulary = Vocabulary::build(docs);
  const auto sparse = tfidf_vectors(docs, e.vocabulary);
  e.pca = fit_pca(sparse, e.vocabulary.size(), dims, options);
  e.vectors = DocumentVectors({ids.begin(), ids.end()}, project_all(e.pca, sparse));
  return e;
}

}  // namespace qrelx
