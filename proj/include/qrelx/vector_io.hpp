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
#include <ostream>

#include "qrelx/expansion.hpp"
#include "qrelx/pca.hpp"

// QXV1 files: "QXV1", u32 kind, then little-endian u64 dimensions followed by
// row-major f64 data.
//   kind 1 (vector set): rows, cols, rows*cols reals, then rows doc ids
//                        (u32 length + bytes each).
//   kind 2 (PCA model):  k, V, mean[V], explained_variance[k], components[k*V].
namespace qrelx {

void save_vectors(std::ostream& out, const DocumentVectors& vectors);
DocumentVectors load_vectors(std::istream& in);

void save_pca(std::ostream& out, const PcaModel& model);
PcaModel load_pca(std::istream& in);

/// "doc_id,c0,c1,..." with 9-decimal reals.
void write_vectors_csv(std::ostream& out, const DocumentVectors& vectors);

}  // namespace qrelx
