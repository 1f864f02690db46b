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

#include "qrelx/vector_io.hpp"

#include "qrelx/binary_io.hpp"
#include "qrelx/csv.hpp"

namespace qrelx {
namespace {

constexpr std::uint32_t kVectorSet = 1;
constexpr std::uint32_t kPcaModel = 2;

void expect_kind(binary::Reader& r, std::uint32_t kind) {
  r.expect_magic("QXV1");
  const auto got = r.u32();
  if (got != kind) throw DataError("QXV1 file holds kind " + std::to_string(got) + ", expected " + std::to_string(kind));
}

}  // namespace

void save_vectors(std::ostream& out, const DocumentVectors& vectors) {
  binary::Writer w(out);
  w.magic("QXV1");
  w.u32(kVectorSet);
  const auto& m = vectors.matrix();
  w.u64(static_cast<std::uint64_t>(m.rows()));
  w.u64(static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) w.f64(m(i, j));
  }
  for (const auto& id : vectors.ids()) w.str(id);
}

DocumentVectors load_vectors(std::istream& in) {
  binary::Reader r(in);
  expect_kind(r, kVectorSet);
  const auto rows = static_cast<Eigen::Index>(r.u64());
  const auto cols = static_cast<Eigen::Index>(r.u64());
  RowMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = r.f64();
  }
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(rows));
  for (Eigen::Index i = 0; i < rows; ++i) ids.push_back(r.str());
  return DocumentVectors(std::move(ids), std::move(m));
}

void save_pca(std::ostream& out, const PcaModel& model) {
  binary::Writer w(out);
  w.magic("QXV1");
  w.u32(kPcaModel);
  w.u64(model.k());
  w.u64(model.dimension());
  for (Eigen::Index i = 0; i < model.mean.size(); ++i) w.f64(model.mean[i]);
  for (Eigen::Index i = 0; i < model.explained_variance.size(); ++i) w.f64(model.explained_variance[i]);
  for (Eigen::Index i = 0; i < model.components.rows(); ++i) {
    for (Eigen::Index j = 0; j < model.components.cols(); ++j) w.f64(model.components(i, j));
  }
}

PcaModel load_pca(std::istream& in) {
  binary::Reader r(in);
  expect_kind(r, kPcaModel);
  const auto k = static_cast<Eigen::Index>(r.u64());
  const auto dim = static_cast<Eigen::Index>(r.u64());
  PcaModel model;
  model.mean.resize(dim);
  for (Eigen::Index i = 0; i < dim; ++i) model.mean[i] = r.f64();
  model.explained_variance.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) model.explained_variance[i] = r.f64();
  model.components.resize(k, dim);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) model.components(i, j) = r.f64();
  }
  return model;
}

void write_vectors_csv(std::ostream& out, const DocumentVectors& vectors) {
  const auto& m = vectors.matrix();
  out << "doc_id";
  for (Eigen::Index j = 0; j < m.cols(); ++j) out << ",c" << j;
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << csv::field(vectors.ids()[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << csv::real(m(i, j));
    out << '\n';
  }
}

}  // namespace qrelx
