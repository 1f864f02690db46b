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

#include "qrelx/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <stdexcept>

#include "qrelx/random.hpp"

namespace qrelx {
namespace {

constexpr int kTopicTerms = 40;
constexpr int kQueryTerms = 4;
constexpr int kMinLength = 40;
constexpr int kMaxLength = 200;
// Topic terms are drawn from below the most frequent background terms.
constexpr int kReservedHead = 100;
// Share of background documents that keyword-match one topic's query terms.
constexpr double kDistractorShare = 0.5;
constexpr double kDistractorRate = 0.12;

class Categorical {
 public:
  explicit Categorical(std::vector<double> weights) : cdf_(std::move(weights)) {
    std::partial_sum(cdf_.begin(), cdf_.end(), cdf_.begin());
    for (auto& c : cdf_) c /= cdf_.back();
  }

  std::size_t sample(SplitMix64& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

std::vector<double> zipf(std::size_t n, double exponent) {
  std::vector<double> w(n);
  for (std::size_t r = 0; r < n; ++r) w[r] = 1.0 / std::pow(static_cast<double>(r + 1), exponent);
  return w;
}

std::string term_name(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "t%05zu", index);
  return buf;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (n_queries <= 0 || docs_per_topic <= 0 || n_noise_docs <= 0 || vocabulary_size <= 0) {
    throw std::invalid_argument("synthetic spec: counts must be positive");
  }
  if (vocabulary_size < kReservedHead + kTopicTerms) {
    throw std::invalid_argument("synthetic spec: vocabulary_size must be >= " +
                                std::to_string(kReservedHead + kTopicTerms));
  }
  if (!(topic_concentration > 0.0 && topic_concentration <= 1.0)) {
    throw std::invalid_argument("synthetic spec: topic_concentration must lie in (0, 1]");
  }
}

SyntheticCollection generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  const auto vocab = static_cast<std::size_t>(spec.vocabulary_size);
  const Categorical background(zipf(vocab, 1.05));
  const Categorical topic_weights(zipf(kTopicTerms, 0.7));

  std::vector<std::vector<std::size_t>> topics(static_cast<std::size_t>(spec.n_queries));
  for (auto& topic : topics) {
    std::set<std::size_t> chosen;
    while (topic.size() < kTopicTerms) {
      const std::size_t t = kReservedHead + rng.below(vocab - kReservedHead);
      if (chosen.insert(t).second) topic.push_back(t);
    }
  }

  auto length = [&] { return kMinLength + static_cast<int>(rng.below(kMaxLength - kMinLength + 1)); };
  auto render = [](const std::vector<std::size_t>& tokens) {
    std::string text;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) text += ' ';
      text += term_name(tokens[i]);
    }
    return text;
  };

  struct Draft {
    std::string text;
    int topic;  // -1 for background
  };
  std::vector<Draft> drafts;

  for (int q = 0; q < spec.n_queries; ++q) {
    const auto& topic = topics[static_cast<std::size_t>(q)];
    for (int d = 0; d < spec.docs_per_topic; ++d) {
      // Per-document focus varies so that some relevant documents are hard.
      const double focus = std::min(1.0, spec.topic_concentration * (0.5 + rng.uniform()));
      std::vector<std::size_t> tokens(static_cast<std::size_t>(length()));
      for (auto& t : tokens) t = rng.uniform() < focus ? topic[topic_weights.sample(rng)] : background.sample(rng);
      drafts.push_back({render(tokens), q});
    }
  }
  for (int d = 0; d < spec.n_noise_docs; ++d) {
    std::vector<std::size_t> tokens(static_cast<std::size_t>(length()));
    const bool distractor = rng.uniform() < kDistractorShare;
    const auto& near = topics[rng.below(topics.size())];
    for (auto& t : tokens) {
      t = (distractor && rng.uniform() < kDistractorRate) ? near[rng.below(kQueryTerms)] : background.sample(rng);
    }
    drafts.push_back({render(tokens), -1});
  }

  // Shuffled ids so that id order carries no relevance signal.
  std::vector<std::size_t> order(drafts.size());
  std::iota(order.begin(), order.end(), 0);
  fisher_yates(std::span<std::size_t>(order), rng);

  SyntheticCollection out;
  out.docs.resize(drafts.size());
  auto query_id = [](int q) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "Q%03d", q + 1);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "D%06zu", order[i] + 1);
    out.docs[i] = {buf, std::move(drafts[i].text)};
    if (drafts[i].topic >= 0) out.qrels.push_back({query_id(drafts[i].topic), buf, 1});
  }
  std::sort(out.docs.begin(), out.docs.end(), [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; });
  std::sort(out.qrels.begin(), out.qrels.end(), qrel_less);

  for (int q = 0; q < spec.n_queries; ++q) {
    const auto& topic = topics[static_cast<std::size_t>(q)];
    std::vector<std::size_t> terms(topic.begin(), topic.begin() + kQueryTerms);
    out.queries.push_back({query_id(q), render(terms)});
  }
  return out;
}

}  // namespace qrelx
