// Copyright 2026 The LIC Authors. All Rights Reserved.
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

// Ranking metrics. Undefined metrics (single-class input, zero baseline) are
// std::nullopt rather than a sentinel number.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace lic {

/// Rank-sum (Mann-Whitney) AUC, ties counted as 1/2, O(n log n).
inline std::optional<double> auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("auc: size mismatch");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  std::uint64_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]]) {
        positive_rank_sum += mid_rank;
        ++n_pos;
      }
    i = j;
  }
  const std::uint64_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;
  const double np = static_cast<double>(n_pos);
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

/// Impression-weighted mean of per-user AUC over users that have both classes.
inline std::optional<double> uauc(std::span<const std::int64_t> users,
                                  std::span<const double> scores, std::span<const int> labels) {
  if (users.size() != scores.size() || users.size() != labels.size())
    throw std::invalid_argument("uauc: size mismatch");
  std::map<std::int64_t, std::vector<std::size_t>> by_user;
  for (std::size_t i = 0; i < users.size(); ++i) by_user[users[i]].push_back(i);
  double weighted = 0.0;
  double weight = 0.0;
  std::vector<double> s;
  std::vector<int> l;
  for (const auto& [user, idx] : by_user) {
    s.clear();
    l.clear();
    for (auto i : idx) {
      s.push_back(scores[i]);
      l.push_back(labels[i]);
    }
    if (auto a = auc(s, l)) {
      weighted += *a * static_cast<double>(idx.size());
      weight += static_cast<double>(idx.size());
    }
  }
  if (weight == 0.0) return std::nullopt;
  return weighted / weight;
}

/// Relative improvement in percent: 100 * (new / base - 1).
inline std::optional<double> rela_impr(double metric_new, double metric_base) {
  if (!(metric_base > 0.0)) return std::nullopt;
  return 100.0 * (metric_new / metric_base - 1.0);
}

}  // namespace lic
