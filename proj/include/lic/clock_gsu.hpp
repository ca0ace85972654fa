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

// Stage-1 search over a long behavior sequence.
//
// Every behavior gets a relevance score
//
//   score = <concat_i W_b^i b, concat_i W_q^i q> / sqrt(heads * d)
//         + s(phi(gap(clock(b), clock(now))))
//
// and the K best are kept with a bounded heap. Ordering is total: higher
// score first, then the more recent timestamp, then the lower index.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "lic/behavior_store.hpp"
#include "lic/params.hpp"
#include "lic/projection_cache.hpp"
#include "lic/temporal.hpp"
#include "lic/tensor.hpp"

namespace lic {

inline constexpr std::size_t kDefaultTopK = 100;

/// s(phi): rectifier hidden layer then a linear scalar output.
inline double time_score(const TimeFeatures& tf, const TimeScoreNet& net) noexcept {
  const auto& w1 = net.layer1.weight;
  double out = net.layer2.bias[0];
  for (std::size_t j = 0; j < w1.rows(); ++j) {
    auto row = w1.row(j);
    double pre = net.layer1.bias[j];
    for (std::size_t c = 0; c < kTimeFeatureDim; ++c) pre += row[c] * tf[c];
    if (pre > 0.0) out += net.layer2.weight(0, j) * pre;
  }
  return out;
}

/// s evaluated at every whole-second gap, for one parameter version.
struct TimeScoreTable {
  std::vector<double> by_gap_seconds;
  std::uint64_t params_version = 0;

  TimeScoreTable() = default;
  TimeScoreTable(const TimeScoreNet& net, std::uint64_t version) : params_version(version) {
    by_gap_seconds.resize(kMaxGapSeconds + 1);
    for (std::int32_t s = 0; s <= kMaxGapSeconds; ++s)
      by_gap_seconds[s] = time_score(time_features_for_gap_seconds(s), net);
  }
  double operator()(std::int32_t gap_seconds) const noexcept { return by_gap_seconds[gap_seconds]; }
};

inline double gsu_score(const ProjectedBehavior& pb, const ProjectedQuery& pq, ClockTime t_cur,
                        const TimeScoreNet& net) {
  if (pb.params_version != pq.params_version)
    throw StaleProjectionError("gsu_score: behavior projected at version " +
                               std::to_string(pb.params_version) + ", query at " +
                               std::to_string(pq.params_version));
  if (pb.concat.size() != pq.concat.size())
    throw ConfigError("gsu_score: projection width mismatch");
  const double scale = 1.0 / std::sqrt(static_cast<double>(pq.concat.size()));
  return dot(pb.concat, pq.concat) * scale +
         time_score(time_features(circular_gap(pb.clock_time, t_cur)), net);
}

struct ScoredBehavior {
  std::size_t behavior_index = 0;
  double score = 0.0;
  GapMinutes gap;
  std::int32_t gap_seconds = 0;
  Timestamp timestamp;
};

/// True if `a` is ranked ahead of `b`.
inline bool ranks_before(const ScoredBehavior& a, const ScoredBehavior& b) noexcept {
  if (a.score != b.score) return a.score > b.score;
  if (a.timestamp != b.timestamp) return a.timestamp > b.timestamp;
  return a.behavior_index < b.behavior_index;
}

/// Retrieved behaviors, best first, with their embeddings copied out (z_1..z_K).
struct SubSequence {
  std::vector<ScoredBehavior> entries;
  Matrix embeddings;  // K' x L

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }
  std::span<const double> embedding(std::size_t k) const { return embeddings.row(k); }
};

/// Bounded-heap partial selection; output sorted by `ranks_before`.
inline std::vector<ScoredBehavior> select_top_k(std::span<const ScoredBehavior> scored,
                                                std::size_t k) {
  std::vector<ScoredBehavior> heap;
  if (k == 0) return heap;
  heap.reserve(std::min(k, scored.size()));
  // With ranks_before as the heap's "less", the front is the worst kept entry.
  for (const auto& s : scored) {
    if (heap.size() < k) {
      heap.push_back(s);
      std::push_heap(heap.begin(), heap.end(), ranks_before);
    } else if (ranks_before(s, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), ranks_before);
      heap.back() = s;
      std::push_heap(heap.begin(), heap.end(), ranks_before);
    }
  }
  std::sort_heap(heap.begin(), heap.end(), ranks_before);
  return heap;
}

/// Reference selection by sorting everything; used as the benchmark baseline.
inline std::vector<ScoredBehavior> full_sort_top_k(std::span<const ScoredBehavior> scored,
                                                   std::size_t k) {
  std::vector<ScoredBehavior> all(scored.begin(), scored.end());
  std::sort(all.begin(), all.end(), ranks_before);
  if (all.size() > k) all.resize(k);
  return all;
}

/// Scores every behavior through the projection cache and a time-score table.
inline std::vector<ScoredBehavior> score_projected(const ProjectedSequence& seq,
                                                   const ProjectedQuery& pq, ClockTime t_cur,
                                                   const TimeScoreTable& table) {
  if (seq.params_version != pq.params_version || table.params_version != pq.params_version)
    throw StaleProjectionError("score_projected: mixed parameter versions");
  std::vector<ScoredBehavior> out(seq.size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(pq.concat.size()));
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const std::int32_t gap = circular_gap_seconds(seq.clock_times[i], t_cur);
    out[i] = {i, dot(seq.rows.row(i), pq.concat) * scale + table(gap),
              GapMinutes{gap / 60.0}, gap, seq.timestamps[i]};
  }
  return out;
}

/// sum_i W_b^i^T W_q^i q / sqrt(heads * d): the query folded back into behavior
/// space, so that the item term becomes b . folded without projecting b.
inline Vec fold_query(std::span<const double> q, const LicParams& params) {
  const auto& cfg = params.config;
  Vec folded(cfg.behavior_dim, 0.0);
  Vec qp(cfg.latent_dim);
  Vec back(cfg.behavior_dim);
  for (const auto& h : params.heads) {
    matvec(h.w_q, q, qp);
    matvec_t(h.w_b, qp, back);
    for (std::size_t c = 0; c < folded.size(); ++c) folded[c] += back[c];
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.num_heads * cfg.latent_dim));
  for (double& v : folded) v *= scale;
  return folded;
}

/// Scores straight from raw embeddings and current parameters (no cache). Equal
/// to the cached route up to floating-point reassociation; used while training,
/// when parameters change on every step.
inline std::vector<ScoredBehavior> score_folded(const BehaviorSequence& seq,
                                                std::span<const double> folded_query,
                                                ClockTime t_cur, const TimeScoreNet& net) {
  std::vector<ScoredBehavior> out(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto& rec = seq.record(i);
    const std::int32_t gap = circular_gap_seconds(clock_of_day(rec.timestamp), t_cur);
    out[i] = {i,
              dot(seq.embedding(i), folded_query) +
                  time_score(time_features_for_gap_seconds(gap), net),
              GapMinutes{gap / 60.0}, gap, rec.timestamp};
  }
  return out;
}

inline SubSequence materialize(const BehaviorSequence& seq, std::vector<ScoredBehavior> top) {
  SubSequence sub;
  sub.embeddings = Matrix(top.size(), seq.embedding_dim());
  for (std::size_t k = 0; k < top.size(); ++k) {
    auto src = seq.embedding(top[k].behavior_index);
    std::copy(src.begin(), src.end(), sub.embeddings.row(k).begin());
  }
  sub.entries = std::move(top);
  return sub;
}

/// Serving route: cached projections plus a time-score table.
inline SubSequence top_k_cached(const BehaviorSequence& seq, const ProjectedSequence& projected,
                                const ProjectedQuery& pq, ClockTime t_cur,
                                const TimeScoreTable& table, std::size_t k) {
  if (k == 0) throw ConfigError("top_k: K must be at least 1");
  auto scored = score_projected(projected, pq, t_cur, table);
  return materialize(seq, select_top_k(scored, k));
}

/// Training route: folded query, direct time-score evaluation.
inline SubSequence top_k_folded(const BehaviorSequence& seq, std::span<const double> q,
                                ClockTime t_cur, const LicParams& params, std::size_t k) {
  if (k == 0) throw ConfigError("top_k: K must be at least 1");
  if (seq.empty()) return {};
  const Vec folded = fold_query(q, params);
  auto scored = score_folded(seq, folded, t_cur, params.time_net);
  return materialize(seq, select_top_k(scored, k));
}

/// One-shot search: project, score and select with the given parameters.
inline SubSequence top_k(const BehaviorSequence& seq, const Query& q, ClockTime t_cur,
                         const LicParams& params, std::size_t k = kDefaultTopK) {
  if (k == 0) throw ConfigError("top_k: K must be at least 1");
  if (seq.empty()) return {};
  const auto projected = precompute_sequence(seq, params);
  const auto pq = project_query(q, params);
  const TimeScoreTable table(params.time_net, params.version);
  return top_k_cached(seq, projected, pq, t_cur, table, k);
}

}  // namespace lic
