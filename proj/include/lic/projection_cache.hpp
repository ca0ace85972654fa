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

// Precomputed per-head projections of behaviors (W_b^i b) and queries (W_q^i q).
//
// This plays the role of an online parameter server: the projections are
// computed once per (user history, parameter version) and GSU scoring reduces
// to one dot product over the concatenated heads.

#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "lic/behavior_store.hpp"
#include "lic/params.hpp"
#include "lic/temporal.hpp"
#include "lic/tensor.hpp"

namespace lic {

/// Raised when projections from different parameter versions are combined.
class StaleProjectionError : public Error {
 public:
  using Error::Error;
};

/// Candidate item embedding (dim H) and the current time.
struct Query {
  Vec embedding;
  Timestamp time;
};

/// View of one behavior's projections, heads concatenated.
struct ProjectedBehavior {
  std::span<const double> concat;
  std::size_t latent_dim = 0;
  std::size_t behavior_index = 0;
  ClockTime clock_time;
  std::uint64_t params_version = 0;

  std::size_t num_heads() const noexcept { return latent_dim ? concat.size() / latent_dim : 0; }
  std::span<const double> per_head(std::size_t head) const {
    return concat.subspan(head * latent_dim, latent_dim);
  }
};

struct ProjectedQuery {
  Vec concat;
  std::size_t latent_dim = 0;
  ClockTime clock_time;
  std::uint64_t params_version = 0;

  std::size_t num_heads() const noexcept { return latent_dim ? concat.size() / latent_dim : 0; }
  std::span<const double> per_head(std::size_t head) const {
    return std::span<const double>(concat).subspan(head * latent_dim, latent_dim);
  }
};

/// Projections for a whole sequence, one row per behavior in sequence order.
struct ProjectedSequence {
  Matrix rows;  // M x (heads * d)
  std::vector<ClockTime> clock_times;
  std::vector<Timestamp> timestamps;
  std::size_t latent_dim = 0;
  std::uint64_t params_version = 0;
  std::uint64_t generation = 0;

  std::size_t size() const noexcept { return clock_times.size(); }
  bool empty() const noexcept { return clock_times.empty(); }
  ProjectedBehavior operator[](std::size_t i) const {
    return {rows.row(i), latent_dim, i, clock_times[i], params_version};
  }
};

inline void project_behavior(std::span<const double> b, const LicParams& params,
                             std::span<double> out) {
  const std::size_t d = params.config.latent_dim;
  for (std::size_t h = 0; h < params.heads.size(); ++h)
    matvec(params.heads[h].w_b, b, out.subspan(h * d, d));
}

inline ProjectedSequence precompute_sequence(const BehaviorSequence& seq, const LicParams& params) {
  const auto& cfg = params.config;
  if (!seq.empty() && seq.embedding_dim() != cfg.behavior_dim)
    throw ConfigError("precompute_sequence: behavior dim " + std::to_string(seq.embedding_dim()) +
                      " != configured " + std::to_string(cfg.behavior_dim));
  ProjectedSequence out;
  out.latent_dim = cfg.latent_dim;
  out.params_version = params.version;
  out.generation = seq.generation();
  out.rows = Matrix(seq.size(), cfg.num_heads * cfg.latent_dim);
  out.clock_times.reserve(seq.size());
  out.timestamps.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    project_behavior(seq.embedding(i), params, out.rows.row(i));
    out.clock_times.push_back(clock_of_day(seq.record(i).timestamp));
    out.timestamps.push_back(seq.record(i).timestamp);
  }
  return out;
}

inline ProjectedQuery project_query(const Query& q, const LicParams& params) {
  const auto& cfg = params.config;
  if (q.embedding.size() != cfg.query_dim)
    throw ConfigError("project_query: query dim " + std::to_string(q.embedding.size()) +
                      " != configured " + std::to_string(cfg.query_dim));
  ProjectedQuery out;
  out.latent_dim = cfg.latent_dim;
  out.clock_time = clock_of_day(q.time);
  out.params_version = params.version;
  out.concat.assign(cfg.num_heads * cfg.latent_dim, 0.0);
  for (std::size_t h = 0; h < params.heads.size(); ++h)
    matvec(params.heads[h].w_q, q.embedding,
           std::span<double>(out.concat).subspan(h * cfg.latent_dim, cfg.latent_dim));
  return out;
}

/// Per-user store of precomputed sequence projections, bounded by entry count
/// with least-recently-used eviction.
///
/// An entry is served only if it matches both the caller's parameter version
/// and the snapshot generation; otherwise it is rebuilt.
class ProjectionCache {
 public:
  static constexpr std::size_t kDefaultMaxEntries = 256;

  explicit ProjectionCache(std::size_t max_entries = kDefaultMaxEntries)
      : max_entries_(max_entries) {
    require(max_entries_ > 0, "ProjectionCache: max_entries must be positive");
  }

  std::shared_ptr<const ProjectedSequence> get(const BehaviorSequence& seq,
                                               const LicParams& params) {
    {
      std::shared_lock lock(mu_);
      auto it = entries_.find(seq.user_id());
      if (it != entries_.end() && it->second.data->params_version == params.version &&
          it->second.data->generation == seq.generation()) {
        ++hits_;
        it->second.last_used.store(++tick_, std::memory_order_relaxed);
        return it->second.data;
      }
    }
    auto fresh = std::make_shared<const ProjectedSequence>(precompute_sequence(seq, params));
    std::unique_lock lock(mu_);
    ++misses_;
    entries_.erase(seq.user_id());
    if (entries_.size() >= max_entries_) evict_one();
    auto [it, _] = entries_.try_emplace(seq.user_id());
    it->second.data = fresh;
    it->second.last_used.store(++tick_, std::memory_order_relaxed);
    return fresh;
  }

  void invalidate(UserId user) {
    std::unique_lock lock(mu_);
    entries_.erase(user);
  }

  void clear() {
    std::unique_lock lock(mu_);
    entries_.clear();
  }

  bool contains(UserId user) const {
    std::shared_lock lock(mu_);
    return entries_.contains(user);
  }

  std::size_t size() const {
    std::shared_lock lock(mu_);
    return entries_.size();
  }

  std::size_t max_entries() const noexcept { return max_entries_; }
  std::uint64_t hits() const noexcept { return hits_; }
  std::uint64_t misses() const noexcept { return misses_; }

 private:
  struct Entry {
    std::shared_ptr<const ProjectedSequence> data;
    std::atomic<std::uint64_t> last_used{0};
  };

  void evict_one() {
    auto victim = entries_.begin();
    for (auto it = entries_.begin(); it != entries_.end(); ++it)
      if (it->second.last_used.load(std::memory_order_relaxed) <
          victim->second.last_used.load(std::memory_order_relaxed))
        victim = it;
    if (victim != entries_.end()) entries_.erase(victim);
  }

  std::size_t max_entries_;
  mutable std::shared_mutex mu_;
  std::unordered_map<UserId, Entry> entries_;
  std::atomic<std::uint64_t> tick_{0};
  std::atomic<std::uint64_t> hits_{0};
  std::atomic<std::uint64_t> misses_{0};
};

}  // namespace lic
