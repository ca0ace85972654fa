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

// GSU search throughput over cached projections.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "lic/behavior_store.hpp"
#include "lic/clock_gsu.hpp"
#include "lic/params.hpp"
#include "lic/projection_cache.hpp"

namespace lic {

struct BenchRow {
  std::size_t length = 0;
  std::size_t k = 0;
  std::size_t queries = 0;
  double heap_qps = 0.0;         // score + heap selection
  double sort_qps = 0.0;         // score + full sort
  double heap_select_qps = 0.0;  // selection only, on precomputed scores
  double sort_select_qps = 0.0;
  std::size_t checksum = 0;  // keeps the optimiser from discarding work
};

struct BenchFixture {
  LicParams params;
  BehaviorSequence sequence;
  ProjectedSequence projected;
  TimeScoreTable table;
  std::vector<ProjectedQuery> queries;
  std::vector<ClockTime> times;
};

inline BenchFixture make_bench_fixture(const ModelConfig& model, std::size_t length,
                                       std::size_t queries, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  BenchFixture f;
  auto cfg = model;
  cfg.num_items = std::max<std::size_t>(length, 1);
  f.params = LicParams::random(cfg, seed);
  auto catalog = std::make_shared<ItemCatalog>();
  catalog->embeddings = Matrix(cfg.num_items, cfg.behavior_dim);
  catalog->genre.assign(cfg.num_items, 0);
  for (double& v : catalog->embeddings.flat()) v = normal(rng);
  BehaviorStore store(catalog, std::max<std::size_t>(length, 1));
  const std::int64_t begin = 1704067200;
  for (std::size_t i = 0; i < length; ++i)
    store.append(0, static_cast<ItemId>(i), Timestamp(begin + static_cast<std::int64_t>(i) * 2903));
  f.sequence = store.snapshot(0);
  f.projected = precompute_sequence(f.sequence, f.params);
  f.table = TimeScoreTable(f.params.time_net, f.params.version);
  std::uniform_int_distribution<std::int32_t> sec(0, kSecondsPerDay - 1);
  for (std::size_t q = 0; q < queries; ++q) {
    Query query{Vec(cfg.query_dim), Timestamp(begin + 400LL * kSecondsPerDay + sec(rng))};
    for (double& v : query.embedding) v = normal(rng);
    f.queries.push_back(project_query(query, f.params));
    f.times.push_back(clock_of_day(query.time));
  }
  return f;
}

inline BenchRow run_gsu_bench(const BenchFixture& f, std::size_t k) {
  using clock = std::chrono::steady_clock;
  auto seconds = [](clock::duration d) { return std::chrono::duration<double>(d).count(); };
  BenchRow row;
  row.length = f.sequence.size();
  row.k = k;
  row.queries = f.queries.size();

  std::vector<std::vector<ScoredBehavior>> scored;
  scored.reserve(f.queries.size());
  for (std::size_t q = 0; q < f.queries.size(); ++q)
    scored.push_back(score_projected(f.projected, f.queries[q], f.times[q], f.table));

  auto t0 = clock::now();
  for (std::size_t q = 0; q < f.queries.size(); ++q) {
    auto s = score_projected(f.projected, f.queries[q], f.times[q], f.table);
    row.checksum += select_top_k(s, k).front().behavior_index;
  }
  auto t1 = clock::now();
  for (std::size_t q = 0; q < f.queries.size(); ++q) {
    auto s = score_projected(f.projected, f.queries[q], f.times[q], f.table);
    row.checksum += full_sort_top_k(s, k).front().behavior_index;
  }
  auto t2 = clock::now();
  for (const auto& s : scored) row.checksum += select_top_k(s, k).front().behavior_index;
  auto t3 = clock::now();
  for (const auto& s : scored) row.checksum += full_sort_top_k(s, k).front().behavior_index;
  auto t4 = clock::now();

  const double n = static_cast<double>(f.queries.size());
  row.heap_qps = n / seconds(t1 - t0);
  row.sort_qps = n / seconds(t2 - t1);
  row.heap_select_qps = n / seconds(t3 - t2);
  row.sort_select_qps = n / seconds(t4 - t3);
  return row;
}

}  // namespace lic
