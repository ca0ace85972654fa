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


#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lic/clock_gsu.hpp"
#include "lic/projection_cache.hpp"
#include "test_util.hpp"

namespace lic {
namespace {

// Per-head projection with explicit loops.
double head_dot_oracle(const LicParams& p, std::span<const double> b, std::span<const double> q) {
  double total = 0.0;
  for (const auto& h : p.heads)
    for (std::size_t r = 0; r < h.w_b.rows(); ++r) {
      double pb = 0.0, pq = 0.0;
      for (std::size_t c = 0; c < b.size(); ++c) pb += h.w_b(r, c) * b[c];
      for (std::size_t c = 0; c < q.size(); ++c) pq += h.w_q(r, c) * q[c];
      total += pb * pq;
    }
  return total;
}

TEST(ProjectionCache, PrecomputeIsHeadwiseProjection) {
  auto catalog = testing::random_catalog(20, 6, 1);
  auto store = testing::random_history(catalog, 0, 15, 2);
  const auto params = LicParams::random(testing::tiny_config(6, 20), 3);
  const auto seq = store->snapshot(0);
  const auto proj = precompute_sequence(seq, params);
  ASSERT_EQ(proj.size(), seq.size());
  ASSERT_EQ(proj.rows.cols(), params.config.num_heads * params.config.latent_dim);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto pb = proj[i];
    EXPECT_EQ(pb.clock_time, clock_of_day(seq.record(i).timestamp));
    for (std::size_t h = 0; h < params.heads.size(); ++h) {
      const Vec expect = matvec(params.heads[h].w_b, seq.embedding(i));
      const auto got = pb.per_head(h);
      for (std::size_t r = 0; r < expect.size(); ++r) EXPECT_EQ(got[r], expect[r]);
    }
  }
}

TEST(ProjectionCache, RejectsDimensionMismatch) {
  auto catalog = testing::random_catalog(5, 7, 1);
  auto store = testing::random_history(catalog, 0, 3, 2);
  const auto params = LicParams::random(testing::tiny_config(6, 5), 3);
  EXPECT_THROW(precompute_sequence(store->snapshot(0), params), ConfigError);
  EXPECT_THROW(project_query(Query{Vec(7, 0.0), Timestamp(0)}, params), ConfigError);
}

TEST(ProjectionCache, CachedScoreMatchesDirect) {
  auto catalog = testing::random_catalog(40, 6, 4);
  auto store = testing::random_history(catalog, 0, 60, 5);
  const auto params = LicParams::random(testing::tiny_config(6, 40), 6);
  const auto seq = store->snapshot(0);
  const auto proj = precompute_sequence(seq, params);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Query q{Vec(6), Timestamp(1704067200 + static_cast<std::int64_t>(rng() % kSecondsPerDay))};
    for (double& v : q.embedding) v = normal(rng);
    const auto pq = project_query(q, params);
    const ClockTime now = clock_of_day(q.time);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const double cached = gsu_score(proj[i], pq, now, params.time_net);
      const double width = static_cast<double>(params.config.num_heads * params.config.latent_dim);
      const double direct =
          head_dot_oracle(params, seq.embedding(i), q.embedding) / std::sqrt(width) +
          time_score(time_features(circular_gap(clock_of_day(seq.record(i).timestamp), now)),
                     params.time_net);
      EXPECT_NEAR(cached, direct, 1e-12 * std::max(1.0, std::fabs(direct)));
    }
  }
}

TEST(ProjectionCache, StaleVersionsAreRejected) {
  auto catalog = testing::random_catalog(10, 6, 4);
  auto store = testing::random_history(catalog, 0, 5, 5);
  auto params = LicParams::random(testing::tiny_config(6, 10), 6);
  const auto proj = precompute_sequence(store->snapshot(0), params);
  params.version += 1;
  const auto pq = project_query(Query{Vec(6, 0.1), Timestamp(0)}, params);
  EXPECT_THROW(gsu_score(proj[0], pq, ClockTime(0), params.time_net), StaleProjectionError);
}

TEST(ProjectionCache, HitsMissesAndInvalidation) {
  auto catalog = testing::random_catalog(10, 6, 4);
  auto store = testing::random_history(catalog, 3, 8, 5);
  auto params = LicParams::random(testing::tiny_config(6, 10), 6);
  ProjectionCache cache(4);
  const auto a = cache.get(store->snapshot(3), params);
  const auto b = cache.get(store->snapshot(3), params);
  EXPECT_EQ(a.get(), b.get());
  EXPECT_EQ(cache.hits(), 1u);
  EXPECT_EQ(cache.misses(), 1u);

  // A new behavior changes the generation and forces a rebuild.
  store->append(3, 1, Timestamp(2000000000));
  const auto c = cache.get(store->snapshot(3), params);
  EXPECT_NE(c.get(), a.get());
  EXPECT_EQ(c->size(), 8u);  // capacity 8: oldest evicted
  EXPECT_EQ(a->size(), 8u);

  // So does a parameter update.
  params.version += 1;
  const auto d = cache.get(store->snapshot(3), params);
  EXPECT_EQ(d->params_version, params.version);
  EXPECT_EQ(cache.misses(), 3u);

  cache.invalidate(3);
  EXPECT_FALSE(cache.contains(3));
}

TEST(ProjectionCache, LeastRecentlyUsedIsEvicted) {
  auto catalog = testing::random_catalog(10, 6, 4);
  BehaviorStore store(catalog);
  for (UserId u = 0; u < 4; ++u) store.append(u, u, Timestamp(100));
  const auto params = LicParams::random(testing::tiny_config(6, 10), 6);
  ProjectionCache cache(3);
  cache.get(store.snapshot(0), params);
  cache.get(store.snapshot(1), params);
  cache.get(store.snapshot(2), params);
  cache.get(store.snapshot(0), params);  // touch 0, so 1 is now the oldest
  cache.get(store.snapshot(3), params);
  EXPECT_EQ(cache.size(), 3u);
  EXPECT_TRUE(cache.contains(0));
  EXPECT_FALSE(cache.contains(1));
  EXPECT_TRUE(cache.contains(2));
  EXPECT_TRUE(cache.contains(3));
}

}  // namespace
}  // namespace lic
