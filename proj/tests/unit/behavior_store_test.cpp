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


#include <algorithm>
#include <deque>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "lic/behavior_store.hpp"
#include "test_util.hpp"

namespace lic {
namespace {

TEST(BehaviorStore, AppendAndSnapshot) {
  auto catalog = testing::random_catalog(10, 3, 1);
  BehaviorStore store(catalog, 100);
  store.append(7, 2, Timestamp(100));
  store.append(7, 5, Timestamp(100));  // equal timestamps are allowed
  store.append(7, 1, Timestamp(250));
  const auto seq = store.snapshot(7);
  ASSERT_EQ(seq.size(), 3u);
  EXPECT_EQ(seq[0].item_id, 2);
  EXPECT_EQ(seq[2].timestamp, Timestamp(250));
  EXPECT_EQ(seq.embedding_dim(), 3u);
  const auto e = seq[1].embedding;
  EXPECT_TRUE(std::equal(e.begin(), e.end(), catalog->embedding(5).begin()));
  EXPECT_TRUE(store.snapshot(8).empty());
  EXPECT_EQ(store.num_users(), 1u);
}

TEST(BehaviorStore, RejectsOutOfOrderAndUnknownItems) {
  auto catalog = testing::random_catalog(4, 2, 2);
  BehaviorStore store(catalog);
  store.append(1, 0, Timestamp(1000));
  EXPECT_THROW(store.append(1, 1, Timestamp(999)), OrderingError);
  EXPECT_THROW(store.append(1, 4, Timestamp(2000)), ConfigError);
  EXPECT_THROW(store.append(1, -1, Timestamp(2000)), ConfigError);
  EXPECT_EQ(store.snapshot(1).size(), 1u);
  // Users are independent: an earlier time for another user is fine.
  EXPECT_NO_THROW(store.append(2, 1, Timestamp(5)));
}

TEST(BehaviorStore, EvictsOldestAtCapacity) {
  auto catalog = testing::random_catalog(50, 2, 3);
  BehaviorStore store(catalog, 5);
  for (int i = 0; i < 12; ++i) store.append(0, i, Timestamp(10 * i));
  const auto seq = store.snapshot(0);
  ASSERT_EQ(seq.size(), 5u);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(seq[k].item_id, static_cast<ItemId>(7 + k));
}

TEST(BehaviorStore, DefaultCapacityHoldsTwentyThousand) {
  auto catalog = testing::random_catalog(3, 1, 4);
  BehaviorStore store(catalog);
  for (int i = 0; i < 20005; ++i) store.append(0, i % 3, Timestamp(i));
  const auto seq = store.snapshot(0);
  EXPECT_EQ(seq.size(), 20000u);
  EXPECT_EQ(seq[0].timestamp, Timestamp(5));
}

TEST(BehaviorStore, SnapshotsAreImmutable) {
  auto catalog = testing::random_catalog(10, 2, 5);
  BehaviorStore store(catalog, 3);
  store.append(0, 1, Timestamp(1));
  store.append(0, 2, Timestamp(2));
  const auto before = store.snapshot(0);
  const auto gen = before.generation();
  store.append(0, 3, Timestamp(3));
  store.append(0, 4, Timestamp(4));  // evicts item 1
  ASSERT_EQ(before.size(), 2u);
  EXPECT_EQ(before[0].item_id, 1);
  EXPECT_EQ(before[1].item_id, 2);
  EXPECT_EQ(before.generation(), gen);
  const auto after = store.snapshot(0);
  EXPECT_EQ(after.size(), 3u);
  EXPECT_EQ(after[0].item_id, 2);
  EXPECT_GT(after.generation(), gen);
}

TEST(BehaviorStore, MatchesNaiveDequeOracle) {
  auto catalog = testing::random_catalog(30, 2, 6);
  std::mt19937_64 rng(99);
  const std::size_t capacity = 17;
  BehaviorStore store(catalog, capacity);
  std::map<UserId, std::deque<BehaviorRecord>> oracle;
  std::map<UserId, std::int64_t> clock;
  for (int step = 0; step < 3000; ++step) {
    const UserId u = static_cast<UserId>(rng() % 6);
    const ItemId item = static_cast<ItemId>(rng() % 30);
    clock[u] += static_cast<std::int64_t>(rng() % 5);
    store.append(u, item, Timestamp(clock[u]));
    auto& q = oracle[u];
    q.push_back({item, Timestamp(clock[u])});
    if (q.size() > capacity) q.pop_front();
    if (step % 97 == 0) {
      for (const auto& [user, expected] : oracle) {
        const auto seq = store.snapshot(user);
        ASSERT_EQ(seq.size(), expected.size());
        for (std::size_t k = 0; k < seq.size(); ++k) {
          EXPECT_EQ(seq.record(k).item_id, expected[k].item_id);
          EXPECT_EQ(seq.record(k).timestamp, expected[k].timestamp);
        }
      }
    }
  }
  EXPECT_EQ(store.users().size(), oracle.size());
}

}  // namespace
}  // namespace lic
