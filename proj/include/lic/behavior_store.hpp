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

#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lic/temporal.hpp"
#include "lic/tensor.hpp"

namespace lic {

using UserId = std::int64_t;
using ItemId = std::int64_t;

/// Raised when a behavior arrives earlier than the user's latest stored one.
class OrderingError : public Error {
 public:
  using Error::Error;
};

/// Content embeddings and genre of every catalog item. Row `i` belongs to item `i`.
struct ItemCatalog {
  Matrix embeddings;
  std::vector<std::int32_t> genre;

  std::size_t size() const noexcept { return embeddings.rows(); }
  std::size_t dim() const noexcept { return embeddings.cols(); }
  bool contains(ItemId id) const noexcept {
    return id >= 0 && static_cast<std::size_t>(id) < size();
  }
  std::span<const double> embedding(ItemId id) const { return embeddings.row(static_cast<std::size_t>(id)); }
};

struct BehaviorRecord {
  ItemId item_id = 0;
  Timestamp timestamp;
};

/// One historical interaction with its embedding resolved against the catalog.
struct Behavior {
  ItemId item_id;
  std::span<const double> embedding;
  Timestamp timestamp;
};

/// Immutable, timestamp-sorted view of one user's history.
class BehaviorSequence {
 public:
  BehaviorSequence() = default;
  BehaviorSequence(UserId user, std::shared_ptr<const std::vector<BehaviorRecord>> records,
                   std::shared_ptr<const ItemCatalog> catalog, std::uint64_t generation = 0)
      : user_(user),
        records_(std::move(records)),
        catalog_(std::move(catalog)),
        generation_(generation) {}

  UserId user_id() const noexcept { return user_; }
  std::size_t size() const noexcept { return records_ ? records_->size() : 0; }
  bool empty() const noexcept { return size() == 0; }

  const BehaviorRecord& record(std::size_t i) const { return (*records_)[i]; }
  std::span<const double> embedding(std::size_t i) const {
    return catalog_->embedding((*records_)[i].item_id);
  }
  Behavior operator[](std::size_t i) const {
    const auto& r = (*records_)[i];
    return {r.item_id, catalog_->embedding(r.item_id), r.timestamp};
  }
  std::size_t embedding_dim() const noexcept { return catalog_ ? catalog_->dim() : 0; }

  /// Store-wide counter value of the append that produced this snapshot; 0 if never written.
  std::uint64_t generation() const noexcept { return generation_; }

 private:
  UserId user_ = 0;
  std::shared_ptr<const std::vector<BehaviorRecord>> records_;
  std::shared_ptr<const ItemCatalog> catalog_;
  std::uint64_t generation_ = 0;
};

/// Per-user long-term behavior sequences with oldest-first eviction.
///
/// Snapshots share storage with the store until the next append to that user;
/// the append then copies (copy-on-write), so snapshots never change.
class BehaviorStore {
 public:
  static constexpr std::size_t kDefaultCapacity = 20000;

  explicit BehaviorStore(std::shared_ptr<const ItemCatalog> catalog,
                         std::size_t capacity = kDefaultCapacity)
      : catalog_(std::move(catalog)), capacity_(capacity) {
    require(catalog_ != nullptr, "BehaviorStore: null catalog");
    require(capacity_ > 0, "BehaviorStore: capacity must be positive");
  }

  std::size_t capacity() const noexcept { return capacity_; }
  const std::shared_ptr<const ItemCatalog>& catalog() const noexcept { return catalog_; }

  void append(UserId user, ItemId item, Timestamp ts) {
    if (!catalog_->contains(item))
      throw ConfigError("BehaviorStore: item " + std::to_string(item) + " not in catalog");
    std::unique_lock lock(mu_);
    auto& slot = users_[user];
    if (!slot.records) slot.records = std::make_shared<std::vector<BehaviorRecord>>();
    auto& records = slot.records;
    if (!records->empty() && ts < records->back().timestamp)
      throw OrderingError("BehaviorStore: out-of-order behavior for user " + std::to_string(user));
    if (records.use_count() > 1) records = std::make_shared<std::vector<BehaviorRecord>>(*records);
    if (records->size() == capacity_) records->erase(records->begin());
    records->push_back({item, ts});
    slot.generation = ++generation_;
  }

  BehaviorSequence snapshot(UserId user) const {
    std::shared_lock lock(mu_);
    auto it = users_.find(user);
    if (it == users_.end()) return BehaviorSequence(user, nullptr, catalog_);
    return BehaviorSequence(user, it->second.records, catalog_, it->second.generation);
  }

  std::size_t num_users() const {
    std::shared_lock lock(mu_);
    return users_.size();
  }

  std::vector<UserId> users() const {
    std::shared_lock lock(mu_);
    std::vector<UserId> out;
    out.reserve(users_.size());
    for (const auto& [u, _] : users_) out.push_back(u);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::shared_ptr<const ItemCatalog> catalog_;
  std::size_t capacity_;
  struct Slot {
    std::shared_ptr<std::vector<BehaviorRecord>> records;
    std::uint64_t generation = 0;
  };

  mutable std::shared_mutex mu_;
  std::unordered_map<UserId, Slot> users_;
  std::uint64_t generation_ = 0;
};

}  // namespace lic
