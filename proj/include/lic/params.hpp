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

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lic/temporal.hpp"
#include "lic/tensor.hpp"

namespace lic {

struct ModelConfig {
  std::size_t behavior_dim = 32;  // L
  std::size_t query_dim = 32;     // H
  std::size_t latent_dim = 16;    // d
  std::size_t num_heads = 4;
  std::size_t time_hidden = 8;
  std::size_t feature_dim = 8;  // per categorical feature embedding
  std::size_t hidden1 = 64;
  std::size_t hidden2 = 32;
  std::size_t num_users = 0;
  std::size_t num_items = 0;
  std::size_t num_genres = 0;

  static constexpr std::size_t kNumFeatures = 3;  // user, item, genre
  static constexpr std::size_t kHoursPerDay = 24;

  std::size_t fusion_hidden() const noexcept { return 2 * latent_dim; }
  std::size_t augmented_dim() const noexcept { return behavior_dim + kTimeFeatureDim; }
  std::size_t base_input_dim() const noexcept { return kNumFeatures * feature_dim + latent_dim; }

  void validate() const {
    require(behavior_dim > 0 && query_dim > 0 && latent_dim > 0, "ModelConfig: zero dimension");
    require(num_heads > 0, "ModelConfig: num_heads must be positive");
    require(time_hidden > 0 && feature_dim > 0 && hidden1 > 0 && hidden2 > 0,
            "ModelConfig: zero layer width");
  }

  bool operator==(const ModelConfig&) const = default;
};

/// Per-head projections: W_b (d x L), W_q (d x H), W_v ((L+4) x d).
struct HeadParams {
  Matrix w_b;
  Matrix w_q;
  Matrix w_v;
  bool operator==(const HeadParams&) const = default;
};

/// Two-layer rectifier network mapping the 4 time features to one scalar.
struct TimeScoreNet {
  Linear layer1;  // 4 -> hidden
  Linear layer2;  // hidden -> 1
  bool operator==(const TimeScoreNet&) const = default;
};

/// Two-layer fusion of the concatenated head outputs into the interest vector.
struct FusionNet {
  Linear layer1;  // heads*d -> 2d, rectifier
  Linear layer2;  // 2d -> d, linear
  bool operator==(const FusionNet&) const = default;
};

struct BaseNet {
  Linear layer1;  // 3e + d -> hidden1, rectifier
  Linear layer2;  // hidden1 -> hidden2, rectifier
  Linear output;  // hidden2 -> 1
  bool operator==(const BaseNet&) const = default;
};

struct NamedTensor {
  std::string name;
  std::string group;
  std::span<double> values;
};

/// Every learnable parameter of the ranking model.
///
/// Embedding tables carry one extra trailing row shared by all out-of-vocabulary ids.
struct LicParams {
  ModelConfig config;
  Matrix user_embedding;
  Matrix item_embedding;
  Matrix genre_embedding;
  std::vector<HeadParams> heads;
  TimeScoreNet time_net;
  FusionNet fusion;
  BaseNet base;
  Vec default_interest;
  Matrix hour_table;

  /// Bumped on every parameter update; cached projections record the version they saw.
  std::uint64_t version = 0;

  LicParams() = default;

  /// Zero-initialised parameters of the configured shape.
  explicit LicParams(const ModelConfig& cfg) : config(cfg) {
    cfg.validate();
    const auto e = cfg.feature_dim;
    const auto d = cfg.latent_dim;
    user_embedding = Matrix(cfg.num_users + 1, e);
    item_embedding = Matrix(cfg.num_items + 1, e);
    genre_embedding = Matrix(cfg.num_genres + 1, e);
    heads.resize(cfg.num_heads);
    for (auto& h : heads) {
      h.w_b = Matrix(d, cfg.behavior_dim);
      h.w_q = Matrix(d, cfg.query_dim);
      h.w_v = Matrix(cfg.augmented_dim(), d);
    }
    time_net.layer1 = Linear(kTimeFeatureDim, cfg.time_hidden);
    time_net.layer2 = Linear(cfg.time_hidden, 1);
    fusion.layer1 = Linear(cfg.num_heads * d, cfg.fusion_hidden());
    fusion.layer2 = Linear(cfg.fusion_hidden(), d);
    base.layer1 = Linear(cfg.base_input_dim(), cfg.hidden1);
    base.layer2 = Linear(cfg.hidden1, cfg.hidden2);
    base.output = Linear(cfg.hidden2, 1);
    default_interest.assign(d, 0.0);
    hour_table = Matrix(ModelConfig::kHoursPerDay, d);
  }

  /// Seeded random initialisation: He-uniform weights, zero biases, small
  /// uniform embeddings, zero default-interest vector.
  static LicParams random(const ModelConfig& cfg, std::uint64_t seed) {
    LicParams p(cfg);
    std::mt19937_64 rng(seed);
    constexpr double kEmbScale = 0.05;
    uniform_fill(p.user_embedding.flat(), -kEmbScale, kEmbScale, rng);
    uniform_fill(p.item_embedding.flat(), -kEmbScale, kEmbScale, rng);
    uniform_fill(p.genre_embedding.flat(), -kEmbScale, kEmbScale, rng);
    for (auto& h : p.heads) {
      he_uniform(h.w_b, rng);
      he_uniform(h.w_q, rng);
      he_uniform(h.w_v, rng);
    }
    he_uniform(p.time_net.layer1.weight, rng);
    he_uniform(p.time_net.layer2.weight, rng);
    he_uniform(p.fusion.layer1.weight, rng);
    he_uniform(p.fusion.layer2.weight, rng);
    he_uniform(p.base.layer1.weight, rng);
    he_uniform(p.base.layer2.weight, rng);
    he_uniform(p.base.output.weight, rng);
    uniform_fill(p.hour_table.flat(), -kEmbScale, kEmbScale, rng);
    return p;
  }

  /// All tensors in a fixed declared order; this order is the checkpoint layout.
  std::vector<NamedTensor> tensors() {
    std::vector<NamedTensor> out;
    auto add = [&](std::string name, std::string group, std::span<double> v) {
      out.push_back({std::move(name), std::move(group), v});
    };
    add("user_embedding", "embeddings", user_embedding.flat());
    add("item_embedding", "embeddings", item_embedding.flat());
    add("genre_embedding", "embeddings", genre_embedding.flat());
    for (std::size_t i = 0; i < heads.size(); ++i) {
      const auto h = "head" + std::to_string(i);
      add(h + ".w_b", h + ".w_b", heads[i].w_b.flat());
      add(h + ".w_q", h + ".w_q", heads[i].w_q.flat());
      add(h + ".w_v", h + ".w_v", heads[i].w_v.flat());
    }
    add("time_net.layer1.weight", "time_net.layer1", time_net.layer1.weight.flat());
    add("time_net.layer1.bias", "time_net.layer1", time_net.layer1.bias);
    add("time_net.layer2.weight", "time_net.layer2", time_net.layer2.weight.flat());
    add("time_net.layer2.bias", "time_net.layer2", time_net.layer2.bias);
    add("fusion.layer1.weight", "fusion.layer1", fusion.layer1.weight.flat());
    add("fusion.layer1.bias", "fusion.layer1", fusion.layer1.bias);
    add("fusion.layer2.weight", "fusion.layer2", fusion.layer2.weight.flat());
    add("fusion.layer2.bias", "fusion.layer2", fusion.layer2.bias);
    add("base.layer1.weight", "base_net", base.layer1.weight.flat());
    add("base.layer1.bias", "base_net", base.layer1.bias);
    add("base.layer2.weight", "base_net", base.layer2.weight.flat());
    add("base.layer2.bias", "base_net", base.layer2.bias);
    add("base.output.weight", "base_net", base.output.weight.flat());
    add("base.output.bias", "base_net", base.output.bias);
    add("default_interest", "default_interest", default_interest);
    add("hour_table", "hour_table", hour_table.flat());
    return out;
  }

  std::vector<NamedTensor> tensors() const {
    // Read-only callers must not write through the spans.
    return const_cast<LicParams*>(this)->tensors();
  }

  bool all_finite() const {
    for (const auto& t : tensors())
      for (double v : t.values)
        if (!std::isfinite(v)) return false;
    return true;
  }

  /// Equality of values and shapes; the version counter is ignored.
  bool same_values(const LicParams& o) const {
    return config == o.config && user_embedding == o.user_embedding &&
           item_embedding == o.item_embedding && genre_embedding == o.genre_embedding &&
           heads == o.heads && time_net == o.time_net && fusion == o.fusion && base == o.base &&
           default_interest == o.default_interest && hour_table == o.hour_table;
  }
};

enum class Table : std::uint8_t { kUser, kItem, kGenre, kHour };

/// Gradient buffer mirroring LicParams.
///
/// Dense network tensors are always zeroed and updated in full. Table rows are
/// sparse: only rows recorded in `touched` can be non-zero.
struct Gradients {
  LicParams grad;
  std::vector<std::pair<Table, std::size_t>> touched;

  Gradients() = default;
  explicit Gradients(const ModelConfig& cfg) : grad(cfg) {}

  Matrix& table(Table t) {
    switch (t) {
      case Table::kUser: return grad.user_embedding;
      case Table::kItem: return grad.item_embedding;
      case Table::kGenre: return grad.genre_embedding;
      case Table::kHour: return grad.hour_table;
    }
    return grad.hour_table;
  }

  std::span<double> touch(Table t, std::size_t row) {
    touched.emplace_back(t, row);
    return table(t).row(row);
  }

  void zero() {
    for (auto [t, r] : touched) {
      auto row = table(t).row(r);
      std::fill(row.begin(), row.end(), 0.0);
    }
    touched.clear();
    for (auto& h : grad.heads) {
      h.w_b.set_zero();
      h.w_q.set_zero();
      h.w_v.set_zero();
    }
    for (Linear* l : dense_layers()) {
      l->weight.set_zero();
      std::fill(l->bias.begin(), l->bias.end(), 0.0);
    }
    std::fill(grad.default_interest.begin(), grad.default_interest.end(), 0.0);
  }

  std::vector<Linear*> dense_layers() {
    return {&grad.time_net.layer1, &grad.time_net.layer2, &grad.fusion.layer1,
            &grad.fusion.layer2,   &grad.base.layer1,     &grad.base.layer2,
            &grad.base.output};
  }
};

}  // namespace lic
