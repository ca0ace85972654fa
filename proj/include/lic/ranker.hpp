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

// Feedforward CTR ranker with a pluggable time slot.
//
// Input layout is identical for every mode:
//
//   x = [E_user | E_item | E_genre | slot]      slot in R^d
//
// where slot is the interest vector (lic), the hour-of-day table row
// (hour_embedding) or zeros (no_time). Two rectifier layers and a sigmoid
// output follow. Gradients are exact; the top-K selection is a constant.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "lic/behavior_store.hpp"
#include "lic/clock_esu.hpp"
#include "lic/clock_gsu.hpp"
#include "lic/params.hpp"
#include "lic/projection_cache.hpp"
#include "lic/temporal.hpp"
#include "lic/tensor.hpp"

namespace lic {

enum class Mode : std::uint8_t { kNoTime = 0, kHourEmbedding = 1, kLic = 2 };

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::kNoTime: return "no_time";
    case Mode::kHourEmbedding: return "hour_embedding";
    case Mode::kLic: return "lic";
  }
  return "?";
}

inline Mode parse_mode(std::string_view s) {
  if (s == "no_time") return Mode::kNoTime;
  if (s == "hour_embedding") return Mode::kHourEmbedding;
  if (s == "lic") return Mode::kLic;
  throw ConfigError("unknown mode '" + std::string(s) + "'");
}

struct Sample {
  UserId user = 0;
  ItemId item = 0;
  std::int32_t genre = 0;
  Timestamp timestamp;
  int label = 0;  // finish

  std::array<std::int64_t, ModelConfig::kNumFeatures> feature_ids() const {
    return {user, item, genre};
  }
};

struct Prediction {
  double y_hat = 0.5;
};

inline constexpr double kProbClamp = 1e-7;

/// Binary cross-entropy with the prediction clamped to [1e-7, 1 - 1e-7].
inline double loss(int y, double y_hat) {
  const double p = std::clamp(y_hat, kProbClamp, 1.0 - kProbClamp);
  return y ? -std::log(p) : -std::log(1.0 - p);
}

inline std::size_t table_row(std::int64_t id, std::size_t vocab) noexcept {
  return (id >= 0 && static_cast<std::size_t>(id) < vocab) ? static_cast<std::size_t>(id) : vocab;
}

struct ForwardPass {
  Mode mode = Mode::kNoTime;
  std::array<std::size_t, ModelConfig::kNumFeatures> rows{};
  int hour = 0;
  Vec query;
  EsuTrace esu;
  Vec input;
  Vec h1_pre, h1;
  Vec h2_pre, h2;
  double logit = 0.0;
  double y_hat = 0.5;
};

/// `sub` is required in lic mode (it may be empty) and ignored otherwise.
inline ForwardPass forward(const LicParams& params, const Sample& sample, Mode mode,
                           std::span<const double> query, const SubSequence* sub) {
  const auto& cfg = params.config;
  ForwardPass fp;
  fp.mode = mode;
  fp.rows = {table_row(sample.user, cfg.num_users), table_row(sample.item, cfg.num_items),
             table_row(sample.genre, cfg.num_genres)};
  const ClockTime t_cur = clock_of_day(sample.timestamp);
  fp.hour = t_cur.hour();

  const std::size_t e = cfg.feature_dim;
  fp.input.assign(cfg.base_input_dim(), 0.0);
  const Matrix* tables[] = {&params.user_embedding, &params.item_embedding,
                            &params.genre_embedding};
  for (std::size_t f = 0; f < ModelConfig::kNumFeatures; ++f) {
    auto row = tables[f]->row(fp.rows[f]);
    std::copy(row.begin(), row.end(), fp.input.begin() + static_cast<std::ptrdiff_t>(f * e));
  }
  auto slot = std::span<double>(fp.input).subspan(ModelConfig::kNumFeatures * e);
  switch (mode) {
    case Mode::kNoTime: break;
    case Mode::kHourEmbedding: {
      auto row = params.hour_table.row(static_cast<std::size_t>(fp.hour));
      std::copy(row.begin(), row.end(), slot.begin());
      break;
    }
    case Mode::kLic: {
      if (sub == nullptr) throw ConfigError("forward: lic mode needs a retrieved sub-sequence");
      fp.query.assign(query.begin(), query.end());
      fp.esu = esu_forward(*sub, fp.query, t_cur, params);
      std::copy(fp.esu.v_cur.begin(), fp.esu.v_cur.end(), slot.begin());
      break;
    }
  }

  const auto& net = params.base;
  fp.h1_pre.resize(cfg.hidden1);
  net.layer1.forward(fp.input, fp.h1_pre);
  fp.h1.resize(cfg.hidden1);
  std::transform(fp.h1_pre.begin(), fp.h1_pre.end(), fp.h1.begin(), relu);
  fp.h2_pre.resize(cfg.hidden2);
  net.layer2.forward(fp.h1, fp.h2_pre);
  fp.h2.resize(cfg.hidden2);
  std::transform(fp.h2_pre.begin(), fp.h2_pre.end(), fp.h2.begin(), relu);
  double out = 0.0;
  net.output.forward(fp.h2, std::span<double>(&out, 1));
  fp.logit = out;
  fp.y_hat = sigmoid(out);
  return fp;
}

/// Accumulates gradients of the cross-entropy loss into `grads`. Uses
/// dL/dlogit = y_hat - y, the exact derivative of the unclamped loss.
inline void backward(const LicParams& params, const ForwardPass& fp, int y, Gradients& grads) {
  const auto& cfg = params.config;
  const auto& net = params.base;
  auto& g = grads.grad.base;

  const double d_logit = fp.y_hat - static_cast<double>(y);
  add_outer(g.output.weight, std::span<const double>(&d_logit, 1), fp.h2);
  g.output.bias[0] += d_logit;

  Vec d_h2 = matvec_t(net.output.weight, std::span<const double>(&d_logit, 1));
  for (std::size_t j = 0; j < d_h2.size(); ++j)
    if (fp.h2_pre[j] <= 0.0) d_h2[j] = 0.0;
  add_outer(g.layer2.weight, d_h2, fp.h1);
  axpy(1.0, d_h2, g.layer2.bias);

  Vec d_h1 = matvec_t(net.layer2.weight, d_h2);
  for (std::size_t j = 0; j < d_h1.size(); ++j)
    if (fp.h1_pre[j] <= 0.0) d_h1[j] = 0.0;
  add_outer(g.layer1.weight, d_h1, fp.input);
  axpy(1.0, d_h1, g.layer1.bias);

  const Vec d_input = matvec_t(net.layer1.weight, d_h1);
  const std::size_t e = cfg.feature_dim;
  constexpr Table kTables[] = {Table::kUser, Table::kItem, Table::kGenre};
  for (std::size_t f = 0; f < ModelConfig::kNumFeatures; ++f)
    axpy(1.0, std::span<const double>(d_input).subspan(f * e, e), grads.touch(kTables[f], fp.rows[f]));

  auto d_slot = std::span<const double>(d_input).subspan(ModelConfig::kNumFeatures * e);
  switch (fp.mode) {
    case Mode::kNoTime: break;
    case Mode::kHourEmbedding:
      axpy(1.0, d_slot, grads.touch(Table::kHour, static_cast<std::size_t>(fp.hour)));
      break;
    case Mode::kLic: esu_backward(fp.esu, fp.query, d_slot, params, grads); break;
  }
}

/// params -= lr * grads. Returns false, leaving params untouched, if any
/// gradient entry is non-finite.
inline bool sgd_step(LicParams& params, Gradients& grads, double lr) {
  if (!(lr >= 0.0)) throw ConfigError("sgd_step: learning rate must be non-negative");
  auto dense_params = params.tensors();
  auto dense_grads = grads.grad.tensors();
  auto is_table = [](const std::string& name) {
    return name.ends_with("_embedding") || name == "hour_table";
  };
  for (std::size_t t = 0; t < dense_grads.size(); ++t) {
    if (is_table(dense_grads[t].name)) continue;
    for (double v : dense_grads[t].values)
      if (!std::isfinite(v)) return false;
  }
  for (auto [tbl, row] : grads.touched)
    for (double v : grads.table(tbl).row(row))
      if (!std::isfinite(v)) return false;

  for (std::size_t t = 0; t < dense_grads.size(); ++t) {
    if (is_table(dense_grads[t].name)) continue;
    axpy(-lr, dense_grads[t].values, dense_params[t].values);
  }
  // A row touched twice appears twice in `touched`; apply it once.
  auto touched = grads.touched;
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  Matrix* param_tables[] = {&params.user_embedding, &params.item_embedding, &params.genre_embedding,
                            &params.hour_table};
  for (auto [tbl, row] : touched)
    axpy(-lr, grads.table(tbl).row(row), param_tables[static_cast<int>(tbl)]->row(row));
  ++params.version;
  return true;
}

/// A ranking model bound to a behavior store: retrieval, prediction and
/// single-sample streaming updates.
class Ranker {
 public:
  Ranker(LicParams params, Mode mode, std::shared_ptr<BehaviorStore> store,
         std::size_t top_k = kDefaultTopK,
         std::size_t cache_entries = ProjectionCache::kDefaultMaxEntries)
      : params_(std::move(params)),
        mode_(mode),
        store_(std::move(store)),
        top_k_(top_k),
        grads_(params_.config),
        cache_(cache_entries) {
    require(top_k_ >= 1, "Ranker: K must be at least 1");
    if (mode_ == Mode::kLic) {
      require(store_ != nullptr, "Ranker: lic mode needs a behavior store");
      require(store_->catalog()->dim() == params_.config.behavior_dim,
              "Ranker: catalog embedding dim != behavior_dim");
      require(params_.config.query_dim == params_.config.behavior_dim,
              "Ranker: the query is the candidate's catalog embedding, so query_dim must equal "
              "behavior_dim");
    }
  }

  const LicParams& params() const noexcept { return params_; }
  LicParams& mutable_params() noexcept { return params_; }
  Mode mode() const noexcept { return mode_; }
  std::size_t top_k() const noexcept { return top_k_; }
  const std::shared_ptr<BehaviorStore>& store() const noexcept { return store_; }
  ProjectionCache& cache() noexcept { return cache_; }
  std::size_t rejected_steps() const noexcept { return rejected_steps_; }

  Vec query_for(ItemId item) const {
    Vec q(params_.config.query_dim, 0.0);
    if (store_ && store_->catalog()->contains(item)) {
      auto e = store_->catalog()->embedding(item);
      std::copy(e.begin(), e.end(), q.begin());
    }
    return q;
  }

  /// Retrieval with frozen parameters through the projection cache.
  SubSequence retrieve(const Sample& s, const Vec& query) const {
    const auto seq = store_->snapshot(s.user);
    if (seq.empty()) return {};
    const auto projected = cache_.get(seq, params_);
    const auto pq = project_query(Query{query, s.timestamp}, params_);
    return top_k_cached(seq, *projected, pq, clock_of_day(s.timestamp), *time_table(), top_k_);
  }

  ForwardPass forward_frozen(const Sample& s) const {
    if (mode_ != Mode::kLic) return forward(params_, s, mode_, {}, nullptr);
    const Vec q = query_for(s.item);
    const SubSequence sub = retrieve(s, q);
    return forward(params_, s, mode_, q, &sub);
  }

  Prediction predict(const Sample& s) const { return {forward_frozen(s).y_hat}; }

  /// Forward, backward and one SGD step on a single sample, then the sample is
  /// appended to the user's history if it is a finish. Returns the loss before
  /// the update.
  double train_step(const Sample& s, double lr) {
    ForwardPass fp;
    if (mode_ == Mode::kLic) {
      const Vec q = query_for(s.item);
      const SubSequence sub =
          top_k_folded(store_->snapshot(s.user), q, clock_of_day(s.timestamp), params_, top_k_);
      fp = forward(params_, s, mode_, q, &sub);
    } else {
      fp = forward(params_, s, mode_, {}, nullptr);
    }
    const double l = loss(s.label, fp.y_hat);
    grads_.zero();
    backward(params_, fp, s.label, grads_);
    if (sgd_step(params_, grads_, lr)) {
      if (store_) cache_.invalidate(s.user);
    } else {
      ++rejected_steps_;
    }
    if (store_ && s.label == 1 && store_->catalog()->contains(s.item)) {
      store_->append(s.user, s.item, s.timestamp);
      cache_.invalidate(s.user);
    }
    return l;
  }

 private:
  std::shared_ptr<const TimeScoreTable> time_table() const {
    std::lock_guard lock(table_mu_);
    if (!table_ || table_->params_version != params_.version)
      table_ = std::make_shared<const TimeScoreTable>(params_.time_net, params_.version);
    return table_;
  }

  LicParams params_;
  Mode mode_;
  std::shared_ptr<BehaviorStore> store_;
  std::size_t top_k_;
  Gradients grads_;
  mutable ProjectionCache cache_;
  mutable std::mutex table_mu_;
  mutable std::shared_ptr<const TimeScoreTable> table_;
  std::size_t rejected_steps_ = 0;
};

}  // namespace lic
