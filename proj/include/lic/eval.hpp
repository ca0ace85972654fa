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
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lic/eval_metrics.hpp"
#include "lic/ranker.hpp"
#include "lic/temporal.hpp"

namespace lic {

struct MetricReport {
  std::string mode;
  std::optional<double> auc;
  std::optional<double> uauc;
  std::optional<double> rela_impr_auc;
  std::optional<double> rela_impr_uauc;
  std::optional<double> oracle_auc;
  std::array<std::optional<double>, 24> per_hour_auc{};  // absent when a bucket is single-class
  std::size_t n_samples = 0;
  std::size_t n_users_scored = 0;
  double mean_logloss = 0.0;
};

inline MetricReport make_report(std::span<const Sample> samples, std::span<const double> preds) {
  if (samples.size() != preds.size()) throw std::invalid_argument("make_report: size mismatch");
  MetricReport r;
  r.n_samples = samples.size();
  std::vector<int> labels;
  std::vector<std::int64_t> users;
  labels.reserve(samples.size());
  users.reserve(samples.size());
  std::array<std::vector<double>, 24> hour_scores;
  std::array<std::vector<int>, 24> hour_labels;
  double total_loss = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    labels.push_back(samples[i].label);
    users.push_back(samples[i].user);
    const auto h = static_cast<std::size_t>(clock_of_day(samples[i].timestamp).hour());
    hour_scores[h].push_back(preds[i]);
    hour_labels[h].push_back(samples[i].label);
    total_loss += loss(samples[i].label, preds[i]);
  }
  r.mean_logloss = samples.empty() ? 0.0 : total_loss / static_cast<double>(samples.size());
  r.auc = auc(preds, labels);
  r.uauc = uauc(users, preds, labels);
  for (std::size_t h = 0; h < 24; ++h) r.per_hour_auc[h] = auc(hour_scores[h], hour_labels[h]);

  std::map<std::int64_t, std::array<bool, 2>> seen;
  for (std::size_t i = 0; i < samples.size(); ++i) seen[users[i]][labels[i] ? 1 : 0] = true;
  for (const auto& [u, cls] : seen) r.n_users_scored += (cls[0] && cls[1]) ? 1 : 0;
  return r;
}

/// Fills RelaImpr fields relative to a baseline report.
inline void set_baseline(MetricReport& report, const MetricReport& base) {
  if (report.auc && base.auc) report.rela_impr_auc = rela_impr(*report.auc, *base.auc);
  if (report.uauc && base.uauc) report.rela_impr_uauc = rela_impr(*report.uauc, *base.uauc);
}

/// Frozen-model predictions. Samples are independent, so they are visited grouped
/// by user to reuse cached projections; output order matches the input.
inline std::vector<double> predict_frozen(const Ranker& model, std::span<const Sample> samples) {
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return samples[a].user < samples[b].user; });
  std::vector<double> preds(samples.size());
  for (auto i : order) preds[i] = model.predict(samples[i]).y_hat;
  return preds;
}

inline MetricReport evaluate_frozen(const Ranker& model, std::span<const Sample> samples) {
  auto report = make_report(samples, predict_frozen(model, samples));
  report.mode = std::string(to_string(model.mode()));
  return report;
}

struct TrainLogEntry {
  std::size_t step = 0;
  double mean_loss = 0.0;  // over the window since the previous entry
};

/// One time-ordered pass of single-sample SGD. Throws on a non-finite loss.
inline std::vector<TrainLogEntry> train_stream(
    Ranker& model, std::span<const Sample> stream, double lr, std::size_t log_every = 10000,
    const std::function<void(const TrainLogEntry&)>& on_log = {}) {
  for (std::size_t i = 1; i < stream.size(); ++i)
    if (stream[i].timestamp < stream[i - 1].timestamp)
      throw OrderingError("train_stream: stream is not time-ordered at index " + std::to_string(i));
  std::vector<TrainLogEntry> log;
  double window = 0.0;
  std::size_t in_window = 0;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const double l = model.train_step(stream[i], lr);
    if (!std::isfinite(l)) throw Error("train_stream: non-finite loss at step " + std::to_string(i));
    window += l;
    ++in_window;
    if (log_every > 0 && (in_window == log_every || i + 1 == stream.size())) {
      log.push_back({i + 1, window / static_cast<double>(in_window)});
      if (on_log) on_log(log.back());
      window = 0.0;
      in_window = 0;
    }
  }
  return log;
}

/// Progressive validation: each sample is scored before the model trains on it.
inline MetricReport predict_then_train(Ranker& model, std::span<const Sample> stream, double lr) {
  std::vector<double> preds;
  preds.reserve(stream.size());
  for (const auto& s : stream) {
    preds.push_back(model.predict(s).y_hat);
    model.train_step(s, lr);
  }
  auto report = make_report(stream, preds);
  report.mode = std::string(to_string(model.mode()));
  return report;
}

struct SmoothnessReport {
  double max_adjacent_jump = 0.0;
  double hour_boundary_jump = 0.0;
  std::vector<double> trace;  // 1441 predictions, 00:00 through the next midnight
};

/// Sweeps one day in 1-minute steps, including the wrap to the next midnight.
template <class PredictAt>
SmoothnessReport sweep_day(PredictAt&& predict_at, Timestamp date) {
  const std::int64_t midnight = date.epoch_seconds() - date.epoch_seconds() % kSecondsPerDay;
  SmoothnessReport r;
  r.trace.reserve(1441);
  for (std::int64_t m = 0; m <= 1440; ++m) r.trace.push_back(predict_at(Timestamp(midnight + m * 60)));
  for (std::size_t m = 1; m < r.trace.size(); ++m) {
    const double jump = std::fabs(r.trace[m] - r.trace[m - 1]);
    r.max_adjacent_jump = std::max(r.max_adjacent_jump, jump);
    if (m % 60 == 0) r.hour_boundary_jump = std::max(r.hour_boundary_jump, jump);
  }
  return r;
}

inline SmoothnessReport smoothness_probe(const Ranker& model, UserId user, ItemId item,
                                         Timestamp date) {
  std::int32_t genre = -1;
  if (model.store() && model.store()->catalog()->contains(item))
    genre = model.store()->catalog()->genre[static_cast<std::size_t>(item)];
  return sweep_day(
      [&](Timestamp t) {
        Sample s;
        s.user = user;
        s.item = item;
        s.genre = genre;
        s.timestamp = t;
        return model.predict(s).y_hat;
      },
      date);
}

}  // namespace lic
