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

// Synthetic streaming data with known circadian interest structure.
//
// Each user has a base affinity per genre and, per genre, a preference curve
// over the 24h clock made of two raised-cosine bumps on the circle. The finish
// probability of an impression is
//
//   p(u, i, t) = sigmoid(affinity(u, g) + A * pref(u, g, clock(t))),  g = genre(i)
//
// and the observed label flips with probability eps. Long-term histories are
// sequences of finished items: at each history event the genre is drawn with
// weight p(u, g, t), the item uniformly within the genre.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "lic/behavior_store.hpp"
#include "lic/eval_metrics.hpp"
#include "lic/ranker.hpp"
#include "lic/temporal.hpp"
#include "lic/tensor.hpp"

namespace lic {

struct StreamConfig {
  std::size_t n_users = 2000;
  std::size_t n_items = 5000;
  std::size_t n_genres = 12;
  std::size_t embedding_dim = 32;
  std::size_t history_span_days = 365;
  double history_events_min = 8.0;  // per user per day, drawn uniformly per user
  double history_events_max = 22.0;
  std::size_t impressions_per_user_day = 10;
  std::size_t train_days = 14;
  std::size_t test_days = 1;
  double label_noise = 0.05;
  double circadian_amplitude = 3.0;
  double center_spread_hours = 4.0;  // per-user jitter around each genre's peak hour
  double affinity_mean = -1.5;
  double affinity_std = 1.0;
  double item_noise = 0.35;
  std::int64_t start_epoch = 1704067200;  // 2024-01-01T00:00:00Z
  std::uint64_t seed = 42;

  void validate() const {
    require(n_genres > 0 && n_items >= n_genres, "StreamConfig: need n_items >= n_genres > 0");
    require(embedding_dim > 0, "StreamConfig: embedding_dim must be positive");
    require(history_events_min >= 0.0 && history_events_max >= history_events_min,
            "StreamConfig: bad history event range");
    require(label_noise >= 0.0 && label_noise < 0.5, "StreamConfig: label_noise outside [0, 0.5)");
    require(circadian_amplitude >= 0.0, "StreamConfig: negative circadian_amplitude");
    require(affinity_std >= 0.0 && item_noise >= 0.0 && center_spread_hours >= 0.0,
            "StreamConfig: negative spread");
    require(start_epoch >= static_cast<std::int64_t>(history_span_days) * kSecondsPerDay,
            "StreamConfig: history would start before the epoch");
    require(start_epoch % kSecondsPerDay == 0, "StreamConfig: start_epoch must be a midnight");
  }

  Timestamp train_begin() const { return Timestamp(start_epoch); }
  Timestamp test_begin() const {
    return Timestamp(start_epoch + static_cast<std::int64_t>(train_days) * kSecondsPerDay);
  }
};

/// Raised cosine on the 24h circle: amplitude at the center, zero beyond the half-width.
struct CircularBump {
  double center_hours = 0.0;
  double half_width_hours = 1.0;
  double amplitude = 0.0;

  double operator()(double clock_hours) const noexcept {
    double dist = std::fabs(clock_hours - center_hours);
    dist = std::fmod(dist, 24.0);
    dist = std::min(dist, 24.0 - dist);
    if (dist >= half_width_hours) return 0.0;
    return amplitude * 0.5 * (1.0 + std::cos(std::numbers::pi * dist / half_width_hours));
  }
};

struct UserProfile {
  UserId user_id = 0;
  std::vector<double> base_affinity;              // per genre
  std::vector<std::array<CircularBump, 2>> curves;  // per genre; amplitudes sum to <= 1
  double events_per_day = 0.0;

  /// In [0, 1] for every clock time.
  double preference(std::size_t genre, ClockTime t) const noexcept {
    const double h = t.seconds_in_day() / 3600.0;
    const auto& c = curves[genre];
    return std::clamp(c[0](h) + c[1](h), 0.0, 1.0);
  }

  double logit(std::size_t genre, ClockTime t, double amplitude) const noexcept {
    return base_affinity[genre] + amplitude * preference(genre, t);
  }
};

struct SyntheticData {
  StreamConfig config;
  std::shared_ptr<ItemCatalog> catalog;
  std::vector<UserProfile> profiles;
  std::vector<std::vector<BehaviorRecord>> histories;  // per user, time-sorted
  std::vector<Sample> train;
  std::vector<Sample> test;
};

namespace detail {

enum class Stream : std::uint64_t { kCatalog = 1, kProfile = 2, kHistory = 3, kImpressions = 4 };

inline std::mt19937_64 derived_rng(std::uint64_t seed, Stream stream, std::uint64_t key = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(key),
                    static_cast<std::uint32_t>(key >> 32)};
  return std::mt19937_64(seq);
}

inline std::vector<std::vector<ItemId>> items_by_genre(const ItemCatalog& catalog,
                                                       std::size_t n_genres) {
  std::vector<std::vector<ItemId>> out(n_genres);
  for (std::size_t i = 0; i < catalog.size(); ++i)
    out[static_cast<std::size_t>(catalog.genre[i])].push_back(static_cast<ItemId>(i));
  return out;
}

}  // namespace detail

/// Genre centroids are random directions; items are centroid plus isotropic noise.
/// Items are assigned to genres round-robin so every genre is populated.
inline std::shared_ptr<ItemCatalog> make_catalog(const StreamConfig& cfg) {
  auto rng = detail::derived_rng(cfg.seed, detail::Stream::kCatalog);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.embedding_dim));
  Matrix centroids(cfg.n_genres, cfg.embedding_dim);
  for (double& v : centroids.flat()) v = normal(rng) * scale;
  auto catalog = std::make_shared<ItemCatalog>();
  catalog->embeddings = Matrix(cfg.n_items, cfg.embedding_dim);
  catalog->genre.resize(cfg.n_items);
  for (std::size_t i = 0; i < cfg.n_items; ++i) {
    const auto g = i % cfg.n_genres;
    catalog->genre[i] = static_cast<std::int32_t>(g);
    auto row = catalog->embeddings.row(i);
    for (std::size_t c = 0; c < cfg.embedding_dim; ++c)
      row[c] = centroids(g, c) + cfg.item_noise * normal(rng) * scale;
  }
  return catalog;
}

inline std::vector<UserProfile> make_profiles(const StreamConfig& cfg) {
  // Genre-level peak hours shared by all users; users jitter around them.
  auto genre_rng = detail::derived_rng(cfg.seed, detail::Stream::kProfile, ~0ULL);
  std::uniform_real_distribution<double> hour(0.0, 24.0);
  std::vector<std::array<double, 2>> genre_peaks(cfg.n_genres);
  for (auto& p : genre_peaks) p = {hour(genre_rng), hour(genre_rng)};

  std::vector<UserProfile> profiles(cfg.n_users);
  for (std::size_t u = 0; u < cfg.n_users; ++u) {
    auto rng = detail::derived_rng(cfg.seed, detail::Stream::kProfile, u);
    std::normal_distribution<double> affinity(cfg.affinity_mean, cfg.affinity_std);
    std::normal_distribution<double> jitter(0.0, cfg.center_spread_hours);
    std::uniform_real_distribution<double> width(2.0, 6.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> rate(cfg.history_events_min, cfg.history_events_max);
    auto& p = profiles[u];
    p.user_id = static_cast<UserId>(u);
    p.events_per_day = rate(rng);
    p.base_affinity.resize(cfg.n_genres);
    p.curves.resize(cfg.n_genres);
    for (std::size_t g = 0; g < cfg.n_genres; ++g) {
      p.base_affinity[g] = affinity(rng);
      const double a1 = 0.5 + 0.5 * unit(rng);
      const double a2 = (1.0 - a1) * unit(rng);
      for (int j = 0; j < 2; ++j) {
        double c = std::fmod(genre_peaks[g][j] + jitter(rng), 24.0);
        if (c < 0.0) c += 24.0;
        p.curves[g][j] = CircularBump{c, width(rng), j == 0 ? a1 : a2};
      }
    }
  }
  return profiles;
}

/// Noise-free finish probability.
inline double true_probability(const UserProfile& profile, std::size_t genre, ClockTime t,
                               const StreamConfig& cfg) noexcept {
  return sigmoid(profile.logit(genre, t, cfg.circadian_amplitude));
}

/// Best time-blind probability: p averaged over a uniform clock time (1-minute grid).
inline double time_blind_probability(const UserProfile& profile, std::size_t genre,
                                     const StreamConfig& cfg) noexcept {
  double total = 0.0;
  for (int m = 0; m < 1440; ++m) total += true_probability(profile, genre, ClockTime(m * 60), cfg);
  return total / 1440.0;
}

inline std::vector<BehaviorRecord> make_history(const StreamConfig& cfg, const UserProfile& profile,
                                                const std::vector<std::vector<ItemId>>& by_genre) {
  auto rng = detail::derived_rng(cfg.seed, detail::Stream::kHistory,
                                 static_cast<std::uint64_t>(profile.user_id));
  std::poisson_distribution<int> count(profile.events_per_day);
  std::uniform_int_distribution<std::int64_t> second(0, kSecondsPerDay - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<BehaviorRecord> out;
  out.reserve(static_cast<std::size_t>(profile.events_per_day * cfg.history_span_days * 1.1));
  std::vector<double> cumulative(cfg.n_genres);
  std::vector<std::int64_t> times;
  const std::int64_t first_day =
      cfg.start_epoch - static_cast<std::int64_t>(cfg.history_span_days) * kSecondsPerDay;
  for (std::size_t day = 0; day < cfg.history_span_days; ++day) {
    const std::int64_t midnight = first_day + static_cast<std::int64_t>(day) * kSecondsPerDay;
    times.resize(static_cast<std::size_t>(count(rng)));
    for (auto& t : times) t = second(rng);
    std::sort(times.begin(), times.end());
    for (const auto t : times) {
      const ClockTime clock(static_cast<std::int32_t>(t));
      double acc = 0.0;
      for (std::size_t g = 0; g < cfg.n_genres; ++g)
        cumulative[g] = (acc += true_probability(profile, g, clock, cfg));
      const double draw = unit(rng) * acc;
      const auto g = static_cast<std::size_t>(
          std::upper_bound(cumulative.begin(), cumulative.end(), draw) - cumulative.begin());
      const auto& pool = by_genre[std::min(g, cfg.n_genres - 1)];
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      out.push_back({pool[pick(rng)], Timestamp(midnight + t)});
    }
  }
  return out;
}

/// Impressions for [day_begin, day_begin + days): uniform items at uniform times.
inline std::vector<Sample> make_impressions(const StreamConfig& cfg,
                                            const std::vector<UserProfile>& profiles,
                                            const ItemCatalog& catalog, std::size_t day_offset,
                                            std::size_t days) {
  std::vector<Sample> out;
  out.reserve(profiles.size() * days * cfg.impressions_per_user_day);
  for (const auto& profile : profiles) {
    auto rng = detail::derived_rng(
        cfg.seed, detail::Stream::kImpressions,
        (static_cast<std::uint64_t>(profile.user_id) << 20) ^ static_cast<std::uint64_t>(day_offset));
    std::uniform_int_distribution<std::int64_t> second(0, kSecondsPerDay - 1);
    std::uniform_int_distribution<std::size_t> item(0, catalog.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t day = day_offset; day < day_offset + days; ++day) {
      const std::int64_t midnight = cfg.start_epoch + static_cast<std::int64_t>(day) * kSecondsPerDay;
      for (std::size_t n = 0; n < cfg.impressions_per_user_day; ++n) {
        Sample s;
        s.user = profile.user_id;
        s.item = static_cast<ItemId>(item(rng));
        s.genre = catalog.genre[static_cast<std::size_t>(s.item)];
        const std::int64_t t = second(rng);
        s.timestamp = Timestamp(midnight + t);
        const double p = true_probability(profile, static_cast<std::size_t>(s.genre),
                                          ClockTime(static_cast<std::int32_t>(t)), cfg);
        const double noisy = (1.0 - cfg.label_noise) * p + cfg.label_noise * (1.0 - p);
        s.label = unit(rng) < noisy ? 1 : 0;
        out.push_back(s);
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Sample& a, const Sample& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    if (a.user != b.user) return a.user < b.user;
    return a.item < b.item;
  });
  return out;
}

inline SyntheticData generate(const StreamConfig& cfg) {
  cfg.validate();
  SyntheticData data;
  data.config = cfg;
  data.catalog = make_catalog(cfg);
  data.profiles = make_profiles(cfg);
  const auto by_genre = detail::items_by_genre(*data.catalog, cfg.n_genres);
  data.histories.reserve(cfg.n_users);
  for (const auto& p : data.profiles) data.histories.push_back(make_history(cfg, p, by_genre));
  data.train = make_impressions(cfg, data.profiles, *data.catalog, 0, cfg.train_days);
  data.test = make_impressions(cfg, data.profiles, *data.catalog, cfg.train_days, cfg.test_days);
  return data;
}

/// True probabilities for a stream of samples from the generator's users.
inline std::vector<double> true_probabilities(std::span<const Sample> stream,
                                              const std::vector<UserProfile>& profiles,
                                              const StreamConfig& cfg) {
  std::vector<double> p;
  p.reserve(stream.size());
  for (const auto& s : stream)
    p.push_back(true_probability(profiles.at(static_cast<std::size_t>(s.user)),
                                 static_cast<std::size_t>(s.genre), clock_of_day(s.timestamp), cfg));
  return p;
}

/// AUC of the generating probabilities against the sampled labels.
inline std::optional<double> oracle_auc(std::span<const Sample> stream,
                                        const std::vector<UserProfile>& profiles,
                                        const StreamConfig& cfg) {
  std::vector<int> labels;
  labels.reserve(stream.size());
  for (const auto& s : stream) labels.push_back(s.label);
  return auc(true_probabilities(stream, profiles, cfg), labels);
}

}  // namespace lic
