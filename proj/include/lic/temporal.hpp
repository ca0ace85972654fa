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

// Clock-of-day arithmetic on the 24h circle.
//
// A timestamp is reduced to its time of day (UTC), two times of day are
// compared by their shortest distance around the clock, and that distance
// is expanded into the four-component feature vector consumed by the time
// score network and by the attention rows:
//
//   delta = gap_minutes / 720
//   phi   = [delta, sqrt(delta), delta^2, ln(1 + delta)]

#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <vector>

namespace lic {

inline constexpr std::int64_t kSecondsPerDay = 86400;
inline constexpr std::int64_t kMaxGapSeconds = kSecondsPerDay / 2;
inline constexpr double kMaxGapMinutes = 720.0;
inline constexpr std::size_t kTimeFeatureDim = 4;

/// Seconds since the Unix epoch, UTC. Never negative.
class Timestamp {
 public:
  constexpr Timestamp() = default;
  constexpr explicit Timestamp(std::int64_t epoch_seconds) : secs_(epoch_seconds) {
    if (epoch_seconds < 0) throw std::invalid_argument("Timestamp: negative epoch seconds");
  }
  constexpr std::int64_t epoch_seconds() const noexcept { return secs_; }
  constexpr auto operator<=>(const Timestamp&) const = default;

 private:
  std::int64_t secs_ = 0;
};

/// Time of day in seconds, [0, 86400).
class ClockTime {
 public:
  constexpr ClockTime() = default;
  constexpr explicit ClockTime(std::int32_t seconds_in_day) : secs_(seconds_in_day) {
    if (seconds_in_day < 0 || seconds_in_day >= kSecondsPerDay)
      throw std::invalid_argument("ClockTime: seconds out of [0, 86400)");
  }
  static constexpr ClockTime hms(int h, int m, int s) { return ClockTime(h * 3600 + m * 60 + s); }

  constexpr std::int32_t seconds_in_day() const noexcept { return secs_; }
  constexpr int hour() const noexcept { return secs_ / 3600; }
  constexpr int minute() const noexcept { return (secs_ / 60) % 60; }
  constexpr int second() const noexcept { return secs_ % 60; }
  constexpr auto operator<=>(const ClockTime&) const = default;

 private:
  std::int32_t secs_ = 0;
};

/// Shortest distance between two clock times, in minutes, [0, 720].
struct GapMinutes {
  double minutes = 0.0;
  constexpr auto operator<=>(const GapMinutes&) const = default;
};

using TimeFeatures = std::array<double, kTimeFeatureDim>;

constexpr ClockTime clock_of_day(Timestamp t) noexcept {
  return ClockTime(static_cast<std::int32_t>(t.epoch_seconds() % kSecondsPerDay));
}

/// Circular gap in whole seconds, [0, 43200].
constexpr std::int32_t circular_gap_seconds(ClockTime a, ClockTime b) noexcept {
  std::int32_t diff = a.seconds_in_day() - b.seconds_in_day();
  if (diff < 0) diff = -diff;
  const std::int32_t wrapped = static_cast<std::int32_t>(kSecondsPerDay) - diff;
  return diff < wrapped ? diff : wrapped;
}

constexpr GapMinutes circular_gap(ClockTime a, ClockTime b) noexcept {
  return GapMinutes{static_cast<double>(circular_gap_seconds(a, b)) / 60.0};
}

inline TimeFeatures time_features(GapMinutes gap) {
  if (!(gap.minutes >= 0.0 && gap.minutes <= kMaxGapMinutes))
    throw std::invalid_argument("time_features: gap outside [0, 720] minutes");
  const double delta = gap.minutes / kMaxGapMinutes;
  return {delta, std::sqrt(delta), delta * delta, std::log1p(delta)};
}

/// Time features for every whole-second gap in [0, 43200]. Entries are computed
/// with `time_features` itself, so lookups are bitwise identical to direct calls.
inline const std::vector<TimeFeatures>& gap_feature_table() {
  static const std::vector<TimeFeatures> table = [] {
    std::vector<TimeFeatures> t(kMaxGapSeconds + 1);
    for (std::int64_t s = 0; s <= kMaxGapSeconds; ++s)
      t[s] = time_features(GapMinutes{static_cast<double>(s) / 60.0});
    return t;
  }();
  return table;
}

inline const TimeFeatures& time_features_for_gap_seconds(std::int32_t gap_seconds) {
  return gap_feature_table()[static_cast<std::size_t>(gap_seconds)];
}

}  // namespace lic
