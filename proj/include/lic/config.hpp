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

// Flat `key = value` run configuration. Lines starting with '#' are comments.
// Unknown keys and unparsable values are errors.

#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lic/behavior_store.hpp"
#include "lic/clock_gsu.hpp"
#include "lic/params.hpp"
#include "lic/projection_cache.hpp"
#include "lic/ranker.hpp"
#include "lic/simgen.hpp"

namespace lic {

using KeyValues = std::map<std::string, std::string>;

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline KeyValues parse_key_values(std::string_view text, const std::string& source = "config") {
  KeyValues kv;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected key = value");
    const auto key = std::string(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
    if (kv.contains(key))
      throw ConfigError(source + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    kv[key] = std::string(trim(line.substr(eq + 1)));
  }
  return kv;
}

inline KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_key_values(ss.str(), path.string());
}

struct RunConfig {
  StreamConfig generator;
  ModelConfig model;  // behavior/query dims and vocab sizes follow the generator
  std::size_t top_k = kDefaultTopK;
  std::size_t capacity = BehaviorStore::kDefaultCapacity;
  std::size_t cache_entries = ProjectionCache::kDefaultMaxEntries;
  double learning_rate = 0.01;
  std::uint64_t init_seed = 7;
  std::vector<Mode> modes = {Mode::kNoTime, Mode::kHourEmbedding, Mode::kLic};
  std::size_t log_every = 20000;
  std::vector<std::size_t> bench_lengths = {1000, 5000, 10000, 20000};
  std::vector<std::size_t> bench_ks = {50, 100, 200};
  std::size_t bench_queries = 200;

  /// Model shape implied by the generator settings.
  ModelConfig resolved_model() const {
    ModelConfig m = model;
    m.behavior_dim = generator.embedding_dim;
    m.num_users = generator.n_users;
    m.num_items = generator.n_items;
    m.num_genres = generator.n_genres;
    return m;
  }

  void validate() const {
    generator.validate();
    resolved_model().validate();
    require(model.query_dim == generator.embedding_dim,
            "query_dim must equal embedding_dim (queries are catalog embeddings)");
    require(top_k >= 1, "top_k must be at least 1");
    require(capacity >= 1, "capacity must be at least 1");
    require(cache_entries >= 1, "cache_entries must be at least 1");
    require(learning_rate > 0.0 && std::isfinite(learning_rate), "learning_rate must be positive");
    require(!modes.empty(), "modes must not be empty");
    require(!bench_lengths.empty() && !bench_ks.empty() && bench_queries > 0,
            "bench settings must be non-empty");
  }

  /// Applies every key; rejects unknown keys. Validates the result.
  static RunConfig from_key_values(const KeyValues& kv) {
    RunConfig c;
    const auto setters = c.setters();
    for (const auto& [key, value] : kv) {
      auto it = setters.find(key);
      if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
      try {
        it->second(value);
      } catch (const ConfigError& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
      }
    }
    c.validate();
    return c;
  }

  static RunConfig from_file(const std::filesystem::path& path) {
    return from_key_values(read_key_values(path));
  }

  /// Generator settings only, in config syntax; written next to generated data.
  std::string generator_key_values() const {
    std::ostringstream os;
    os.precision(17);
    const auto& g = generator;
    os << "n_users = " << g.n_users << "\n"
       << "n_items = " << g.n_items << "\n"
       << "n_genres = " << g.n_genres << "\n"
       << "embedding_dim = " << g.embedding_dim << "\n"
       << "history_span_days = " << g.history_span_days << "\n"
       << "history_events_min = " << g.history_events_min << "\n"
       << "history_events_max = " << g.history_events_max << "\n"
       << "impressions_per_user_day = " << g.impressions_per_user_day << "\n"
       << "train_days = " << g.train_days << "\n"
       << "test_days = " << g.test_days << "\n"
       << "label_noise = " << g.label_noise << "\n"
       << "circadian_amplitude = " << g.circadian_amplitude << "\n"
       << "center_spread_hours = " << g.center_spread_hours << "\n"
       << "affinity_mean = " << g.affinity_mean << "\n"
       << "affinity_std = " << g.affinity_std << "\n"
       << "item_noise = " << g.item_noise << "\n"
       << "start_epoch = " << g.start_epoch << "\n"
       << "seed = " << g.seed << "\n"
       << "query_dim = " << g.embedding_dim << "\n";
    return os.str();
  }

 private:
  template <class T>
  static T parse_number(const std::string& v) {
    T out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
      throw ConfigError("cannot parse '" + v + "' as a number");
    return out;
  }

  template <class T>
  static std::vector<T> parse_list(const std::string& v) {
    std::vector<T> out;
    std::size_t pos = 0;
    while (pos <= v.size()) {
      auto comma = v.find(',', pos);
      if (comma == std::string::npos) comma = v.size();
      out.push_back(parse_number<T>(std::string(trim(std::string_view(v).substr(pos, comma - pos)))));
      pos = comma + 1;
    }
    return out;
  }

  std::map<std::string, std::function<void(const std::string&)>> setters() {
    std::map<std::string, std::function<void(const std::string&)>> s;
    auto size = [&](std::size_t& field) {
      return [&field](const std::string& v) { field = parse_number<std::size_t>(v); };
    };
    auto real = [&](double& field) {
      return [&field](const std::string& v) { field = parse_number<double>(v); };
    };
    auto& g = generator;
    s["n_users"] = size(g.n_users);
    s["n_items"] = size(g.n_items);
    s["n_genres"] = size(g.n_genres);
    s["embedding_dim"] = size(g.embedding_dim);
    s["history_span_days"] = size(g.history_span_days);
    s["history_events_min"] = real(g.history_events_min);
    s["history_events_max"] = real(g.history_events_max);
    s["impressions_per_user_day"] = size(g.impressions_per_user_day);
    s["train_days"] = size(g.train_days);
    s["test_days"] = size(g.test_days);
    s["label_noise"] = real(g.label_noise);
    s["circadian_amplitude"] = real(g.circadian_amplitude);
    s["center_spread_hours"] = real(g.center_spread_hours);
    s["affinity_mean"] = real(g.affinity_mean);
    s["affinity_std"] = real(g.affinity_std);
    s["item_noise"] = real(g.item_noise);
    s["start_epoch"] = [&g](const std::string& v) { g.start_epoch = parse_number<std::int64_t>(v); };
    s["seed"] = [&g](const std::string& v) { g.seed = parse_number<std::uint64_t>(v); };
    s["query_dim"] = size(model.query_dim);
    s["latent_dim"] = size(model.latent_dim);
    s["num_heads"] = size(model.num_heads);
    s["time_hidden"] = size(model.time_hidden);
    s["feature_dim"] = size(model.feature_dim);
    s["hidden1"] = size(model.hidden1);
    s["hidden2"] = size(model.hidden2);
    s["top_k"] = size(top_k);
    s["capacity"] = size(capacity);
    s["cache_entries"] = size(cache_entries);
    s["learning_rate"] = real(learning_rate);
    s["init_seed"] = [this](const std::string& v) { init_seed = parse_number<std::uint64_t>(v); };
    s["log_every"] = size(log_every);
    s["bench_queries"] = size(bench_queries);
    s["bench_lengths"] = [this](const std::string& v) { bench_lengths = parse_list<std::size_t>(v); };
    s["bench_ks"] = [this](const std::string& v) { bench_ks = parse_list<std::size_t>(v); };
    s["modes"] = [this](const std::string& v) {
      modes.clear();
      std::size_t pos = 0;
      while (pos <= v.size()) {
        auto comma = v.find(',', pos);
        if (comma == std::string::npos) comma = v.size();
        modes.push_back(parse_mode(trim(std::string_view(v).substr(pos, comma - pos))));
        pos = comma + 1;
      }
    };
    return s;
  }
};

}  // namespace lic
