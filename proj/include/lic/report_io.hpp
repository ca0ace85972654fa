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

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "lic/eval.hpp"

namespace lic {

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

inline std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : "absent";
}

inline nlohmann::json json_optional(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open '" + path.string() + "' for writing");
  os << text;
  if (!os) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace detail

/// One `key=value` per line; undefined metrics are written as `absent`.
inline std::string to_key_values(const MetricReport& r) {
  std::string s;
  auto line = [&](const std::string& k, const std::string& v) { s += k + "=" + v + "\n"; };
  line("mode", r.mode);
  line("auc", detail::format_optional(r.auc));
  line("uauc", detail::format_optional(r.uauc));
  line("rela_impr_auc", detail::format_optional(r.rela_impr_auc));
  line("rela_impr_uauc", detail::format_optional(r.rela_impr_uauc));
  line("oracle_auc", detail::format_optional(r.oracle_auc));
  line("mean_logloss", detail::format_double(r.mean_logloss));
  line("n_samples", std::to_string(r.n_samples));
  line("n_users_scored", std::to_string(r.n_users_scored));
  for (std::size_t h = 0; h < 24; ++h)
    line("per_hour_auc." + std::to_string(h), detail::format_optional(r.per_hour_auc[h]));
  return s;
}

inline nlohmann::json to_json(const MetricReport& r) {
  nlohmann::json j;
  j["mode"] = r.mode;
  j["auc"] = detail::json_optional(r.auc);
  j["uauc"] = detail::json_optional(r.uauc);
  j["rela_impr_auc"] = detail::json_optional(r.rela_impr_auc);
  j["rela_impr_uauc"] = detail::json_optional(r.rela_impr_uauc);
  j["oracle_auc"] = detail::json_optional(r.oracle_auc);
  j["mean_logloss"] = r.mean_logloss;
  j["n_samples"] = r.n_samples;
  j["n_users_scored"] = r.n_users_scored;
  auto hours = nlohmann::json::array();
  for (const auto& h : r.per_hour_auc) hours.push_back(detail::json_optional(h));
  j["per_hour_auc"] = hours;
  return j;
}

inline std::string to_key_values(const SmoothnessReport& r) {
  return "max_adjacent_jump=" + detail::format_double(r.max_adjacent_jump) +
         "\nhour_boundary_jump=" + detail::format_double(r.hour_boundary_jump) + "\n";
}

inline nlohmann::json to_json(const SmoothnessReport& r) {
  return {{"max_adjacent_jump", r.max_adjacent_jump},
          {"hour_boundary_jump", r.hour_boundary_jump},
          {"trace", r.trace}};
}

/// Writes `<stem>.txt` (key=value) and `<stem>.json`.
template <class Report>
void write_report(const std::filesystem::path& dir, const std::string& stem, const Report& r) {
  detail::write_text(dir / (stem + ".txt"), to_key_values(r));
  detail::write_text(dir / (stem + ".json"), to_json(r).dump(2) + "\n");
}

}  // namespace lic
