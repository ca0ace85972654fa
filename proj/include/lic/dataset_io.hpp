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

// Dataset directory layout:
//
//   items.tsv      #lic-items v1 dim=<L> genres=<G>
//                  item_id \t genre_id \t e_0 \t ... \t e_{L-1}
//   histories.tsv  #lic-dataset v1 header, rows grouped by user, time-sorted per user
//   train.tsv      #lic-dataset v1 header, rows time-sorted
//   test.tsv       same
//
// Sample rows are `user_id \t item_id \t genre_id \t epoch_seconds \t label`.
// Doubles are written in shortest round-trip form.

#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "lic/behavior_store.hpp"
#include "lic/ranker.hpp"

namespace lic {

inline constexpr std::string_view kDatasetHeader =
    "#lic-dataset\tv1\tuser_id\titem_id\tgenre_id\tepoch_seconds\tlabel";
inline constexpr std::string_view kItemsMagic = "#lic-items\tv1";

/// Malformed or schema-incompatible dataset file.
class SchemaError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

namespace detail {

class BufferedWriter {
 public:
  explicit BufferedWriter(const std::filesystem::path& path) : path_(path) {
    file_ = std::fopen(path.c_str(), "wb");
    if (!file_) throw Error("cannot open '" + path.string() + "' for writing");
    buf_.reserve(kFlushAt + 256);
  }
  ~BufferedWriter() {
    if (file_) std::fclose(file_);
  }
  BufferedWriter(const BufferedWriter&) = delete;
  BufferedWriter& operator=(const BufferedWriter&) = delete;

  void put(std::string_view s) {
    buf_.append(s);
    maybe_flush();
  }
  void put(char c) { buf_.push_back(c); }
  template <class T>
  void num(T v) {
    char tmp[64];
    auto [end, ec] = std::to_chars(tmp, tmp + sizeof(tmp), v);
    buf_.append(tmp, end);
    maybe_flush();
  }
  void close() {
    flush();
    if (std::fclose(file_) != 0) {
      file_ = nullptr;
      throw Error("write failed for '" + path_.string() + "'");
    }
    file_ = nullptr;
  }

 private:
  static constexpr std::size_t kFlushAt = 1 << 20;
  void maybe_flush() {
    if (buf_.size() >= kFlushAt) flush();
  }
  void flush() {
    if (!buf_.empty() && std::fwrite(buf_.data(), 1, buf_.size(), file_) != buf_.size())
      throw Error("write failed for '" + path_.string() + "'");
    buf_.clear();
  }
  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
  std::string buf_;
};

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return std::move(ss).str();
}

template <class T>
T parse_field(std::string_view& line, const std::string& where, bool last) {
  const auto tab = line.find('\t');
  if (last != (tab == std::string_view::npos))
    throw SchemaError(where + ": wrong number of columns");
  const auto field = line.substr(0, tab);
  T v{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw SchemaError(where + ": cannot parse '" + std::string(field) + "'");
  line = last ? std::string_view{} : line.substr(tab + 1);
  return v;
}

/// Calls fn(line, line_number) for each non-empty line after the header.
template <class Fn>
void for_each_row(std::string_view text, std::string_view expected_header_prefix,
                  const std::string& name, bool exact_header, Fn&& fn) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = nl + 1;
    ++line_no;
    if (!header_seen) {
      const bool ok = exact_header ? line == expected_header_prefix
                                   : line.starts_with(expected_header_prefix);
      if (!ok) throw SchemaError(name + ": missing or unsupported schema header");
      header_seen = true;
      fn(line, std::size_t{0});
      continue;
    }
    if (line.empty()) continue;
    fn(line, line_no);
  }
  if (!header_seen) throw SchemaError(name + ": empty file, schema header required");
}

}  // namespace detail

inline void write_samples(const std::filesystem::path& path, std::span<const Sample> samples) {
  detail::BufferedWriter w(path);
  w.put(kDatasetHeader);
  w.put('\n');
  for (const auto& s : samples) {
    w.num(s.user);
    w.put('\t');
    w.num(s.item);
    w.put('\t');
    w.num(s.genre);
    w.put('\t');
    w.num(s.timestamp.epoch_seconds());
    w.put('\t');
    w.num(s.label);
    w.put('\n');
  }
  w.close();
}

/// Reads a sample file. Stream files must be non-decreasing in time.
inline std::vector<Sample> read_samples(const std::filesystem::path& path, bool require_time_sorted) {
  const std::string text = detail::slurp(path);
  const std::string name = path.filename().string();
  std::vector<Sample> out;
  detail::for_each_row(text, kDatasetHeader, name, true, [&](std::string_view line, std::size_t n) {
    if (n == 0) return;
    const auto where = name + ":" + std::to_string(n);
    Sample s;
    s.user = detail::parse_field<std::int64_t>(line, where, false);
    s.item = detail::parse_field<std::int64_t>(line, where, false);
    s.genre = detail::parse_field<std::int32_t>(line, where, false);
    const auto ts = detail::parse_field<std::int64_t>(line, where, false);
    if (ts < 0) throw SchemaError(where + ": negative timestamp");
    s.timestamp = Timestamp(ts);
    s.label = detail::parse_field<int>(line, where, true);
    if (s.label != 0 && s.label != 1) throw SchemaError(where + ": label must be 0 or 1");
    if (require_time_sorted && !out.empty() && s.timestamp < out.back().timestamp)
      throw SchemaError(where + ": stream is not time-sorted");
    out.push_back(s);
  });
  return out;
}

inline void write_histories(const std::filesystem::path& path,
                            const std::vector<std::vector<BehaviorRecord>>& histories,
                            const ItemCatalog& catalog) {
  detail::BufferedWriter w(path);
  w.put(kDatasetHeader);
  w.put('\n');
  for (std::size_t u = 0; u < histories.size(); ++u) {
    for (const auto& r : histories[u]) {
      w.num(static_cast<std::int64_t>(u));
      w.put('\t');
      w.num(r.item_id);
      w.put('\t');
      w.num(catalog.genre[static_cast<std::size_t>(r.item_id)]);
      w.put('\t');
      w.num(r.timestamp.epoch_seconds());
      w.put("\t1\n");
    }
  }
  w.close();
}

/// Loads a histories file into `store`; per-user ordering is enforced by the store.
inline std::size_t load_histories(const std::filesystem::path& path, BehaviorStore& store) {
  const auto rows = read_samples(path, false);
  for (const auto& r : rows) store.append(r.user, r.item, r.timestamp);
  return rows.size();
}

inline void write_catalog(const std::filesystem::path& path, const ItemCatalog& catalog,
                          std::size_t n_genres) {
  detail::BufferedWriter w(path);
  w.put(kItemsMagic);
  w.put("\tdim=");
  w.num(catalog.dim());
  w.put("\tgenres=");
  w.num(n_genres);
  w.put('\n');
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    w.num(i);
    w.put('\t');
    w.num(catalog.genre[i]);
    for (double v : catalog.embeddings.row(i)) {
      w.put('\t');
      w.num(v);
    }
    w.put('\n');
  }
  w.close();
}

struct LoadedCatalog {
  std::shared_ptr<ItemCatalog> catalog;
  std::size_t n_genres = 0;
};

inline LoadedCatalog read_catalog(const std::filesystem::path& path) {
  const std::string text = detail::slurp(path);
  const std::string name = path.filename().string();
  LoadedCatalog out;
  out.catalog = std::make_shared<ItemCatalog>();
  std::size_t dim = 0;
  std::vector<double> values;
  detail::for_each_row(text, kItemsMagic, name, false, [&](std::string_view line, std::size_t n) {
    if (n == 0) {
      auto rest = line.substr(kItemsMagic.size());
      const auto dpos = rest.find("\tdim=");
      const auto gpos = rest.find("\tgenres=");
      if (dpos == std::string_view::npos || gpos == std::string_view::npos)
        throw SchemaError(name + ": header needs dim= and genres=");
      auto dfield = rest.substr(dpos + 5, gpos - dpos - 5);
      auto gfield = rest.substr(gpos + 8);
      std::from_chars(dfield.data(), dfield.data() + dfield.size(), dim);
      std::from_chars(gfield.data(), gfield.data() + gfield.size(), out.n_genres);
      if (dim == 0) throw SchemaError(name + ": zero embedding dim");
      return;
    }
    const auto where = name + ":" + std::to_string(n);
    const auto id = detail::parse_field<std::int64_t>(line, where, false);
    if (id != static_cast<std::int64_t>(out.catalog->genre.size()))
      throw SchemaError(where + ": item ids must be dense and ascending");
    const auto genre = detail::parse_field<std::int32_t>(line, where, false);
    if (genre < 0 || static_cast<std::size_t>(genre) >= out.n_genres)
      throw SchemaError(where + ": genre out of range");
    out.catalog->genre.push_back(genre);
    for (std::size_t c = 0; c < dim; ++c)
      values.push_back(detail::parse_field<double>(line, where, c + 1 == dim));
  });
  out.catalog->embeddings = Matrix(out.catalog->genre.size(), dim);
  std::copy(values.begin(), values.end(), out.catalog->embeddings.flat().begin());
  return out;
}

}  // namespace lic
