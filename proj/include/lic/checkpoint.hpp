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

// Binary checkpoint layout (little-endian):
//
//   magic        8 bytes  "LICCKPT\0"
//   format       u32      kCheckpointFormat
//   mode         u32      0 no_time, 1 hour_embedding, 2 lic
//   dims         13 x u64 behavior, query, latent, heads, time_hidden, feature,
//                         hidden1, hidden2, users, items, genres, top_k, version
//   tensors      u64 count, then per tensor: u64 n, n x f64 row-major,
//                in LicParams::tensors() order

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "lic/params.hpp"
#include "lic/ranker.hpp"

namespace lic {

static_assert(std::endian::native == std::endian::little, "checkpoint IO assumes little-endian");

inline constexpr std::array<char, 8> kCheckpointMagic = {'L', 'I', 'C', 'C', 'K', 'P', 'T', '\0'};
inline constexpr std::uint32_t kCheckpointFormat = 1;

struct Checkpoint {
  LicParams params;
  Mode mode = Mode::kLic;
  std::size_t top_k = kDefaultTopK;
};

namespace detail {

template <class T>
void write_pod(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_pod(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ConfigError("checkpoint: truncated file");
  return v;
}

}  // namespace detail

inline void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("checkpoint: cannot open '" + path + "' for writing");
  const auto& c = ckpt.params.config;
  os.write(kCheckpointMagic.data(), kCheckpointMagic.size());
  detail::write_pod<std::uint32_t>(os, kCheckpointFormat);
  detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(ckpt.mode));
  for (std::uint64_t v : {c.behavior_dim, c.query_dim, c.latent_dim, c.num_heads, c.time_hidden,
                          c.feature_dim, c.hidden1, c.hidden2, c.num_users, c.num_items,
                          c.num_genres, ckpt.top_k})
    detail::write_pod<std::uint64_t>(os, v);
  detail::write_pod<std::uint64_t>(os, ckpt.params.version);
  const auto tensors = ckpt.params.tensors();
  detail::write_pod<std::uint64_t>(os, tensors.size());
  for (const auto& t : tensors) {
    detail::write_pod<std::uint64_t>(os, t.values.size());
    os.write(reinterpret_cast<const char*>(t.values.data()),
             static_cast<std::streamsize>(t.values.size() * sizeof(double)));
  }
  if (!os) throw Error("checkpoint: write failed for '" + path + "'");
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("checkpoint: cannot open '" + path + "'");
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kCheckpointMagic) throw ConfigError("checkpoint: bad magic in '" + path + "'");
  const auto format = detail::read_pod<std::uint32_t>(is);
  if (format != kCheckpointFormat)
    throw ConfigError("checkpoint: unsupported format " + std::to_string(format));
  const auto mode = detail::read_pod<std::uint32_t>(is);
  if (mode > static_cast<std::uint32_t>(Mode::kLic)) throw ConfigError("checkpoint: bad mode");
  ModelConfig c;
  std::size_t* dims[] = {&c.behavior_dim, &c.query_dim, &c.latent_dim, &c.num_heads,
                         &c.time_hidden,  &c.feature_dim, &c.hidden1,  &c.hidden2,
                         &c.num_users,    &c.num_items,  &c.num_genres};
  for (auto* d : dims) *d = detail::read_pod<std::uint64_t>(is);
  Checkpoint ckpt;
  ckpt.mode = static_cast<Mode>(mode);
  ckpt.top_k = detail::read_pod<std::uint64_t>(is);
  ckpt.params = LicParams(c);
  ckpt.params.version = detail::read_pod<std::uint64_t>(is);
  auto tensors = ckpt.params.tensors();
  if (detail::read_pod<std::uint64_t>(is) != tensors.size())
    throw ConfigError("checkpoint: tensor count mismatch");
  for (auto& t : tensors) {
    if (detail::read_pod<std::uint64_t>(is) != t.values.size())
      throw ConfigError("checkpoint: size mismatch for tensor " + t.name);
    is.read(reinterpret_cast<char*>(t.values.data()),
            static_cast<std::streamsize>(t.values.size() * sizeof(double)));
    if (!is) throw ConfigError("checkpoint: truncated tensor " + t.name);
  }
  if (is.peek() != std::char_traits<char>::eof()) throw ConfigError("checkpoint: trailing bytes");
  if (!ckpt.params.all_finite()) throw ConfigError("checkpoint: non-finite parameter values");
  return ckpt;
}

}  // namespace lic
