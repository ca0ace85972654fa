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

// Stage-2 time-gap-aware attention over the retrieved sub-sequence.
//
// Rows are augmented with their time features, Z_aug = [z_k | phi_k]. For
// head i:
//
//   alpha_ik = (W_b^i z_k) . (W_q^i q) / sqrt(d) + s(phi_k)
//   r_i      = softmax(alpha_i)^T Z_aug W_v^i
//
// and the interest vector is v = h([r_1 .. r_n]). The item term is evaluated
// as z_k . (W_b^i^T W_q^i q) and r_i as W_v^i^T (Z_aug^T p) so that each head
// costs O(K (L + 4)) after the small projections.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "lic/clock_gsu.hpp"
#include "lic/params.hpp"
#include "lic/temporal.hpp"
#include "lic/tensor.hpp"

namespace lic {

/// Row k = [z_k | time_features(gap(clock(ts_k), t_cur))].
inline Matrix augment(const SubSequence& sub, ClockTime t_cur) {
  const std::size_t dim = sub.embeddings.cols();
  Matrix z_aug(sub.size(), dim + kTimeFeatureDim);
  for (std::size_t k = 0; k < sub.size(); ++k) {
    auto row = z_aug.row(k);
    auto z = sub.embedding(k);
    std::copy(z.begin(), z.end(), row.begin());
    const auto gap = circular_gap_seconds(clock_of_day(sub.entries[k].timestamp), t_cur);
    const auto& tf = time_features_for_gap_seconds(gap);
    std::copy(tf.begin(), tf.end(), row.begin() + static_cast<std::ptrdiff_t>(dim));
  }
  return z_aug;
}

inline TimeFeatures row_time_features(const Matrix& z_aug, std::size_t k) {
  TimeFeatures tf;
  auto row = z_aug.row(k);
  std::copy(row.end() - kTimeFeatureDim, row.end(), tf.begin());
  return tf;
}

/// Max-subtracted softmax.
inline Vec softmax(std::span<const double> logits) {
  Vec p(logits.size());
  if (logits.empty()) return p;
  const double mx = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) total += (p[k] = std::exp(logits[k] - mx));
  for (double& v : p) v /= total;
  return p;
}

struct HeadTrace {
  Vec query_proj;  // W_q q, d
  Vec folded;      // W_b^T W_q q, L
  Vec alpha;
  Vec probs;
  Vec pooled;  // Z_aug^T p, L+4
  Vec r;       // d
};

/// One attention head given the shared per-row time scores s(phi_k).
inline HeadTrace head_attention(const Matrix& z_aug, std::span<const double> time_scores,
                                std::span<const double> query, const HeadParams& head) {
  const std::size_t d = head.w_b.rows();
  const std::size_t L = head.w_b.cols();
  HeadTrace t;
  t.query_proj = matvec(head.w_q, query);
  t.folded = matvec_t(head.w_b, t.query_proj);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  t.alpha.resize(z_aug.rows());
  for (std::size_t k = 0; k < z_aug.rows(); ++k)
    t.alpha[k] = dot(z_aug.row(k).first(L), t.folded) * scale + time_scores[k];
  t.probs = softmax(t.alpha);
  t.pooled = matvec_t(z_aug, t.probs);
  t.r = matvec_t(head.w_v, t.pooled);
  return t;
}

inline Vec row_time_scores(const Matrix& z_aug, const TimeScoreNet& net) {
  Vec s(z_aug.rows());
  for (std::size_t k = 0; k < z_aug.rows(); ++k) s[k] = time_score(row_time_features(z_aug, k), net);
  return s;
}

struct FusionTrace {
  Vec input;
  Vec hidden_pre;
  Vec hidden;
  Vec output;
};

inline FusionTrace fuse(std::span<const Vec> head_outputs, const FusionNet& net) {
  FusionTrace f;
  for (const auto& r : head_outputs) f.input.insert(f.input.end(), r.begin(), r.end());
  if (f.input.size() != net.layer1.in_dim())
    throw ConfigError("fuse: expected " + std::to_string(net.layer1.in_dim()) + " inputs, got " +
                      std::to_string(f.input.size()));
  f.hidden_pre.resize(net.layer1.out_dim());
  net.layer1.forward(f.input, f.hidden_pre);
  f.hidden.resize(f.hidden_pre.size());
  std::transform(f.hidden_pre.begin(), f.hidden_pre.end(), f.hidden.begin(), relu);
  f.output.resize(net.layer2.out_dim());
  net.layer2.forward(f.hidden, f.output);
  return f;
}

struct EsuTrace {
  bool used_default = false;
  Matrix z_aug;
  Vec time_scores;
  std::vector<HeadTrace> heads;
  FusionTrace fusion;
  Vec v_cur;
};

/// augment -> per-head attention -> fusion. An empty sub-sequence yields the
/// learned default-interest vector.
inline EsuTrace esu_forward(const SubSequence& sub, std::span<const double> query, ClockTime t_cur,
                            const LicParams& params) {
  EsuTrace t;
  if (sub.empty()) {
    t.used_default = true;
    t.v_cur = params.default_interest;
    return t;
  }
  if (sub.embeddings.cols() != params.config.behavior_dim)
    throw ConfigError("esu_forward: behavior dim mismatch");
  if (query.size() != params.config.query_dim) throw ConfigError("esu_forward: query dim mismatch");
  t.z_aug = augment(sub, t_cur);
  t.time_scores = row_time_scores(t.z_aug, params.time_net);
  std::vector<Vec> rs;
  rs.reserve(params.heads.size());
  for (const auto& head : params.heads) {
    t.heads.push_back(head_attention(t.z_aug, t.time_scores, query, head));
    rs.push_back(t.heads.back().r);
  }
  t.fusion = fuse(rs, params.fusion);
  t.v_cur = t.fusion.output;
  return t;
}

/// Accumulates d(loss)/d(params) given d(loss)/d(v_cur). Retrieved embeddings,
/// the query and the time features are inputs, not parameters.
inline void esu_backward(const EsuTrace& t, std::span<const double> query,
                         std::span<const double> d_vcur, const LicParams& params,
                         Gradients& grads) {
  auto& g = grads.grad;
  if (t.used_default) {
    axpy(1.0, d_vcur, g.default_interest);
    return;
  }
  const auto& fp = params.fusion;
  const auto& ft = t.fusion;

  add_outer(g.fusion.layer2.weight, d_vcur, ft.hidden);
  axpy(1.0, d_vcur, g.fusion.layer2.bias);
  Vec d_hidden = matvec_t(fp.layer2.weight, d_vcur);
  for (std::size_t j = 0; j < d_hidden.size(); ++j)
    if (ft.hidden_pre[j] <= 0.0) d_hidden[j] = 0.0;
  add_outer(g.fusion.layer1.weight, d_hidden, ft.input);
  axpy(1.0, d_hidden, g.fusion.layer1.bias);
  const Vec d_concat = matvec_t(fp.layer1.weight, d_hidden);

  const std::size_t d = params.config.latent_dim;
  const std::size_t L = params.config.behavior_dim;
  const std::size_t rows = t.z_aug.rows();
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  Vec d_time(rows, 0.0);

  for (std::size_t i = 0; i < params.heads.size(); ++i) {
    const auto& hp = params.heads[i];
    const auto& ht = t.heads[i];
    auto& hg = g.heads[i];
    std::span<const double> d_r(d_concat.data() + i * d, d);

    add_outer(hg.w_v, ht.pooled, d_r);
    const Vec d_pooled = matvec(hp.w_v, d_r);

    Vec d_alpha(rows);
    double weighted = 0.0;
    for (std::size_t k = 0; k < rows; ++k) {
      d_alpha[k] = dot(t.z_aug.row(k), d_pooled);
      weighted += ht.probs[k] * d_alpha[k];
    }
    Vec d_folded(L, 0.0);
    for (std::size_t k = 0; k < rows; ++k) {
      d_alpha[k] = ht.probs[k] * (d_alpha[k] - weighted);
      d_time[k] += d_alpha[k];
      axpy(d_alpha[k] * scale, t.z_aug.row(k).first(L), d_folded);
    }
    add_outer(hg.w_b, ht.query_proj, d_folded);
    const Vec d_query_proj = matvec(hp.w_b, d_folded);
    add_outer(hg.w_q, d_query_proj, query);
  }

  const auto& tn = params.time_net;
  auto& tg = g.time_net;
  for (std::size_t k = 0; k < rows; ++k) {
    const double ds = d_time[k];
    if (ds == 0.0) continue;
    const TimeFeatures tf = row_time_features(t.z_aug, k);
    tg.layer2.bias[0] += ds;
    for (std::size_t j = 0; j < tn.layer1.out_dim(); ++j) {
      auto w = tn.layer1.weight.row(j);
      double pre = tn.layer1.bias[j];
      for (std::size_t c = 0; c < kTimeFeatureDim; ++c) pre += w[c] * tf[c];
      if (pre <= 0.0) continue;
      tg.layer2.weight(0, j) += ds * pre;
      const double dpre = ds * tn.layer2.weight(0, j);
      auto gw = tg.layer1.weight.row(j);
      for (std::size_t c = 0; c < kTimeFeatureDim; ++c) gw[c] += dpre * tf[c];
      tg.layer1.bias[j] += dpre;
    }
  }
}

}  // namespace lic
