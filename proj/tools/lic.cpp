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

// Command-line driver: generate, train, evaluate, probe, bench.
//
// Exit codes: 0 success, 1 validation failure, 2 runtime failure.
// Log verbosity comes from LIC_LOG_LEVEL (trace, debug, info, warn, error, off).

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "lic/lic.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

void setup_logging() {
  auto logger = spdlog::stderr_color_st("lic");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("LIC_LOG_LEVEL")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept "off" when asked for.
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
    else spdlog::warn("ignoring unknown LIC_LOG_LEVEL '{}'", env);
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw lic::Error("cannot create output directory '" + dir.string() + "'");
}

/// Config keys from `--config` (if any) on top of `base`.
lic::KeyValues merged_keys(lic::KeyValues base, const std::string& config_path) {
  if (!config_path.empty())
    for (auto& [k, v] : lic::read_key_values(config_path)) base[k] = v;
  return base;
}

struct Dataset {
  lic::RunConfig config;
  std::shared_ptr<lic::ItemCatalog> catalog;
  std::shared_ptr<lic::BehaviorStore> store;
  std::vector<lic::Sample> train;
  std::vector<lic::Sample> test;
};

/// Loads a generated dataset directory. The store holds the long-term histories only.
Dataset load_dataset(const fs::path& dir, const std::string& config_path, bool need_test) {
  Dataset d;
  d.config = lic::RunConfig::from_key_values(
      merged_keys(lic::read_key_values(dir / "generator.cfg"), config_path));
  auto loaded = lic::read_catalog(dir / "items.tsv");
  d.catalog = loaded.catalog;
  const auto& g = d.config.generator;
  if (d.catalog->size() != g.n_items || d.catalog->dim() != g.embedding_dim ||
      loaded.n_genres != g.n_genres)
    throw lic::SchemaError("items.tsv does not match generator.cfg");
  d.store = std::make_shared<lic::BehaviorStore>(d.catalog, d.config.capacity);
  const auto n = lic::load_histories(dir / "histories.tsv", *d.store);
  d.train = lic::read_samples(dir / "train.tsv", true);
  if (need_test) d.test = lic::read_samples(dir / "test.tsv", true);
  spdlog::info("loaded {}: {} items, {} history rows, {} train, {} test", dir.string(),
               d.catalog->size(), n, d.train.size(), d.test.size());
  return d;
}

/// Store state at the end of training: histories plus every finished training impression.
void replay_training_finishes(Dataset& d) {
  std::size_t n = 0;
  for (const auto& s : d.train)
    if (s.label == 1 && d.catalog->contains(s.item)) {
      d.store->append(s.user, s.item, s.timestamp);
      ++n;
    }
  spdlog::debug("replayed {} training finishes into the store", n);
}

lic::Timestamp parse_date(const std::string& text) {
  // YYYY-MM-DD (UTC midnight) or raw epoch seconds.
  int y = 0;
  unsigned m = 0, dd = 0;
  char sep1 = 0, sep2 = 0;
  std::istringstream is(text);
  if (text.size() == 10 && (is >> y >> sep1 >> m >> sep2 >> dd) && sep1 == '-' && sep2 == '-') {
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                          std::chrono::day{dd}};
    if (!ymd.ok()) throw lic::ConfigError("invalid date '" + text + "'");
    const auto days = std::chrono::sys_days(ymd).time_since_epoch().count();
    return lic::Timestamp(static_cast<std::int64_t>(days) * lic::kSecondsPerDay);
  }
  std::int64_t secs = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), secs);
  if (ec != std::errc() || ptr != text.data() + text.size() || secs < 0)
    throw lic::ConfigError("cannot parse date '" + text + "' (expected YYYY-MM-DD or epoch seconds)");
  return lic::Timestamp(secs);
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt::format("{:.4f}", *v) : std::string("absent");
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  auto cfg = lic::RunConfig::from_key_values(merged_keys({}, a.config));
  if (a.seed) cfg.generator.seed = *a.seed;
  cfg.validate();
  ensure_dir(a.out);
  const fs::path out(a.out);
  const auto t0 = std::chrono::steady_clock::now();
  const auto data = lic::generate(cfg.generator);
  lic::write_catalog(out / "items.tsv", *data.catalog, cfg.generator.n_genres);
  lic::write_histories(out / "histories.tsv", data.histories, *data.catalog);
  lic::write_samples(out / "train.tsv", data.train);
  lic::write_samples(out / "test.tsv", data.test);
  lic::detail::write_text(out / "generator.cfg", cfg.generator_key_values());
  std::size_t rows = 0;
  for (const auto& h : data.histories) rows += h.size();
  const auto oracle = lic::oracle_auc(data.test, data.profiles, cfg.generator);
  spdlog::info("generated {} users, {} history rows, {} train, {} test in {:.1f}s; test oracle AUC {}",
               cfg.generator.n_users, rows, data.train.size(), data.test.size(),
               std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(),
               fmt_opt(oracle));
  return 0;
}

struct TrainArgs {
  std::string data;
  std::string config;
  std::string mode;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_train(const TrainArgs& a) {
  auto d = load_dataset(a.data, a.config, false);
  if (a.seed) d.config.init_seed = *a.seed;
  const auto modes = a.mode.empty() ? d.config.modes : std::vector<lic::Mode>{lic::parse_mode(a.mode)};
  ensure_dir(a.out);
  const fs::path out(a.out);
  const auto model_cfg = d.config.resolved_model();
  for (const auto mode : modes) {
    // Each mode starts from the same history-only store.
    auto store = std::make_shared<lic::BehaviorStore>(d.catalog, d.config.capacity);
    for (lic::UserId u : d.store->users()) {
      const auto seq = d.store->snapshot(u);
      for (std::size_t k = 0; k < seq.size(); ++k)
        store->append(u, seq.record(k).item_id, seq.record(k).timestamp);
    }
    lic::Ranker model(lic::LicParams::random(model_cfg, d.config.init_seed), mode, store,
                      d.config.top_k, d.config.cache_entries);
    const auto name = std::string(lic::to_string(mode));
    spdlog::info("training {} on {} samples (lr {}, K {})", name, d.train.size(),
                 d.config.learning_rate, d.config.top_k);
    const auto t0 = std::chrono::steady_clock::now();
    const auto log = lic::train_stream(
        model, d.train, d.config.learning_rate, d.config.log_every,
        [&](const lic::TrainLogEntry& e) {
          spdlog::info("{} step {} mean loss {:.5f}", name, e.step, e.mean_loss);
        });
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (model.rejected_steps() > 0)
      spdlog::warn("{}: {} updates rejected for non-finite gradients", name, model.rejected_steps());
    lic::save_checkpoint((out / (name + ".ckpt")).string(), {model.params(), mode, d.config.top_k});
    std::string tsv = "step\tmean_loss\n";
    for (const auto& e : log) tsv += fmt::format("{}\t{:.17g}\n", e.step, e.mean_loss);
    lic::detail::write_text(out / ("train_log_" + name + ".tsv"), tsv);
    spdlog::info("{} done in {:.1f}s ({:.0f} samples/s)", name, secs,
                 static_cast<double>(d.train.size()) / std::max(secs, 1e-9));
  }
  return 0;
}

lic::Ranker ranker_from_checkpoint(const lic::Checkpoint& ckpt, const Dataset& d) {
  const auto expect = d.config.resolved_model();
  const auto& c = ckpt.params.config;
  if (c.behavior_dim != expect.behavior_dim || c.num_users != expect.num_users ||
      c.num_items != expect.num_items || c.num_genres != expect.num_genres)
    throw lic::ConfigError("checkpoint shape does not match the dataset");
  return lic::Ranker(ckpt.params, ckpt.mode, d.store, ckpt.top_k, d.config.cache_entries);
}

struct EvaluateArgs {
  std::string data;
  std::string config;
  std::vector<std::string> checkpoints;
  std::string out;
};

int cmd_evaluate(const EvaluateArgs& a) {
  auto d = load_dataset(a.data, a.config, true);
  replay_training_finishes(d);
  ensure_dir(a.out);
  const auto profiles = lic::make_profiles(d.config.generator);
  const auto oracle = lic::oracle_auc(d.test, profiles, d.config.generator);

  std::vector<lic::MetricReport> reports;
  for (const auto& path : a.checkpoints) {
    const auto ckpt = lic::load_checkpoint(path);
    const auto model = ranker_from_checkpoint(ckpt, d);
    auto r = lic::evaluate_frozen(model, d.test);
    r.oracle_auc = oracle;
    reports.push_back(std::move(r));
  }
  const lic::MetricReport* base = nullptr;
  for (const auto& r : reports)
    if (r.mode == "no_time") base = &r;
  for (auto& r : reports) {
    if (base) lic::set_baseline(r, *base);
    lic::write_report(a.out, "metrics_" + r.mode, r);
  }
  std::cout << fmt::format("{:<16}{:>10}{:>10}{:>12}{:>12}{:>10}\n", "mode", "auc", "uauc",
                           "relaimpr", "relaimpr_u", "oracle");
  for (const auto& r : reports)
    std::cout << fmt::format("{:<16}{:>10}{:>10}{:>12}{:>12}{:>10}\n", r.mode, fmt_opt(r.auc),
                             fmt_opt(r.uauc), fmt_opt(r.rela_impr_auc), fmt_opt(r.rela_impr_uauc),
                             fmt_opt(r.oracle_auc));
  return 0;
}

struct ProbeArgs {
  std::string data;
  std::string config;
  std::string checkpoint;
  std::int64_t user = 0;
  std::int64_t item = 0;
  std::string date;
  std::string out;
};

int cmd_probe(const ProbeArgs& a) {
  auto d = load_dataset(a.data, a.config, false);
  replay_training_finishes(d);
  const auto ckpt = lic::load_checkpoint(a.checkpoint);
  const auto model = ranker_from_checkpoint(ckpt, d);
  const auto date = a.date.empty() ? d.config.generator.test_begin() : parse_date(a.date);
  const auto r = lic::smoothness_probe(model, a.user, a.item, date);
  ensure_dir(a.out);
  lic::write_report(a.out, fmt::format("probe_{}_u{}_i{}", lic::to_string(ckpt.mode), a.user, a.item), r);
  std::cout << fmt::format("mode {} user {} item {}: max_adjacent_jump {:.6g}, hour_boundary_jump {:.6g}\n",
                           lic::to_string(ckpt.mode), a.user, a.item, r.max_adjacent_jump,
                           r.hour_boundary_jump);
  return 0;
}

struct BenchArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_bench(const BenchArgs& a) {
  auto cfg = lic::RunConfig::from_key_values(merged_keys({}, a.config));
  const std::uint64_t seed = a.seed.value_or(cfg.init_seed);
  const auto model = cfg.resolved_model();
  nlohmann::json rows = nlohmann::json::array();
  std::string text = fmt::format("{:>8}{:>6}{:>14}{:>14}{:>9}{:>16}{:>16}{:>9}\n", "M", "K",
                                 "heap_qps", "sort_qps", "ratio", "heap_sel_qps", "sort_sel_qps",
                                 "ratio");
  for (const auto m : cfg.bench_lengths) {
    const auto fixture = lic::make_bench_fixture(model, m, cfg.bench_queries, seed);
    for (const auto k : cfg.bench_ks) {
      const auto row = lic::run_gsu_bench(fixture, k);
      text += fmt::format("{:>8}{:>6}{:>14.0f}{:>14.0f}{:>9.2f}{:>16.0f}{:>16.0f}{:>9.2f}\n", row.length,
                          row.k, row.heap_qps, row.sort_qps, row.heap_qps / row.sort_qps,
                          row.heap_select_qps, row.sort_select_qps,
                          row.heap_select_qps / row.sort_select_qps);
      rows.push_back({{"length", row.length},
                      {"k", row.k},
                      {"queries", row.queries},
                      {"heap_qps", row.heap_qps},
                      {"sort_qps", row.sort_qps},
                      {"heap_select_qps", row.heap_select_qps},
                      {"sort_select_qps", row.sort_select_qps}});
    }
  }
  std::cout << text;
  if (!a.out.empty()) {
    ensure_dir(a.out);
    lic::detail::write_text(fs::path(a.out) / "bench.txt", text);
    lic::detail::write_text(fs::path(a.out) / "bench.json", rows.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Time-aware long-sequence CTR ranking: data generation, training and evaluation"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic dataset directory");
  g->add_option("--config", gen.config, "Key-value config file")->check(CLI::ExistingFile);
  g->add_option("--seed", gen.seed, "Generator seed (overrides the config)");
  g->add_option("--out", gen.out, "Output directory")->required();

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train one or all model variants on a dataset");
  t->add_option("--data", train.data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  t->add_option("--config", train.config, "Overrides for the dataset's generator.cfg")
      ->check(CLI::ExistingFile);
  t->add_option("--mode", train.mode, "no_time | hour_embedding | lic (default: config modes)")
      ->check(CLI::IsMember({"no_time", "hour_embedding", "lic"}));
  t->add_option("--seed", train.seed, "Parameter initialisation seed");
  t->add_option("--out", train.out, "Checkpoint directory")->required();

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Score the test stream with frozen checkpoints");
  e->add_option("--data", ev.data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  e->add_option("--config", ev.config, "Overrides for the dataset's generator.cfg")
      ->check(CLI::ExistingFile);
  e->add_option("--checkpoint", ev.checkpoints, "Checkpoint file (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  e->add_option("--out", ev.out, "Report directory")->required();

  ProbeArgs pr;
  auto* p = app.add_subcommand("probe", "Sweep one day at 1-minute steps for one (user, item)");
  p->add_option("--data", pr.data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  p->add_option("--config", pr.config, "Overrides for the dataset's generator.cfg")
      ->check(CLI::ExistingFile);
  p->add_option("--checkpoint", pr.checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
  p->add_option("--user", pr.user, "User id")->required();
  p->add_option("--item", pr.item, "Item id")->required();
  p->add_option("--date", pr.date, "YYYY-MM-DD or epoch seconds (default: first test day)");
  p->add_option("--out", pr.out, "Report directory")->required();

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "GSU top-K throughput, heap selection vs full sort");
  b->add_option("--config", bench.config, "Key-value config file")->check(CLI::ExistingFile);
  b->add_option("--seed", bench.seed, "Fixture seed");
  b->add_option("--out", bench.out, "Report directory (optional)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*t) return cmd_train(train);
    if (*e) return cmd_evaluate(ev);
    if (*p) return cmd_probe(pr);
    if (*b) return cmd_bench(bench);
  } catch (const lic::ConfigError& err) {
    spdlog::error("{}", err.what());
    return kExitValidation;
  } catch (const lic::OrderingError& err) {
    spdlog::error("{}", err.what());
    return kExitValidation;
  } catch (const std::invalid_argument& err) {
    spdlog::error("{}", err.what());
    return kExitValidation;
  } catch (const std::exception& err) {
    spdlog::error("{}", err.what());
    return kExitRuntime;
  }
  return kExitRuntime;
}
