#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cascade/cascade.h"

namespace {

struct Common {
  std::string config;
  std::string preset;
  std::optional<uint64_t> seed;
};

int report_failure(cascade_status s) {
  std::fprintf(stderr, "error: %s\n", cascade_last_error());
  return static_cast<int>(s);
}

std::string config_text(const Common& c) {
  return "{\"preset\": \"" + c.preset + "\"}";
}

cascade_status load(const Common& c, cascade_config** cfg) {
  const uint64_t* seed = c.seed ? &*c.seed : nullptr;
  if (!c.preset.empty()) return cascade_config_load(config_text(c).c_str(), seed, cfg);
  return cascade_config_load_file(c.config.c_str(), seed, cfg);
}

void add_common(CLI::App* app, Common& c) {
  auto* cfg = app->add_option("--config", c.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
  auto* pre = app->add_option("--preset", c.preset, "Run an embedded preset by name");
  cfg->excludes(pre);
  app->add_option("--seed", c.seed, "Master seed (overrides the config)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cascaded three-wave-mixing effective field theory experiments"};
  app.set_version_flag("--version", std::string(cascade_version()));
  app.require_subcommand(1);

  Common run_opts;
  std::string out_dir;
  int threads = 0;
  auto* run = app.add_subcommand("run", "Run an experiment and write CSV + JSON tables");
  add_common(run, run_opts);
  run->add_option("--out", out_dir, "Output directory (overrides the config)");
  run->add_option("--threads", threads, "Worker threads (default: CASCADE_EFT_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  Common val_opts;
  auto* validate = app.add_subcommand("validate", "Dry run: regime, basis size, memory estimate");
  add_common(validate, val_opts);

  bool show = false;
  auto* list = app.add_subcommand("list-presets", "List embedded presets");
  list->add_flag("--show", show, "Print each preset's config text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*list) {
    for (size_t i = 0; i < cascade_preset_count(); ++i) {
      const char* name = cascade_preset_name(i);
      std::printf("%s\n", name);
      if (show) std::printf("%s\n", cascade_preset_text(name));
    }
    return 0;
  }

  if (*validate) {
    if (val_opts.config.empty() && val_opts.preset.empty()) {
      std::fprintf(stderr, "error: --config or --preset is required\n");
      return 1;
    }
    std::string text = config_text(val_opts);
    if (val_opts.preset.empty()) {
      std::ifstream f(val_opts.config, std::ios::binary);
      std::stringstream ss;
      ss << f.rdbuf();
      text = ss.str();
    }
    char* report = nullptr;
    const uint64_t* seed = val_opts.seed ? &*val_opts.seed : nullptr;
    const cascade_status s = cascade_validate(text.c_str(), seed, &report);
    if (s != CASCADE_OK) return report_failure(s);
    std::printf("%s\n", report);
    const bool ok = std::string(report).find("\"ok\": true") != std::string::npos;
    cascade_string_free(report);
    return ok ? 0 : 1;
  }

  if (run_opts.config.empty() && run_opts.preset.empty()) {
    std::fprintf(stderr, "error: --config or --preset is required\n");
    return 1;
  }
  cascade_config* cfg = nullptr;
  cascade_status s = load(run_opts, &cfg);
  if (s != CASCADE_OK) return report_failure(s);
  cascade_result* res = nullptr;
  s = cascade_run(cfg, threads, &res);
  if (s != CASCADE_OK) {
    cascade_config_free(cfg);
    return report_failure(s);
  }
  const std::string dir = out_dir.empty() ? cascade_config_output_dir(cfg) : out_dir;
  const std::string stem = cascade_config_output_stem(cfg);
  s = cascade_result_write(res, dir.c_str(), stem.c_str());
  if (s == CASCADE_OK)
    std::printf("config %s: %zu rows in %.3f s -> %s/%s.{csv,json}\n", cascade_config_hash(cfg),
                cascade_result_row_count(res), cascade_result_wall_time(res), dir.c_str(), stem.c_str());
  cascade_result_free(res);
  cascade_config_free(cfg);
  return s == CASCADE_OK ? 0 : report_failure(s);
}
