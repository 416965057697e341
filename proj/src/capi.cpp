#include "cascade/cascade.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "cascade/error.hpp"
#include "cascade/experiment.hpp"
#include "cascade/parallel.hpp"

struct cascade_config {
  cascade::Json json;
  std::string hash;
  std::string text;
  std::string dir;
  std::string stem;
};

struct cascade_result {
  cascade::ResultTable table;
  std::string csv;
  std::string json_timed;
  std::string json_plain;
};

namespace {

thread_local std::string g_last_error;

cascade_status status_of(cascade::ErrorKind k) {
  using cascade::ErrorKind;
  switch (k) {
    case ErrorKind::Config:
    case ErrorKind::InvalidArgument:
      return CASCADE_ERR_CONFIG;
    case ErrorKind::Regime:
    case ErrorKind::Resonance:
    case ErrorKind::Geometry:
    case ErrorKind::Domain:
      return CASCADE_ERR_REGIME;
    case ErrorKind::Numerical:
    case ErrorKind::Size:
      return CASCADE_ERR_NUMERICAL;
    case ErrorKind::Io:
      return CASCADE_ERR_IO;
  }
  return CASCADE_ERR_INTERNAL;
}

template <class F>
cascade_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return CASCADE_OK;
  } catch (const cascade::Error& e) {
    g_last_error = std::string(cascade::error_kind_name(e.kind())) + ": " + e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CASCADE_ERR_NUMERICAL;
  } catch (const std::exception& e) {
    g_last_error = std::string("internal: ") + e.what();
    return CASCADE_ERR_INTERNAL;
  }
}

cascade_status null_arg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return CASCADE_ERR_CONFIG;
}

std::optional<std::uint64_t> seed_of(const uint64_t* seed) {
  if (!seed) return std::nullopt;
  return *seed;
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

}  // namespace

extern "C" {

const char* cascade_version(void) { return cascade::code_version(); }

const char* cascade_last_error(void) { return g_last_error.c_str(); }

void cascade_set_warning_callback(cascade_warning_fn fn, void* user) {
  if (!fn) {
    cascade::set_warning_handler(nullptr);
    return;
  }
  cascade::set_warning_handler([fn, user](const std::string& m) { fn(m.c_str(), user); });
}

int cascade_default_threads(void) { return cascade::default_thread_count(); }

size_t cascade_preset_count(void) { return cascade::preset_names().size(); }

const char* cascade_preset_name(size_t index) {
  static const std::vector<std::string> names = cascade::preset_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

const char* cascade_preset_text(const char* name) {
  if (!name) return nullptr;
  static const std::vector<std::string> names = cascade::preset_names();
  static const std::vector<std::string> texts = [] {
    std::vector<std::string> t;
    for (const auto& n : names) t.push_back(cascade::preset_text(n));
    return t;
  }();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return texts[i].c_str();
  return nullptr;
}

cascade_status cascade_config_load(const char* json_text, const uint64_t* seed, cascade_config** out) {
  if (!json_text) return null_arg("json_text");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto c = std::make_unique<cascade_config>();
    c->json = cascade::load_config(json_text, seed_of(seed));
    c->hash = cascade::config_hash(c->json);
    c->text = c->json.dump();
    const cascade::Json o = c->json.value("output", cascade::Json::object());
    c->dir = o.value("dir", std::string("."));
    c->stem = o.value("stem", c->json.value("name", std::string("result")));
    *out = c.release();
  });
}

cascade_status cascade_config_load_file(const char* path, const uint64_t* seed, cascade_config** out) {
  if (!path) return null_arg("path");
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    g_last_error = std::string("io: cannot read ") + path;
    return CASCADE_ERR_IO;
  }
  std::stringstream ss;
  ss << f.rdbuf();
  return cascade_config_load(ss.str().c_str(), seed, out);
}

void cascade_config_free(cascade_config* config) { delete config; }

const char* cascade_config_hash(const cascade_config* config) { return config ? config->hash.c_str() : ""; }
const char* cascade_config_json(const cascade_config* config) { return config ? config->text.c_str() : ""; }
const char* cascade_config_output_dir(const cascade_config* config) { return config ? config->dir.c_str() : ""; }
const char* cascade_config_output_stem(const cascade_config* config) { return config ? config->stem.c_str() : ""; }

cascade_status cascade_run(const cascade_config* config, int threads, cascade_result** out) {
  if (!config) return null_arg("config");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<cascade_result>();
    r->table = cascade::run_experiment(config->json, threads > 0 ? threads : cascade::default_thread_count());
    r->csv = r->table.to_csv();
    r->json_timed = r->table.to_json(true);
    r->json_plain = r->table.to_json(false);
    *out = r.release();
  });
}

void cascade_result_free(cascade_result* result) { delete result; }

size_t cascade_result_row_count(const cascade_result* result) { return result ? result->table.rows.size() : 0; }
double cascade_result_wall_time(const cascade_result* result) { return result ? result->table.wall_time_s : 0.0; }
const char* cascade_result_csv(const cascade_result* result) { return result ? result->csv.c_str() : ""; }

const char* cascade_result_json(const cascade_result* result, int include_timing) {
  if (!result) return "";
  return include_timing ? result->json_timed.c_str() : result->json_plain.c_str();
}

cascade_status cascade_result_write(const cascade_result* result, const char* dir, const char* stem) {
  if (!result) return null_arg("result");
  if (!dir) return null_arg("dir");
  if (!stem) return null_arg("stem");
  return guarded([&] { cascade::write_outputs(result->table, dir, stem); });
}

cascade_status cascade_validate(const char* json_text, const uint64_t* seed, char** report_json) {
  if (!json_text) return null_arg("json_text");
  if (!report_json) return null_arg("report_json");
  *report_json = nullptr;
  return guarded([&] {
    const std::string s = cascade::validate_experiment(json_text, seed_of(seed)).dump(2);
    *report_json = dup(s);
    if (!*report_json) throw std::bad_alloc();
  });
}

void cascade_string_free(char* s) { std::free(s); }

}  // extern "C"
