#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cascade/basis.hpp"
#include "cascade/error.hpp"
#include "cascade/experiment.hpp"

using namespace cascade;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const char* kTraj = R"({
  "model": "dressed_fw",
  "params": {"theta": 1, "xi": -8, "gamma": 0, "beta": -1},
  "grid": {"L": 2, "p_phi": 8},
  "truncation": {"q_max": 2, "momentum_sector": 0},
  "initial": {"fock": [{"band": "fh", "p": 0, "n": 2}]},
  "t_final": 5,
  "snapshots": 3,
  "observables": ["momentum", "loss"],
  "method": "trajectories",
  "trajectories": 32
})";

}  // namespace

TEST_CASE("preset runs are byte-identical across reruns and thread counts") {
  const Json c = load_config(R"({"preset": "fig3_dispersive"})");
  const auto a = run_experiment(c, 1);
  const auto b = run_experiment(c, 3);
  CHECK(a.to_csv() == b.to_csv());
  CHECK(a.to_json(false) == b.to_json(false));
  CHECK(a.to_json(true).find("wall_time_s") != std::string::npos);
  CHECK(a.to_json(false).find("wall_time_s") == std::string::npos);
  CHECK(a.rows.size() == 928);
}

TEST_CASE("rows are ordered by point, model and time") {
  const auto t = run_experiment(load_config(R"({"preset": "fig3_dispersive"})"), 2);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const auto& p = t.rows[i - 1];
    const auto& q = t.rows[i];
    REQUIRE(p.point <= q.point);
    if (p.point == q.point && p.model == q.model) REQUIRE(p.t <= q.t);
  }
  CHECK(t.rows.front().xi == 10.0);
  CHECK(t.rows.back().xi == 80.0);
}

TEST_CASE("CSV values round-trip exactly") {
  const auto t = run_experiment(load_config(R"({"preset": "fig3_dispersive", "sweep": {"xi": [20]}})"), 1);
  std::istringstream in(t.to_csv());
  std::string line;
  std::getline(in, line);
  CHECK(line == "point,xi,model,t,observable,coord,value");
  std::size_t i = 0;
  while (std::getline(in, line)) {
    const auto v = std::strtod(line.substr(line.rfind(',') + 1).c_str(), nullptr);
    REQUIRE(v == t.rows[i].value);
    ++i;
  }
  CHECK(i == t.rows.size());
}

TEST_CASE("config hash is recomputable and tracks physics fields only") {
  const Json c = load_config(R"({"preset": "fig3_dispersive"})");
  const auto t = run_experiment(load_config(R"({"preset": "fig3_dispersive", "sweep": {"xi": [10]}})"), 1);
  CHECK(config_hash(t.config) == t.config_hash);

  const std::string h = config_hash(c);
  CHECK(h.size() == 16);
  CHECK(config_hash(load_config(R"({"preset": "fig3_dispersive", "output": {"dir": "x", "stem": "y"}})")) == h);
  for (const char* changed : {R"({"preset": "fig3_dispersive", "t_final": 2.5})",
                              R"({"preset": "fig3_dispersive", "grid": {"L": 4, "p_phi": 7}})",
                              R"({"preset": "fig3_dispersive", "sweep": {"xi": [10, 20, 40, 81]}})",
                              R"({"preset": "fig3_dispersive", "params": {"theta": 1, "xi": 10, "gamma": 0.1, "beta": -1}})",
                              R"({"preset": "fig3_dispersive", "seed": 7})"})
    CHECK(config_hash(load_config(changed)) != h);

  const Json a = load_config(R"({"model": "toy", "params": {"theta": 1, "xi": 50, "gamma": 0, "beta": 0}, "t_final": 1})");
  const Json b = load_config(R"({"t_final": 1, "params": {"beta": 0, "gamma": 0, "xi": 50, "theta": 1}, "model": "toy"})");
  CHECK(config_hash(a) == config_hash(b));
}

TEST_CASE("schema rejects unknown keys and malformed values") {
  CHECK(kind_of([] { load_config(R"({"preset": "fig3_dispersive", "colour": 1})"); }) == ErrorKind::Config);
  CHECK(kind_of([] { load_config(R"({"preset": "fig3_dispersive", "grid": {"L": 4, "p_phi": 8, "q": 1}})"); }) ==
        ErrorKind::Config);
  CHECK(kind_of([] { load_config(R"({"preset": "nope"})"); }) == ErrorKind::Config);
  CHECK(kind_of([] { load_config("{not json"); }) == ErrorKind::Config);
  CHECK(kind_of([] { load_config(R"({"preset": "fig3_dispersive", "t_final": "2"})"); }) == ErrorKind::Config);
  CHECK(kind_of([] { load_config(R"({"preset": "fig3_dispersive", "models": ["magic"]})"); }) == ErrorKind::Config);
  CHECK(kind_of([] { load_config(R"({"preset": "fig3_dispersive", "observables": ["entropy"]})"); }) ==
        ErrorKind::Config);
  CHECK(kind_of([] { load_config(kTraj); }) == ErrorKind::Config);
  try {
    load_config(R"({"preset": "fig3_dispersive", "truncation": {"q_max": 2, "sector": 0}})");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("truncation: unknown key 'sector'") != std::string::npos);
  }
  CHECK_NOTHROW(load_config(kTraj, 11));
}

TEST_CASE("validate reports exact basis dimensions") {
  auto rep = validate_experiment(R"({"preset": "fig3_dispersive"})");
  CHECK(rep["ok"].get<bool>());
  CHECK(rep["points"].size() == 4);
  const auto full = FockBasis::enumerate(ModeGrid::with_default_sh(4, 8), 2);
  const auto cubic = FockBasis::enumerate(ModeGrid::fh_only(4, 8), 2);
  CHECK(rep["points"][0]["models"][0]["dim"].get<double>() == double(full.dim()));
  CHECK(rep["points"][0]["models"][1]["dim"].get<double>() == double(cubic.dim()));
  CHECK(rep["points"][0]["regime"] == "Dispersive");

  rep = validate_experiment(R"({"preset": "fig4_dissipative"})");
  const auto sector = FockBasis::enumerate(ModeGrid::with_default_sh(10, 200), 2, 0);
  CHECK(rep["points"][1]["models"][0]["dim"].get<double>() == double(sector.dim()));
  CHECK(rep["points"][1]["regime"] == "DissipativeElliptical");
  CHECK(rep["points"][1]["models"][0]["memory_bytes"].get<double>() > 0);
}

TEST_CASE("validate lists warnings and errors without throwing") {
  auto rep = validate_experiment(
      R"({"preset": "fig3_dispersive", "params": {"theta": 1, "xi": 10, "gamma": 0, "beta": 0.75}})");
  CHECK(rep["ok"].get<bool>());
  REQUIRE(rep["warnings"].size() == 4);
  CHECK(rep["warnings"][0].get<std::string>().find("outside the validity range") != std::string::npos);

  rep = validate_experiment(kTraj);
  CHECK_FALSE(rep["ok"].get<bool>());
  REQUIRE(rep["errors"].size() == 1);
  CHECK(rep["errors"][0].get<std::string>().find("seed") != std::string::npos);
  CHECK(rep["points"].size() == 1);
  CHECK(validate_experiment(kTraj, 3)["ok"].get<bool>());

  rep = validate_experiment(R"({"preset": "fig3_dispersive", "model": "dressed_fw", "models": null})");
  CHECK_FALSE(rep["ok"].get<bool>());
  rep = validate_experiment(R"({"preset": "fig3_dispersive", "models": ["dressed_fw"]})");
  CHECK_FALSE(rep["ok"].get<bool>());
  CHECK(rep["errors"].size() == 4);
  CHECK(validate_experiment("[1, 2]")["ok"] == false);
}

TEST_CASE("run errors carry regime and numerical kinds") {
  CHECK(kind_of([] {
          run_experiment(load_config(R"({"preset": "fig3_dispersive", "models": ["dressed_fw"]})"), 1);
        }) == ErrorKind::Regime);
  CHECK(kind_of([] {
          run_experiment(load_config(R"({"preset": "appF_fig", "toy": {"n_phi": 2, "n_max_fh": 2, "n_max_sh": 1}})"), 1);
        }) == ErrorKind::Numerical);
  CHECK(kind_of([] {
          run_experiment(load_config(R"({"preset": "fig3_dispersive", "initial": {"fock": [{"p": 9, "n": 1}]}})"), 1);
        }) == ErrorKind::Config);
}

TEST_CASE("seeded trajectories reproduce across thread counts") {
  const auto a = run_experiment(load_config(kTraj, 5), 1);
  const auto b = run_experiment(load_config(kTraj, 5), 4);
  const auto c = run_experiment(load_config(kTraj, 6), 1);
  CHECK(a.to_csv() == b.to_csv());
  CHECK(a.to_csv() != c.to_csv());
  bool has_loss = false;
  for (const auto& r : a.rows) has_loss = has_loss || r.observable == "loss";
  CHECK(has_loss);
}

TEST_CASE("other model families run through the runner") {
  const auto cl = run_experiment(load_config(R"({
    "model": "classical",
    "params": {"theta": 1, "xi": 25, "gamma": 0, "beta": -1},
    "grid": {"L": 10},
    "t_final": 0.2,
    "classical": {"n": 64, "amplitude": 1, "width": 1, "sqrt_xi_scaling": true}
  })"), 1);
  CHECK(cl.rows.size() == 3 * 64 + 2);
  CHECK(cl.rows.back().observable == "charge_drift");
  CHECK(cl.rows.back().value < 1e-8);

  const auto me = run_experiment(load_config(R"({
    "models": ["me_appD", "cubic"],
    "params": {"theta": 1, "xi": -30, "gamma": 0, "beta": -1},
    "grid": {"L": 2, "p_phi": 12},
    "truncation": {"q_max": 2, "momentum_sector": 0},
    "initial": {"coherent": [{"p": 0, "alpha": [0.2, 0.1]}]},
    "t_final": 0.5,
    "snapshots": 3,
    "observables": ["momentum", "density"],
    "g2_points": 5
  })"), 2);
  CHECK(me.rows.size() == 2 * 3 * (25 + 5));

  const auto ch = run_experiment(load_config(R"({
    "model": "full",
    "params": {"theta": 1, "xi": 20, "gamma": 0, "beta": -1},
    "grid": {"L": 2, "p_phi": 2},
    "truncation": {"q_max": 2},
    "initial": {"fock": [{"p": 0, "n": 2}]},
    "t_final": 1,
    "schedule": {"xi_initial": 20, "xi_final": 20, "ramp": 1},
    "observables": ["momentum", "sh_momentum"]
  })"), 1);
  const auto un = run_experiment(load_config(R"({
    "model": "full",
    "params": {"theta": 1, "xi": 20, "gamma": 0, "beta": -1},
    "grid": {"L": 2, "p_phi": 2},
    "truncation": {"q_max": 2},
    "initial": {"fock": [{"p": 0, "n": 2}]},
    "t_final": 1,
    "observables": ["momentum", "sh_momentum"]
  })"), 1);
  REQUIRE(ch.rows.size() == un.rows.size());
  for (std::size_t i = 0; i < ch.rows.size(); ++i) CHECK(ch.rows[i].value == doctest::Approx(un.rows[i].value).epsilon(1e-7));
}

TEST_CASE("outputs land on disk") {
  const auto dir = (std::filesystem::temp_directory_path() / "cascade_eft_test_out").string();
  std::filesystem::remove_all(dir);
  const auto t = run_experiment(load_config(R"({"preset": "fig3_dispersive", "sweep": {"xi": [40]}})"), 1);
  const auto paths = write_outputs(t, dir + "/nested", "run");
  REQUIRE(paths.size() == 2);
  CHECK(read_file(paths[0]) == t.to_csv());
  const Json j = Json::parse(read_file(paths[1]));
  CHECK(j["metadata"]["config_hash"] == t.config_hash);
  CHECK(config_hash(j["metadata"]["config"]) == t.config_hash);
  CHECK(j["rows"].size() == t.rows.size());
  CHECK(j["columns"] == Json(ResultTable::columns()));
  std::filesystem::remove_all(dir);
}
