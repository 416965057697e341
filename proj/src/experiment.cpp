#include "cascade/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "cascade/classical.hpp"
#include "cascade/error.hpp"
#include "cascade/evolve.hpp"
#include "cascade/observables.hpp"
#include "cascade/operators.hpp"
#include "cascade/parallel.hpp"
#include "cascade/toymodel.hpp"

#ifndef CASCADE_VERSION
#define CASCADE_VERSION "0.0.0"
#endif

namespace cascade {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
  fail(ErrorKind::Config, path + ": " + msg);
}

void allow_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) bad(path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : keys) ok = ok || k == a;
    if (!ok) bad(path, "unknown key '" + k + "'");
  }
}

double num(const Json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(path, "must be finite");
  return v;
}

double num_or(const Json& j, const char* key, const std::string& path, double dflt) {
  return j.contains(key) ? num(j.at(key), path + "." + key) : dflt;
}

long long integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "expected an integer");
  return j.get<long long>();
}

long long int_or(const Json& j, const char* key, const std::string& path, long long dflt) {
  return j.contains(key) ? integer(j.at(key), path + "." + key) : dflt;
}

std::string str(const Json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

const std::set<std::string> kModels = {"full", "cubic", "dressed_fw", "me_appD", "classical", "toy"};
const std::set<std::string> kObservables = {"momentum", "sh_momentum", "g2", "density", "intraband", "loss"};

bool quantum_model(const std::string& m) { return m != "classical" && m != "toy"; }

std::vector<std::string> models_of(const Json& c) {
  std::vector<std::string> out;
  if (c.contains("model")) out.push_back(c.at("model").get<std::string>());
  if (c.contains("models"))
    for (const auto& m : c.at("models")) out.push_back(m.get<std::string>());
  return out;
}

void check_schema(const Json& c, bool require_seed) {
  allow_keys(c, "config",
             {"name", "model", "models", "params", "waveguide", "sweep", "grid", "truncation", "initial",
              "t_final", "snapshots", "observables", "g2_points", "regime", "method", "trajectories",
              "seed", "schedule", "me", "toy", "classical", "output"});
  if (c.contains("name")) str(c.at("name"), "name");
  if (c.contains("model") == c.contains("models")) bad("config", "give exactly one of 'model' or 'models'");
  if (c.contains("model")) str(c.at("model"), "model");
  if (c.contains("models")) {
    if (!c.at("models").is_array() || c.at("models").empty()) bad("models", "expected a non-empty array");
    for (const auto& m : c.at("models")) str(m, "models[]");
  }
  const auto models = models_of(c);
  for (const auto& m : models)
    if (!kModels.count(m)) bad("models", "unknown model '" + m + "'");

  if (c.contains("params") == c.contains("waveguide")) bad("config", "give exactly one of 'params' or 'waveguide'");
  if (c.contains("params")) {
    const Json& p = c.at("params");
    allow_keys(p, "params", {"theta", "xi", "gamma", "beta"});
    for (const char* k : {"theta", "xi", "gamma", "beta"})
      if (!p.contains(k)) bad("params", std::string("missing '") + k + "'");
      else num(p.at(k), std::string("params.") + k);
  }
  if (c.contains("waveguide")) {
    const Json& w = c.at("waveguide");
    allow_keys(w, "waveguide", {"r", "omega_coeffs", "k0"});
    num(w.at("r"), "waveguide.r");
    num(w.at("k0"), "waveguide.k0");
    if (!w.at("omega_coeffs").is_array()) bad("waveguide.omega_coeffs", "expected an array");
    for (const auto& v : w.at("omega_coeffs")) num(v, "waveguide.omega_coeffs[]");
  }
  if (c.contains("sweep")) {
    allow_keys(c.at("sweep"), "sweep", {"xi"});
    const Json& xs = c.at("sweep").at("xi");
    if (!xs.is_array() || xs.empty()) bad("sweep.xi", "expected a non-empty array");
    for (const auto& v : xs) num(v, "sweep.xi[]");
  }
  bool need_grid = false;
  for (const auto& m : models) need_grid = need_grid || quantum_model(m) || m == "classical";
  if (need_grid && !c.contains("grid")) bad("config", "missing 'grid'");
  if (c.contains("grid")) {
    const Json& g = c.at("grid");
    allow_keys(g, "grid", {"L", "p_phi", "p_psi"});
    if (!g.contains("L") || !(num(g.at("L"), "grid.L") > 0)) bad("grid.L", "must be positive");
    if (int_or(g, "p_phi", "grid", 0) < 0) bad("grid.p_phi", "must be non-negative");
    int_or(g, "p_psi", "grid", 0);
  }
  bool need_quantum = false;
  for (const auto& m : models) need_quantum = need_quantum || quantum_model(m);
  if (need_quantum) {
    for (const char* k : {"truncation", "initial"})
      if (!c.contains(k)) bad("config", std::string("missing '") + k + "'");
  }
  if (c.contains("truncation")) {
    const Json& t = c.at("truncation");
    allow_keys(t, "truncation", {"q_max", "momentum_sector"});
    if (!t.contains("q_max") || integer(t.at("q_max"), "truncation.q_max") < 1) bad("truncation.q_max", "must be >= 1");
    int_or(t, "momentum_sector", "truncation", 0);
  }
  if (c.contains("initial")) {
    const Json& in = c.at("initial");
    allow_keys(in, "initial", {"coherent", "fock"});
    if (in.contains("coherent") == in.contains("fock")) bad("initial", "give exactly one of 'coherent' or 'fock'");
    const bool coh = in.contains("coherent");
    const Json& list = coh ? in.at("coherent") : in.at("fock");
    if (!list.is_array()) bad("initial", "expected an array of modes");
    for (const auto& e : list) {
      if (coh) allow_keys(e, "initial.coherent[]", {"band", "p", "alpha"});
      else allow_keys(e, "initial.fock[]", {"band", "p", "n"});
      const std::string band = e.contains("band") ? str(e.at("band"), "initial[].band") : "fh";
      if (band != "fh" && band != "sh") bad("initial[].band", "must be 'fh' or 'sh'");
      integer(e.at("p"), "initial[].p");
      if (coh) {
        const Json& a = e.at("alpha");
        if (a.is_array()) {
          if (a.size() != 2) bad("initial[].alpha", "complex amplitude is [re, im]");
          num(a[0], "initial[].alpha");
          num(a[1], "initial[].alpha");
        } else {
          num(a, "initial[].alpha");
        }
      } else if (integer(e.at("n"), "initial[].n") < 0) {
        bad("initial[].n", "must be non-negative");
      }
    }
  }
  if (!c.contains("t_final") || num(c.at("t_final"), "t_final") < 0) bad("t_final", "required, non-negative");
  if (int_or(c, "snapshots", "config", 2) < 2) bad("snapshots", "must be >= 2");
  if (c.contains("observables")) {
    if (!c.at("observables").is_array()) bad("observables", "expected an array");
    for (const auto& o : c.at("observables"))
      if (!kObservables.count(str(o, "observables[]"))) bad("observables", "unknown observable '" + o.get<std::string>() + "'");
  }
  if (int_or(c, "g2_points", "config", 40) < 1) bad("g2_points", "must be >= 1");
  if (c.contains("regime")) {
    allow_keys(c.at("regime"), "regime", {"xi_min", "p_i"});
    num_or(c.at("regime"), "xi_min", "regime", 0);
    num_or(c.at("regime"), "p_i", "regime", 0);
  }
  const std::string method = c.contains("method") ? str(c.at("method"), "method") : "dense";
  if (method != "dense" && method != "trajectories") bad("method", "must be 'dense' or 'trajectories'");
  if (method == "trajectories") {
    if (require_seed && !c.contains("seed")) bad("seed", "required when trajectories are used");
    for (const auto& m : models)
      if (m != "dressed_fw") bad("method", "trajectories are supported for the dressed_fw model only");
  }
  if (int_or(c, "trajectories", "config", 100) < 1) bad("trajectories", "must be >= 1");
  if (c.contains("seed") && !c.at("seed").is_number_unsigned() &&
      !(c.at("seed").is_number_integer() && c.at("seed").get<long long>() >= 0))
    bad("seed", "expected an unsigned 64-bit integer");
  if (c.contains("schedule")) {
    const Json& s = c.at("schedule");
    allow_keys(s, "schedule", {"xi_initial", "xi_final", "ramp", "profile", "hold"});
    for (const char* k : {"xi_initial", "xi_final", "ramp"}) num(s.at(k), std::string("schedule.") + k);
    num_or(s, "hold", "schedule", 0);
    if (s.contains("profile")) {
      const auto p = str(s.at("profile"), "schedule.profile");
      if (p != "linear" && p != "smoothstep") bad("schedule.profile", "must be 'linear' or 'smoothstep'");
    }
    for (const auto& m : models)
      if (m != "full") bad("schedule", "chirp schedules apply to the full model only");
  }
  if (c.contains("me")) {
    allow_keys(c.at("me"), "me", {"variant"});
    const auto v = str(c.at("me").at("variant"), "me.variant");
    if (v != "dissipative" && v != "dispersive") bad("me.variant", "must be 'dissipative' or 'dispersive'");
  }
  if (c.contains("toy")) {
    const Json& t = c.at("toy");
    allow_keys(t, "toy", {"n_phi", "n_max_fh", "n_max_sh", "adiabatic"});
    int_or(t, "n_phi", "toy", 2);
    int_or(t, "n_max_fh", "toy", 6);
    int_or(t, "n_max_sh", "toy", 3);
    if (t.contains("adiabatic")) {
      allow_keys(t.at("adiabatic"), "toy.adiabatic", {"xi_i", "ramp", "t_hold"});
      for (const char* k : {"xi_i", "ramp", "t_hold"}) num(t.at("adiabatic").at(k), std::string("toy.adiabatic.") + k);
    }
  }
  if (c.contains("classical")) {
    const Json& k = c.at("classical");
    allow_keys(k, "classical", {"n", "dt", "amplitude", "width", "sqrt_xi_scaling"});
    int_or(k, "n", "classical", 64);
    num_or(k, "dt", "classical", 0);
    num_or(k, "amplitude", "classical", 1);
    num_or(k, "width", "classical", 1);
    if (k.contains("sqrt_xi_scaling") && !k.at("sqrt_xi_scaling").is_boolean())
      bad("classical.sqrt_xi_scaling", "expected a boolean");
  }
  if (c.contains("output")) {
    allow_keys(c.at("output"), "output", {"dir", "stem"});
    if (c.at("output").contains("dir")) str(c.at("output").at("dir"), "output.dir");
    if (c.at("output").contains("stem")) str(c.at("output").at("stem"), "output.stem");
  }
}

SystemParams base_params(const Json& c) {
  if (c.contains("params")) {
    const Json& p = c.at("params");
    return {p.at("theta").get<double>(), p.at("xi").get<double>(), p.at("gamma").get<double>(),
            p.at("beta").get<double>()};
  }
  const Json& w = c.at("waveguide");
  PhysicalWaveguideSpec spec{w.at("r").get<double>(), w.at("omega_coeffs").get<std::vector<double>>(),
                             w.at("k0").get<double>()};
  return nondimensionalize(spec);
}

std::vector<double> sweep_points(const Json& c, const SystemParams& p) {
  if (c.contains("sweep")) return c.at("sweep").at("xi").get<std::vector<double>>();
  return {p.xi};
}

RegimeOptions regime_options(const Json& c) {
  RegimeOptions o;
  if (c.contains("regime")) {
    o.xi_min = num_or(c.at("regime"), "xi_min", "regime", o.xi_min);
    o.p_i = num_or(c.at("regime"), "p_i", "regime", o.p_i);
  }
  return o;
}

ModeGrid grid_of(const Json& c, bool with_sh) {
  const Json& g = c.at("grid");
  const double L = g.at("L").get<double>();
  const int p_phi = static_cast<int>(int_or(g, "p_phi", "grid", 0));
  if (!with_sh) return ModeGrid::fh_only(L, p_phi);
  return {L, p_phi, static_cast<int>(int_or(g, "p_psi", "grid", 2 * p_phi))};
}

std::optional<int> sector_of(const Json& c) {
  const Json& t = c.at("truncation");
  if (t.contains("momentum_sector")) return static_cast<int>(t.at("momentum_sector").get<long long>());
  return std::nullopt;
}

int q_max_of(const Json& c) { return static_cast<int>(c.at("truncation").at("q_max").get<long long>()); }

bool model_has_sh(const std::string& m) { return m == "full"; }

QuantumState initial_state(const Json& c, const FockBasis& b) {
  const ModeGrid& g = b.grid();
  const Json& in = c.at("initial");
  auto mode_of = [&](const Json& e) {
    const std::string band = e.contains("band") ? e.at("band").get<std::string>() : "fh";
    const int p = static_cast<int>(e.at("p").get<long long>());
    if (band == "fh") {
      if (!g.has_fh_index(p)) bad("initial[].p", "FH index outside the grid");
      return g.fh_mode(p);
    }
    if (!g.has_sh_index(p)) bad("initial[].p", "SH index outside the grid (FH-only models take FH inputs)");
    return g.sh_mode(p);
  };
  if (in.contains("coherent")) {
    std::vector<std::pair<int, cplx>> amps;
    for (const auto& e : in.at("coherent")) {
      const Json& a = e.at("alpha");
      const cplx al = a.is_array() ? cplx(a[0].get<double>(), a[1].get<double>()) : cplx(a.get<double>());
      amps.emplace_back(mode_of(e), al);
    }
    return coherent_state(b, amps);
  }
  std::vector<int> occ(g.n_modes(), 0);
  for (const auto& e : in.at("fock")) occ[mode_of(e)] += static_cast<int>(e.at("n").get<long long>());
  const auto idx = b.find_occupations(occ);
  if (idx < 0) bad("initial.fock", "state lies outside the truncated basis");
  return fock_state(b, occ);
}

std::vector<std::string> observables_of(const Json& c) {
  if (!c.contains("observables")) return {"momentum"};
  return c.at("observables").get<std::vector<std::string>>();
}

struct PointContext {
  int point;
  double xi;
  SystemParams params;
  RegimeGeometry geom;
  const Json* cfg;
  int threads;
};

double intraband_width(const PointContext& pc) {
  if (pc.geom.p_i > 0) return pc.geom.p_i;
  const RegimeOptions o = regime_options(*pc.cfg);
  if (o.p_i > 0) return o.p_i;
  bad("observables", "intraband/loss need regime.p_i outside the dissipative regime");
}

void emit_quantum(const PointContext& pc, const std::string& model, const FockBasis& b,
                  const std::vector<double>& times, const std::vector<QuantumState>& states,
                  std::vector<ResultRow>& rows) {
  const Json& c = *pc.cfg;
  const ModeGrid& g = b.grid();
  const auto obs = observables_of(c);
  const SpatialGrid y = SpatialGrid::centered(g.L, static_cast<int>(int_or(c, "g2_points", "config", 40)));
  std::vector<double> loss_series;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const QuantumState& s = states[k];
    const double t = times[k];
    auto add = [&](const char* o, double coord, double v) { rows.push_back({pc.point, pc.xi, model, t, o, coord, v}); };
    for (const auto& o : obs) {
      if (o == "momentum") {
        const auto n = momentum_distribution(b, s);
        for (int p = -g.p_phi; p <= g.p_phi; ++p) add("rho_p", p / g.L, n[p + g.p_phi]);
      } else if (o == "sh_momentum") {
        if (g.n_sh() == 0) continue;
        const auto n = sh_momentum_distribution(b, s);
        for (int p = -g.p_psi; p <= g.p_psi; ++p) add("rho_sh", p / g.L, n[p + g.p_psi]);
      } else if (o == "g2") {
        const auto r = g2_spatial(b, s, y);
        for (std::size_t i = 0; i < y.y.size(); ++i) add("g2", y.y[i], r.g2[i]);
      } else if (o == "density") {
        const auto d = density_profile(b, s, y);
        for (std::size_t i = 0; i < y.y.size(); ++i) add("density", y.y[i], d[i]);
      } else if (o == "intraband") {
        add("n_intraband", 0.0, intraband_population(b, s, intraband_width(pc)));
      }
    }
    for (const auto& o : obs)
      if (o == "loss") loss_series.push_back(intraband_population(b, s, intraband_width(pc)));
  }
  if (!loss_series.empty()) {
    const auto l = population_loss(loss_series);
    for (std::size_t k = 0; k < l.size(); ++k) rows.push_back({pc.point, pc.xi, model, times[k], "loss", 0.0, l[k]});
  }
}

void run_quantum(const PointContext& pc, const std::string& model, std::vector<ResultRow>& rows) {
  const Json& c = *pc.cfg;
  const bool sh = model_has_sh(model);
  const ModeGrid g = grid_of(c, sh);
  const auto b = FockBasis::enumerate(g, q_max_of(c), sector_of(c));
  const QuantumState s0 = initial_state(c, b);
  const double tf = c.at("t_final").get<double>();
  const int n = static_cast<int>(int_or(c, "snapshots", "config", 2));
  PropagationResult r;
  if (model == "full" && c.contains("schedule")) {
    const Json& sj = c.at("schedule");
    ChirpSchedule sched{sj.at("xi_initial").get<double>(), sj.at("xi_final").get<double>(),
                        sj.at("ramp").get<double>(),
                        sj.value("profile", std::string("linear")) == "smoothstep" ? ChirpProfile::Smoothstep
                                                                                  : ChirpProfile::Linear,
                        num_or(sj, "hold", "schedule", 0.0)};
    SystemParams p0 = pc.params;
    p0.xi = 0.0;
    SparseOperator hx = sh_number_operator(b);
    hx.mat *= -p0.theta;
    PropagationOptions o;
    const RegimeOptions ropt = regime_options(c);
    o.regime_of = [&](double xi) {
      SystemParams q = pc.params;
      q.xi = xi;
      try {
        return std::string(regime_name(classify_regime(q, ropt).regime));
      } catch (const Error&) {
        return std::string("invalid");
      }
    };
    r = chirped_propagate(s0, build_full_hamiltonian(b, p0), hx, sched, tf, n, o);
  } else if (model == "full") {
    r = unitary_propagate(s0, build_full_hamiltonian(b, pc.params), tf, n);
  } else if (model == "cubic") {
    r = unitary_propagate(s0, build_cubic_hamiltonian(b, pc.params), tf, n);
  } else if (model == "dressed_fw") {
    if (pc.geom.regime != Regime::DissipativeElliptical)
      fail(ErrorKind::Regime, "dressed_fw model needs the dissipative elliptical regime (xi = " +
                                  fmt(pc.xi) + " is " + regime_name(pc.geom.regime) + ")");
    const auto m = build_dressed_fw_model(b, pc.params, pc.geom);
    const auto h = TimeDependentOperator::constant(m.hamiltonian);
    if (c.value("method", std::string("dense")) == "trajectories") {
      TrajectoryOptions o;
      o.seed = c.at("seed").get<std::uint64_t>();
      o.n_traj = static_cast<int>(int_or(c, "trajectories", "config", 100));
      o.threads = pc.threads;
      o.average_states = true;
      const auto tr = trajectories_propagate(s0, h, m.lindblads, {}, tf, n, o);
      r.times = tr.times;
      for (const auto& rho : tr.average_density) r.states.push_back(QuantumState::from_density(b, rho, Frame::SW));
    } else {
      r = lindblad_propagate(s0, h, m.lindblads, nullptr, tf, n);
    }
  } else if (model == "me_appD") {
    const std::string v = c.contains("me") ? c.at("me").at("variant").get<std::string>() : "dissipative";
    const auto d = build_me_dissipator(b, pc.params, v == "dispersive" ? MeVariant::Dispersive : MeVariant::Dissipative);
    r = lindblad_propagate(s0, TimeDependentOperator::constant(build_linear_hamiltonian(b, pc.params)), {}, &d, tf, n);
  }
  emit_quantum(pc, model, b, r.times, r.states, rows);
}

void run_toy(const PointContext& pc, std::vector<ResultRow>& rows) {
  const Json& c = *pc.cfg;
  const Json t = c.contains("toy") ? c.at("toy") : Json::object();
  const ToySystem sys{pc.xi, static_cast<int>(int_or(t, "n_max_fh", "toy", 6)),
                      static_cast<int>(int_or(t, "n_max_sh", "toy", 3))};
  const int n_phi = static_cast<int>(int_or(t, "n_phi", "toy", 2));
  const double tf = c.at("t_final").get<double>();
  const int n = static_cast<int>(int_or(c, "snapshots", "config", 2));
  const auto l = run_loss_experiment(sys, n_phi, tf, n);
  auto add = [&](const char* o, const std::vector<double>& ts, const std::vector<double>& v) {
    for (std::size_t k = 0; k < v.size(); ++k) rows.push_back({pc.point, pc.xi, "toy", ts[k], o, 0.0, v[k]});
  };
  add("loss_full", l.times, l.full);
  add("loss_naive", l.times, l.naive);
  add("loss_meanfield", l.times, l.meanfield);
  if (t.contains("adiabatic")) {
    const Json& a = t.at("adiabatic");
    const auto r = run_adiabatic_experiment(sys, n_phi, a.at("xi_i").get<double>(), pc.xi,
                                            a.at("ramp").get<double>(), a.at("t_hold").get<double>(), n);
    add("loss_adiabatic", r.times, r.loss);
    rows.push_back({pc.point, pc.xi, "toy", 0.0, "adiabatic_overlap", 0.0, r.overlap});
  }
}

void run_classical(const PointContext& pc, std::vector<ResultRow>& rows) {
  const Json& c = *pc.cfg;
  const Json k = c.contains("classical") ? c.at("classical") : Json::object();
  const double L = c.at("grid").at("L").get<double>();
  const auto n = static_cast<std::size_t>(int_or(k, "n", "classical", 64));
  const double w = num_or(k, "width", "classical", 1.0);
  double amp = num_or(k, "amplitude", "classical", 1.0);
  if (k.value("sqrt_xi_scaling", false)) amp *= std::sqrt(std::abs(pc.xi));
  const double tf = c.at("t_final").get<double>();
  double dt = num_or(k, "dt", "classical", 0.0);
  if (dt <= 0) dt = std::min(0.01, 0.02 / std::max(std::abs(pc.xi), 1e-300));
  const auto phi = sample_field(L, n, Band::FH, [&](double y) {
    const double u = (y - L / 2) / w;
    return cplx(amp * std::exp(-u * u / 2));
  });
  const auto psi = sample_field(L, n, Band::SH, [](double) { return cplx(0); });
  const auto cw = split_step_coupled_wave(phi, psi, pc.params, tf, dt);
  const auto nl = split_step_nlse(phi, pc.params, tf, dt);
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back({pc.point, pc.xi, "classical", tf, "phi_abs2_coupled", cw.phi.y(i), std::norm(cw.phi.samples[i])});
    rows.push_back({pc.point, pc.xi, "classical", tf, "phi_abs2_nlse", nl.y(i), std::norm(nl.samples[i])});
    rows.push_back({pc.point, pc.xi, "classical", tf, "psi_abs2_coupled", cw.psi.y(i), std::norm(cw.psi.samples[i])});
  }
  rows.push_back({pc.point, pc.xi, "classical", tf, "fh_l2_discrepancy", 0.0, relative_l2(cw.phi, nl)});
  rows.push_back({pc.point, pc.xi, "classical", tf, "charge_drift", 0.0, cw.max_charge_drift});
}

}  // namespace

const char* code_version() { return CASCADE_VERSION; }

const std::vector<std::string>& ResultTable::columns() {
  static const std::vector<std::string> c = {"point", "xi", "model", "t", "observable", "coord", "value"};
  return c;
}

std::string ResultTable::to_csv() const {
  std::string out = "point,xi,model,t,observable,coord,value\n";
  for (const auto& r : rows)
    out += std::to_string(r.point) + "," + fmt(r.xi) + "," + r.model + "," + fmt(r.t) + "," + r.observable + "," +
           fmt(r.coord) + "," + fmt(r.value) + "\n";
  return out;
}

std::string ResultTable::to_json(bool include_timing) const {
  std::string out = "{\n\"metadata\": {\n";
  out += "\"code_version\": " + Json(code_version).dump() + ",\n";
  out += "\"config_hash\": " + Json(config_hash).dump() + ",\n";
  out += "\"config\": " + config.dump() + ",\n";
  if (include_timing) out += "\"wall_time_s\": " + fmt(wall_time_s) + ",\n";
  out += "\"rows\": " + std::to_string(rows.size()) + "\n},\n\"columns\": " + Json(columns()).dump() + ",\n\"rows\": [";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out += i ? ",\n" : "\n";
    out += "[" + std::to_string(r.point) + "," + fmt(r.xi) + "," + Json(r.model).dump() + "," + fmt(r.t) + "," +
           Json(r.observable).dump() + "," + fmt(r.coord) + "," + fmt(r.value) + "]";
  }
  out += "\n]\n}\n";
  return out;
}

static Json load_config_impl(const std::string& text, std::optional<std::uint64_t> seed, bool require_seed) {
  Json c;
  try {
    c = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
  }
  if (!c.is_object()) fail(ErrorKind::Config, "config must be a JSON object");
  if (c.contains("preset")) {
    Json base = Json::parse(preset_text(str(c.at("preset"), "preset")));
    for (const auto& [k, v] : c.items())
      if (k != "preset") base[k] = v;
    c = std::move(base);
  }
  if (seed) c["seed"] = *seed;
  try {
    check_schema(c, require_seed);
  } catch (const Json::exception& e) {
    fail(ErrorKind::Config, std::string("config schema: ") + e.what());
  }
  return c;
}

Json load_config(const std::string& text, std::optional<std::uint64_t> seed) {
  return load_config_impl(text, seed, true);
}

std::string config_hash(const Json& config) {
  Json c = config;
  c.erase("output");
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(c.dump())));
  return buf;
}

ResultTable run_experiment(const Json& config, int threads) {
  const auto start = std::chrono::steady_clock::now();
  ResultTable table;
  table.config = config;
  table.config.erase("output");
  table.config_hash = config_hash(config);
  table.code_version = code_version();

  const SystemParams base = base_params(config);
  const auto xis = sweep_points(config, base);
  const auto models = models_of(config);
  const RegimeOptions ropt = regime_options(config);
  std::vector<std::vector<ResultRow>> parts(xis.size());
  const int outer = std::max(1, std::min<int>(threads, static_cast<int>(xis.size())));
  const int inner = xis.size() == 1 ? std::max(1, threads) : 1;
  parallel_for(xis.size(), outer, [&](std::size_t i) {
    SystemParams p = base;
    p.xi = xis[i];
    validate(p);
    PointContext pc{static_cast<int>(i), p.xi, p, {}, &config, inner};
    const bool needs_geom = std::any_of(models.begin(), models.end(), [](const std::string& m) {
      return quantum_model(m);
    });
    if (needs_geom) pc.geom = classify_regime(p, ropt);
    for (const auto& m : models) {
      if (m == "toy") run_toy(pc, parts[i]);
      else if (m == "classical") run_classical(pc, parts[i]);
      else run_quantum(pc, m, parts[i]);
    }
  });
  for (auto& p : parts) table.rows.insert(table.rows.end(), p.begin(), p.end());
  table.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return table;
}

Json validate_experiment(const std::string& text, std::optional<std::uint64_t> seed) {
  Json report{{"ok", true}, {"errors", Json::array()}, {"warnings", Json::array()}, {"points", Json::array()}};
  auto error = [&](const std::string& m) {
    report["ok"] = false;
    report["errors"].push_back(m);
  };
  Json c;
  try {
    c = load_config_impl(text, seed, false);
    if (c.value("method", std::string("dense")) == "trajectories" && !c.contains("seed"))
      error("seed: required when trajectories are used");
  } catch (const std::exception& e) {
    error(e.what());
    return report;
  }
  report["config_hash"] = config_hash(c);
  SystemParams base;
  try {
    base = base_params(c);
  } catch (const std::exception& e) {
    error(e.what());
    return report;
  }
  const auto models = models_of(c);
  const RegimeOptions ropt = regime_options(c);
  const auto xis = sweep_points(c, base);
  for (std::size_t i = 0; i < xis.size(); ++i) {
    SystemParams p = base;
    p.xi = xis[i];
    Json pt{{"index", i}, {"xi", p.xi}, {"models", Json::array()}};
    if (p.beta >= 0.5) {
      const std::string w = "point " + std::to_string(i) + ": beta >= 1/2 is outside the validity range of the effective theory";
      report["warnings"].push_back(w);
    }
    RegimeGeometry geom;
    try {
      geom = classify_regime(p, ropt);
      pt["regime"] = regime_name(geom.regime);
    } catch (const std::exception& e) {
      error("point " + std::to_string(i) + ": " + e.what());
      pt["regime"] = "invalid";
    }
    for (const auto& m : models) {
      Json mj{{"model", m}};
      if (m == "dressed_fw" && geom.regime != Regime::DissipativeElliptical)
        error("point " + std::to_string(i) + ": dressed_fw model needs the dissipative elliptical regime");
      if (m == "toy" && !(p.xi > 0)) error("point " + std::to_string(i) + ": toy model needs xi > 0");
      if (quantum_model(m)) {
        const ModeGrid g = grid_of(c, model_has_sh(m));
        const double dim = count_basis_states(g, q_max_of(c), sector_of(c));
        mj["dim"] = dim;
        const bool mixed = m == "dressed_fw" || m == "me_appD";
        const int snaps = static_cast<int>(int_or(c, "snapshots", "config", 2));
        const double state_bytes = 16.0 * (mixed ? dim * dim : dim);
        mj["memory_bytes"] = state_bytes * (snaps + (mixed ? 9 : 4)) + 16.0 * dim * g.n_modes() * 4;
        if (dim > static_cast<double>(FockBasis::kDefaultCap))
          error("point " + std::to_string(i) + ": basis dimension exceeds the enumeration cap");
      } else if (m == "toy") {
        const Json t = c.contains("toy") ? c.at("toy") : Json::object();
        const double dim = double(int_or(t, "n_max_fh", "toy", 6) + 1) * double(int_or(t, "n_max_sh", "toy", 3) + 1);
        mj["dim"] = dim;
        mj["memory_bytes"] = 16.0 * dim * dim * 12;
      } else {
        const Json k = c.contains("classical") ? c.at("classical") : Json::object();
        const double n = static_cast<double>(int_or(k, "n", "classical", 64));
        mj["dim"] = n;
        mj["memory_bytes"] = 16.0 * n * 8;
      }
      pt["models"].push_back(mj);
    }
    report["points"].push_back(pt);
  }
  return report;
}

std::vector<std::string> write_outputs(const ResultTable& table, const std::string& dir, const std::string& stem) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create output directory " + dir + ": " + ec.message());
  const std::string csv = (fs::path(dir) / (stem + ".csv")).string();
  const std::string js = (fs::path(dir) / (stem + ".json")).string();
  for (const auto& [path, text] : {std::pair{csv, table.to_csv()}, std::pair{js, table.to_json()}}) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::Io, "cannot write " + path);
    f << text;
    if (!f) fail(ErrorKind::Io, "write failed for " + path);
  }
  return {csv, js};
}

}  // namespace cascade
