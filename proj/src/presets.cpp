#include <map>
#include <string>
#include <vector>

#include "cascade/error.hpp"
#include "cascade/experiment.hpp"

namespace cascade {

namespace {

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> p = {
      {"fig3_dispersive", R"({
  "name": "fig3_dispersive",
  "models": ["full", "cubic"],
  "params": {"theta": 1, "xi": 10, "gamma": 0, "beta": -1},
  "sweep": {"xi": [10, 20, 40, 80]},
  "grid": {"L": 4, "p_phi": 8},
  "truncation": {"q_max": 2},
  "initial": {"coherent": [{"band": "fh", "p": 0, "alpha": 0.1}]},
  "t_final": 2,
  "snapshots": 2,
  "observables": ["g2", "momentum"],
  "g2_points": 40
})"},
      {"fig4_dissipative", R"({
  "name": "fig4_dissipative",
  "models": ["full", "cubic"],
  "params": {"theta": 1, "xi": -50, "gamma": 0, "beta": -1},
  "sweep": {"xi": [-50, -100]},
  "grid": {"L": 10, "p_phi": 200},
  "truncation": {"q_max": 2, "momentum_sector": 0},
  "initial": {"coherent": [{"band": "fh", "p": 0, "alpha": 0.1}]},
  "t_final": 2,
  "snapshots": 2,
  "observables": ["momentum", "g2", "intraband"],
  "g2_points": 40
})"},
      {"appF_fig", R"({
  "name": "appF_fig",
  "models": ["toy"],
  "params": {"theta": 1, "xi": 20, "gamma": 0, "beta": 0},
  "t_final": 20,
  "snapshots": 201,
  "toy": {"n_phi": 2, "n_max_fh": 6, "n_max_sh": 3,
          "adiabatic": {"xi_i": 200, "ramp": 9, "t_hold": 20}}
})"},
  };
  return p;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : presets()) out.push_back(k);
  return out;
}

std::string preset_text(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) fail(ErrorKind::Config, "unknown preset '" + name + "'");
  return it->second;
}

}  // namespace cascade
