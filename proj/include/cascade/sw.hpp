#pragma once

#include <string>
#include <vector>

#include "cascade/operators.hpp"
#include "cascade/state.hpp"

namespace cascade {

enum class FrameDirection { ToSW, ToLab };

// ToSW applies exp(S), ToLab applies exp(-S). A state already in the target
// frame is returned unchanged with a warning.
QuantumState apply_frame_change(const QuantumState& state,
                                const SparseOperator& S,
                                FrameDirection direction);

// exp(S) applied to a lab state whose SH modes are empty.
QuantumState dressed_initial_condition_exact(const FockBasis& basis,
                                             const QuantumState& lab,
                                             const SparseOperator& S);

// rho = |phi0><phi0| + (sqrt|xi|/pi) D[L_FW](|phi0><phi0|), trace renormalized.
QuantumState dressed_initial_condition_mean_field(const FockBasis& basis,
                                                  const QuantumState& lab,
                                                  const SystemParams& params,
                                                  const LindbladSet& l_fw);

// Frame-corrected FH number per mode for states evolved in the SW frame on
// an FH-only basis. Four-point tables of the lab initial state are built
// once at construction.
struct CorrectedNumber {
  std::vector<double> bare;
  std::vector<double> narrowband;
  std::vector<double> full_f;  // empty when f is unavailable (dissipative)
};

class FrameCorrection {
 public:
  FrameCorrection(const FockBasis& basis, const QuantumState& initial_lab,
                  const SystemParams& params, const RegimeGeometry& geom);

  // Optional: include the bare pair kinetic phase in the SH correlator.
  void set_band_phases(bool on) { band_phases_ = on; }

  CorrectedNumber evaluate(const QuantumState& sw_state, double t) const;

 private:
  struct Entry {
    int P;
    int p;
    cplx c0_narrow;
    cplx c0_full;
    double kappa;
  };
  const FockBasis* basis_;
  SystemParams params_;
  RegimeGeometry geom_;
  bool dispersive_;
  bool band_phases_ = false;
  std::vector<Entry> entries_;
};

struct MesonRecord {
  int p = 0;
  double energy_continuum = 0.0;  // M(p/L); NaN outside its domain
  double energy_discrete = 0.0;   // discrete self-consistent solution, as -theta E_p
  double eigenvalue = 0.0;        // sector eigenvalue nearest energy_discrete
  double first_order = 0.0;       // self-energy evaluated at the bare detuning
  double overlap_deficit = 0.0;
  double residual_norm = 0.0;
};

// Solves E = w0 + (1/2L) sum_k 1/(E + e_k) over ordered on-grid FH pairs of
// total index p, with w0 = xi - gamma P - beta P^2/2.
double solve_meson_energy(const ModeGrid& grid, const SystemParams& params,
                          int p);
double meson_first_order_energy(const ModeGrid& grid,
                                const SystemParams& params, int p);

struct MesonResult {
  Eigen::VectorXcd state;
  MesonRecord record;
};

// Basis must carry momentum sector p and q_max >= 2.
MesonResult build_meson_state(const FockBasis& basis,
                              const SystemParams& params, int p);

std::string meson_csv(const std::vector<MesonRecord>& rows);

}  // namespace cascade
