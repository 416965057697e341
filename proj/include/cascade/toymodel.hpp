#pragma once

#include <cstdint>
#include <vector>

#include "cascade/evolve.hpp"
#include "cascade/operators.hpp"
#include "cascade/state.hpp"

namespace cascade {

// Single FH mode phi and single SH mode psi, product Fock space with
// separate cutoffs. Index of |n_phi, n_psi> is n_phi + (n_max_fh + 1) n_psi.
struct ToySystem {
  double xi = 20.0;
  int n_max_fh = 6;
  int n_max_sh = 3;

  void check() const;
  Eigen::Index dim() const { return Eigen::Index(n_max_fh + 1) * (n_max_sh + 1); }
  Eigen::Index index(int n_phi, int n_psi) const { return n_phi + Eigen::Index(n_max_fh + 1) * n_psi; }
  std::uint64_t basis_id() const;
};

struct ToyOperators {
  SparseOperator phi, psi;
  SparseOperator h0;       // xi psi^dagger psi
  SparseOperator psi_num;  // psi^dagger psi
  SparseOperator phi_num;
  SparseOperator v;        // (psi^dagger phi^2 + h.c.) / 2
  SparseOperator s;        // (psi^dagger phi^2 - h.c.) / (2 xi)
  SparseOperator l;        // sqrt(pi) xi^{-1/4} psi
  SparseOperator w_lin, w_spm, w_xpm;
  SparseOperator l_prime;  // -sqrt(pi/4) xi^{-5/4} phi^2
  SparseOperator h_prime;  // h0 + w_lin + w_spm + w_xpm
};

ToyOperators build_toy_operators(const ToySystem& sys);

QuantumState toy_fock_state(const ToySystem& sys, int n_phi, int n_psi = 0);

// FH number at time t from the mean-field corrected observable:
// <phi^dag phi> + (1/xi)[C(t) + c.c.] - <phi^dag2 phi^2> / (2 xi^2), with
// C(t) = <phi^dag2 phi^2>_0 / (2 xi) exp(-i xi t - pi t / (2 sqrt(xi))).
double toy_corrected_number(const ToySystem& sys, const ToyOperators& ops,
                            const QuantumState& dressed, double pair0, double t);

struct LossCurves {
  std::vector<double> times;
  std::vector<double> full;
  std::vector<double> naive;
  std::vector<double> meanfield;
  double max_top_population = 0.0;
};

// Lab-frame Fock initial state |n_phi, 0>. Aborts when the cutoff levels
// carry population above 1e-8.
LossCurves run_loss_experiment(const ToySystem& sys, int n_phi, double t_final,
                               int n_points,
                               const PropagationOptions& opts = {});

struct AdiabaticResult {
  std::vector<double> times;            // measured from the end of the ramp
  std::vector<double> loss;             // full model, relative to N(T)
  std::vector<double> naive;            // cascade at xi_f from |n_phi>
  double overlap = 0.0;                 // unitary ramp vs dressed eigenstate
  double max_deviation = 0.0;           // max |loss - naive|
  double max_naive = 0.0;
  bool leakage_flag = false;            // overlap below 0.95
};

AdiabaticResult run_adiabatic_experiment(const ToySystem& base, int n_phi,
                                         double xi_i, double xi_f, double ramp,
                                         double t_hold, int n_points,
                                         const PropagationOptions& opts = {});

}  // namespace cascade
