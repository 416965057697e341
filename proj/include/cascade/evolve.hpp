#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cascade/operators.hpp"
#include "cascade/state.hpp"

namespace cascade {

enum class ChirpProfile { Linear, Smoothstep };

struct ChirpSchedule {
  double xi_initial = 0.0;
  double xi_final = 0.0;
  double ramp_duration = 1.0;
  ChirpProfile profile = ChirpProfile::Linear;
  double hold_duration = 0.0;

  void check() const;
  double xi(double t) const;
  double xi_rate(double t) const;
};

struct PropagationOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double max_step = 0.0;  // 0 leaves the step unbounded
  bool store_states = true;
  std::function<void(double, const QuantumState&)> observer;
  // Chirp only: optional regime label per xi, used to warn on crossings.
  std::function<std::string(double)> regime_of;
};

struct PropagationResult {
  std::string method;
  std::vector<double> times;
  std::vector<QuantumState> states;
  std::vector<double> xi;  // instantaneous xi per snapshot (chirp only)
  double max_norm_drift = 0.0;
  double max_energy_drift = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  std::size_t steps = 0;
  std::size_t rejected = 0;
};

// n_snapshots >= 2 equally spaced times including 0 and t_final.
std::vector<double> snapshot_times(double t_final, int n_snapshots);

// Dense eigendecomposition up to this dimension, Lanczos above.
inline constexpr Eigen::Index kDenseLimit = 2000;

PropagationResult unitary_propagate(const QuantumState& state,
                                    const SparseOperator& H, double t_final,
                                    int n_snapshots,
                                    const PropagationOptions& opts = {});

PropagationResult lindblad_propagate(const QuantumState& state,
                                     const TimeDependentOperator& H,
                                     const LindbladSet& lindblads,
                                     const Superoperator* extra, double t_final,
                                     int n_snapshots,
                                     const PropagationOptions& opts = {});

struct TrajectoryOptions {
  std::uint64_t seed = 0;
  int n_traj = 100;
  int threads = 1;
  double rtol = 1e-8;
  double atol = 1e-10;
  bool average_states = false;
};

struct TrajectoryResult {
  std::vector<double> times;
  // mean[k][j] and stderr[k][j] for tracked operator k at snapshot j.
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> stderr_;
  std::vector<Eigen::MatrixXcd> average_density;
  std::size_t jumps = 0;
};

// Waiting-time Monte Carlo wavefunction unraveling. Trajectory i draws from
// an RNG seeded by (seed, i); results are reduced in index order so output
// does not depend on the thread count.
TrajectoryResult trajectories_propagate(const QuantumState& state,
                                        const TimeDependentOperator& H,
                                        const LindbladSet& lindblads,
                                        const std::vector<SpMat>& tracked,
                                        double t_final, int n_snapshots,
                                        const TrajectoryOptions& opts);

// H(t) = H_static + xi(t) H_xi, fourth-order commutator-free Magnus steps
// with xi changing by under 0.1% per step.
PropagationResult chirped_propagate(const QuantumState& state,
                                    const SparseOperator& H_static,
                                    const SparseOperator& H_xi,
                                    const ChirpSchedule& schedule,
                                    double t_final, int n_snapshots,
                                    const PropagationOptions& opts = {});

}  // namespace cascade
