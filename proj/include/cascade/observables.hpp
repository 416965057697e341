#pragma once

#include <vector>

#include "cascade/basis.hpp"
#include "cascade/operators.hpp"
#include "cascade/state.hpp"

namespace cascade {

// Positions in [0, L); Phi_y = (1/sqrt(L)) sum_p exp(2 pi i p y / L) a_p.
struct SpatialGrid {
  double L = 1.0;
  std::vector<double> y;

  static SpatialGrid uniform(double L, int n);
  // Symmetric points y_k = k L / n for k = -n/2..n/2.
  static SpatialGrid centered(double L, int n);
  void check() const;
};

SparseOperator spatial_annihilator(const FockBasis& basis, bool sh, double y);

// <a_p^dagger a_p> for FH indices -p_phi..p_phi (mode-count convention).
std::vector<double> momentum_distribution(const FockBasis& basis,
                                          const QuantumState& state);
std::vector<double> sh_momentum_distribution(const FockBasis& basis,
                                             const QuantumState& state);

// <Phi_y^dagger Phi_y>.
std::vector<double> density_profile(const FockBasis& basis,
                                    const QuantumState& state,
                                    const SpatialGrid& grid);

struct G2Result {
  std::vector<double> y;
  std::vector<double> g2;
  double density0 = 0.0;
};

// <Phi_y^dagger Phi_0^dagger Phi_0 Phi_y> / rho(0)^2.
G2Result g2_spatial(const FockBasis& basis, const QuantumState& state,
                    const SpatialGrid& grid);

// Sum of FH occupations with |p / L| < p_i.
double intraband_population(const FockBasis& basis, const QuantumState& state,
                            double p_i);

// (N(0) - N(t)) / N(0).
std::vector<double> population_loss(const std::vector<double>& series);

}  // namespace cascade
