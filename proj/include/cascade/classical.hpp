#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cascade/params.hpp"

namespace cascade {

enum class Band { FH, SH };

// Samples at y_n = n L / N on a periodic window; N a power of two.
struct ClassicalField {
  double L = 1.0;
  Band band = Band::FH;
  std::vector<cplx> samples;

  std::size_t size() const { return samples.size(); }
  double y(std::size_t n) const { return L * n / samples.size(); }
  void check() const;
  // Integral of |field|^2 over the window.
  double norm2() const;
  // Plain forward transform coefficients indexed by signed momentum s.
  std::vector<cplx> spectrum() const;
};

ClassicalField sample_field(double L, std::size_t n, Band band,
                            const std::function<cplx(double)>& f);

// Relative L2 distance ||a - b|| / ||b||.
double relative_l2(const ClassicalField& a, const ClassicalField& b);

struct ClassicalInvariants {
  double charge = 0.0;    // int |Phi|^2 + 2 |Psi|^2
  double momentum = 0.0;  // sum over modes of (s / L) |c_s|^2, both bands
  double energy = 0.0;
};

ClassicalInvariants classical_invariants(const ClassicalField& phi,
                                         const ClassicalField& psi,
                                         const SystemParams& params);

struct CoupledWaveResult {
  ClassicalField phi;
  ClassicalField psi;
  std::vector<double> times;
  // SH field at x = 0 after each step, for time averages.
  std::vector<cplx> psi_probe;
  double max_charge_drift = 0.0;
  double max_momentum_drift = 0.0;
  double max_energy_drift = 0.0;  // relative
  int steps = 0;
};

// Strang splitting: exact linear flow in transform space, implicit midpoint
// for the pointwise three-wave term. Requires dt |xi| < 0.1.
CoupledWaveResult split_step_coupled_wave(const ClassicalField& phi0,
                                          const ClassicalField& psi0,
                                          const SystemParams& params,
                                          double t_final, double dt);

// Cubic limit with exact pointwise self-phase step.
ClassicalField split_step_nlse(const ClassicalField& phi0,
                               const SystemParams& params, double t_final,
                               double dt);

struct PotentialSpec {
  ClassicalField v;  // SH amplitude profile
  double xi = 0.0;
  double beta = 0.0;
  double theta = 1.0;
};

// V(y) = -|v(y)|^2 / xi.
std::vector<cplx> static_potential(const PotentialSpec& spec);

// Heat-kernel evolved potential V'(y, t) with imaginary heat time
// t' = i theta beta t / (8 pi^2).
std::vector<cplx> heat_kernel_potential(const PotentialSpec& spec, double t);

// "y,re,im" rows, and "s,p,abs" transform magnitudes.
std::string field_csv(const ClassicalField& f);
std::string spectrum_csv(const ClassicalField& f);

}  // namespace cascade
