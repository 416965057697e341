#pragma once

#include <complex>
#include <vector>

namespace cascade {

using cplx = std::complex<double>;

struct SystemParams {
  double theta = 1.0;
  double xi = 0.0;
  double gamma = 0.0;
  double beta = 0.0;
};

void validate(const SystemParams& params);

// Dispersion given as polynomial coefficients, omega(k) = sum_n c[n] k^n
// with k the absolute angular wavevector.
struct PhysicalWaveguideSpec {
  double r = 0.0;
  std::vector<double> omega_coeffs;
  double k0 = 0.0;
};

struct CharacteristicScales {
  double g_c = 0.0;
  double z_c = 0.0;
};

SystemParams nondimensionalize(const PhysicalWaveguideSpec& spec,
                               CharacteristicScales* scales = nullptr);

enum class Regime { Dispersive, DissipativeElliptical, Other };

const char* regime_name(Regime regime);

struct RegimeOptions {
  double xi_min = 5.0;
  // Intra-band half-width. Non-positive selects a_q / 4.
  double p_i = 0.0;
};

struct RegimeGeometry {
  Regime regime = Regime::Other;
  double p0 = 0.0;
  double a_p = 0.0;
  double a_q = 0.0;
  double p_i = 0.0;
  bool has_ellipse = false;

  double q_i(double p) const;
};

RegimeGeometry classify_regime(const SystemParams& params,
                               const RegimeOptions& options = {});

// Band energies.
double energy_sh(const SystemParams& params, double p);
double energy_fw(const SystemParams& params, double p, double q);

double eval_f(const SystemParams& params, double p, double q);
double eval_h(const SystemParams& params, const RegimeGeometry& geom, double p,
              double q);
double eval_h_shifted(const SystemParams& params, double p, double q,
                      double delta);
bool in_intraband(const RegimeGeometry& geom, double p, double q);

double eval_omega(const SystemParams& params, double p);
double eval_meson_dispersion(const SystemParams& params, double p);

// Real resonance momentum; returns false when q0(p) is not real.
bool resonance_q0(const SystemParams& params, double p, double* q0);
double eval_q0(const SystemParams& params, double p);

double eval_kappa(const SystemParams& params, const RegimeGeometry& geom,
                  double p);
double eval_delta(const SystemParams& params, const RegimeGeometry& geom,
                  double p);

cplx eval_memory_kernel(const SystemParams& params, const RegimeGeometry& geom,
                        double p, double tau);
cplx memory_kernel(double theta, double q0, double q_i, double tau);

// Complex error functions, accurate to ~1e-13.
cplx faddeeva_w(cplx z);
cplx erfc_complex(cplx z);
cplx erf_complex(cplx z);

}  // namespace cascade
