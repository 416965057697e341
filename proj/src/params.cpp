#include "cascade/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cascade/error.hpp"

namespace cascade {

namespace {

constexpr double kResonanceTol = 1e-9;

double poly_derivative(const std::vector<double>& c, double k, int order) {
  double sum = 0.0;
  for (std::size_t n = order; n < c.size(); ++n) {
    double fac = 1.0;
    for (int j = 0; j < order; ++j) fac *= static_cast<double>(n - j);
    sum += c[n] * fac * std::pow(k, static_cast<double>(n - order));
  }
  return sum;
}

}  // namespace

void validate(const SystemParams& p) {
  if (p.theta != 1.0 && p.theta != -1.0) {
    fail(ErrorKind::InvalidArgument, "theta must be +1 or -1");
  }
  if (!std::isfinite(p.xi) || !std::isfinite(p.gamma) ||
      !std::isfinite(p.beta)) {
    fail(ErrorKind::InvalidArgument, "system parameters must be finite");
  }
}

SystemParams nondimensionalize(const PhysicalWaveguideSpec& spec,
                               CharacteristicScales* scales) {
  if (!(spec.r > 0.0)) fail(ErrorKind::InvalidArgument, "r must be positive");
  if (spec.omega_coeffs.size() < 3) {
    fail(ErrorKind::InvalidArgument,
         "dispersion polynomial needs at least quadratic order");
  }
  const auto& c = spec.omega_coeffs;
  const double k0 = spec.k0;
  const double w2_k0 = poly_derivative(c, k0, 2);
  if (w2_k0 == 0.0 || !std::isfinite(w2_k0)) {
    fail(ErrorKind::Domain, "degenerate dispersion: omega''(k0) = 0");
  }
  const double w2_2k0 = poly_derivative(c, 2.0 * k0, 2);
  const double dwb0 =
      poly_derivative(c, 2.0 * k0, 0) - 2.0 * poly_derivative(c, k0, 0);
  const double dwb1 =
      poly_derivative(c, 2.0 * k0, 1) - poly_derivative(c, k0, 1);

  const double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
  const double g_c =
      std::cbrt(std::pow(spec.r, 4) / (four_pi2 * std::abs(w2_k0)));
  const double z_c = std::pow(four_pi2 * std::abs(w2_k0) / spec.r, 2.0 / 3.0);

  SystemParams out;
  out.theta = w2_k0 > 0.0 ? 1.0 : -1.0;
  out.xi = -out.theta * dwb0 / g_c;
  out.gamma = out.theta * 2.0 * std::numbers::pi * dwb1 / (g_c * z_c);
  out.beta = w2_2k0 / std::abs(w2_k0);
  if (scales) *scales = {g_c, z_c};
  return out;
}

const char* regime_name(Regime regime) {
  switch (regime) {
    case Regime::Dispersive: return "Dispersive";
    case Regime::DissipativeElliptical: return "DissipativeElliptical";
    case Regime::Other: return "Other";
  }
  return "Other";
}

double RegimeGeometry::q_i(double p) const {
  if (regime != Regime::DissipativeElliptical) return 0.0;
  return std::max(p_i - std::abs(p) / 2.0, 0.0);
}

RegimeGeometry classify_regime(const SystemParams& params,
                               const RegimeOptions& options) {
  validate(params);
  RegimeGeometry g;
  const double half_minus_beta = 0.5 - params.beta;
  if (!(half_minus_beta > 0.0)) return g;
  g.p0 = params.gamma / half_minus_beta;
  const double ap2 = g.p0 * g.p0 - 2.0 * params.xi / half_minus_beta;
  const double aq2 = (0.25 - params.beta / 2.0) * ap2;
  const bool below = std::abs(params.xi) < options.xi_min;
  if (ap2 > 0.0 && aq2 > 0.0) {
    g.has_ellipse = true;
    g.a_p = std::sqrt(ap2);
    g.a_q = std::sqrt(aq2);
    if (below) return g;
    g.regime = Regime::DissipativeElliptical;
    g.p_i = options.p_i > 0.0 ? options.p_i : g.a_q / 4.0;
    if (!(g.p_i < g.a_q)) {
      fail(ErrorKind::Geometry,
           "intra-band half-width must lie inside the resonance ellipse");
    }
    return g;
  }
  if (params.xi >= options.xi_min) g.regime = Regime::Dispersive;
  return g;
}

double energy_sh(const SystemParams& s, double p) {
  return s.theta * (-s.xi + s.gamma * p + s.beta * p * p / 2.0);
}

double energy_fw(const SystemParams& s, double p, double q) {
  return s.theta * (p * p / 4.0 + q * q);
}

double eval_omega(const SystemParams& s, double p) {
  return 0.25 * (1.0 - 2.0 * s.beta) * p * p - s.gamma * p + s.xi;
}

double eval_f(const SystemParams& s, double p, double q) {
  const double den = eval_omega(s, p) + q * q;
  if (std::abs(den) < kResonanceTol) {
    std::ostringstream os;
    os << "f(p,q) resonant at p=" << p << ", q=" << q;
    fail(ErrorKind::Resonance, os.str());
  }
  return -s.theta / (2.0 * den);
}

bool in_intraband(const RegimeGeometry& geom, double p, double q) {
  return std::abs(p) <= 2.0 * geom.p_i && std::abs(q) <= geom.q_i(p);
}

double eval_h_shifted(const SystemParams& s, double p, double q,
                      double delta) {
  const double den = eval_omega(s, p) + q * q - delta;
  if (std::abs(den) < kResonanceTol) {
    fail(ErrorKind::Resonance, "h(p,q) resonant");
  }
  return -s.theta / (2.0 * den);
}

double eval_h(const SystemParams& s, const RegimeGeometry& geom, double p,
              double q) {
  if (geom.regime != Regime::DissipativeElliptical) {
    fail(ErrorKind::Regime, "h(p,q) requires the dissipative regime");
  }
  if (!in_intraband(geom, p, q)) {
    std::ostringstream os;
    os << "(p,q)=(" << p << "," << q << ") outside the intra-band region";
    fail(ErrorKind::Domain, os.str());
  }
  return eval_h_shifted(s, p, q, eval_delta(s, geom, p));
}

double eval_meson_dispersion(const SystemParams& s, double p) {
  const double w = eval_omega(s, p);
  if (!(w > 0.0)) {
    fail(ErrorKind::Domain, "meson dispersion undefined for omega(p) <= 0");
  }
  return energy_sh(s, p) - std::numbers::pi * s.theta / (2.0 * std::sqrt(w));
}

bool resonance_q0(const SystemParams& s, double p, double* q0) {
  const double arg = -s.xi + s.gamma * p + 0.25 * (2.0 * s.beta - 1.0) * p * p;
  if (!(arg > 0.0)) return false;
  *q0 = std::sqrt(arg);
  return true;
}

double eval_q0(const SystemParams& s, double p) {
  double q0 = 0.0;
  if (!resonance_q0(s, p, &q0)) {
    fail(ErrorKind::Geometry, "q0(p) is not real at this momentum");
  }
  return q0;
}

namespace {

double checked_q0(const SystemParams& s, const RegimeGeometry& geom, double p,
                  double* qi) {
  if (geom.regime != Regime::DissipativeElliptical) {
    fail(ErrorKind::Regime, "kappa/delta require the dissipative regime");
  }
  const double q0 = eval_q0(s, p);
  *qi = geom.q_i(p);
  if (*qi >= q0) {
    fail(ErrorKind::Geometry, "intra-band region touches the resonance");
  }
  return q0;
}

}  // namespace

double eval_kappa(const SystemParams& s, const RegimeGeometry& geom, double p) {
  double qi = 0.0;
  return std::numbers::pi / checked_q0(s, geom, p, &qi);
}

double eval_delta(const SystemParams& s, const RegimeGeometry& geom, double p) {
  double qi = 0.0;
  const double q0 = checked_q0(s, geom, p, &qi);
  return -(s.theta / q0) * std::atanh(qi / q0);
}

cplx memory_kernel(double theta, double q0, double q_i, double tau) {
  if (!(tau > 0.0)) {
    fail(ErrorKind::Domain, "memory kernel is singular at tau <= 0");
  }
  const double quarter = std::numbers::pi / 4.0;
  const cplx phase = std::polar(1.0, theta * (quarter - q0 * q0 * tau));
  const cplx arg = std::polar(q_i * std::sqrt(tau), -theta * quarter);
  return std::sqrt(std::numbers::pi / (4.0 * tau)) * phase * erfc_complex(arg);
}

cplx eval_memory_kernel(const SystemParams& s, const RegimeGeometry& geom,
                        double p, double tau) {
  double qi = 0.0;
  const double q0 = checked_q0(s, geom, p, &qi);
  return memory_kernel(s.theta, q0, qi, tau);
}

}  // namespace cascade
