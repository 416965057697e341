#include "cascade/classical.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "cascade/error.hpp"

namespace cascade {

namespace {

using CVec = std::vector<cplx>;

int signed_index(std::size_t k, std::size_t n) {
  return k < (n + 1) / 2 ? static_cast<int>(k) : static_cast<int>(k) - static_cast<int>(n);
}

struct Transform {
  Eigen::FFT<double> fft;
  CVec fwd(const CVec& x) {
    CVec out;
    fft.fwd(out, x);
    return out;
  }
  CVec inv(const CVec& x) {
    CVec out;
    fft.inv(out, x);
    return out;
  }
};

double fh_energy(const SystemParams& p, double k) { return p.theta * k * k / 2; }

double sh_energy(const SystemParams& p, double k) {
  return p.theta * (-p.xi + p.gamma * k + p.beta * k * k / 2);
}

void check_pair(const ClassicalField& a, const ClassicalField& b) {
  a.check();
  b.check();
  if (a.size() != b.size() || a.L != b.L) fail(ErrorKind::InvalidArgument, "field grids differ");
}

void check_step(const SystemParams& p, double t_final, double dt) {
  if (!(dt > 0) || !(t_final >= 0)) fail(ErrorKind::InvalidArgument, "need dt > 0 and t_final >= 0");
  if (dt * std::abs(p.xi) >= 0.1)
    fail(ErrorKind::InvalidArgument, "step rejected: dt |xi| must stay below 0.1");
}

}  // namespace

void ClassicalField::check() const {
  const std::size_t n = samples.size();
  if (n < 2 || (n & (n - 1)) != 0) fail(ErrorKind::InvalidArgument, "field size must be a power of two");
  if (!(L > 0)) fail(ErrorKind::InvalidArgument, "field window must be positive");
}

double ClassicalField::norm2() const {
  double s = 0;
  for (const auto& c : samples) s += std::norm(c);
  return s * L / samples.size();
}

std::vector<cplx> ClassicalField::spectrum() const {
  check();
  Transform t;
  return t.fwd(samples);
}

ClassicalField sample_field(double L, std::size_t n, Band band,
                            const std::function<cplx(double)>& f) {
  ClassicalField out{L, band, CVec(n)};
  for (std::size_t k = 0; k < n; ++k) out.samples[k] = f(L * k / n);
  out.check();
  return out;
}

double relative_l2(const ClassicalField& a, const ClassicalField& b) {
  check_pair(a, b);
  double num = 0, den = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num += std::norm(a.samples[k] - b.samples[k]);
    den += std::norm(b.samples[k]);
  }
  if (den == 0) fail(ErrorKind::Domain, "relative distance to a zero field");
  return std::sqrt(num / den);
}

ClassicalInvariants classical_invariants(const ClassicalField& phi, const ClassicalField& psi,
                                         const SystemParams& params) {
  check_pair(phi, psi);
  const std::size_t n = phi.size();
  const double L = phi.L, dy = L / n;
  Transform t;
  const CVec fp = t.fwd(phi.samples), fs = t.fwd(psi.samples);
  ClassicalInvariants inv;
  inv.charge = phi.norm2() + 2 * psi.norm2();
  // Parseval: sum |x|^2 dy = sum |X|^2 dy / n.
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = signed_index(k, n) / L;
    const double wp = std::norm(fp[k]) * dy / n, ws = std::norm(fs[k]) * dy / n;
    inv.momentum += kk * (wp + ws);
    inv.energy += fh_energy(params, kk) * wp + sh_energy(params, kk) * ws;
  }
  for (std::size_t k = 0; k < n; ++k)
    inv.energy += dy * (std::conj(psi.samples[k]) * phi.samples[k] * phi.samples[k]).real();
  return inv;
}

CoupledWaveResult split_step_coupled_wave(const ClassicalField& phi0, const ClassicalField& psi0,
                                          const SystemParams& params, double t_final, double dt) {
  check_pair(phi0, psi0);
  check_step(params, t_final, dt);
  const std::size_t n = phi0.size();
  const double L = phi0.L;
  const int steps = std::max(1, static_cast<int>(std::ceil(t_final / dt - 1e-12)));
  const double h = t_final / steps;

  CVec half_fh(n), half_sh(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = signed_index(k, n) / L;
    half_fh[k] = std::polar(1.0, -fh_energy(params, kk) * h / 2);
    half_sh[k] = std::polar(1.0, -sh_energy(params, kk) * h / 2);
  }

  CoupledWaveResult r{phi0, psi0, {0.0}, {psi0.samples[0]}, 0, 0, 0, steps};
  Transform t;
  const auto inv0 = classical_invariants(phi0, psi0, params);
  const double escale = std::max(std::abs(inv0.energy), 1e-300);

  auto linear = [&](CVec& a, CVec& b) {
    CVec fa = t.fwd(a), fb = t.fwd(b);
    for (std::size_t k = 0; k < n; ++k) {
      fa[k] *= half_fh[k];
      fb[k] *= half_sh[k];
    }
    a = t.inv(fa);
    b = t.inv(fb);
  };

  CVec& a = r.phi.samples;
  CVec& b = r.psi.samples;
  for (int s = 0; s < steps; ++s) {
    linear(a, b);
    for (std::size_t k = 0; k < n; ++k) {
      const cplx a0 = a[k], b0 = b[k];
      cplx a1 = a0, b1 = b0;
      for (int it = 0; it < 100; ++it) {
        const cplx am = (a0 + a1) / 2.0, bm = (b0 + b1) / 2.0;
        const cplx an = a0 - cplx(0, h) * bm * std::conj(am);
        const cplx bn = b0 - cplx(0, h / 2) * am * am;
        const double d = std::abs(an - a1) + std::abs(bn - b1);
        a1 = an;
        b1 = bn;
        if (d <= 1e-16 * (1 + std::abs(a1) + std::abs(b1))) break;
      }
      a[k] = a1;
      b[k] = b1;
    }
    linear(a, b);
    r.times.push_back(h * (s + 1));
    r.psi_probe.push_back(b[0]);
    const auto inv = classical_invariants(r.phi, r.psi, params);
    r.max_charge_drift = std::max(r.max_charge_drift, std::abs(inv.charge - inv0.charge));
    r.max_momentum_drift = std::max(r.max_momentum_drift, std::abs(inv.momentum - inv0.momentum));
    r.max_energy_drift = std::max(r.max_energy_drift, std::abs(inv.energy - inv0.energy) / escale);
  }
  return r;
}

ClassicalField split_step_nlse(const ClassicalField& phi0, const SystemParams& params,
                               double t_final, double dt) {
  phi0.check();
  check_step(params, t_final, dt);
  if (params.xi == 0) fail(ErrorKind::Domain, "cubic limit needs xi != 0");
  const std::size_t n = phi0.size();
  const int steps = std::max(1, static_cast<int>(std::ceil(t_final / dt - 1e-12)));
  const double h = t_final / steps;
  CVec half(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = signed_index(k, n) / phi0.L;
    half[k] = std::polar(1.0, -fh_energy(params, kk) * h / 2);
  }
  const double g = params.theta / (2 * params.xi);
  Transform t;
  ClassicalField out = phi0;
  CVec& a = out.samples;
  for (int s = 0; s < steps; ++s) {
    CVec f = t.fwd(a);
    for (std::size_t k = 0; k < n; ++k) f[k] *= half[k];
    a = t.inv(f);
    for (auto& c : a) c *= std::polar(1.0, -g * std::norm(c) * h);
    f = t.fwd(a);
    for (std::size_t k = 0; k < n; ++k) f[k] *= half[k];
    a = t.inv(f);
  }
  return out;
}

std::vector<cplx> static_potential(const PotentialSpec& spec) {
  spec.v.check();
  if (spec.xi == 0) fail(ErrorKind::Domain, "potential needs xi != 0");
  CVec out(spec.v.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = -std::norm(spec.v.samples[k]) / spec.xi;
  return out;
}

std::vector<cplx> heat_kernel_potential(const PotentialSpec& spec, double t) {
  CVec v = static_potential(spec);
  if (t == 0) return v;
  if (spec.beta == 0) fail(ErrorKind::Domain, "heat kernel needs beta != 0 for t > 0");
  const std::size_t n = v.size();
  const cplx tp(0, spec.theta * spec.beta * t / (8 * std::numbers::pi * std::numbers::pi));
  Transform tr;
  CVec f = tr.fwd(v);
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = 2 * std::numbers::pi * signed_index(k, n) / spec.v.L;
    f[k] *= std::exp(-tp * kk * kk);
  }
  return tr.inv(f);
}

std::string field_csv(const ClassicalField& f) {
  std::string out = "y,re,im\n";
  char buf[128];
  for (std::size_t k = 0; k < f.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.y(k), f.samples[k].real(),
                  f.samples[k].imag());
    out += buf;
  }
  return out;
}

std::string spectrum_csv(const ClassicalField& f) {
  const auto s = f.spectrum();
  const std::size_t n = s.size();
  std::string out = "s,p,abs\n";
  char buf[128];
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = (j + n / 2) % n;  // ascending signed order
    const int si = signed_index(k, n);
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", si, si / f.L, std::abs(s[k]) / n);
    out += buf;
  }
  return out;
}

}  // namespace cascade
