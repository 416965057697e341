#include "cascade/sw.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cascade/error.hpp"
#include "cascade/linalg.hpp"

namespace cascade {

namespace {

void require_basis(const QuantumState& s, std::uint64_t id) {
  if (s.basis_id != id) fail(ErrorKind::InvalidArgument, "state and operator bases differ");
}

bool sh_empty(const FockBasis& basis, const QuantumState& s, double tol) {
  const auto& g = basis.grid();
  const Eigen::MatrixXcd rho = s.density();
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    bool has_sh = false;
    for (auto m : basis.modes(i)) has_sh |= g.is_sh(static_cast<int>(m));
    if (has_sh && std::abs(rho(i, i)) > tol) return false;
  }
  return true;
}

// Sum over ordered l of c(l) a_l a_{P-l}, as one operator.
SpMat weighted_pair(const FockBasis& basis, int P,
                    const std::function<double(int)>& c) {
  const auto& g = basis.grid();
  SpMat out(basis.dim(), basis.dim());
  for (int l = -g.p_phi; l <= g.p_phi; ++l) {
    if (!g.has_fh_index(P - l)) continue;
    const double w = c(l);
    if (w == 0.0) continue;
    SpMat a1 = annihilation_operator(basis, false, l).mat;
    SpMat a2 = annihilation_operator(basis, false, P - l).mat;
    out += w * SpMat(a1 * a2);
  }
  return out;
}

}  // namespace

QuantumState apply_frame_change(const QuantumState& state,
                                const SparseOperator& S,
                                FrameDirection direction) {
  require_basis(state, S.basis_id);
  const Frame target = direction == FrameDirection::ToSW ? Frame::SW : Frame::Lab;
  if (state.frame == target) {
    warn(std::string("state already in the ") + frame_name(target) + " frame");
    return state;
  }
  const cplx sign = direction == FrameDirection::ToSW ? 1.0 : -1.0;
  QuantumState out = state;
  out.frame = target;
  if (state.pure) {
    out.psi = expm_action(S.mat, state.psi, sign);
  } else {
    const Eigen::MatrixXcd left = expm_action(S.mat, state.rho, sign);
    const Eigen::MatrixXcd right = expm_action(S.mat, left.adjoint(), sign);
    out.rho = right.adjoint();
  }
  return out;
}

QuantumState dressed_initial_condition_exact(const FockBasis& basis,
                                             const QuantumState& lab,
                                             const SparseOperator& S) {
  require_basis(lab, basis.id());
  if (!sh_empty(basis, lab, 1e-14)) {
    fail(ErrorKind::InvalidArgument, "lab initial state must have empty SH modes");
  }
  return apply_frame_change(lab, S, FrameDirection::ToSW);
}

QuantumState dressed_initial_condition_mean_field(const FockBasis& basis,
                                                  const QuantumState& lab,
                                                  const SystemParams& params,
                                                  const LindbladSet& l_fw) {
  require_basis(lab, basis.id());
  if (lab.frame != Frame::Lab) {
    fail(ErrorKind::InvalidArgument, "mean-field dressing expects a lab state");
  }
  if (!sh_empty(basis, lab, 1e-14)) {
    fail(ErrorKind::InvalidArgument, "lab initial state must have empty SH modes");
  }
  const Eigen::MatrixXcd rho0 = lab.density();
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(rho0.rows(), rho0.cols());
  for (const auto& t : l_fw.terms) {
    const SpMat& L = t.op.mat;
    const SpMat Ld = L.adjoint();
    const SpMat LdL = Ld * L;
    const Eigen::MatrixXcd Lr = L * rho0;
    d += t.weight * (Lr * Ld - 0.5 * (LdL * rho0 + rho0 * LdL));
  }
  Eigen::MatrixXcd rho = rho0 + (std::sqrt(std::abs(params.xi)) / std::numbers::pi) * d;
  rho /= rho.trace();
  return QuantumState::from_density(basis, std::move(rho), Frame::SW);
}

FrameCorrection::FrameCorrection(const FockBasis& basis,
                                 const QuantumState& initial_lab,
                                 const SystemParams& params,
                                 const RegimeGeometry& geom)
    : basis_(&basis), params_(params), geom_(geom) {
  require_basis(initial_lab, basis.id());
  const auto& g = basis.grid();
  if (g.n_sh() != 0) fail(ErrorKind::InvalidArgument, "frame correction needs an FH-only basis");
  if (params.xi == 0.0) fail(ErrorKind::InvalidArgument, "xi must be nonzero");
  dispersive_ = geom.regime == Regime::Dispersive;
  const double L = g.L;
  const double nb = -params.theta / (2.0 * params.xi);
  for (int P = -2 * g.p_phi; P <= 2 * g.p_phi; ++P) {
    const double Pp = P / L;
    const SpMat narrow = weighted_pair(basis, P, [nb](int) { return nb; });
    SpMat full;
    if (dispersive_) {
      full = weighted_pair(basis, P, [&](int l) {
        return eval_f(params, Pp, (2.0 * l - P) / (2.0 * L));
      });
    }
    double kappa = 0.0;
    double q0 = 0.0;
    if (!dispersive_ && geom.regime == Regime::DissipativeElliptical &&
        resonance_q0(params, Pp, &q0) && geom.q_i(Pp) < q0) {
      kappa = eval_kappa(params, geom, Pp);
    }
    for (int p = -g.p_phi; p <= g.p_phi; ++p) {
      if (!g.has_fh_index(P - p)) continue;
      const SpMat ap = annihilation_operator(basis, false, p).mat;
      const SpMat aq = annihilation_operator(basis, false, P - p).mat;
      const SpMat pair = ap * aq;
      Entry e{P, p, 0.0, 0.0, kappa};
      e.c0_narrow = initial_lab.correlation(narrow, pair) / std::sqrt(L);
      if (dispersive_) e.c0_full = initial_lab.correlation(full, pair) / std::sqrt(L);
      entries_.push_back(e);
    }
  }
}

CorrectedNumber FrameCorrection::evaluate(const QuantumState& s, double t) const {
  require_basis(s, basis_->id());
  const auto& g = basis_->grid();
  const double L = g.L;
  const int n = g.n_fh();
  CorrectedNumber out;
  out.bare.assign(n, 0.0);
  for (int p = -g.p_phi; p <= g.p_phi; ++p) {
    out.bare[p + g.p_phi] =
        s.expectation(number_operator(*basis_, false, p).mat).real();
  }
  out.narrowband = out.bare;
  if (dispersive_) out.full_f = out.bare;

  const double nb = -params_.theta / (2.0 * params_.xi);
  for (const auto& e : entries_) {
    const double Pp = e.P / L;
    const int p = e.p;
    const int q = e.P - p;
    double phase = -params_.theta * params_.xi * t;
    if (band_phases_) {
      phase = (energy_sh(params_, Pp) -
               params_.theta * (std::pow(p / L, 2) + std::pow(q / L, 2)) / 2.0) * t;
    }
    const cplx env = std::exp(cplx(-e.kappa * t / 2.0, phase));
    const double sp = 2.0 / std::sqrt(L);
    const SpMat pair = SpMat(annihilation_operator(*basis_, false, p).mat *
                             annihilation_operator(*basis_, false, q).mat);
    const SpMat narrow = weighted_pair(*basis_, e.P, [nb](int) { return nb; });
    const cplx quart_n = s.correlation(narrow, pair);
    out.narrowband[p + g.p_phi] +=
        sp * nb * 2.0 * (e.c0_narrow * env).real() - (1.0 / L) * nb * 2.0 * quart_n.real();
    if (dispersive_) {
      const double fp = eval_f(params_, Pp, (2.0 * p - e.P) / (2.0 * L));
      const SpMat full = weighted_pair(*basis_, e.P, [&](int l) {
        return eval_f(params_, Pp, (2.0 * l - e.P) / (2.0 * L));
      });
      const cplx quart_f = s.correlation(full, pair);
      out.full_f[p + g.p_phi] +=
          sp * fp * 2.0 * (e.c0_full * env).real() - (1.0 / L) * fp * 2.0 * quart_f.real();
    }
  }
  return out;
}

namespace {

std::vector<double> pair_energies(const ModeGrid& g, int p) {
  std::vector<double> e;
  for (int k = -g.p_phi; k <= g.p_phi; ++k) {
    if (!g.has_fh_index(p - k)) continue;
    const double P = p / g.L;
    const double Q = (2.0 * k - p) / (2.0 * g.L);
    e.push_back(P * P / 4.0 + Q * Q);
  }
  return e;
}

double bare_detuning(const ModeGrid& g, const SystemParams& s, int p) {
  const double P = p / g.L;
  return s.xi - s.gamma * P - s.beta * P * P / 2.0;
}

}  // namespace

double solve_meson_energy(const ModeGrid& g, const SystemParams& s, int p) {
  if (!g.has_sh_index(p)) fail(ErrorKind::InvalidArgument, "SH index outside grid");
  const auto e = pair_energies(g, p);
  const double w0 = bare_detuning(g, s, p);
  auto F = [&](double E) {
    double sum = 0.0;
    for (double ek : e) sum += 1.0 / (E + ek);
    return E - w0 - sum / (2.0 * g.L);
  };
  if (e.empty()) return w0;
  double emin = e[0];
  for (double ek : e) emin = std::min(emin, ek);
  double lo = std::max(-emin, 0.0) + 1e-12 * std::max(1.0, std::abs(w0));
  if (!(w0 > 0.0) || F(lo) > 0.0) {
    fail(ErrorKind::Regime, "meson bisection bracket failed: outside the dispersive regime");
  }
  double hi = w0 + 1.0;
  while (F(hi) < 0.0) hi = 2.0 * hi + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (F(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double meson_first_order_energy(const ModeGrid& g, const SystemParams& s, int p) {
  const auto e = pair_energies(g, p);
  const double w0 = bare_detuning(g, s, p);
  double sum = 0.0;
  for (double ek : e) sum += 1.0 / (w0 + ek);
  return -s.theta * (w0 + sum / (2.0 * g.L));
}

MesonResult build_meson_state(const FockBasis& basis, const SystemParams& s, int p) {
  validate(s);
  const auto& g = basis.grid();
  if (!basis.momentum_sector() || *basis.momentum_sector() != p || basis.q_max() < 2) {
    fail(ErrorKind::InvalidArgument, "meson needs a momentum-sector basis with q_max >= 2");
  }
  const double L = g.L;
  MesonRecord rec;
  rec.p = p;
  try {
    rec.energy_continuum = eval_meson_dispersion(s, p / L);
  } catch (const Error&) {
    rec.energy_continuum = std::numeric_limits<double>::quiet_NaN();
  }
  rec.energy_discrete = -s.theta * solve_meson_energy(g, s, p);
  rec.first_order = meson_first_order_energy(g, s, p);

  std::vector<Eigen::Index> idx;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    if (basis.conserved_charges(i).first == 2) idx.push_back(static_cast<Eigen::Index>(i));
  }
  const SpMat h = build_full_hamiltonian(basis, s).mat;
  const Eigen::MatrixXcd hd(h);
  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXcd hs(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) hs(a, b) = hd(idx[a], idx[b]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hs);
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < n; ++k) {
    if (std::abs(es.eigenvalues()(k) - rec.energy_discrete) <
        std::abs(es.eigenvalues()(best) - rec.energy_discrete)) {
      best = k;
    }
  }
  rec.eigenvalue = es.eigenvalues()(best);

  Eigen::VectorXcd mu = Eigen::VectorXcd::Zero(basis.dim());
  mu(basis.find({static_cast<std::uint32_t>(g.sh_mode(p))})) = 1.0;
  const double P = p / L;
  for (int k = -g.p_phi; k <= g.p_phi; ++k) {
    const int k2 = p - k;
    if (!g.has_fh_index(k2) || k2 > k) continue;
    ModeList m;
    const double amp = create(m, static_cast<std::uint32_t>(g.fh_mode(k))) *
                       create(m, static_cast<std::uint32_t>(g.fh_mode(k2)));
    const int mult = k == k2 ? 1 : 2;
    const double f = eval_f(s, P, (k - k2) / (2.0 * L));
    mu(basis.find(m)) += mult * f / std::sqrt(L) * amp;
  }
  mu.normalize();
  Eigen::VectorXcd eig = Eigen::VectorXcd::Zero(basis.dim());
  for (Eigen::Index a = 0; a < n; ++a) eig(idx[a]) = es.eigenvectors()(a, best);
  rec.overlap_deficit = std::max(0.0, 1.0 - std::norm(eig.dot(mu)));
  const Eigen::VectorXcd hmu = h * mu;
  const cplx em = mu.dot(hmu);
  rec.residual_norm = (hmu - em * mu).norm();
  return {mu, rec};
}

std::string meson_csv(const std::vector<MesonRecord>& rows) {
  std::ostringstream os;
  os << "p,M_continuum,E_discrete,eigenvalue,first_order,deficit,residual\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.p,
                  r.energy_continuum, r.energy_discrete, r.eigenvalue, r.first_order,
                  r.overlap_deficit, r.residual_norm);
    os << buf;
  }
  return os.str();
}

}  // namespace cascade
