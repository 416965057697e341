#include "cascade/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

#include "cascade/error.hpp"

namespace cascade {

namespace {

using Triplet = Eigen::Triplet<cplx>;

struct PairHit {
  int k1;  // momentum indices, k1 >= k2
  int k2;
  double amp;
  int mult;  // ordered multiplicity: 2 for distinct modes, 1 otherwise
  ModeList reduced;
};

// All unordered FH pairs that can be annihilated from a state.
std::vector<PairHit> fh_pairs(const ModeGrid& g, std::span<const std::uint32_t> s) {
  std::vector<PairHit> out;
  std::vector<std::pair<std::uint32_t, int>> occ;
  for (auto m : s) {
    if (g.is_sh(static_cast<int>(m))) continue;
    if (!occ.empty() && occ.back().first == m) {
      ++occ.back().second;
    } else {
      occ.emplace_back(m, 1);
    }
  }
  const ModeList base(s.begin(), s.end());
  for (std::size_t a = 0; a < occ.size(); ++a) {
    for (std::size_t b = a; b < occ.size(); ++b) {
      PairHit h;
      h.k1 = g.index_of(static_cast<int>(occ[a].first));
      h.k2 = g.index_of(static_cast<int>(occ[b].first));
      if (a == b) {
        if (occ[a].second < 2) continue;
        h.amp = std::sqrt(static_cast<double>(occ[a].second) *
                          (occ[a].second - 1));
        h.mult = 1;
      } else {
        h.amp = std::sqrt(static_cast<double>(occ[a].second) * occ[b].second);
        h.mult = 2;
      }
      h.reduced = base;
      annihilate(h.reduced, occ[a].first);
      annihilate(h.reduced, occ[b].first);
      out.push_back(std::move(h));
    }
  }
  return out;
}

// Adds a_{l1}^dag a_{l2}^dag; returns the Bose amplitude.
double create_pair(const ModeGrid& g, ModeList& m, int l1, int l2) {
  double amp = create(m, static_cast<std::uint32_t>(g.fh_mode(l1)));
  amp *= create(m, static_cast<std::uint32_t>(g.fh_mode(l2)));
  return amp;
}

SparseOperator from_triplets(const FockBasis& basis,
                             const std::vector<Triplet>& t) {
  SparseOperator op;
  op.basis_id = basis.id();
  const auto n = static_cast<Eigen::Index>(basis.dim());
  op.mat.resize(n, n);
  op.mat.setFromTriplets(t.begin(), t.end());
  op.mat.prune(cplx(0.0, 0.0));
  op.mat.makeCompressed();
  return op;
}

SparseOperator plus_adjoint(SparseOperator x) {
  SpMat adj = x.mat.adjoint();
  x.mat = x.mat + adj;
  x.mat.makeCompressed();
  return x;
}

SparseOperator minus_adjoint(SparseOperator x) {
  SpMat adj = x.mat.adjoint();
  x.mat = x.mat - adj;
  x.mat.makeCompressed();
  return x;
}

void add_target(const FockBasis& basis, std::vector<Triplet>& t,
                const ModeList& target, std::size_t src, cplx value) {
  if (value == cplx(0.0, 0.0)) return;
  const auto j = basis.find(target);
  if (j < 0) return;
  t.emplace_back(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(src),
                 value);
}

// Pair relative momentum (physical) for FH indices k1, k2.
double rel_q(const ModeGrid& g, int k1, int k2) {
  return (k1 - k2) / (2.0 * g.L);
}

// Down-conversion part sum_{P} c(P, Q) b_P^dag (pair) for pairs selected by
// `weight` (ordered-sum coefficient per ordered term; NaN skips the pair).
SparseOperator build_b_dag_aa(const FockBasis& basis,
                              const std::function<double(int, int)>& weight) {
  const auto& g = basis.grid();
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    for (auto& h : fh_pairs(g, basis.modes(i))) {
      const int P = h.k1 + h.k2;
      if (!g.has_sh_index(P)) continue;
      const double w = weight(h.k1, h.k2);
      if (std::isnan(w)) continue;
      ModeList m = h.reduced;
      const double amp = create(m, static_cast<std::uint32_t>(g.sh_mode(P)));
      add_target(basis, t, m, i, w * h.mult * h.amp * amp);
    }
  }
  return from_triplets(basis, t);
}

// sum over ordered (p1,p2,p3,p4), p1+p2=p3+p4, of
// kernel(P, k3, k4, l1, l2) a^dag_{p1} a^dag_{p2} a_{p3} a_{p4}.
SparseOperator build_quartic(
    const FockBasis& basis,
    const std::function<double(int, int, int, int)>& kernel) {
  const auto& g = basis.grid();
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    for (auto& h : fh_pairs(g, basis.modes(i))) {
      const int P = h.k1 + h.k2;
      const int lo = std::max(-g.p_phi, P - g.p_phi);
      for (int l2 = lo; 2 * l2 <= P; ++l2) {
        const int l1 = P - l2;
        if (!g.has_fh_index(l1)) continue;
        const double k = kernel(h.k1, h.k2, l1, l2);
        if (k == 0.0 || std::isnan(k)) continue;
        const int mult_out = (l1 == l2) ? 1 : 2;
        ModeList m = h.reduced;
        const double amp = create_pair(g, m, l1, l2);
        add_target(basis, t, m, i, k * h.mult * mult_out * h.amp * amp);
      }
    }
  }
  return from_triplets(basis, t);
}

double fh_kinetic(const SystemParams& s, const ModeGrid& g, int k) {
  const double p = g.momentum(k);
  return s.theta * p * p / 2.0;
}

SparseOperator diagonal(const FockBasis& basis,
                        const std::function<double(int mode)>& per_particle) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    double e = 0.0;
    for (auto m : basis.modes(i)) e += per_particle(static_cast<int>(m));
    if (e != 0.0) {
      t.emplace_back(static_cast<Eigen::Index>(i),
                     static_cast<Eigen::Index>(i), cplx(e, 0.0));
    }
  }
  return from_triplets(basis, t);
}

std::function<double(double, double)> coupling_fn(const SystemParams& s,
                                                   Coupling coeff,
                                                   const RegimeGeometry* geom) {
  if (coeff == Coupling::F) {
    return [s](double P, double Q) { return eval_f(s, P, Q); };
  }
  if (!geom || geom->regime != Regime::DissipativeElliptical) {
    fail(ErrorKind::Regime, "coupling h requires a dissipative geometry");
  }
  const RegimeGeometry g = *geom;
  return [s, g](double P, double Q) {
    if (!in_intraband(g, P, Q)) return std::nan("");
    return eval_h(s, g, P, Q);
  };
}

}  // namespace

double SparseOperator::hermiticity_error() const {
  SpMat d = mat - SpMat(mat.adjoint());
  double m = 0.0;
  for (int k = 0; k < d.outerSize(); ++k) {
    for (SpMat::InnerIterator it(d, k); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

double SparseOperator::antihermiticity_error() const {
  SpMat d = mat + SpMat(mat.adjoint());
  double m = 0.0;
  for (int k = 0; k < d.outerSize(); ++k) {
    for (SpMat::InnerIterator it(d, k); it; ++it) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

SparseOperator SparseOperator::adjoint() const {
  SparseOperator out;
  out.basis_id = basis_id;
  out.mat = mat.adjoint();
  return out;
}

std::string export_coo(const SparseOperator& op) {
  std::vector<std::tuple<Eigen::Index, Eigen::Index, cplx>> e;
  for (int k = 0; k < op.mat.outerSize(); ++k) {
    for (SpMat::InnerIterator it(op.mat, k); it; ++it) {
      e.emplace_back(it.row(), it.col(), it.value());
    }
  }
  std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) <
           std::tie(std::get<0>(b), std::get<1>(b));
  });
  std::ostringstream os;
  os << "# coo dim " << op.dim() << " nnz " << e.size() << " basis "
     << op.basis_id << "\n";
  char buf[128];
  for (auto& [r, c, v] : e) {
    std::snprintf(buf, sizeof buf, "%ld %ld %.17g %.17g\n",
                  static_cast<long>(r), static_cast<long>(c), v.real(),
                  v.imag());
    os << buf;
  }
  return os.str();
}

void LindbladSet::add(LindbladTerm term) {
  if (term.weight < 0.0) {
    fail(ErrorKind::InvalidArgument, "Lindblad weight must be nonnegative");
  }
  for (const auto& t : terms) {
    if (t.label == term.label) {
      fail(ErrorKind::InvalidArgument, "duplicate Lindblad label " + term.label);
    }
  }
  terms.push_back(std::move(term));
}

MatC Superoperator::apply(const MatC& rho) const {
  MatC out = MatC::Zero(rho.rows(), rho.cols());
  for (const auto& t : terms) {
    MatC left = t.left.size() ? MatC(t.left * rho) : rho;
    if (t.right.size()) {
      out.noalias() += t.coeff * (left * t.right);
    } else {
      out.noalias() += t.coeff * left;
    }
  }
  return out;
}

TimeDependentOperator TimeDependentOperator::constant(const SparseOperator& op) {
  TimeDependentOperator td;
  td.basis_id = op.basis_id;
  td.dim = op.dim();
  td.terms.push_back({op.mat, {}});
  return td;
}

SpMat TimeDependentOperator::at(double t) const {
  SpMat out(dim, dim);
  for (const auto& term : terms) {
    const cplx e = term.envelope ? term.envelope(t) : cplx(1.0, 0.0);
    if (e != cplx(0.0, 0.0)) out += e * term.op;
  }
  return out;
}

SparseOperator annihilation_operator(const FockBasis& basis, bool sh,
                                     int index) {
  const auto& g = basis.grid();
  if (sh ? !g.has_sh_index(index) : !g.has_fh_index(index)) {
    fail(ErrorKind::InvalidArgument, "mode index outside grid");
  }
  const auto mode = static_cast<std::uint32_t>(sh ? g.sh_mode(index) : g.fh_mode(index));
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    ModeList m(basis.modes(i).begin(), basis.modes(i).end());
    const double amp = annihilate(m, mode);
    if (amp != 0.0) add_target(basis, t, m, i, amp);
  }
  return from_triplets(basis, t);
}

SparseOperator number_operator(const FockBasis& basis, bool sh, int index) {
  const auto& g = basis.grid();
  if (sh ? !g.has_sh_index(index) : !g.has_fh_index(index)) {
    fail(ErrorKind::InvalidArgument, "mode index outside grid");
  }
  const int target = sh ? g.sh_mode(index) : g.fh_mode(index);
  return diagonal(basis, [target](int m) { return m == target ? 1.0 : 0.0; });
}

SparseOperator total_charge_operator(const FockBasis& basis) {
  const auto& g = basis.grid();
  return diagonal(basis, [&g](int m) { return double(g.charge_of(m)); });
}

SparseOperator total_momentum_operator(const FockBasis& basis) {
  const auto& g = basis.grid();
  return diagonal(basis, [&g](int m) { return double(g.index_of(m)); });
}

SparseOperator fh_number_operator(const FockBasis& basis) {
  const auto& g = basis.grid();
  return diagonal(basis, [&g](int m) { return g.is_sh(m) ? 0.0 : 1.0; });
}

SparseOperator sh_number_operator(const FockBasis& basis) {
  const auto& g = basis.grid();
  return diagonal(basis, [&g](int m) { return g.is_sh(m) ? 1.0 : 0.0; });
}

SparseOperator build_linear_hamiltonian(const FockBasis& basis,
                                        const SystemParams& s) {
  validate(s);
  const auto& g = basis.grid();
  return diagonal(basis, [&](int m) {
    const int k = g.index_of(m);
    return g.is_sh(m) ? energy_sh(s, g.momentum(k)) : fh_kinetic(s, g, k);
  });
}

SparseOperator build_nonlinear_hamiltonian(const FockBasis& basis,
                                           const SystemParams& s) {
  validate(s);
  const double c = 1.0 / (2.0 * std::sqrt(basis.grid().L));
  return plus_adjoint(build_b_dag_aa(basis, [c](int, int) { return c; }));
}

SparseOperator build_full_hamiltonian(const FockBasis& basis,
                                      const SystemParams& s) {
  SparseOperator h = build_linear_hamiltonian(basis, s);
  h.mat += build_nonlinear_hamiltonian(basis, s).mat;
  h.mat.makeCompressed();
  return h;
}

SparseOperator build_cubic_quartic(const FockBasis& basis,
                                   const SystemParams& s) {
  validate(s);
  if (s.xi == 0.0) fail(ErrorKind::InvalidArgument, "cubic model needs xi != 0");
  const double c = s.theta / (4.0 * s.xi * basis.grid().L);
  return build_quartic(basis, [c](int, int, int, int) { return c; });
}

SparseOperator build_cubic_hamiltonian(const FockBasis& basis,
                                       const SystemParams& s) {
  SparseOperator h = build_cubic_quartic(basis, s);
  const auto& g = basis.grid();
  h.mat += diagonal(basis, [&](int m) {
             return g.is_sh(m) ? 0.0 : fh_kinetic(s, g, g.index_of(m));
           }).mat;
  h.mat.makeCompressed();
  return h;
}

SparseOperator build_sw_generator(const FockBasis& basis,
                                  const SystemParams& s, Coupling coeff,
                                  const RegimeGeometry* geom) {
  validate(s);
  const auto& g = basis.grid();
  const auto fn = coupling_fn(s, coeff, geom);
  const double sl = std::sqrt(g.L);
  return minus_adjoint(build_b_dag_aa(basis, [&](int k1, int k2) {
    return fn(g.momentum(k1 + k2), rel_q(g, k1, k2)) / sl;
  }));
}

SparseOperator build_intraband_coupling(const FockBasis& basis,
                                        const SystemParams& s,
                                        const RegimeGeometry& geom) {
  validate(s);
  const auto& g = basis.grid();
  const double c = 1.0 / (2.0 * std::sqrt(g.L));
  return plus_adjoint(build_b_dag_aa(basis, [&](int k1, int k2) {
    return in_intraband(geom, g.momentum(k1 + k2), rel_q(g, k1, k2))
               ? c
               : std::nan("");
  }));
}

WTerms build_w_terms(const FockBasis& basis, const SystemParams& s,
                     Coupling coeff, const RegimeGeometry* geom) {
  validate(s);
  const auto& g = basis.grid();
  const auto fn = coupling_fn(s, coeff, geom);
  const double L = g.L;
  WTerms w;

  bool dropped = false;
  w.w_lin = diagonal(basis, [&](int m) {
    if (!g.is_sh(m)) return 0.0;
    const double om = eval_omega(s, g.momentum(g.index_of(m)));
    if (!(om > 0.0)) {
      dropped = true;
      return 0.0;
    }
    return -std::numbers::pi * s.theta / (2.0 * std::sqrt(om));
  });
  if (dropped) warn("W_lin: modes with omega(p) <= 0 dropped");

  auto spm_kernel = [&](bool prime) {
    return [&, prime](int k3, int k4, int l1, int l2) {
      const double P = g.momentum(k3 + k4);
      const double fin = fn(P, rel_q(g, k3, k4));
      if (std::isnan(fin)) return std::nan("");
      double k = -fin / (4.0 * L);
      if (prime) {
        const double R = rel_q(g, l1, l2);
        const double fout = fn(P, R);
        if (std::isnan(fout)) return std::nan("");
        const double om = eval_omega(s, P);
        if (!(om > 0.0)) return std::nan("");
        const double l = s.theta * (3.0 * std::numbers::pi / 4.0) *
                         (fout - s.theta / (12.0 * om)) / std::sqrt(om);
        k *= 1.0 + l;
      } else if (coeff == Coupling::H) {
        if (std::isnan(fn(P, rel_q(g, l1, l2)))) return std::nan("");
      }
      return k;
    };
  };
  w.w_spm = plus_adjoint(build_quartic(basis, spm_kernel(false)));
  w.w_spm_prime = plus_adjoint(build_quartic(basis, spm_kernel(true)));

  // XPM: (1/L) sum f(P, (p - 2k)/(2L)) b_p^dag b_r a_{r-p+k}^dag a_k + h.c.
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const ModeList base(basis.modes(i).begin(), basis.modes(i).end());
    std::set<std::uint32_t> sh_occ;
    std::set<std::uint32_t> fh_occ;
    for (auto m : base) (g.is_sh(static_cast<int>(m)) ? sh_occ : fh_occ).insert(m);
    for (auto rm : sh_occ) {
      for (auto km : fh_occ) {
        const int r = g.index_of(static_cast<int>(rm));
        const int k = g.index_of(static_cast<int>(km));
        ModeList red = base;
        double amp = annihilate(red, km);
        amp *= annihilate(red, rm);
        for (int p = -g.p_psi; p <= g.p_psi; ++p) {
          const int kout = r - p + k;
          if (!g.has_fh_index(kout)) continue;
          const double f = fn(g.momentum(p), (p - 2.0 * k) / (2.0 * L));
          if (std::isnan(f)) continue;
          ModeList m = red;
          double a2 = create(m, static_cast<std::uint32_t>(g.fh_mode(kout)));
          a2 *= create(m, static_cast<std::uint32_t>(g.sh_mode(p)));
          add_target(basis, t, m, i, f / L * amp * a2);
        }
      }
    }
  }
  w.w_xpm = plus_adjoint(from_triplets(basis, t));
  return w;
}

SparseOperator pair_annihilator(const FockBasis& basis, int total_index) {
  const auto& g = basis.grid();
  const double c = 1.0 / std::sqrt(g.L);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    for (auto& h : fh_pairs(g, basis.modes(i))) {
      if (h.k1 + h.k2 != total_index) continue;
      add_target(basis, t, h.reduced, i, c * h.mult * h.amp);
    }
  }
  return from_triplets(basis, t);
}

DressedFwModel build_dressed_fw_model(const FockBasis& basis,
                                      const SystemParams& s,
                                      const RegimeGeometry& geom) {
  if (geom.regime != Regime::DissipativeElliptical) {
    fail(ErrorKind::Regime, "dressed FW model requires the dissipative regime");
  }
  DressedFwModel out;
  out.hamiltonian = build_cubic_hamiltonian(basis, s);
  const double c = -s.theta * std::sqrt(std::numbers::pi / 4.0) *
                   std::pow(std::abs(s.xi), -1.25);
  const auto& g = basis.grid();
  for (int P = -2 * g.p_phi; P <= 2 * g.p_phi; ++P) {
    SparseOperator a = pair_annihilator(basis, P);
    if (a.mat.nonZeros() == 0) continue;
    a.mat *= c;
    out.lindblads.add({"L_FW[" + std::to_string(P) + "]", std::move(a), 1.0, {}});
  }
  return out;
}

ShDecay build_sh_decay(const FockBasis& basis, const SystemParams& s,
                       const RegimeGeometry& geom) {
  if (geom.regime != Regime::DissipativeElliptical) {
    fail(ErrorKind::Regime, "SH decay requires the dissipative regime");
  }
  const auto& g = basis.grid();
  ShDecay out;
  out.lamb_shift = diagonal(basis, [&](int m) {
    return g.is_sh(m) ? eval_delta(s, geom, g.momentum(g.index_of(m))) : 0.0;
  });
  for (int p = -g.p_psi; p <= g.p_psi; ++p) {
    const double kappa = eval_kappa(s, geom, g.momentum(p));
    const auto mode = static_cast<std::uint32_t>(g.sh_mode(p));
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < basis.dim(); ++i) {
      ModeList m(basis.modes(i).begin(), basis.modes(i).end());
      const double amp = annihilate(m, mode);
      if (amp == 0.0) continue;
      add_target(basis, t, m, i, std::sqrt(kappa) * amp);
    }
    out.lindblads.add(
        {"L_SH[" + std::to_string(p) + "]", from_triplets(basis, t), 1.0, {}});
  }
  return out;
}

Superoperator build_me_dissipator(const FockBasis& basis,
                                  const SystemParams& s, MeVariant variant) {
  validate(s);
  const auto& g = basis.grid();
  if (g.n_sh() != 0) {
    fail(ErrorKind::InvalidArgument, "ME dissipator needs an FH-only basis");
  }
  Superoperator out;
  out.basis_id = basis.id();
  out.dim = static_cast<Eigen::Index>(basis.dim());
  const cplx I(0.0, 1.0);

  if (variant == MeVariant::Dispersive) {
    const SpMat w = build_cubic_quartic(basis, s).mat;
    out.terms.push_back({-I, w, SpMat()});
    out.terms.push_back({I, SpMat(), w});
    return out;
  }

  const double L = g.L;
  int covered = 0;
  for (int P = -2 * g.p_phi; P <= 2 * g.p_phi; ++P) {
    const double Pp = g.momentum(P);
    const SpMat A = pair_annihilator(basis, P).mat;
    if (A.nonZeros() == 0) continue;
    double q0 = 0.0;
    const bool resonant = resonance_q0(s, Pp, &q0);
    // Resonant relative index s0 = k0 - (P - k0), same parity as P.
    int s0 = 0;
    bool on_grid = false;
    if (resonant) {
      const double target = 2.0 * L * q0;
      const int par = ((P % 2) + 2) % 2;
      s0 = 2 * static_cast<int>(std::floor((target - par) / 2.0 + 0.5)) + par;
      const int k0 = (P + s0) / 2;
      on_grid = g.has_fh_index(k0) && g.has_fh_index(P - k0) &&
                std::abs(s0 / (2.0 * L) - q0) <= 1.0 / (2.0 * L) + 1e-12;
    }
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < basis.dim(); ++i) {
      for (auto& h : fh_pairs(g, basis.modes(i))) {
        if (h.k1 + h.k2 != P) continue;
        const int rel = h.k1 - h.k2;
        double coef = 0.0;
        cplx value(0.0, 0.0);
        if (on_grid && rel == s0) {
          // Single ordered operator a_{k0} a_{P-k0} at the resonance.
          value = (std::numbers::pi / (4.0 * q0)) * h.amp;
        } else {
          coef = eval_f(s, Pp, rel / (2.0 * L));
          value = (-I / (2.0 * L)) * coef * double(h.mult) * h.amp;
        }
        add_target(basis, t, h.reduced, i, value);
      }
    }
    if (on_grid) ++covered;
    SpMat X = from_triplets(basis, t).mat;
    SpMat Ad = A.adjoint();
    SpMat Xd = X.adjoint();
    out.terms.push_back({1.0, X, Ad});
    out.terms.push_back({-1.0, SpMat(Ad * X), SpMat()});
    out.terms.push_back({1.0, A, Xd});
    out.terms.push_back({-1.0, SpMat(), SpMat(Xd * A)});
  }
  if (covered == 0) {
    fail(ErrorKind::Resonance,
         "no discrete mode pair within half a grid spacing of q0(p)");
  }
  return out;
}

TimeDependentOperator build_w_sq(const FockBasis& basis, const SystemParams& s,
                                 const RegimeGeometry& geom,
                                 const ShAmplitude& sh_amplitude) {
  if (geom.regime != Regime::DissipativeElliptical) {
    fail(ErrorKind::Regime, "W_sq requires the dissipative regime");
  }
  const auto& g = basis.grid();
  const cplx c = cplx(0.0, s.theta * std::numbers::pi / 4.0) *
                 std::pow(std::abs(s.xi), -1.5);
  TimeDependentOperator td;
  td.basis_id = basis.id();
  td.dim = static_cast<Eigen::Index>(basis.dim());
  for (int P = -2 * g.p_phi; P <= 2 * g.p_phi; ++P) {
    SpMat A = pair_annihilator(basis, P).mat;
    if (A.nonZeros() == 0) continue;
    SpMat Ad = A.adjoint();
    td.terms.push_back({A, [c, P, sh_amplitude](double t) {
                          return c * sh_amplitude(P, t);
                        }});
    td.terms.push_back({Ad, [c, P, sh_amplitude](double t) {
                          return std::conj(c * sh_amplitude(P, t));
                        }});
  }
  return td;
}

ShAmplitude mean_field_sh_amplitude(const SystemParams& s,
                                    const RegimeGeometry& geom, double L,
                                    std::function<cplx(int)> initial) {
  return [s, geom, L, initial](int p, double t) {
    const cplx a0 = initial(p);
    if (a0 == cplx(0.0, 0.0)) return a0;
    const double P = p / L;
    double e = energy_sh(s, P);
    double kappa = 0.0;
    double q0 = 0.0;
    if (resonance_q0(s, P, &q0) && geom.q_i(P) < q0) {
      kappa = eval_kappa(s, geom, P);
      e += eval_delta(s, geom, P);
    }
    return a0 * std::exp(cplx(-kappa * t / 2.0, -e * t));
  };
}

}  // namespace cascade
