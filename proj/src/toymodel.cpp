#include "cascade/toymodel.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "cascade/error.hpp"

namespace cascade {

namespace {

using Trip = Eigen::Triplet<cplx>;

SparseOperator make(const ToySystem& sys, std::vector<Trip> t) {
  SparseOperator op{sys.basis_id(), SpMat(sys.dim(), sys.dim())};
  op.mat.setFromTriplets(t.begin(), t.end());
  op.mat.prune(cplx(0.0));
  return op;
}

SparseOperator scaled(const SparseOperator& a, cplx c) { return {a.basis_id, SpMat(c * a.mat)}; }

SparseOperator product(const SparseOperator& a, const SparseOperator& b) {
  return {a.basis_id, SpMat(a.mat * b.mat)};
}

SparseOperator sum(const SparseOperator& a, const SparseOperator& b, cplx cb = 1.0) {
  return {a.basis_id, SpMat(a.mat + cb * b.mat)};
}

double top_population(const ToySystem& sys, const QuantumState& s) {
  const MatC rho = s.density();
  double top = 0.0;
  for (int np = 0; np <= sys.n_max_fh; ++np)
    for (int ns = 0; ns <= sys.n_max_sh; ++ns)
      if (np == sys.n_max_fh || ns == sys.n_max_sh)
        top = std::max(top, rho(sys.index(np, ns), sys.index(np, ns)).real());
  return top;
}

LindbladSet single(const SparseOperator& op, const char* label,
                   std::function<double(double)> env = {}) {
  LindbladSet set;
  set.add({label, op, 1.0, std::move(env)});
  return set;
}

std::vector<double> numbers(const std::vector<QuantumState>& states, const SpMat& n) {
  std::vector<double> out;
  for (const auto& s : states) out.push_back(s.expectation(n).real());
  return out;
}

std::vector<double> loss_of(const std::vector<double>& n) {
  std::vector<double> out;
  for (double v : n) out.push_back((n.front() - v) / n.front());
  return out;
}

}  // namespace

void ToySystem::check() const {
  if (!(xi > 0)) fail(ErrorKind::Domain, "toy model needs xi > 0");
  if (n_max_fh < 2 || n_max_sh < 1) fail(ErrorKind::InvalidArgument, "toy cutoffs too small");
}

std::uint64_t ToySystem::basis_id() const {
  // FNV-1a over the cutoffs with a tag that differs from mode-grid ids.
  std::uint64_t h = 1469598103934665603ull;
  for (int v : {0x746f79, n_max_fh, n_max_sh}) {
    h ^= static_cast<std::uint64_t>(v);
    h *= 1099511628211ull;
  }
  return h;
}

ToyOperators build_toy_operators(const ToySystem& sys) {
  sys.check();
  std::vector<Trip> a, b;
  for (int np = 0; np <= sys.n_max_fh; ++np) {
    for (int ns = 0; ns <= sys.n_max_sh; ++ns) {
      if (np > 0) a.emplace_back(sys.index(np - 1, ns), sys.index(np, ns), std::sqrt(double(np)));
      if (ns > 0) b.emplace_back(sys.index(np, ns - 1), sys.index(np, ns), std::sqrt(double(ns)));
    }
  }
  const double xi = sys.xi;
  ToyOperators o;
  o.phi = make(sys, a);
  o.psi = make(sys, b);
  const auto phi_d = o.phi.adjoint(), psi_d = o.psi.adjoint();
  o.psi_num = product(psi_d, o.psi);
  o.phi_num = product(phi_d, o.phi);
  o.h0 = scaled(o.psi_num, xi);
  const auto down = product(psi_d, product(o.phi, o.phi));  // psi^dag phi^2
  const auto up = down.adjoint();
  o.v = scaled(sum(down, up), 0.5);
  o.s = scaled(sum(down, up, -1.0), 1.0 / (2 * xi));
  o.l = scaled(o.psi, std::sqrt(std::numbers::pi) * std::pow(xi, -0.25));
  o.w_lin = scaled(o.psi_num, 1.0 / (2 * xi));
  const auto pair = product(phi_d, product(phi_d, product(o.phi, o.phi)));
  o.w_spm = scaled(pair, -1.0 / (4 * xi));
  o.w_xpm = scaled(product(o.psi_num, o.phi_num), 1.0 / xi);
  o.l_prime = scaled(product(o.phi, o.phi), -std::sqrt(std::numbers::pi / 4) * std::pow(xi, -1.25));
  o.h_prime = sum(sum(sum(o.h0, o.w_lin), o.w_spm), o.w_xpm);
  return o;
}

QuantumState toy_fock_state(const ToySystem& sys, int n_phi, int n_psi) {
  if (n_phi < 0 || n_phi > sys.n_max_fh || n_psi < 0 || n_psi > sys.n_max_sh)
    fail(ErrorKind::InvalidArgument, "toy Fock state outside cutoffs");
  QuantumState s;
  s.basis_id = sys.basis_id();
  s.pure = true;
  s.psi = VecC::Zero(sys.dim());
  s.psi(sys.index(n_phi, n_psi)) = 1.0;
  return s;
}

double toy_corrected_number(const ToySystem& sys, const ToyOperators& ops,
                            const QuantumState& dressed, double pair0, double t) {
  const SpMat pair = ops.phi.adjoint().mat * ops.phi.adjoint().mat * ops.phi.mat * ops.phi.mat;
  const double xi = sys.xi;
  const cplx c = pair0 / (2 * xi) *
                 std::exp(cplx(-std::numbers::pi * t / (2 * std::sqrt(xi)), -xi * t));
  return dressed.expectation(ops.phi_num.mat).real() + 2 * c.real() / xi -
         dressed.expectation(pair).real() / (2 * xi * xi);
}

LossCurves run_loss_experiment(const ToySystem& sys, int n_phi, double t_final, int n_points,
                               const PropagationOptions& opts) {
  const auto ops = build_toy_operators(sys);
  const QuantumState lab = toy_fock_state(sys, n_phi);
  const SpMat pair = ops.phi.adjoint().mat * ops.phi.adjoint().mat * ops.phi.mat * ops.phi.mat;
  const double pair0 = lab.expectation(pair).real();

  LossCurves c;
  const auto full = lindblad_propagate(lab, TimeDependentOperator::constant(sum(ops.h0, ops.v)),
                                       single(ops.l, "L"), nullptr, t_final, n_points, opts);
  c.times = full.times;
  for (const auto& s : full.states) c.max_top_population = std::max(c.max_top_population, top_population(sys, s));
  c.full = loss_of(numbers(full.states, ops.phi_num.mat));

  const auto cascade_h = TimeDependentOperator::constant(ops.w_spm);
  const auto lp = single(ops.l_prime, "L'");
  const auto naive = lindblad_propagate(lab, cascade_h, lp, nullptr, t_final, n_points, opts);
  c.naive = loss_of(numbers(naive.states, ops.phi_num.mat));

  // Dressed FH-only initial state: exp(S) applied, SH traced out.
  const MatC u = (MatC(ops.s.mat)).exp();
  const VecC d = u * lab.psi;
  MatC rho = MatC::Zero(sys.dim(), sys.dim());
  for (int ns = 0; ns <= sys.n_max_sh; ++ns)
    for (int i = 0; i <= sys.n_max_fh; ++i)
      for (int j = 0; j <= sys.n_max_fh; ++j)
        rho(sys.index(i, 0), sys.index(j, 0)) += d(sys.index(i, ns)) * std::conj(d(sys.index(j, ns)));
  QuantumState dressed;
  dressed.basis_id = sys.basis_id();
  dressed.frame = Frame::SW;
  dressed.pure = false;
  dressed.rho = rho / rho.trace().real();
  const auto mf = lindblad_propagate(dressed, cascade_h, lp, nullptr, t_final, n_points, opts);
  std::vector<double> n;
  for (std::size_t k = 0; k < mf.states.size(); ++k)
    n.push_back(toy_corrected_number(sys, ops, mf.states[k], pair0, mf.times[k]));
  c.meanfield = loss_of(n);

  for (const auto& s : naive.states) c.max_top_population = std::max(c.max_top_population, top_population(sys, s));
  if (c.max_top_population > 1e-8)
    fail(ErrorKind::Numerical, "toy cutoff saturated: raise n_max_fh or n_max_sh");
  return c;
}

AdiabaticResult run_adiabatic_experiment(const ToySystem& base, int n_phi, double xi_i,
                                         double xi_f, double ramp, double t_hold, int n_points,
                                         const PropagationOptions& opts) {
  if (!(std::abs(xi_i) >= std::abs(xi_f)))
    fail(ErrorKind::InvalidArgument, "adiabatic preparation needs |xi_i| >= |xi_f|");
  ToySystem sys = base;
  sys.xi = xi_f;
  const auto ops = build_toy_operators(sys);
  const ChirpSchedule sched{xi_i, xi_f, ramp};
  sched.check();
  const QuantumState lab = toy_fock_state(sys, n_phi);

  // Unitary ramp against the dressed eigenstate at xi_f.
  const auto ur = chirped_propagate(lab, ops.v, ops.psi_num, sched, ramp, 2, opts);
  const MatC hf = MatC(ops.h0.mat + ops.v.mat);
  Eigen::SelfAdjointEigenSolver<MatC> es(hf);
  AdiabaticResult r;
  const Eigen::Index i0 = sys.index(n_phi, 0);
  Eigen::Index best = 0;
  for (Eigen::Index k = 0; k < es.eigenvectors().cols(); ++k)
    if (std::norm(es.eigenvectors()(i0, k)) > std::norm(es.eigenvectors()(i0, best))) best = k;
  r.overlap = std::norm(es.eigenvectors().col(best).dot(ur.states.back().psi));
  r.leakage_flag = r.overlap < 0.95;
  if (r.leakage_flag) warn("adiabatic ramp leaks more than 5% out of the dressed state");

  // Dissipative ramp then hold.
  TimeDependentOperator h;
  h.basis_id = sys.basis_id();
  h.dim = sys.dim();
  h.terms.push_back({ops.v.mat, {}});
  h.terms.push_back({ops.psi_num.mat, [sched](double t) { return cplx(sched.xi(t)); }});
  const double root_pi = std::sqrt(std::numbers::pi);
  LindbladSet ramp_l;
  ramp_l.add({"L", scaled(ops.psi, root_pi), 1.0,
              [sched](double t) { return 1.0 / std::sqrt(std::abs(sched.xi(t))); }});
  QuantumState start = lab;
  if (ramp > 0) start = lindblad_propagate(lab, h, ramp_l, nullptr, ramp, 2, opts).states.back();
  start.frame = Frame::Lab;
  const auto hold = lindblad_propagate(start, TimeDependentOperator::constant(sum(ops.h0, ops.v)),
                                       single(ops.l, "L"), nullptr, t_hold, n_points, opts);
  r.times = hold.times;
  r.loss = loss_of(numbers(hold.states, ops.phi_num.mat));
  const auto naive = lindblad_propagate(lab, TimeDependentOperator::constant(ops.w_spm),
                                        single(ops.l_prime, "L'"), nullptr, t_hold, n_points, opts);
  r.naive = loss_of(numbers(naive.states, ops.phi_num.mat));
  for (std::size_t k = 0; k < r.loss.size(); ++k) {
    r.max_deviation = std::max(r.max_deviation, std::abs(r.loss[k] - r.naive[k]));
    r.max_naive = std::max(r.max_naive, std::abs(r.naive[k]));
  }
  return r;
}

}  // namespace cascade
