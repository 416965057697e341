#include "cascade/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cascade/error.hpp"
#include "cascade/linalg.hpp"
#include "cascade/parallel.hpp"

namespace cascade {

namespace {

using Mat = Eigen::MatrixXcd;
using Rhs = std::function<void(double, const Mat&, Mat&)>;
const cplx kI(0.0, 1.0);

// Dormand-Prince 5(4) with first-same-as-last reuse.
class Dp5 {
 public:
  Dp5(Rhs f, double rtol, double atol) : f_(std::move(f)), rtol_(rtol), atol_(atol) {}

  void reset() { have_k1_ = false; }

  // Returns the scaled error norm; ynew holds the 5th-order solution.
  double trial(double t, const Mat& y, double h, Mat& ynew) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    if (!have_k1_) {
      f_(t, y, k_[0]);
      have_k1_ = true;
    }
    tmp_ = y + h * a21 * k_[0];
    f_(t + c2 * h, tmp_, k_[1]);
    tmp_ = y + h * (a31 * k_[0] + a32 * k_[1]);
    f_(t + c3 * h, tmp_, k_[2]);
    tmp_ = y + h * (a41 * k_[0] + a42 * k_[1] + a43 * k_[2]);
    f_(t + c4 * h, tmp_, k_[3]);
    tmp_ = y + h * (a51 * k_[0] + a52 * k_[1] + a53 * k_[2] + a54 * k_[3]);
    f_(t + c5 * h, tmp_, k_[4]);
    tmp_ = y + h * (a61 * k_[0] + a62 * k_[1] + a63 * k_[2] + a64 * k_[3] + a65 * k_[4]);
    f_(t + h, tmp_, k_[5]);
    ynew = y + h * (b1 * k_[0] + b3 * k_[2] + b4 * k_[3] + b5 * k_[4] + b6 * k_[5]);
    f_(t + h, ynew, k_[6]);
    tmp_ = h * (e1 * k_[0] + e3 * k_[2] + e4 * k_[3] + e5 * k_[4] + e6 * k_[5] +
                e7 * k_[6]);
    double acc = 0.0;
    for (Eigen::Index j = 0; j < y.size(); ++j) {
      const double sc = atol_ + rtol_ * std::max(std::abs(y.data()[j]), std::abs(ynew.data()[j]));
      const double r = std::abs(tmp_.data()[j]) / sc;
      acc += r * r;
    }
    return std::sqrt(acc / std::max<Eigen::Index>(1, y.size()));
  }

  void accept() { k_[0].swap(k_[6]); }

  double initial_step(double t, const Mat& y) {
    if (!have_k1_) {
      f_(t, y, k_[0]);
      have_k1_ = true;
    }
    const double d = k_[0].norm();
    const double n = std::max(y.norm(), 1e-12);
    return d > 0 ? 0.01 * n / d : 1e-3;
  }

 private:
  Rhs f_;
  double rtol_;
  double atol_;
  bool have_k1_ = false;
  Mat k_[7];
  Mat tmp_;
};

double next_step(double h, double err) {
  const double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
  return h * std::clamp(fac, 0.2, 5.0);
}

// Advances y from t to t_end exactly.
void advance(Dp5& dp, double& t, Mat& y, double t_end, double& h, double max_step,
             PropagationResult& res) {
  Mat ynew;
  while (t < t_end) {
    double step = std::min(h, t_end - t);
    if (max_step > 0) step = std::min(step, max_step);
    if (t_end - (t + step) < 1e-12 * std::max(1.0, std::abs(t_end))) step = t_end - t;
    const double err = dp.trial(t, y, step, ynew);
    if (!std::isfinite(err)) {
      fail(ErrorKind::Numerical, "integrator produced non-finite values");
    }
    if (err <= 1.0) {
      t = (step == t_end - t) ? t_end : t + step;
      y.swap(ynew);
      dp.accept();
      ++res.steps;
      h = next_step(step, err);
    } else {
      ++res.rejected;
      h = next_step(step, err);
      if (h < 1e-14 * std::max(1.0, std::abs(t))) {
        fail(ErrorKind::Numerical, "step size underflow in adaptive integrator");
      }
    }
  }
}

void check_hermitian(const SparseOperator& H) {
  const double e = H.hermiticity_error();
  if (e > 1e-10) {
    std::ostringstream os;
    os << "Hamiltonian is not Hermitian (max |H - H^dag| = " << e << ")";
    fail(ErrorKind::InvalidArgument, os.str());
  }
}

void emit(PropagationResult& res, const PropagationOptions& opts, double t,
          QuantumState s) {
  res.times.push_back(t);
  if (opts.observer) opts.observer(t, s);
  if (opts.store_states) res.states.push_back(std::move(s));
}

// exp(-i H dt) psi by Lanczos; returns the error estimate.
double lanczos_step(const SpMat& H, Eigen::VectorXcd& psi, double dt, int m_max) {
  const double beta0 = psi.norm();
  if (beta0 == 0.0) return 0.0;
  const Eigen::Index n = psi.size();
  const int m_cap = static_cast<int>(std::min<Eigen::Index>(m_max, n));
  Mat V(n, m_cap + 1);
  Eigen::VectorXd alpha(m_cap), beta(m_cap);
  V.col(0) = psi / beta0;
  int m = m_cap;
  double beta_last = 0.0;
  for (int j = 0; j < m_cap; ++j) {
    Eigen::VectorXcd w = H * V.col(j);
    alpha(j) = V.col(j).dot(w).real();
    w -= alpha(j) * V.col(j);
    if (j > 0) w -= beta(j - 1) * V.col(j - 1);
    for (int r = 0; r <= j; ++r) w -= V.col(r).dot(w) * V.col(r);
    beta(j) = w.norm();
    if (beta(j) < 1e-12 * beta0 || j + 1 == m_cap) {
      m = j + 1;
      beta_last = beta(j) < 1e-12 * beta0 ? 0.0 : beta(j);
      if (beta_last > 0) V.col(j + 1) = w / beta(j);
      break;
    }
    V.col(j + 1) = w / beta(j);
  }
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    T(j, j) = alpha(j);
    if (j + 1 < m) T(j, j + 1) = T(j + 1, j) = beta(j);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  Eigen::VectorXcd c(m);
  for (int k = 0; k < m; ++k) {
    c(k) = std::exp(-kI * es.eigenvalues()(k) * dt) * es.eigenvectors()(0, k);
  }
  const Eigen::VectorXcd y = es.eigenvectors().cast<cplx>() * c;
  psi = beta0 * (V.leftCols(m) * y);
  return beta0 * beta_last * std::abs(y(m - 1));
}

}  // namespace

void ChirpSchedule::check() const {
  if (!(ramp_duration > 0.0)) fail(ErrorKind::InvalidArgument, "ramp duration must be positive");
  if (hold_duration < 0.0) fail(ErrorKind::InvalidArgument, "hold duration must be >= 0");
  if (!std::isfinite(xi_initial) || !std::isfinite(xi_final)) {
    fail(ErrorKind::InvalidArgument, "chirp endpoints must be finite");
  }
}

double ChirpSchedule::xi(double t) const {
  const double s = std::clamp(t / ramp_duration, 0.0, 1.0);
  const double w = profile == ChirpProfile::Linear ? s : s * s * (3.0 - 2.0 * s);
  return xi_initial + (xi_final - xi_initial) * w;
}

double ChirpSchedule::xi_rate(double t) const {
  if (t < 0.0 || t >= ramp_duration) return 0.0;
  const double s = t / ramp_duration;
  const double dw = profile == ChirpProfile::Linear ? 1.0 : 6.0 * s * (1.0 - s);
  return (xi_final - xi_initial) * dw / ramp_duration;
}

std::vector<double> snapshot_times(double t_final, int n) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "need at least two snapshots");
  if (!(t_final >= 0.0)) fail(ErrorKind::InvalidArgument, "t_final must be >= 0");
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = t_final * i / (n - 1);
  t.back() = t_final;
  return t;
}

PropagationResult unitary_propagate(const QuantumState& state, const SparseOperator& H,
                                    double t_final, int n_snapshots,
                                    const PropagationOptions& opts) {
  if (!state.pure) fail(ErrorKind::InvalidArgument, "unitary propagation needs a pure state");
  if (state.basis_id != H.basis_id) fail(ErrorKind::InvalidArgument, "state and H bases differ");
  check_hermitian(H);
  const auto times = snapshot_times(t_final, n_snapshots);
  PropagationResult res;
  const double e0 = state.psi.dot(H.mat * state.psi).real();
  auto record = [&](double t, Eigen::VectorXcd psi) {
    res.max_norm_drift = std::max(res.max_norm_drift, std::abs(psi.norm() - 1.0));
    const double e = psi.dot(H.mat * psi).real();
    res.max_energy_drift = std::max(res.max_energy_drift, std::abs(e - e0));
    QuantumState s = state;
    s.psi = std::move(psi);
    emit(res, opts, t, std::move(s));
  };

  if (H.dim() <= kDenseLimit) {
    res.method = "dense_eig";
    Eigen::SelfAdjointEigenSolver<Mat> es{Mat(H.mat)};
    const Eigen::VectorXcd c = es.eigenvectors().adjoint() * state.psi;
    for (double t : times) {
      Eigen::VectorXcd ct(c.size());
      for (Eigen::Index k = 0; k < c.size(); ++k) {
        ct(k) = std::exp(-kI * es.eigenvalues()(k) * t) * c(k);
      }
      record(t, es.eigenvectors() * ct);
    }
  } else {
    res.method = "krylov";
    Eigen::VectorXcd psi = state.psi;
    double t = 0.0;
    double dt = std::max(t_final / 64.0, 1e-6);
    const double tol = 1e-11;
    for (double target : times) {
      while (t < target) {
        double step = std::min(dt, target - t);
        if (opts.max_step > 0) step = std::min(step, opts.max_step);
        Eigen::VectorXcd trial = psi;
        const double err = lanczos_step(H.mat, trial, step, 40);
        if (err <= tol * std::max(step / std::max(t_final, 1e-300), 1e-3)) {
          psi.swap(trial);
          t = (step == target - t) ? target : t + step;
          ++res.steps;
          dt = step * 1.5;
        } else {
          ++res.rejected;
          dt = step * 0.5;
          if (dt < 1e-14) fail(ErrorKind::Numerical, "Krylov step size underflow");
        }
      }
      record(target, psi);
    }
  }
  if (res.max_norm_drift > 1e-6) {
    fail(ErrorKind::Numerical, "norm drift exceeded 1e-6 during unitary propagation");
  }
  return res;
}

PropagationResult lindblad_propagate(const QuantumState& state,
                                     const TimeDependentOperator& H,
                                     const LindbladSet& lindblads,
                                     const Superoperator* extra, double t_final,
                                     int n_snapshots, const PropagationOptions& opts) {
  if (state.basis_id != H.basis_id) fail(ErrorKind::InvalidArgument, "state and H bases differ");
  const Eigen::Index n = state.dim();
  struct Jump {
    SpMat L, Ld, LdL;
    double weight;
    std::function<double(double)> env;
  };
  std::vector<Jump> jumps;
  for (const auto& t : lindblads.terms) {
    if (t.op.basis_id != state.basis_id) {
      fail(ErrorKind::InvalidArgument, "Lindblad operator on a different basis");
    }
    SpMat Ld = t.op.mat.adjoint();
    SpMat LdL = Ld * t.op.mat;
    jumps.push_back({t.op.mat, Ld, LdL, t.weight, t.rate_envelope});
  }
  if (extra && extra->basis_id != state.basis_id) {
    fail(ErrorKind::InvalidArgument, "extra superoperator on a different basis");
  }
  Rhs f = [&](double t, const Mat& rho, Mat& out) {
    SpMat K = H.at(t);
    for (const auto& j : jumps) {
      const double r = j.weight * (j.env ? j.env(t) : 1.0);
      if (r != 0.0) K -= cplx(0.0, 0.5 * r) * j.LdL;
    }
    const SpMat Kd = K.adjoint();
    out.noalias() = -kI * (K * rho);
    out.noalias() += kI * (rho * Kd);
    for (const auto& j : jumps) {
      const double r = j.weight * (j.env ? j.env(t) : 1.0);
      if (r == 0.0) continue;
      const Mat Lr = j.L * rho;
      out.noalias() += r * (Lr * j.Ld);
    }
    if (extra) out += extra->apply(rho);
  };

  PropagationResult res;
  res.method = "dense_rk";
  Mat rho = state.density();
  Dp5 dp(f, opts.rtol, opts.atol);
  double t = 0.0;
  double h = dp.initial_step(0.0, rho);
  for (double target : snapshot_times(t_final, n_snapshots)) {
    advance(dp, t, rho, target, h, opts.max_step, res);
    res.max_norm_drift = std::max(res.max_norm_drift, std::abs(1.0 - rho.trace()));
    res.max_hermiticity_error =
        std::max(res.max_hermiticity_error, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    if (n <= 800) {
      Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()),
                                            Eigen::EigenvaluesOnly);
      res.min_eigenvalue = std::min(res.min_eigenvalue, es.eigenvalues()(0));
      if (es.eigenvalues()(0) < -1e-7) {
        std::ostringstream os;
        os << "density matrix lost positivity at t=" << t
           << " (min eigenvalue " << es.eigenvalues()(0) << ")";
        fail(ErrorKind::Numerical, os.str());
      }
    }
    QuantumState s = state;
    s.pure = false;
    s.psi.resize(0);
    s.rho = rho;
    emit(res, opts, target, std::move(s));
  }
  return res;
}

TrajectoryResult trajectories_propagate(const QuantumState& state,
                                        const TimeDependentOperator& H,
                                        const LindbladSet& lindblads,
                                        const std::vector<SpMat>& tracked,
                                        double t_final, int n_snapshots,
                                        const TrajectoryOptions& opts) {
  if (!state.pure) fail(ErrorKind::InvalidArgument, "trajectories need a pure initial state");
  if (opts.n_traj < 1) fail(ErrorKind::InvalidArgument, "n_traj must be >= 1");
  const auto times = snapshot_times(t_final, n_snapshots);
  const std::size_t ns = times.size();
  const std::size_t nk = tracked.size();
  const Eigen::Index dim = state.dim();

  struct Jump {
    SpMat L, LdL;
    double weight;
    std::function<double(double)> env;
  };
  std::vector<Jump> jumps;
  for (const auto& t : lindblads.terms) {
    jumps.push_back({t.op.mat, SpMat(SpMat(t.op.mat.adjoint()) * t.op.mat), t.weight,
                     t.rate_envelope});
  }
  auto rate = [&](const Jump& j, double t) { return j.weight * (j.env ? j.env(t) : 1.0); };

  struct Acc {
    std::vector<double> sum, sq;
    std::vector<Mat> rho;
    std::size_t jumps = 0;
  };
  constexpr std::size_t kChunk = 16;
  const std::size_t n_chunks = (static_cast<std::size_t>(opts.n_traj) + kChunk - 1) / kChunk;
  std::vector<Acc> chunks(n_chunks);

  auto run_one = [&](std::size_t idx, Acc& acc) {
    std::seed_seq seq{static_cast<std::uint32_t>(opts.seed),
                      static_cast<std::uint32_t>(opts.seed >> 32),
                      static_cast<std::uint32_t>(idx),
                      static_cast<std::uint32_t>(static_cast<std::uint64_t>(idx) >> 32)};
    std::mt19937_64 rng(seq);
    auto uniform = [&rng] {
      return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    };
    Rhs f = [&](double t, const Mat& y, Mat& out) {
      SpMat K = H.at(t);
      for (const auto& j : jumps) {
        const double r = rate(j, t);
        if (r != 0.0) K -= cplx(0.0, 0.5 * r) * j.LdL;
      }
      out.noalias() = -kI * (K * y);
    };
    Dp5 dp(f, opts.rtol, opts.atol);
    Mat y = state.psi;
    double t = 0.0;
    double threshold = uniform();
    double h = dp.initial_step(0.0, y);
    Mat ynew;
    for (std::size_t s = 0; s < ns; ++s) {
      const double target = times[s];
      while (t < target) {
        double step = std::min(h, target - t);
        if (target - (t + step) < 1e-12 * std::max(1.0, target)) step = target - t;
        const double err = dp.trial(t, y, step, ynew);
        if (!(err <= 1.0)) {
          h = next_step(step, err);
          if (h < 1e-14) fail(ErrorKind::Numerical, "trajectory step underflow");
          continue;
        }
        if (ynew.squaredNorm() > threshold) {
          t = (step == target - t) ? target : t + step;
          y.swap(ynew);
          dp.accept();
          h = next_step(step, err);
          continue;
        }
        // Locate the jump time by bisection on the step fraction.
        double lo = 0.0, hi = 1.0;
        Mat ylo = y, yhi = ynew, probe;
        for (int it = 0; it < 60 && (hi - lo) * step > 1e-13; ++it) {
          const double mid = 0.5 * (lo + hi);
          dp.reset();
          dp.trial(t, y, mid * step, probe);
          if (probe.squaredNorm() > threshold) {
            lo = mid;
            ylo = probe;
          } else {
            hi = mid;
            yhi = probe;
          }
        }
        t += hi * step;
        y = yhi;
        std::vector<double> w(jumps.size());
        double total = 0.0;
        for (std::size_t k = 0; k < jumps.size(); ++k) {
          w[k] = rate(jumps[k], t) * (jumps[k].L * y).squaredNorm();
          total += w[k];
        }
        if (total > 0.0) {
          double pick = uniform() * total;
          std::size_t k = 0;
          while (k + 1 < w.size() && pick >= w[k]) pick -= w[k++];
          Mat jumped = jumps[k].L * y;
          y = jumped / jumped.norm();
          ++acc.jumps;
        } else {
          y /= y.norm();
        }
        threshold = uniform();
        dp.reset();
        h = std::max(h * 0.5, 1e-8);
      }
      const double nrm2 = y.squaredNorm();
      for (std::size_t k = 0; k < nk; ++k) {
        const Mat ty = tracked[k] * y;
        const double v = y.col(0).dot(ty.col(0)).real() / nrm2;
        acc.sum[k * ns + s] += v;
        acc.sq[k * ns + s] += v * v;
      }
      if (opts.average_states) acc.rho[s] += y * y.adjoint() / nrm2;
    }
  };

  parallel_for(n_chunks, opts.threads, [&](std::size_t c) {
    Acc& acc = chunks[c];
    acc.sum.assign(nk * ns, 0.0);
    acc.sq.assign(nk * ns, 0.0);
    if (opts.average_states) acc.rho.assign(ns, Mat::Zero(dim, dim));
    const std::size_t end = std::min<std::size_t>((c + 1) * kChunk, opts.n_traj);
    for (std::size_t i = c * kChunk; i < end; ++i) run_one(i, acc);
  });

  TrajectoryResult out;
  out.times = times;
  std::vector<double> sum(nk * ns, 0.0), sq(nk * ns, 0.0);
  if (opts.average_states) out.average_density.assign(ns, Mat::Zero(dim, dim));
  for (const auto& acc : chunks) {
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += acc.sum[i];
      sq[i] += acc.sq[i];
    }
    for (std::size_t s = 0; s < out.average_density.size(); ++s) out.average_density[s] += acc.rho[s];
    out.jumps += acc.jumps;
  }
  const double n = opts.n_traj;
  out.mean.assign(nk, std::vector<double>(ns));
  out.stderr_.assign(nk, std::vector<double>(ns));
  for (std::size_t k = 0; k < nk; ++k) {
    for (std::size_t s = 0; s < ns; ++s) {
      const double m = sum[k * ns + s] / n;
      const double var = n > 1 ? std::max(0.0, (sq[k * ns + s] - n * m * m) / (n - 1)) : 0.0;
      out.mean[k][s] = m;
      out.stderr_[k][s] = std::sqrt(var / n);
    }
  }
  for (auto& r : out.average_density) r /= n;
  return out;
}

PropagationResult chirped_propagate(const QuantumState& state, const SparseOperator& H_static,
                                    const SparseOperator& H_xi, const ChirpSchedule& schedule,
                                    double t_final, int n_snapshots,
                                    const PropagationOptions& opts) {
  schedule.check();
  if (!state.pure) fail(ErrorKind::InvalidArgument, "chirped propagation needs a pure state");
  if (state.basis_id != H_static.basis_id || state.basis_id != H_xi.basis_id) {
    fail(ErrorKind::InvalidArgument, "state and Hamiltonian bases differ");
  }
  check_hermitian(H_static);
  check_hermitian(H_xi);
  const double sq3 = std::sqrt(3.0);
  const double c1 = 0.5 - sq3 / 6.0, c2 = 0.5 + sq3 / 6.0;
  const double a1 = (3.0 - 2.0 * sq3) / 12.0, a2 = (3.0 + 2.0 * sq3) / 12.0;

  PropagationResult res;
  res.method = "magnus4";
  Eigen::VectorXcd psi = state.psi;
  double t = 0.0;
  std::string regime = opts.regime_of ? opts.regime_of(schedule.xi(0.0)) : "";
  auto record = [&](double tt) {
    res.max_norm_drift = std::max(res.max_norm_drift, std::abs(psi.norm() - 1.0));
    res.xi.push_back(schedule.xi(tt));
    QuantumState s = state;
    s.psi = psi;
    emit(res, opts, tt, std::move(s));
  };
  for (double target : snapshot_times(t_final, n_snapshots)) {
    while (t < target) {
      double end = target;
      if (t < schedule.ramp_duration) end = std::min(end, schedule.ramp_duration);
      double h = end - t;
      const double rate = std::abs(schedule.xi_rate(t));
      if (rate > 0.0) {
        const double xi_now = std::max(std::abs(schedule.xi(t)), 1e-12);
        h = std::min(h, 1e-3 * xi_now / rate);
      }
      if (opts.max_step > 0) h = std::min(h, opts.max_step);
      if (end - (t + h) < 1e-12 * std::max(1.0, end)) h = end - t;
      const double x1 = schedule.xi(t + c1 * h), x2 = schedule.xi(t + c2 * h);
      const SpMat B1 = (a1 + a2) * H_static.mat + (a2 * x1 + a1 * x2) * H_xi.mat;
      const SpMat B2 = (a1 + a2) * H_static.mat + (a1 * x1 + a2 * x2) * H_xi.mat;
      psi = expm_action(B1, psi, cplx(0.0, -h));
      psi = expm_action(B2, psi, cplx(0.0, -h));
      t = (h == end - t) ? end : t + h;
      ++res.steps;
      if (opts.regime_of) {
        const std::string r = opts.regime_of(schedule.xi(t));
        if (r != regime) {
          std::ostringstream os;
          os << "chirp leaves the " << regime << " regime at t=" << t << " (xi=" << schedule.xi(t)
             << ", now " << r << ")";
          warn(os.str());
          regime = r;
        }
      }
    }
    record(target);
  }
  if (res.max_norm_drift > 1e-6) {
    fail(ErrorKind::Numerical, "norm drift exceeded 1e-6 during chirped propagation");
  }
  return res;
}

}  // namespace cascade
