#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "cascade/error.hpp"
#include "cascade/toymodel.hpp"

using namespace cascade;
using Mat = Eigen::MatrixXcd;
using std::numbers::pi;

namespace {

Mat ladder(int n) {
  Mat a = Mat::Zero(n + 1, n + 1);
  for (int k = 1; k <= n; ++k) a(k - 1, k) = std::sqrt(double(k));
  return a;
}

// Kronecker construction: SH factor is the slow index.
struct Dense {
  Mat phi, psi;
  Dense(const ToySystem& s) {
    phi = Eigen::kroneckerProduct(Mat::Identity(s.n_max_sh + 1, s.n_max_sh + 1), ladder(s.n_max_fh));
    psi = Eigen::kroneckerProduct(ladder(s.n_max_sh), Mat::Identity(s.n_max_fh + 1, s.n_max_fh + 1));
  }
};

double maxabs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("toy operators match a Kronecker oracle") {
  const ToySystem sys{37.0, 6, 3};
  const auto o = build_toy_operators(sys);
  const Dense d(sys);
  const Mat pd = d.phi.adjoint(), sd = d.psi.adjoint();
  const double xi = sys.xi;
  CHECK(maxabs(Mat(o.phi.mat) - d.phi) < 1e-13);
  CHECK(maxabs(Mat(o.psi.mat) - d.psi) < 1e-13);
  CHECK(maxabs(Mat(o.h0.mat) - xi * sd * d.psi) < 1e-13);
  CHECK(maxabs(Mat(o.v.mat) - 0.5 * (sd * d.phi * d.phi + pd * pd * d.psi)) < 1e-13);
  CHECK(maxabs(Mat(o.s.mat) - (sd * d.phi * d.phi - pd * pd * d.psi) / (2 * xi)) < 1e-13);
  CHECK(maxabs(Mat(o.l.mat) - std::sqrt(pi) * std::pow(xi, -0.25) * d.psi) < 1e-13);
  CHECK(maxabs(Mat(o.w_lin.mat) - sd * d.psi / (2 * xi)) < 1e-13);
  CHECK(maxabs(Mat(o.w_spm.mat) + pd * pd * d.phi * d.phi / (4 * xi)) < 1e-13);
  CHECK(maxabs(Mat(o.w_xpm.mat) - sd * d.psi * pd * d.phi / xi) < 1e-13);
  CHECK(maxabs(Mat(o.l_prime.mat) + std::sqrt(pi / 4) * std::pow(xi, -1.25) * d.phi * d.phi) < 1e-13);
  for (const auto* h : {&o.h0, &o.v, &o.w_lin, &o.w_spm, &o.w_xpm, &o.h_prime})
    CHECK(h->hermiticity_error() < 1e-14);
  CHECK(o.s.antihermiticity_error() < 1e-14);
  CHECK(o.phi.basis_id == sys.basis_id());
}

TEST_CASE("toy SW condition and charge conservation") {
  for (double xi : {5.0, 20.0, 200.0}) {
    const ToySystem sys{xi, 6, 3};
    const auto o = build_toy_operators(sys);
    const Mat h0(o.h0.mat), s(o.s.mat), v(o.v.mat);
    CHECK(maxabs(h0 * s - s * h0 - v) < 1e-12);
    const Mat q = Mat(o.phi_num.mat) + 2.0 * Mat(o.psi_num.mat);
    const Mat h = h0 + v;
    CHECK(maxabs(h * q - q * h) < 1e-12);
  }
}

TEST_CASE("cascade two-photon loss rate equals dressed SH decay") {
  for (double xi : {50.0, 400.0}) {
    const ToySystem sys{xi, 6, 3};
    const auto o = build_toy_operators(sys);
    const auto two = toy_fock_state(sys, 2);
    const double cascade = (o.l_prime.mat * two.psi).squaredNorm();
    const Eigen::VectorXcd dressed = Mat(o.s.mat).exp() * two.psi;
    const double sh = std::norm(dressed(sys.index(0, 1)));
    CHECK(cascade == doctest::Approx(pi / std::sqrt(xi) * sh).epsilon(2.0 / (xi * xi)));
  }
}

TEST_CASE("toy SH photon decays at pi over root xi") {
  const ToySystem sys{100.0, 6, 3};
  const auto o = build_toy_operators(sys);
  LindbladSet l;
  l.add({"L", o.l, 1.0, {}});
  const double kappa = pi / std::sqrt(sys.xi);
  const double half = std::log(2.0) / kappa;
  const auto r = lindblad_propagate(toy_fock_state(sys, 0, 1),
                                    TimeDependentOperator::constant({o.h0.basis_id, SpMat(o.h0.mat + o.v.mat)}),
                                    l, nullptr, half, 11);
  std::vector<double> x, y;
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    x.push_back(r.times[k]);
    y.push_back(std::log(r.states[k].expectation(o.psi_num.mat).real()));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = x.size();
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k]; sy += y[k]; sxx += x[k] * x[k]; sxy += x[k] * y[k];
  }
  const double rate = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(rate == doctest::Approx(kappa).epsilon(0.02));
}

TEST_CASE("corrected observable at t = 0") {
  for (double xi : {20.0, 100.0}) {
    const ToySystem sys{xi, 6, 3};
    const auto o = build_toy_operators(sys);
    const auto two = toy_fock_state(sys, 2);
    // <phi^dag2 phi^2> = 2, so the SH correlator starts at 1 / xi.
    CHECK(toy_corrected_number(sys, o, two, 2.0, 0.0) == doctest::Approx(2 + 1 / (xi * xi)).epsilon(1e-14));
    CHECK(toy_corrected_number(sys, o, two, 2.0, pi / xi) ==
          doctest::Approx(2 - 2 / (xi * xi) * std::exp(-pi * pi / (2 * std::pow(xi, 1.5))) - 1 / (xi * xi))
              .epsilon(1e-14));
  }
}

TEST_CASE("loss experiment") {
  const ToySystem sys{100.0, 6, 3};
  const auto one = run_loss_experiment(sys, 1, 5.0, 11);
  for (std::size_t k = 0; k < one.times.size(); ++k) {
    CHECK(std::abs(one.full[k]) < 1e-9);
    CHECK(std::abs(one.naive[k]) < 1e-9);
    CHECK(std::abs(one.meanfield[k]) < 1e-9);
  }
  const auto c = run_loss_experiment(sys, 2, 20.0, 201);
  double dev = 0, top = 0, off = 0;
  int n = 0;
  for (std::size_t k = 0; k < c.times.size(); ++k) {
    dev = std::max(dev, std::abs(c.meanfield[k] - c.full[k]));
    top = std::max(top, std::abs(c.full[k]));
    if (c.times[k] >= 10) {
      off += c.full[k] - c.naive[k];
      ++n;
    }
  }
  CHECK(dev < 0.1 * top);
  CHECK(off / n * sys.xi * sys.xi == doctest::Approx(1.0).epsilon(0.5));
  CHECK(c.max_top_population < 1e-8);
  CHECK_THROWS_AS(run_loss_experiment(sys, 6, 1.0, 3), Error);
}

TEST_CASE("adiabatic preparation") {
  const ToySystem sys{20.0, 6, 3};
  const auto a = run_adiabatic_experiment(sys, 2, 200, 20, 9, 10, 51);
  CHECK(a.overlap > 0.99);
  CHECK_FALSE(a.leakage_flag);
  CHECK(a.max_deviation < 0.05 * a.max_naive);

  // A sudden ramp reproduces the lab-frame run at xi_f.
  const auto s = run_adiabatic_experiment(sys, 2, 200, 20, 1e-7, 10, 51);
  const auto full = run_loss_experiment(sys, 2, 10, 51);
  for (std::size_t k = 0; k < s.loss.size(); ++k) CHECK(std::abs(s.loss[k] - full.full[k]) < 1e-6);
  CHECK(s.max_deviation > 0.05 * s.max_naive);

  const auto same = run_adiabatic_experiment(sys, 2, 200, 200, 1.0, 1.0, 3);
  CHECK(same.overlap == doctest::Approx(1.0).epsilon(1e-4));
  CHECK_THROWS_AS(run_adiabatic_experiment(sys, 2, 20, 200, 9, 1, 3), Error);
}
