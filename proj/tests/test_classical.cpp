#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "cascade/classical.hpp"
#include "cascade/error.hpp"
#include "fit.hpp"

using namespace cascade;
using std::numbers::pi;

namespace {

ClassicalField bump(double L, std::size_t n, double amp, double shift = 0.0) {
  return sample_field(L, n, Band::FH, [=](double y) {
    const double u = y - L / 2;
    return amp * std::exp(-u * u / 2) * std::polar(1.0, 2 * pi * shift * y / L);
  });
}

ClassicalField zeros(double L, std::size_t n) {
  return sample_field(L, n, Band::SH, [](double) { return cplx(0); });
}

}  // namespace

TEST_CASE("field validation") {
  CHECK_THROWS_AS((ClassicalField{1.0, Band::FH, std::vector<cplx>(6)}.check()), Error);
  CHECK_NOTHROW((ClassicalField{1.0, Band::FH, std::vector<cplx>(8)}.check()));
  const auto a = bump(8, 16, 1), b = zeros(8, 16);
  CHECK_THROWS_AS(split_step_coupled_wave(a, b, {1, 10, 0, -1}, 1.0, 0.01), Error);
  CHECK_THROWS_AS(split_step_coupled_wave(a, zeros(8, 32), {1, 1, 0, -1}, 1.0, 0.01), Error);
  CHECK(field_csv(a).rfind("y,re,im\n", 0) == 0);
  CHECK(spectrum_csv(a).rfind("s,p,abs\n-8,", 0) == 0);
}

TEST_CASE("linear SH evolution keeps mode magnitudes") {
  const double L = 6;
  const auto phi = zeros(L, 32);
  auto psi = sample_field(L, 32, Band::SH, [&](double y) {
    return std::polar(1.0, 2 * pi * y / L) + 0.5 * std::polar(1.0, -6 * pi * y / L) + 0.2;
  });
  const auto r = split_step_coupled_wave(phi, psi, {1, 0, 0.7, -1}, 2.0, 0.01);
  const auto s0 = psi.spectrum(), s1 = r.psi.spectrum();
  for (std::size_t k = 0; k < s0.size(); ++k) CHECK(std::abs(std::abs(s1[k]) - std::abs(s0[k])) < 1e-10);
  // phase of mode s = 1 is exp(-i E t), E = -xi + gamma p + beta p^2 / 2 at p = 1/L
  const double p = 1 / L, e = 0.7 * p - p * p / 2;
  CHECK(std::abs(s1[1] - s0[1] * std::polar(1.0, -e * 2.0)) < 1e-10);
}

TEST_CASE("plane wave drives the adiabatic SH amplitude") {
  const auto phi = sample_field(1, 8, Band::FH, [](double) { return cplx(1); });
  const auto r = split_step_coupled_wave(phi, zeros(1, 8), {1, 10, 0, -1}, 20.0, 0.001);
  cplx avg = 0;
  for (auto c : r.psi_probe) avg += c;
  avg /= static_cast<double>(r.psi_probe.size());
  CHECK(std::abs(avg) == doctest::Approx(0.05).epsilon(0.2));
}

TEST_CASE("coupled-wave invariants") {
  const double L = 12;
  const auto phi = bump(L, 128, 1.2, 1.0);
  auto psi = sample_field(L, 128, Band::SH, [&](double y) {
    const double u = y - L / 2 - 1;
    return cplx(0.3, 0.1) * std::exp(-u * u);
  });
  const SystemParams p{1, 10, 0.4, -1};
  const auto r = split_step_coupled_wave(phi, psi, p, 2.0, 0.0005);
  const auto inv = classical_invariants(phi, psi, p);
  CHECK(r.max_charge_drift < 1e-8 * inv.charge);
  CHECK(r.max_momentum_drift < 1e-8 * inv.charge);
  CHECK(r.max_energy_drift < 1e-6);
  CHECK(r.steps == 4000);
}

TEST_CASE("Strang splitting is second order") {
  const double L = 10;
  const auto phi = bump(L, 64, 1.5);
  const auto psi = zeros(L, 64);
  const SystemParams p{1, 5, 0, -1};
  const auto ref = split_step_coupled_wave(phi, psi, p, 1.0, 0.00025);
  const double e1 = relative_l2(split_step_coupled_wave(phi, psi, p, 1.0, 0.008).phi, ref.phi);
  const double e2 = relative_l2(split_step_coupled_wave(phi, psi, p, 1.0, 0.004).phi, ref.phi);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("NLSE plane-wave self-phase is exact") {
  const cplx A(0.8, 0.6);
  const SystemParams p{1, 20, 0, -1};
  const auto phi = sample_field(3, 16, Band::FH, [&](double) { return A; });
  const auto r = split_step_nlse(phi, p, 2.0, 0.001);
  const cplx exact = A * std::polar(1.0, -std::norm(A) * 2.0 / (2 * 20));
  for (auto c : r.samples) {
    CHECK(std::abs(c - exact) < 1e-10);
    CHECK(std::abs(std::abs(c) - 1.0) < 1e-10);
  }
  const auto g = split_step_nlse(bump(8, 64, 2.0, 1.0), {-1, 5, 0, 1}, 2.0, 0.005);
  CHECK(std::abs(g.norm2() - bump(8, 64, 2.0, 1.0).norm2()) < 1e-10 * g.norm2());
}

TEST_CASE("coupled-wave FH approaches the NLSE as one over xi") {
  const double L = 10;
  std::vector<double> xs, err;
  for (double xi : {25.0, 50.0, 100.0, 200.0}) {
    const SystemParams p{1, xi, 0, -1};
    const auto phi = bump(L, 64, std::sqrt(xi));
    const double dt = 0.02 / xi;
    const auto cw = split_step_coupled_wave(phi, zeros(L, 64), p, 2.0, dt);
    const auto nl = split_step_nlse(phi, p, 2.0, dt);
    xs.push_back(xi);
    err.push_back(relative_l2(cw.phi, nl));
  }
  CHECK(fit::loglog_slope(xs, err) == doctest::Approx(-1.0).epsilon(0.3));
}

TEST_CASE("heat-kernel potential") {
  const double L = 40, sigma = 1, xi = 10;
  const auto v = sample_field(L, 512, Band::SH, [&](double y) {
    const double u = y - L / 2;
    return cplx(2.0) * std::exp(-u * u / (4 * sigma * sigma));
  });
  const PotentialSpec spec{v, xi, -1.0, 1.0};
  const auto V = static_potential(spec);
  const auto V0 = heat_kernel_potential(spec, 0.0);
  for (std::size_t k = 0; k < V.size(); ++k) CHECK(V0[k] == V[k]);
  CHECK(V[256].real() == doctest::Approx(-0.4));

  for (double t : {1.0, 20.0, 8 * pi * pi}) {
    const auto W = heat_kernel_potential(spec, t);
    const cplx tp(0, -t / (8 * pi * pi));
    const cplx var = sigma * sigma + 2.0 * tp;
    double err = 0;
    cplx s0 = 0, s1 = 0;
    for (std::size_t k = 0; k < W.size(); ++k) {
      const double u = v.y(k) - L / 2;
      const cplx exact = -0.4 * sigma / std::sqrt(var) * std::exp(-u * u / (2.0 * var));
      err = std::max(err, std::abs(W[k] - exact));
      s0 += V[k];
      s1 += W[k];
    }
    CHECK(err < 1e-6);
    CHECK(std::abs(s1 - s0) < 1e-8 * std::abs(s0));
  }
  // Peak drops by 2^{-1/4} when the coherence time 4 pi^2 sigma^2 / |beta| has passed.
  const auto W = heat_kernel_potential(spec, 4 * pi * pi * sigma * sigma);
  CHECK(std::abs(W[256]) / 0.4 == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-9));
  CHECK_THROWS_AS(heat_kernel_potential({v, xi, 0.0, 1.0}, 1.0), Error);
}
