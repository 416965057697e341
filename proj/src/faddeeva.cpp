#include <array>
#include <cmath>
#include <numbers>

#include "cascade/params.hpp"

namespace cascade {

namespace {

// Weideman's rational expansion of w(z) in the upper half plane.
constexpr int kTerms = 40;

struct WeidemanTable {
  double L;
  std::array<double, kTerms> a;  // a[n] multiplies Z^n

  WeidemanTable() {
    const int M = 2 * kTerms;
    const int M2 = 2 * M;
    L = std::sqrt(kTerms / std::sqrt(2.0));
    std::vector<double> f(M2, 0.0);
    for (int k = -M + 1; k <= M - 1; ++k) {
      const double th = k * std::numbers::pi / M;
      const double t = L * std::tan(th / 2.0);
      f[k + M] = std::exp(-t * t) * (L * L + t * t);
    }
    // f holds [0, values for k=-M+1..M-1]; fftshift swaps halves.
    std::vector<double> g(M2);
    for (int j = 0; j < M2; ++j) g[j] = f[(j + M) % M2];
    for (int n = 1; n <= kTerms; ++n) {
      double re = 0.0;
      for (int j = 0; j < M2; ++j) {
        re += g[j] * std::cos(2.0 * std::numbers::pi * j * n / M2);
      }
      a[n - 1] = re / M2;
    }
  }
};

const WeidemanTable& table() {
  static const WeidemanTable t;
  return t;
}

cplx w_upper(cplx z) {
  const auto& t = table();
  const cplx i(0.0, 1.0);
  const cplx den = t.L - i * z;
  const cplx Z = (t.L + i * z) / den;
  cplx p = 0.0;
  for (int n = kTerms - 1; n >= 0; --n) p = p * Z + t.a[n];
  return 2.0 * p / (den * den) + (1.0 / std::sqrt(std::numbers::pi)) / den;
}

}  // namespace

cplx faddeeva_w(cplx z) {
  if (z.imag() >= 0.0) return w_upper(z);
  return 2.0 * std::exp(-z * z) - w_upper(-z);
}

cplx erfc_complex(cplx z) {
  const cplx i(0.0, 1.0);
  return std::exp(-z * z) * faddeeva_w(i * z);
}

cplx erf_complex(cplx z) {
  if (std::abs(z) < 0.5) {
    // Maclaurin series keeps relative accuracy near the origin.
    const cplx z2 = z * z;
    cplx term = z;
    cplx sum = z;
    for (int n = 1; n < 40; ++n) {
      term *= -z2 / static_cast<double>(n);
      const cplx add = term / static_cast<double>(2 * n + 1);
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return sum * (2.0 / std::sqrt(std::numbers::pi));
  }
  if (z.real() >= 0.0) return 1.0 - erfc_complex(z);
  return erfc_complex(-z) - 1.0;
}

}  // namespace cascade
