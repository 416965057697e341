#include "cascade/observables.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <numbers>

#include "cascade/error.hpp"

namespace cascade {

SpatialGrid SpatialGrid::uniform(double L, int n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "spatial grid needs n >= 1");
  SpatialGrid g{L, {}};
  for (int k = 0; k < n; ++k) g.y.push_back(L * k / n);
  return g;
}

SpatialGrid SpatialGrid::centered(double L, int n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "spatial grid needs n >= 1");
  SpatialGrid g{L, {}};
  for (int k = -n / 2; k <= n / 2; ++k) g.y.push_back(L * k / n);
  return g;
}

void SpatialGrid::check() const {
  if (!(L > 0)) fail(ErrorKind::InvalidArgument, "spatial grid needs L > 0");
  for (double v : y)
    if (!std::isfinite(v) || std::abs(v) > L)
      fail(ErrorKind::InvalidArgument, "spatial point outside one window length");
}

SparseOperator spatial_annihilator(const FockBasis& basis, bool sh, double y) {
  const ModeGrid& g = basis.grid();
  const int pmax = sh ? g.p_psi : g.p_phi;
  const double norm = 1.0 / std::sqrt(g.L);
  SparseOperator out{basis.id(), SpMat(basis.dim(), basis.dim())};
  for (int p = -pmax; p <= pmax; ++p) {
    const cplx phase = std::polar(norm, 2 * std::numbers::pi * p * y / g.L);
    out.mat += phase * annihilation_operator(basis, sh, p).mat;
  }
  out.mat.prune(cplx(0.0));
  return out;
}

namespace {

// Product F_1 ... F_k of FH field combinations F = sum_p c(p) a_p. Rows index
// target mode lists, which need not belong to the basis, so the result is
// exact on momentum-sector bases too.
SpMat open_product(const FockBasis& basis, const std::vector<std::vector<cplx>>& factors) {
  const ModeGrid& g = basis.grid();
  std::unordered_map<ModeList, int, ModeListHash> rows;
  std::vector<Eigen::Triplet<cplx>> trip;
  std::function<void(int, const ModeList&, cplx, std::size_t)> rec =
      [&](int k, const ModeList& cur, cplx amp, std::size_t col) {
        if (k < 0) {
          const auto [it, fresh] = rows.emplace(cur, static_cast<int>(rows.size()));
          (void)fresh;
          trip.emplace_back(it->second, static_cast<Eigen::Index>(col), amp);
          return;
        }
        std::uint32_t last = UINT32_MAX;
        for (auto m : cur) {
          if (m == last || g.is_sh(m)) continue;
          last = m;
          const cplx c = factors[k][g.index_of(m) + g.p_phi];
          if (c == 0.0) continue;
          ModeList next = cur;
          const double a = annihilate(next, m);
          rec(k - 1, next, amp * c * a, col);
        }
      };
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const auto span = basis.modes(i);
    rec(static_cast<int>(factors.size()) - 1, ModeList(span.begin(), span.end()), 1.0, i);
  }
  SpMat a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(basis.dim()));
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

std::vector<cplx> field_coeffs(const ModeGrid& g, double y) {
  std::vector<cplx> c(g.n_fh());
  const double norm = 1.0 / std::sqrt(g.L);
  for (int p = -g.p_phi; p <= g.p_phi; ++p)
    c[p + g.p_phi] = std::polar(norm, 2 * std::numbers::pi * p * y / g.L);
  return c;
}

// Tr[A rho A^dagger].
double open_norm(const SpMat& a, const QuantumState& s) {
  if (s.pure) return (a * s.psi).squaredNorm();
  const Eigen::MatrixXcd m = a * s.rho;
  cplx acc = 0;
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it) acc += m(it.row(), it.col()) * std::conj(it.value());
  return acc.real();
}

std::vector<double> occupations(const FockBasis& basis, const QuantumState& state, bool sh) {
  const ModeGrid& g = basis.grid();
  const int pmax = sh ? g.p_psi : g.p_phi;
  std::vector<double> out(pmax >= 0 ? 2 * pmax + 1 : 0, 0.0);
  Eigen::VectorXd w(basis.dim());
  for (std::size_t i = 0; i < basis.dim(); ++i)
    w(i) = state.pure ? std::norm(state.psi(i)) : state.rho(i, i).real();
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    for (auto m : basis.modes(i)) {
      if (g.is_sh(m) != sh) continue;
      out[g.index_of(m) + pmax] += w(i);
    }
  }
  return out;
}

}  // namespace

std::vector<double> momentum_distribution(const FockBasis& basis, const QuantumState& state) {
  if (state.basis_id != basis.id()) fail(ErrorKind::InvalidArgument, "state basis mismatch");
  return occupations(basis, state, false);
}

std::vector<double> sh_momentum_distribution(const FockBasis& basis, const QuantumState& state) {
  if (state.basis_id != basis.id()) fail(ErrorKind::InvalidArgument, "state basis mismatch");
  return occupations(basis, state, true);
}

std::vector<double> density_profile(const FockBasis& basis, const QuantumState& state,
                                    const SpatialGrid& grid) {
  grid.check();
  if (state.basis_id != basis.id()) fail(ErrorKind::InvalidArgument, "state basis mismatch");
  std::vector<double> out;
  out.reserve(grid.y.size());
  for (double y : grid.y) out.push_back(open_norm(open_product(basis, {field_coeffs(basis.grid(), y)}), state));
  return out;
}

G2Result g2_spatial(const FockBasis& basis, const QuantumState& state, const SpatialGrid& grid) {
  grid.check();
  if (state.basis_id != basis.id()) fail(ErrorKind::InvalidArgument, "state basis mismatch");
  const auto c0 = field_coeffs(basis.grid(), 0.0);
  G2Result r;
  r.y = grid.y;
  r.density0 = open_norm(open_product(basis, {c0}), state);
  if (!(r.density0 > 1e-300)) fail(ErrorKind::Domain, "g2 undefined: vanishing density at y = 0");
  const double d2 = r.density0 * r.density0;
  for (double y : grid.y) r.g2.push_back(open_norm(open_product(basis, {c0, field_coeffs(basis.grid(), y)}), state) / d2);
  return r;
}

double intraband_population(const FockBasis& basis, const QuantumState& state, double p_i) {
  const ModeGrid& g = basis.grid();
  if (!(p_i > 0)) fail(ErrorKind::InvalidArgument, "intra-band width must be positive");
  if (p_i > (g.p_phi + 1) / g.L)
    fail(ErrorKind::InvalidArgument, "intra-band width exceeds the FH grid");
  const auto n = momentum_distribution(basis, state);
  double s = 0.0;
  for (int p = -g.p_phi; p <= g.p_phi; ++p)
    if (std::abs(p / g.L) < p_i) s += n[p + g.p_phi];
  return s;
}

std::vector<double> population_loss(const std::vector<double>& series) {
  if (series.empty() || series.front() == 0.0)
    fail(ErrorKind::Domain, "population loss undefined for zero initial population");
  std::vector<double> out;
  out.reserve(series.size());
  for (double n : series) out.push_back((series.front() - n) / series.front());
  return out;
}

}  // namespace cascade
