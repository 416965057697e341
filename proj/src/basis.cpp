#include "cascade/basis.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "cascade/error.hpp"

namespace cascade {

void ModeGrid::check() const {
  if (!(L > 0.0) || !std::isfinite(L)) {
    fail(ErrorKind::InvalidArgument, "grid window L must be positive");
  }
  if (p_phi < 0) fail(ErrorKind::InvalidArgument, "p_phi must be >= 0");
  if (p_psi < -1) fail(ErrorKind::InvalidArgument, "p_psi must be >= -1");
}

std::size_t ModeListHash::operator()(const ModeList& m) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (auto v : m) {
    h ^= v + 0x9e3779b97f4a7c15ULL;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

int count_mode(const ModeList& m, std::uint32_t mode) {
  return static_cast<int>(std::count(m.begin(), m.end(), mode));
}

double annihilate(ModeList& m, std::uint32_t mode) {
  auto it = std::find(m.begin(), m.end(), mode);
  if (it == m.end()) return 0.0;
  const int n = count_mode(m, mode);
  m.erase(it);
  return std::sqrt(static_cast<double>(n));
}

double create(ModeList& m, std::uint32_t mode) {
  const int n = count_mode(m, mode);
  auto it = std::find_if(m.begin(), m.end(),
                         [mode](std::uint32_t v) { return v <= mode; });
  m.insert(it, mode);
  return std::sqrt(static_cast<double>(n + 1));
}

namespace {

struct Enumerator {
  const ModeGrid& grid;
  int q_max;
  std::optional<int> sector;
  std::size_t cap;
  std::vector<ModeList> out;
  ModeList cur;

  void emit() {
    if (out.size() >= cap) {
      std::ostringstream os;
      os << "basis dimension exceeds cap " << cap << " (exact dimension "
         << count_basis_states(grid, q_max, sector) << ")";
      fail(ErrorKind::Size, os.str());
    }
    out.push_back(cur);
  }

  void push(std::uint32_t mode, int q, int p) {
    cur.push_back(mode);
    gen(q + grid.charge_of(static_cast<int>(mode)),
        p + grid.index_of(static_cast<int>(mode)), mode);
    cur.pop_back();
  }

  void gen(int q, int p, std::uint32_t max_mode) {
    if (!sector || p == *sector) emit();
    const int rem = q_max - q;
    if (rem <= 0) return;
    if (sector && rem == 1) {
      const int need = *sector - p;
      if (grid.has_fh_index(need)) {
        const auto m = static_cast<std::uint32_t>(grid.fh_mode(need));
        if (m <= max_mode) push(m, q, p);
      }
      return;
    }
    const auto top = std::min<std::uint32_t>(
        max_mode, static_cast<std::uint32_t>(grid.n_modes() - 1));
    for (std::int64_t mi = top; mi >= 0; --mi) {
      const auto m = static_cast<std::uint32_t>(mi);
      if (grid.is_sh(static_cast<int>(m))) {
        if (rem < 2) continue;
        if (sector && rem == 2) {
          const int need = *sector - p;
          if (!grid.has_sh_index(need)) continue;
          if (static_cast<int>(m) != grid.sh_mode(need)) continue;
        }
      }
      push(m, q, p);
    }
  }
};

}  // namespace

FockBasis FockBasis::enumerate(const ModeGrid& grid, int q_max,
                               std::optional<int> momentum_sector,
                               std::size_t cap) {
  grid.check();
  if (q_max < 0) fail(ErrorKind::InvalidArgument, "q_max must be >= 0");
  Enumerator e{grid, q_max, momentum_sector, cap, {}, {}};
  if (grid.n_modes() > 0) {
    e.gen(0, 0, static_cast<std::uint32_t>(grid.n_modes() - 1));
  } else if (!momentum_sector || *momentum_sector == 0) {
    e.emit();
  }
  std::sort(e.out.begin(), e.out.end());

  FockBasis b;
  b.grid_ = grid;
  b.q_max_ = q_max;
  b.sector_ = momentum_sector;
  b.offsets_.reserve(e.out.size() + 1);
  b.index_.reserve(e.out.size());
  for (std::size_t i = 0; i < e.out.size(); ++i) {
    b.flat_.insert(b.flat_.end(), e.out[i].begin(), e.out[i].end());
    b.offsets_.push_back(b.flat_.size());
    b.index_.emplace(std::move(e.out[i]), i);
  }

  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  std::uint64_t lbits = 0;
  std::memcpy(&lbits, &grid.L, sizeof lbits);
  mix(lbits);
  mix(static_cast<std::uint64_t>(grid.p_phi + 1));
  mix(static_cast<std::uint64_t>(grid.p_psi + 2));
  mix(static_cast<std::uint64_t>(q_max));
  mix(momentum_sector ? static_cast<std::uint64_t>(*momentum_sector + (1LL << 40))
                      : 7ULL);
  b.id_ = h;
  return b;
}

std::vector<int> FockBasis::occupations(std::size_t i) const {
  std::vector<int> occ(grid_.n_modes(), 0);
  for (auto m : modes(i)) ++occ[m];
  return occ;
}

std::int64_t FockBasis::find(const ModeList& desc_modes) const {
  auto it = index_.find(desc_modes);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::int64_t FockBasis::find_occupations(const std::vector<int>& occ) const {
  ModeList m;
  for (int mode = static_cast<int>(occ.size()) - 1; mode >= 0; --mode) {
    for (int k = 0; k < occ[mode]; ++k) m.push_back(mode);
  }
  return find(m);
}

std::pair<int, int> FockBasis::conserved_charges(std::size_t i) const {
  int q = 0;
  int p = 0;
  for (auto m : modes(i)) {
    q += grid_.charge_of(static_cast<int>(m));
    p += grid_.index_of(static_cast<int>(m));
  }
  return {q, p};
}

std::string FockBasis::to_json() const {
  nlohmann::ordered_json j;
  j["L"] = grid_.L;
  j["p_phi"] = grid_.p_phi;
  j["p_psi"] = grid_.p_psi;
  j["q_max"] = q_max_;
  if (sector_) {
    j["momentum_sector"] = *sector_;
  } else {
    j["momentum_sector"] = nullptr;
  }
  j["dimension"] = dim();
  return j.dump();
}

double count_basis_states(const ModeGrid& grid, int q_max,
                          std::optional<int> momentum_sector) {
  grid.check();
  const int pmax = std::max(grid.p_phi, std::max(grid.p_psi, 0));
  const int span = q_max * pmax;
  const int width = 2 * span + 1;
  std::vector<double> cnt((q_max + 1) * width, 0.0);
  auto at = [&](int q, int p) -> double& { return cnt[q * width + p + span]; };
  at(0, 0) = 1.0;
  for (int mode = 0; mode < grid.n_modes(); ++mode) {
    const int w = grid.charge_of(mode);
    const int k = grid.index_of(mode);
    for (int q = w; q <= q_max; ++q) {
      for (int p = -span; p <= span; ++p) {
        const int pp = p - k;
        if (pp < -span || pp > span) continue;
        at(q, p) += at(q - w, pp);
      }
    }
  }
  double total = 0.0;
  for (int q = 0; q <= q_max; ++q) {
    if (momentum_sector) {
      if (*momentum_sector >= -span && *momentum_sector <= span) {
        total += at(q, *momentum_sector);
      }
    } else {
      for (int p = -span; p <= span; ++p) total += at(q, p);
    }
  }
  return total;
}

}  // namespace cascade
