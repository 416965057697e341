#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cascade {

// Momentum modes. FH indices run over -p_phi..p_phi, SH indices over
// -p_psi..p_psi (p_psi < 0 means no SH modes). Index p carries physical
// momentum p / L. Mode ids: FH first, then SH, both ascending in p.
struct ModeGrid {
  double L = 1.0;
  int p_phi = 0;
  int p_psi = -1;

  static ModeGrid with_default_sh(double L, int p_phi) {
    return {L, p_phi, 2 * p_phi};
  }
  static ModeGrid fh_only(double L, int p_phi) { return {L, p_phi, -1}; }

  int n_fh() const { return 2 * p_phi + 1; }
  int n_sh() const { return p_psi >= 0 ? 2 * p_psi + 1 : 0; }
  int n_modes() const { return n_fh() + n_sh(); }
  bool has_fh_index(int p) const { return p >= -p_phi && p <= p_phi; }
  bool has_sh_index(int p) const { return p_psi >= 0 && p >= -p_psi && p <= p_psi; }
  int fh_mode(int p) const { return p + p_phi; }
  int sh_mode(int p) const { return n_fh() + p + p_psi; }
  bool is_sh(int mode) const { return mode >= n_fh(); }
  int index_of(int mode) const {
    return is_sh(mode) ? mode - n_fh() - p_psi : mode - p_phi;
  }
  int charge_of(int mode) const { return is_sh(mode) ? 2 : 1; }
  double momentum(int index) const { return index / L; }

  void check() const;
};

// A basis state is a list of occupied mode ids with multiplicity, sorted in
// descending order. Canonical state ordering compares these lists
// lexicographically, which equals colexicographic order on occupation
// vectors (last mode most significant).
using ModeList = std::vector<std::uint32_t>;

struct ModeListHash {
  std::size_t operator()(const ModeList& m) const noexcept;
};

class FockBasis {
 public:
  static constexpr std::size_t kDefaultCap = 2'000'000;

  static FockBasis enumerate(const ModeGrid& grid, int q_max,
                             std::optional<int> momentum_sector = {},
                             std::size_t cap = kDefaultCap);

  const ModeGrid& grid() const { return grid_; }
  int q_max() const { return q_max_; }
  std::optional<int> momentum_sector() const { return sector_; }
  std::size_t dim() const { return offsets_.size() - 1; }
  std::uint64_t id() const { return id_; }

  std::span<const std::uint32_t> modes(std::size_t i) const {
    return {flat_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::vector<int> occupations(std::size_t i) const;
  // -1 when the mode list is not a basis state.
  std::int64_t find(const ModeList& desc_modes) const;
  std::int64_t find_occupations(const std::vector<int>& occ) const;
  std::pair<int, int> conserved_charges(std::size_t i) const;
  std::int64_t vacuum_index() const { return find({}); }

  std::string to_json() const;

 private:
  ModeGrid grid_;
  int q_max_ = 0;
  std::optional<int> sector_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> flat_;
  std::unordered_map<ModeList, std::size_t, ModeListHash> index_;
  std::uint64_t id_ = 0;
};

// Exact dimension by dynamic programming over modes; no enumeration.
double count_basis_states(const ModeGrid& grid, int q_max,
                          std::optional<int> momentum_sector = {});

// Ladder helpers on descending mode lists.
int count_mode(const ModeList& m, std::uint32_t mode);
// Removes one particle of `mode`; returns sqrt(n) or 0 when absent.
double annihilate(ModeList& m, std::uint32_t mode);
// Adds one particle of `mode`; returns sqrt(n + 1).
double create(ModeList& m, std::uint32_t mode);

}  // namespace cascade
