#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cascade/basis.hpp"
#include "cascade/params.hpp"

namespace cascade {

using SpMat = Eigen::SparseMatrix<cplx>;
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;

struct SparseOperator {
  std::uint64_t basis_id = 0;
  SpMat mat;

  Eigen::Index dim() const { return mat.rows(); }
  double hermiticity_error() const;       // max |A - A^dagger|
  double antihermiticity_error() const;   // max |A + A^dagger|
  SparseOperator adjoint() const;
};

// Coordinate-triplet text export: header line then "row col re im".
std::string export_coo(const SparseOperator& op);

struct LindbladTerm {
  std::string label;
  SparseOperator op;
  double weight = 1.0;
  // Optional time dependence of the rate factor; empty means constant.
  std::function<double(double)> rate_envelope;
};

struct LindbladSet {
  std::vector<LindbladTerm> terms;
  void add(LindbladTerm term);
};

// Sum of coefficient * A rho B terms. Empty matrices stand for identity.
struct Superoperator {
  struct Term {
    cplx coeff;
    SpMat left;
    SpMat right;
  };
  std::uint64_t basis_id = 0;
  Eigen::Index dim = 0;
  std::vector<Term> terms;

  MatC apply(const MatC& rho) const;
};

struct TimeDependentOperator {
  struct Term {
    SpMat op;
    std::function<cplx(double)> envelope;  // empty means 1
  };
  std::uint64_t basis_id = 0;
  Eigen::Index dim = 0;
  std::vector<Term> terms;

  static TimeDependentOperator constant(const SparseOperator& op);
  SpMat at(double t) const;
};

enum class Coupling { F, H };

// Ladder-operator matrices on a basis (truncated to the basis).
SparseOperator annihilation_operator(const FockBasis& basis, bool sh, int index);
SparseOperator number_operator(const FockBasis& basis, bool sh, int index);
SparseOperator total_charge_operator(const FockBasis& basis);
SparseOperator total_momentum_operator(const FockBasis& basis);
SparseOperator fh_number_operator(const FockBasis& basis);
SparseOperator sh_number_operator(const FockBasis& basis);

SparseOperator build_linear_hamiltonian(const FockBasis& basis,
                                        const SystemParams& params);
SparseOperator build_nonlinear_hamiltonian(const FockBasis& basis,
                                           const SystemParams& params);
SparseOperator build_full_hamiltonian(const FockBasis& basis,
                                      const SystemParams& params);
// H_cubic and its quartic part alone.
SparseOperator build_cubic_hamiltonian(const FockBasis& basis,
                                       const SystemParams& params);
SparseOperator build_cubic_quartic(const FockBasis& basis,
                                   const SystemParams& params);

// Coupling F uses f(p,q) everywhere; coupling H uses h(p,q) and keeps only
// intra-band triples.
SparseOperator build_sw_generator(const FockBasis& basis,
                                  const SystemParams& params, Coupling coeff,
                                  const RegimeGeometry* geom = nullptr);
// Intra-band part of H_NL matching build_sw_generator(..., Coupling::H).
SparseOperator build_intraband_coupling(const FockBasis& basis,
                                        const SystemParams& params,
                                        const RegimeGeometry& geom);

struct WTerms {
  SparseOperator w_lin;
  SparseOperator w_spm;
  SparseOperator w_xpm;
  SparseOperator w_spm_prime;
};

WTerms build_w_terms(const FockBasis& basis, const SystemParams& params,
                     Coupling coeff, const RegimeGeometry* geom = nullptr);

struct DressedFwModel {
  SparseOperator hamiltonian;
  LindbladSet lindblads;
};

DressedFwModel build_dressed_fw_model(const FockBasis& basis,
                                      const SystemParams& params,
                                      const RegimeGeometry& geom);

struct ShDecay {
  SparseOperator lamb_shift;
  LindbladSet lindblads;
};

ShDecay build_sh_decay(const FockBasis& basis, const SystemParams& params,
                       const RegimeGeometry& geom);

enum class MeVariant { Dissipative, Dispersive };

Superoperator build_me_dissipator(const FockBasis& basis,
                                  const SystemParams& params,
                                  MeVariant variant);

// Pair annihilator (1/sqrt(L)) sum_q a_q a_{p-q} over ordered q.
SparseOperator pair_annihilator(const FockBasis& basis, int total_index);

using ShAmplitude = std::function<cplx(int sh_index, double t)>;

TimeDependentOperator build_w_sq(const FockBasis& basis,
                                 const SystemParams& params,
                                 const RegimeGeometry& geom,
                                 const ShAmplitude& sh_amplitude);

// Mean-field SH amplitude <b_p>(0) exp(-i E t - kappa t / 2) with E the
// Lamb-shifted SH energy.
ShAmplitude mean_field_sh_amplitude(const SystemParams& params,
                                    const RegimeGeometry& geom, double L,
                                    std::function<cplx(int)> initial);

}  // namespace cascade
