#pragma once

#include <random>
#include <vector>

#include "paircond/pair_algebra.hpp"

namespace paircond {

/// Vacuum of an n-mode space.
StateVector vacuum(int n, Statistics statistics);

/// Fully occupied fermion state c+_0 c+_1 ... c+_{n-1}|0>.
StateVector fully_occupied(int n);

/// Pair annihilator with coefficient matrix B (adjoint of B+) acting on the
/// sector with N particles.
SparseOperator build_pair_annihilation(const PairMatrix& b, const BasisPtr& source);

/// Pair creator with a PairMatrix argument.
SparseOperator build_pair_creation(const PairMatrix& a, const BasisPtr& source);

struct Condensate {
  StateVector state;   ///< normalized (A+)^m|0>
  double norm = 1.0;   ///< <0|A^m A+^m|0>
};

/// Throws PreconditionError for m < 0 or a fermion m > n/2.
Condensate build_condensate(const PairMatrix& a, int m);

/// Normalized Abar^{n/2-m}|0bar> for fermions, Abar the dual annihilator.
StateVector hole_condensate(const PairMatrix& a, int m);

/// Rescales natural-basis amplitudes by prod_i s_i^{n_i} and renormalizes.
StateVector scaling_state_map(const RVector& sigmas_from, const RVector& sigmas_to, const StateVector& state);

/// Normalized state with the given occupation pattern
/// (c+_0)^{e_0} ... (c+_{n-1})^{e_{n-1}}|0>, amplitude prod sqrt(e_i!).
StateVector monomial_state(const std::vector<int>& exponents, Statistics statistics);

enum class BosonPairing { conjugate, squared };

struct PairedTerm {
  std::vector<int> pairs;  ///< m_k for k = 0 .. n/2-1
  cplx coefficient;
};

/// sum Gamma prod_k (a+_{2k} a+_{2k+1})^{m_k}|0> in the natural basis.
/// Bosons pair either as b+_{2k} b+_{2k+1} (conjugate) or as (b+_k)^2 with
/// n = pairs.size() (squared).
StateVector build_paired_state(int n, Statistics statistics, const std::vector<PairedTerm>& terms,
                               BosonPairing pairing = BosonPairing::conjugate);

/// alpha c+_0..c+_{n/2-1}|0> + beta c+_{n/2}..c+_{n-1}|0>, n even >= 8.
StateVector build_ghz_state(int n, cplx alpha, cplx beta, Statistics statistics);

struct GroupSpec {
  std::vector<int> sizes;                 ///< n_p, consecutive mode blocks
  std::vector<std::vector<int>> powers;   ///< l_pi per block (empty: all 1)
};

struct GroupTerm {
  std::vector<int> exponents;  ///< m_p per block
  cplx coefficient;
};

/// sum Gamma prod_p (A_p+)^{m_p}|0>, A_p+ = prod_i (a+_pi)^{l_pi}.
StateVector build_group_state(const GroupSpec& spec, Statistics statistics, const std::vector<GroupTerm>& terms);

/// Diagonal ensemble of normalized fixed-N states with weights summing to 1.
struct Ensemble {
  std::vector<double> weights;
  std::vector<StateVector> states;
};

/// sum p_m |m>_2 <m|. Throws PreconditionError for negative weights.
Ensemble build_mixture(const PairMatrix& a, const std::vector<std::pair<int, double>>& weights);

/// Components alpha_m (A+)^m|0> of f(A+)|0>, one per pair number.
struct PureSuperposition {
  std::vector<int> pair_numbers;
  std::vector<StateVector> components;  ///< unnormalized

  double norm2() const;
  /// Weights ||component||^2 / total with normalized components.
  Ensemble sector_weights() const;
};

PureSuperposition build_superposition(const PairMatrix& a, const std::vector<std::pair<int, cplx>>& coefficients);

enum class OddMode { create, annihilate };

/// Normalized c+_i (A+)^m|0> or c_i (A+)^m|0> (fermions).
StateVector build_odd_state(const PairMatrix& a, int m, int mode, OddMode kind);

/// Normalized random state of a sector with Gaussian amplitudes.
StateVector random_state(const BasisPtr& basis, std::mt19937_64& rng);

/// Fock-space image of the mode change a+_k = sum_i U_ik c+_i: the input is
/// written on modes a, the result on modes c.
StateVector transform_state(const StateVector& state, const CMatrix& u);

}  // namespace paircond
