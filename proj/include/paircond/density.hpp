#pragma once

#include <utility>
#include <vector>

#include "paircond/fock.hpp"

namespace paircond {

/// Independent pair labels (i, j): i < j for fermions, i <= j for bosons, in
/// lexicographic order.
std::vector<std::pair<int, int>> pair_index_set(int n, Statistics s);

/// Position of (i, j) (any order) in the packed pair set, or -1.
int packed_index(int i, int j, int n, Statistics s);

/// n^2 x |P| isometry mapping e_(ij) to (|ij> -+ |ji>)/sqrt(2); boson
/// diagonal e_(ii) maps to |ii>. Full index is i*n + j.
CMatrix pair_isometry(int n, Statistics s);

/// Reduced density matrices of a normalized fixed-N state.
struct DensityMatrices {
  Statistics statistics = Statistics::fermion;
  int n = 0;
  int particles = 0;
  /// rho1(i,j) = <c+_j c_i>
  CMatrix rho1;
  /// rho2(p,q) = <P_q+ P_p>, P_(ij) = c_j c_i (boson diagonal b_i^2/sqrt 2)
  CMatrix rho2;
  /// rho11(ij, i'j') = <c+_j c_i c+_i' c_j'>, index i*n + j
  CMatrix rho11;
};

/// Which blocks to compute; rho11 is n^2 x n^2 and skipped when not needed.
struct DensityRequest {
  bool rho1 = true;
  bool rho2 = true;
  bool rho11 = true;
};

DensityMatrices reduced_dms(const StateVector& state, DensityRequest what = {});

CMatrix one_body_dm(const StateVector& state);
CMatrix packed_two_body_dm(const StateVector& state);
CMatrix rho11_matrix(const StateVector& state);

/// Full-index two-body matrix rho(ij, kl) = <c+_k c+_l c_j c_i>.
CMatrix full_two_body_dm(const StateVector& state);

/// rho-bar(p, q) = <P_p P_q+> in the packed index (pair-hole covariance).
CMatrix packed_pair_hole_dm(const StateVector& state);

/// V rho V^+ : embeds a packed matrix in the n^2 space with the same
/// nonzero spectrum. full_two_body_dm equals twice the embedded rho2.
CMatrix unpack_two_body(const CMatrix& packed, int n, Statistics s);
/// V^+ rho V : inverse of unpack_two_body on the (anti)symmetric subspace.
CMatrix pack_two_body(const CMatrix& full, int n, Statistics s);

/// C11(ij, i'j') = rho11(ij, i'j') - rho1(i,j) rho1(j',i').
CMatrix covariance_11(const DensityMatrices& dm);

/// Hermitian part and PSD check helper: smallest eigenvalue.
double min_eigenvalue(const CMatrix& h);

}  // namespace paircond
