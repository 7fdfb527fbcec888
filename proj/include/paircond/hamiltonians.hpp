#pragma once

#include <vector>

#include "paircond/conserved.hpp"

namespace paircond {

/// Checks V(ij, i'j') = +-V(ji, i'j') = +-V(ij, j'i') = conj V(i'j', ij)
/// (upper sign fermions). Throws PreconditionError on violation.
void validate_pair_interaction(const CMatrix& v, int n, Statistics statistics, double tol = 1e-10);

/// H_Q = 1/8 sum V(ij, i'j') Q_ij^+ Q_i'j' over all ordered pairs, with the
/// full n^2 x n^2 interaction V (index i*n + j).
SparseOperator h_Q(const PairMatrix& a, const CMatrix& v, const BasisPtr& basis);

/// H' = sum_ij h_ij Q_ij + sum_mu sum_ij V_mu(i,j) O_mu Q_ij.
SparseOperator h_Q_general(const PairMatrix& a, const CMatrix& h, const std::vector<CMatrix>& o_list,
                           const std::vector<CMatrix>& v_list, const BasisPtr& basis);

/// Level of a natural-basis mode: k for modes 2k, 2k+1 (F) or k itself (B).
int natural_level(int mode, Statistics statistics);

/// Full-index interaction with V(ij, i'j') = 1/2 V_kl (d_ii' d_jj' +- d_ij' d_ji')
/// for natural levels k, l of modes i, j.
CMatrix level_interaction(const Eigen::MatrixXd& vkl, Statistics statistics);

/// Explicit natural-basis pairing forms equal to h_Q with level_interaction(V).
SparseOperator h_QF(const RVector& sigmas, const Eigen::MatrixXd& vkl, const BasisPtr& basis);
SparseOperator h_QB(const RVector& sigmas, const Eigen::MatrixXd& vkl, const BasisPtr& basis);

/// A+ A on a sector.
SparseOperator pair_number_term(const PairMatrix& a, const BasisPtr& basis);
/// [A, A+] on a sector.
SparseOperator pair_commutator(const PairMatrix& a, const BasisPtr& basis);

/// M_A = A+ A - (M - 1)([A, A+] - 1)/2 with M = N/2.
SparseOperator m_A_op(const PairMatrix& a, const BasisPtr& basis);
/// H_A = M - M_A.
SparseOperator h_A(const PairMatrix& a, const BasisPtr& basis);
/// 1/8 sum_ij Q_ij^+ Q_ij (equals h_A).
SparseOperator h_A_from_q(const PairMatrix& a, const BasisPtr& basis);

/// Hbar = (M -+ n/2 - 1)([Ab, Ab+] - 1)/2 - Ab+ Ab with the normalized dual.
SparseOperator h_bar(const PairMatrix& a, const BasisPtr& basis);
/// sum_ij Qbar_ij^+ Qbar_ij / (8 nu), nu = Tr(A^-1+ A^-1)/2 (equals h_bar).
SparseOperator h_bar_from_qbar(const PairMatrix& a, const BasisPtr& basis);

struct ModelParams {
  Statistics statistics = Statistics::boson;
  RVector sigmas;    ///< n (B) or n/2 (F) level amplitudes, sum sigma^2 = 1
  RVector energies;  ///< eps_k per level
  double g = 0.0;
};

/// sum eps_k n_k - g A+ A (B) or 1/2 sum eps_k (n_k + n_kbar) - g A+ A (F).
SparseOperator model_hamiltonian(const ModelParams& p, const BasisPtr& basis);
SparseOperator model_boson(const ModelParams& p, const BasisPtr& basis);
SparseOperator model_fermion(const ModelParams& p, const BasisPtr& basis);

struct CriticalCouplings {
  double eps_eff = 0.0;  ///< eps_k = eps_eff sigma_k^2 (B), -eps_eff sigma_k^2 (F)
  double g_c = 0.0;
  double g_c_dual = 0.0;
};

/// Throws PreconditionError when eps_k / sigma_k^2 is not constant or m < 2.
CriticalCouplings critical_couplings(const ModelParams& p, int m);

/// (1 - p) h1 + p h2.
SparseOperator model_mixed(double p, const SparseOperator& h1, const SparseOperator& h2);

/// One-body coefficients after the mode change: h on modes a with
/// a+_k = sum_i U_ik c+_i becomes U h U^+ on modes c.
CMatrix rotate_one_body(const CMatrix& h, const CMatrix& u);

struct SpanCheck {
  int annihilator_dim = 0;   ///< two-body eigen-operators modulo 1, N, N^2
  int family_dim = 0;        ///< span of Q_ij and E_kl Q_ij
  int generators = 0;
  double gap_route1 = 0.0;
  double gap_route2 = 0.0;
};

/// Counts the two-body operators having (A+)^m|0> as eigenstate two ways.
SpanCheck theorem2_span_check(const PairMatrix& a, int m);

}  // namespace paircond
