#pragma once

#include <array>
#include <string>
#include <vector>

#include "paircond/density.hpp"
#include "paircond/pair_algebra.hpp"

namespace paircond {

/// Coefficients h of the one-body operator sum_ij h_ij c+_i c_j.
struct LabeledOneBody {
  int i = 0;
  int j = 0;
  CMatrix h;
};

struct QFamily {
  Statistics statistics = Statistics::fermion;
  std::vector<LabeledOneBody> members;
};

/// Q_ij = sum_l c+_l (A_il c_j +- A_jl c_i) for i <= j (F) or i < j (B).
QFamily q_ops(const PairMatrix& a);
/// Qbar_ij = c+_i (A^-1 c)_j +- c+_j (A^-1 c)_i. Throws RankError for singular A.
QFamily qbar_ops(const PairMatrix& a);

/// Coefficient matrix of Q_ij for any ordered pair (zero for boson i == j).
CMatrix q_coefficients(const PairMatrix& a, int i, int j);

/// Rank of the span of a family (coefficient matrices flattened).
int family_rank(const std::vector<CMatrix>& hs, double tol = 1e-9);

enum class TriadKind { ladder, cartesian };

/// ladder: (S+, S-, Sz); cartesian: (S1, S2, S3).
struct OperatorTriad {
  std::string label;
  TriadKind kind = TriadKind::ladder;
  std::array<CMatrix, 3> ops;
};

/// Scaled SU(2) triads built from the canonical form. Fermions: the (k,l),
/// (kbar,l) and diagonal k families; bosons: (Qt_jk, Qt_kl, Qt_jl) for
/// j < k < l. Matrices are on the original modes (U h U^+).
std::vector<OperatorTriad> su2_scaled_ops(const CanonicalForm& cf);

/// Largest coefficient-level violation of the triad's commutation relations.
double triad_residual(const OperatorTriad& t);

struct AlgebraReport {
  std::size_t checked = 0;
  double max_residual = 0.0;
};

/// Checks [Q_ij, Q_kl] = +-(A_ki Q_jl + A_lj Q_ik) -+ (A_jk Q_il + A_il Q_jk)
/// for all index quadruples.
AlgebraReport verify_commutator_algebra(const PairMatrix& a);

struct NullspaceResult {
  int dimension = 0;   ///< nullity of the analyzed matrix
  int count = 0;       ///< conserved operators (adds N for the one-body class)
  CMatrix basis;       ///< orthonormal null vectors as columns
  RVector spectrum;    ///< ascending eigenvalues
  double tolerance = 0.0;
  /// smallest nonzero / largest zero eigenvalue (inf when either side empty)
  double gap_ratio = 0.0;
};

/// Eigenvalues below rel * max(lambda_max, 1) count as zero.
NullspaceResult hermitian_nullspace(const CMatrix& m, double rel = 1e-8);

CMatrix covariance_C11(const StateVector& state);
/// C20(ij, i'j') = rho2(i'j', ij) in the packed pair index.
CMatrix covariance_C20(const StateVector& state);
/// C02 = rho-bar in the packed pair index.
CMatrix covariance_C02(const StateVector& state);

enum class OperatorClass { one_body, pair_annihilation, pair_creation };

NullspaceResult conserved_count(const StateVector& state, OperatorClass cls, double rel = 1e-8);

/// Orthonormal basis of the joint kernel of square operators on one sector.
CMatrix joint_kernel(const std::vector<SparseOperator>& ops, double tol = 1e-9);

/// [h, g] for one-body coefficient matrices (same for both statistics).
inline CMatrix coefficient_commutator(const CMatrix& h, const CMatrix& g) { return h * g - g * h; }

}  // namespace paircond
