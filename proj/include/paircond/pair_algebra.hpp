#pragma once

#include <random>
#include <vector>

#include "paircond/fock.hpp"

namespace paircond {

/// Coefficient matrix of A+ = 1/2 sum_ij A_ij c+_i c+_j.
///
/// Antisymmetric for fermions, symmetric for bosons. The constructor keeps
/// the upper triangle and mirrors it, so the symmetry is exact.
class PairMatrix {
 public:
  PairMatrix() = default;
  /// Throws StatisticsError when the input departs from the required
  /// (anti)symmetry by more than 1e-10 relative.
  PairMatrix(const CMatrix& entries, Statistics statistics);

  /// Natural-basis matrix: fermions A(2k, 2k+1) = sigma_k, bosons
  /// A(k, k) = sqrt(2) sigma_k.
  static PairMatrix from_sigmas(const RVector& sigmas, Statistics statistics);
  /// Uniform A0 in the natural basis, sigma = 1/sqrt(n/2) (F) or 1/sqrt(n) (B).
  static PairMatrix uniform(int n, Statistics statistics);
  /// Normalized random full-rank matrix with Gaussian entries.
  static PairMatrix random(int n, Statistics statistics, std::mt19937_64& rng);

  int n() const { return static_cast<int>(a_.rows()); }
  Statistics statistics() const { return stats_; }
  const CMatrix& matrix() const { return a_; }
  cplx operator()(int i, int j) const { return a_(i, j); }

  /// <0|A A+|0> = Tr(A+ A)/2.
  double norm2() const;
  bool is_normalized(double tol = 1e-12) const { return std::abs(norm2() - 1.0) <= tol; }
  PairMatrix normalized() const;
  /// U A U^T: coefficients on modes c when *this is written on modes
  /// a+_k = sum_i U_ik c+_i.
  PairMatrix transformed(const CMatrix& u) const;
  int rank(double tol = 1e-10) const;

 private:
  CMatrix a_;
  Statistics stats_ = Statistics::fermion;
};

/// Schmidt-like form A = U S U^T with S the natural-basis matrix of `sigmas`.
/// Natural creation operators are a+_k = sum_i U_ik c+_i.
struct CanonicalForm {
  Statistics statistics = Statistics::fermion;
  RVector sigmas;   ///< descending, n/2 (F) or n (B) entries
  CMatrix unitary;  ///< n x n
  std::vector<int> order;  ///< order[k]: position of sigma_k before sorting

  CMatrix reconstruct() const;
};

CanonicalForm canonical_decompose(const PairMatrix& a);

/// B = (2/n) (A^-1)^+ so that the dual annihilator (1/n) sum A^-1_ij c_i c_j
/// equals the adjoint of B+. Throws RankError for singular A.
PairMatrix dual(const PairMatrix& a);
/// dual(a) rescaled to <0|B B+|0> = 1.
PairMatrix normalized_dual(const PairMatrix& a);

/// Per-mode scale factors s_i = sqrt(sigma_to / sigma_from) in the natural
/// basis (fermion sigma_k covers modes 2k and 2k+1).
RVector mode_scales(const RVector& sigmas_from, const RVector& sigmas_to, Statistics statistics);

/// e^{-h} Q e^{h} for a one-body coefficient matrix: h_ij -> s_i h_ij / s_j.
CMatrix conjugate_one_body(const CMatrix& h, const RVector& scales);

}  // namespace paircond
