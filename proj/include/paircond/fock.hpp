#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Sparse>

#include "paircond/types.hpp"

namespace paircond {

inline constexpr int kMaxModes = 32;

struct Sector {
  int modes = 0;
  int particles = 0;
  Statistics statistics = Statistics::fermion;

  bool operator==(const Sector&) const = default;
};

/// Occupation-number basis of a fixed (n, N, statistics) sector.
///
/// States are ordered descending-lexicographically on the occupation vector
/// (n_0, n_1, ..., n_{n-1}), so the first state packs all particles into the
/// lowest modes. Fermion states are |occ> = (c+_0)^{n_0} (c+_1)^{n_1} ... |0>.
class FockBasis {
 public:
  /// Throws SectorError for n < 1, N < 0 or a fermion sector with N > n.
  FockBasis(int modes, int particles, Statistics statistics);

  /// Cached shared basis. With allow_empty a fermion sector with N > n (or
  /// N < 0) yields an empty basis instead of throwing; operators use it as the
  /// explicit zero-sector target.
  static std::shared_ptr<const FockBasis> make(int modes, int particles, Statistics statistics,
                                               bool allow_empty = false);

  int modes() const { return n_; }
  int particles() const { return particles_; }
  Statistics statistics() const { return stats_; }
  Sector sector() const { return {n_, particles_, stats_}; }
  std::size_t size() const { return keys_.size(); }

  std::span<const std::uint8_t> occupations(std::size_t index) const {
    return {occ_.data() + index * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
  }

  /// Index of an occupation vector, or -1 when it is not in the sector.
  std::int64_t rank(std::span<const std::uint8_t> occ) const;
  std::int64_t rank_of_key(std::uint64_t key) const;
  std::uint64_t key(std::size_t index) const { return keys_[index]; }

  /// Bit-mask (fermions) or stars-and-bars (bosons) code of an occupation vector.
  std::uint64_t encode(std::span<const std::uint8_t> occ) const;

 private:
  struct EmptyTag {};
  FockBasis(int modes, int particles, Statistics statistics, EmptyTag);
  void enumerate();

  int n_;
  int particles_;
  Statistics stats_;
  std::vector<std::uint8_t> occ_;
  std::vector<std::uint64_t> keys_;
  std::unordered_map<std::uint64_t, std::uint32_t> rank_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

/// Enumerates the basis of a sector (uncached).
FockBasis enumerate_basis(int modes, int particles, Statistics statistics);

/// Sector dimension: C(n, N) for fermions, C(n+N-1, N) for bosons.
std::uint64_t sector_dimension(int modes, int particles, Statistics statistics);

struct StateVector {
  BasisPtr basis;
  CVector amplitudes;

  double norm() const { return amplitudes.norm(); }
  StateVector normalized() const;
  Sector sector() const { return basis->sector(); }
};

/// Single creation (dagger = true) or annihilation operator on one mode.
struct Ladder {
  int mode = 0;
  bool dagger = false;
};

/// c1 c2 ... ck as a product, applied right to left, times a coefficient.
struct LadderTerm {
  cplx coefficient{1.0, 0.0};
  std::vector<Ladder> factors;
};

using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

/// Second-quantized operator realized as a sparse matrix from one sector
/// (columns) to another (rows).
class SparseOperator {
 public:
  SparseOperator(BasisPtr source, BasisPtr target, SparseMatrix matrix);

  static SparseOperator zero(BasisPtr source, BasisPtr target);
  static SparseOperator identity(BasisPtr basis);

  const FockBasis& source() const { return *source_; }
  const FockBasis& target() const { return *target_; }
  const BasisPtr& source_basis() const { return source_; }
  const BasisPtr& target_basis() const { return target_; }
  const SparseMatrix& matrix() const { return matrix_; }
  int particle_change() const { return target_->particles() - source_->particles(); }
  bool is_square() const { return source_->sector() == target_->sector(); }

  SparseOperator adjoint() const;
  CVector apply(const CVector& v) const;
  StateVector apply(const StateVector& v) const;
  CMatrix dense() const { return CMatrix(matrix_); }
  bool is_hermitian(double tol = 1e-10) const;

  SparseOperator& operator+=(const SparseOperator& other);
  SparseOperator& operator-=(const SparseOperator& other);
  SparseOperator& operator*=(cplx s);

  /// Composition: (a * b) applies b first. Throws SectorError on mismatch.
  friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);
  friend SparseOperator operator+(SparseOperator a, const SparseOperator& b) { return a += b; }
  friend SparseOperator operator-(SparseOperator a, const SparseOperator& b) { return a -= b; }
  friend SparseOperator operator*(cplx s, SparseOperator a) { return a *= s; }
  friend SparseOperator operator*(double s, SparseOperator a) { return a *= cplx(s, 0.0); }

 private:
  BasisPtr source_;
  BasisPtr target_;
  SparseMatrix matrix_;
};

/// Sum of ladder-operator strings acting on `source`. Every term must change
/// the particle number by the same amount.
SparseOperator build_operator(const BasisPtr& source, const std::vector<LadderTerm>& terms);

SparseOperator creation_op(int mode, const BasisPtr& source);
SparseOperator annihilation_op(int mode, const BasisPtr& source);

/// sum_ij h_ij c+_i c_j on the sector of `basis`.
SparseOperator build_one_body(const CMatrix& h, const BasisPtr& basis);

/// Number operator N on a sector.
SparseOperator number_op(const BasisPtr& basis);

/// A+ = 1/2 sum_ij A_ij c+_i c+_j from sector N to N+2. `pair` must be
/// antisymmetric (fermions) or symmetric (bosons) within 1e-12 relative.
/// A fermion target with N+2 > n gives the explicit zero operator.
SparseOperator build_pair_creation(const CMatrix& pair, const BasisPtr& source);

/// Commutator [a, b] of two operators on the same sector.
SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);

/// <psi|O|psi> for a square operator on the state's sector.
cplx expectation(const StateVector& state, const SparseOperator& op);

/// Frobenius norm of a sparse operator.
double frobenius_norm(const SparseOperator& op);

/// -sum lambda log2 lambda of a trace-one PSD matrix.
double entropy(const CMatrix& rho_normalized);

}  // namespace paircond
