#pragma once

// Reference implementation on the full (truncated) Fock space built from
// Kronecker products: Jordan-Wigner strings for fermions, truncated ladders
// for bosons. Used only as an independent check of the sector code.

#include <cmath>
#include <vector>

#include "paircond/fock.hpp"

namespace oracle {

using paircond::CMatrix;
using paircond::CVector;
using paircond::cplx;
using paircond::Statistics;

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

struct Space {
  int n = 0;
  int local = 2;  // local dimension (fermions 2, bosons cutoff + 1)
  Statistics stats = Statistics::fermion;
  std::vector<CMatrix> ann;  // annihilators, mode 0 is the leftmost factor

  Space(int modes, Statistics s, int cutoff = 1) : n(modes), stats(s) {
    local = s == Statistics::fermion ? 2 : cutoff + 1;
    CMatrix a = CMatrix::Zero(local, local);
    for (int k = 1; k < local; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    CMatrix z = CMatrix::Identity(local, local);
    if (s == Statistics::fermion) z(1, 1) = -1.0;
    const CMatrix id = CMatrix::Identity(local, local);
    for (int i = 0; i < n; ++i) {
      CMatrix op = CMatrix::Identity(1, 1);
      for (int k = 0; k < n; ++k) op = kron(op, k < i ? z : (k == i ? a : id));
      ann.push_back(op);
    }
  }

  Eigen::Index dim() const { return ann.front().rows(); }
  CMatrix c(int i) const { return ann[static_cast<std::size_t>(i)]; }
  CMatrix cd(int i) const { return ann[static_cast<std::size_t>(i)].adjoint(); }

  Eigen::Index index(std::span<const std::uint8_t> occ) const {
    Eigen::Index idx = 0;
    for (int k = 0; k < n; ++k) idx = idx * local + occ[static_cast<std::size_t>(k)];
    return idx;
  }

  // Columns: sector basis states embedded in the full space.
  CMatrix embedding(const paircond::FockBasis& b) const {
    CMatrix e = CMatrix::Zero(dim(), static_cast<Eigen::Index>(b.size()));
    for (std::size_t k = 0; k < b.size(); ++k) e(index(b.occupations(k)), static_cast<Eigen::Index>(k)) = 1.0;
    return e;
  }

  CVector embed(const paircond::StateVector& s) const { return embedding(*s.basis) * s.amplitudes; }

  CMatrix number() const {
    CMatrix out = CMatrix::Zero(dim(), dim());
    for (int i = 0; i < n; ++i) out += cd(i) * c(i);
    return out;
  }

  CMatrix one_body(const CMatrix& h) const {
    CMatrix out = CMatrix::Zero(dim(), dim());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (h(i, j) != cplx(0.0)) out += h(i, j) * cd(i) * c(j);
    return out;
  }

  // A+ = 1/2 sum_ij A_ij c+_i c+_j
  CMatrix pair_creation(const CMatrix& a) const {
    CMatrix out = CMatrix::Zero(dim(), dim());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (a(i, j) != cplx(0.0)) out += 0.5 * a(i, j) * cd(i) * cd(j);
    return out;
  }

  CVector vacuum() const {
    CVector v = CVector::Zero(dim());
    v(0) = 1.0;
    return v;
  }

  // <c+_j c_i>
  CMatrix rho1(const CVector& psi) const {
    CMatrix r(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r(i, j) = psi.dot(cd(j) * (c(i) * psi));
    return r;
  }

  // <c+_k c+_l c_j c_i>, index (i*n + j, k*n + l)
  CMatrix rho2_full(const CVector& psi) const {
    CMatrix r(n * n, n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const CVector right = c(j) * (c(i) * psi);
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) r(i * n + j, k * n + l) = (c(l) * (c(k) * psi)).dot(right);
      }
    return r;
  }
};

// Eigenvalues of a Hermitian matrix, ascending.
inline Eigen::VectorXd eigenvalues(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace oracle
