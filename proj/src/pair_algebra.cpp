#include "paircond/pair_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace paircond {

PairMatrix::PairMatrix(const CMatrix& entries, Statistics statistics) : stats_(statistics) {
  if (entries.rows() != entries.cols() || entries.rows() < 1) throw DimensionError("pair matrix must be square");
  const int n = static_cast<int>(entries.rows());
  const double sgn = statistics == Statistics::fermion ? -1.0 : 1.0;
  const double scale = std::max(1e-300, entries.cwiseAbs().maxCoeff());
  if ((entries - sgn * entries.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw StatisticsError(statistics == Statistics::fermion ? "fermion pair matrix is not antisymmetric"
                                                            : "boson pair matrix is not symmetric");
  }
  a_ = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (statistics == Statistics::boson) a_(i, i) = entries(i, i);
    for (int j = i + 1; j < n; ++j) {
      a_(i, j) = entries(i, j);
      a_(j, i) = sgn * entries(i, j);
    }
  }
}

PairMatrix PairMatrix::from_sigmas(const RVector& sigmas, Statistics statistics) {
  if (statistics == Statistics::fermion) {
    const int n = 2 * static_cast<int>(sigmas.size());
    CMatrix a = CMatrix::Zero(n, n);
    for (int k = 0; k < sigmas.size(); ++k) {
      a(2 * k, 2 * k + 1) = sigmas(k);
      a(2 * k + 1, 2 * k) = -sigmas(k);
    }
    return PairMatrix(a, statistics);
  }
  const int n = static_cast<int>(sigmas.size());
  CMatrix a = CMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) a(k, k) = std::sqrt(2.0) * sigmas(k);
  return PairMatrix(a, statistics);
}

PairMatrix PairMatrix::uniform(int n, Statistics statistics) {
  if (statistics == Statistics::fermion) {
    if (n < 2 || n % 2) throw DimensionError("uniform fermion pair operator needs even n");
    return from_sigmas(RVector::Constant(n / 2, 1.0 / std::sqrt(n / 2.0)), statistics);
  }
  if (n < 1) throw DimensionError("uniform boson pair operator needs n >= 1");
  return from_sigmas(RVector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n))), statistics);
}

PairMatrix PairMatrix::random(int n, Statistics statistics, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    CMatrix a(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
    }
    const double sgn = statistics == Statistics::fermion ? -1.0 : 1.0;
    a = 0.5 * (a + sgn * a.transpose()).eval();
    PairMatrix p(a, statistics);
    if (p.rank() == n) return p.normalized();
  }
  throw RankError("could not draw a full-rank pair matrix");
}

double PairMatrix::norm2() const { return 0.5 * a_.squaredNorm(); }

PairMatrix PairMatrix::normalized() const {
  const double s = norm2();
  if (!(s > 0.0)) throw RankError("cannot normalize a zero pair matrix");
  PairMatrix out = *this;
  out.a_ /= std::sqrt(s);
  return out;
}

PairMatrix PairMatrix::transformed(const CMatrix& u) const {
  if (u.rows() != n() || u.cols() != n()) throw DimensionError("mode transformation has wrong size");
  return PairMatrix(u * a_ * u.transpose(), stats_);
}

int PairMatrix::rank(double tol) const {
  Eigen::JacobiSVD<CMatrix> svd(a_);
  const auto& s = svd.singularValues();
  const double top = s.size() ? s(0) : 0.0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > tol * std::max(top, 1e-300) ? 1 : 0;
  return top > 0.0 ? r : 0;
}

CMatrix CanonicalForm::reconstruct() const {
  const CMatrix s = PairMatrix::from_sigmas(sigmas, statistics).matrix();
  return unitary * s * unitary.transpose();
}

namespace {

// Orthonormal basis of the complement of the columns of `q` (orthonormal).
CMatrix complement(const CMatrix& q, int n) {
  CMatrix out(n, 0);
  for (int e = 0; e < n && out.cols() + q.cols() < n; ++e) {
    CVector v = CVector::Unit(n, e);
    for (int pass = 0; pass < 2; ++pass) {
      if (q.cols()) v -= q * (q.adjoint() * v);
      if (out.cols()) v -= out * (out.adjoint() * v);
    }
    if (v.norm() > 1e-6) {
      out.conservativeResize(n, out.cols() + 1);
      out.col(out.cols() - 1) = v.normalized();
    }
  }
  return out;
}

CanonicalForm takagi(const PairMatrix& pm) {
  const int n = pm.n();
  const CMatrix& a = pm.matrix();
  const Eigen::MatrixXd b = a.real();
  const Eigen::MatrixXd c = a.imag();
  Eigen::MatrixXd m(2 * n, 2 * n);
  m << b, c, c, -b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  const double top = std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(2 * n - 1)));
  const double tol = 1e-10 * std::max(top, 1e-300);

  std::vector<double> s;
  CMatrix u(n, 0);
  for (int k = 2 * n - 1; k >= 0 && es.eigenvalues()(k) > tol; --k) {
    const Eigen::VectorXd x = es.eigenvectors().col(k).head(n);
    const Eigen::VectorXd y = es.eigenvectors().col(k).tail(n);
    CVector v(n);
    for (int i = 0; i < n; ++i) v(i) = cplx(x(i), y(i));
    u.conservativeResize(n, u.cols() + 1);
    u.col(u.cols() - 1) = v;
    s.push_back(es.eigenvalues()(k));
  }
  const CMatrix nullspace = complement(u, n);
  CanonicalForm cf;
  cf.statistics = Statistics::boson;
  cf.unitary.resize(n, n);
  cf.unitary << u, nullspace;
  cf.sigmas = RVector::Zero(n);
  for (std::size_t k = 0; k < s.size(); ++k) cf.sigmas(static_cast<Eigen::Index>(k)) = s[k] / std::sqrt(2.0);
  cf.order.resize(n);
  std::iota(cf.order.begin(), cf.order.end(), 0);
  return cf;
}

CanonicalForm youla(const PairMatrix& pm) {
  const int n = pm.n();
  if (n % 2) throw DimensionError("fermion canonical form needs even n");
  const CMatrix& a = pm.matrix();
  CMatrix h = a * a.adjoint();
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const RVector ev = es.eigenvalues().cwiseMax(0.0);
  const double smax = std::sqrt(ev(n - 1));
  const double gtol = 1e-8 * std::max(smax, 1e-300);

  CMatrix u = CMatrix::Zero(n, n);
  std::vector<double> sig;
  int filled = 0;
  // eigenvalues ascending: walk groups from the top
  int hi = n - 1;
  while (hi >= 0) {
    int lo = hi;
    while (lo - 1 >= 0 && std::sqrt(ev(hi)) - std::sqrt(ev(lo - 1)) <= gtol) --lo;
    const int dim = hi - lo + 1;
    if (dim % 2) {
      std::ostringstream os;
      os << "odd degeneracy " << dim << " at singular value " << std::sqrt(ev(hi));
      if (lo > 0) os << " (gap to next " << std::sqrt(ev(hi)) - std::sqrt(ev(lo - 1)) << ")";
      throw DecompositionError(os.str());
    }
    const CMatrix space = es.eigenvectors().middleCols(lo, dim);
    double sigma = 0.0;
    for (int k = lo; k <= hi; ++k) sigma += std::sqrt(ev(k));
    sigma /= dim;
    const bool zero = sigma <= 1e-10 * std::max(smax, 1e-300);
    std::vector<CVector> chosen;
    for (int c = 0; c < dim && static_cast<int>(chosen.size()) < dim; ++c) {
      CVector w = space.col(c);
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : chosen) w -= q * q.dot(w);
      }
      if (w.norm() < 1e-6) continue;
      w.normalize();
      CVector w2;
      if (zero) {
        // any orthonormal partner inside the null space
        w2 = CVector::Zero(n);
        for (int c2 = 0; c2 < dim; ++c2) {
          CVector t = space.col(c2);
          for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : chosen) t -= q * q.dot(t);
            t -= w * w.dot(t);
          }
          if (t.norm() > 1e-6) {
            w2 = t.normalized();
            break;
          }
        }
      } else {
        w2 = -(a * w.conjugate()) / sigma;
        for (int pass = 0; pass < 2; ++pass) {
          for (const auto& q : chosen) w2 -= q * q.dot(w2);
          w2 -= w * w.dot(w2);
        }
        w2.normalize();
      }
      chosen.push_back(w);
      chosen.push_back(w2);
      u.col(filled++) = w;
      u.col(filled++) = w2;
      sig.push_back(zero ? 0.0 : sigma);
    }
    if (static_cast<int>(chosen.size()) != dim) throw DecompositionError("could not pair a degenerate subspace");
    hi = lo - 1;
  }
  CanonicalForm cf;
  cf.statistics = Statistics::fermion;
  cf.unitary = u;
  cf.sigmas = RVector::Zero(n / 2);
  for (int k = 0; k < n / 2; ++k) {
    // recompute sigma from the pair to absorb averaging error
    const cplx s = (u.adjoint() * a * u.conjugate())(2 * k, 2 * k + 1);
    cf.sigmas(k) = sig[static_cast<std::size_t>(k)] == 0.0 ? 0.0 : std::abs(s);
  }
  cf.order.resize(n / 2);
  std::iota(cf.order.begin(), cf.order.end(), 0);
  return cf;
}

}  // namespace

CanonicalForm canonical_decompose(const PairMatrix& a) {
  if (a.n() < 1 || a.matrix().cwiseAbs().maxCoeff() == 0.0) throw RankError("canonical form of a zero pair matrix");
  return a.statistics() == Statistics::fermion ? youla(a) : takagi(a);
}

PairMatrix dual(const PairMatrix& a) {
  const int n = a.n();
  if (a.rank() < n) throw RankError("dual needs a full-rank pair matrix");
  const CMatrix inv = a.matrix().inverse();
  return PairMatrix((2.0 / n) * inv.adjoint(), a.statistics());
}

PairMatrix normalized_dual(const PairMatrix& a) { return dual(a).normalized(); }

RVector mode_scales(const RVector& from, const RVector& to, Statistics statistics) {
  if (from.size() != to.size()) throw DimensionError("sigma lists differ in length");
  const int blocks = static_cast<int>(from.size());
  const int n = statistics == Statistics::fermion ? 2 * blocks : blocks;
  RVector s(n);
  for (int k = 0; k < blocks; ++k) {
    if (!(from(k) > 0.0) || !(to(k) > 0.0)) throw RankError("scaling map needs positive sigmas");
    const double f = std::sqrt(to(k) / from(k));
    if (statistics == Statistics::fermion) {
      s(2 * k) = f;
      s(2 * k + 1) = f;
    } else {
      s(k) = f;
    }
  }
  return s;
}

CMatrix conjugate_one_body(const CMatrix& h, const RVector& scales) {
  if (h.rows() != scales.size() || h.cols() != scales.size()) throw DimensionError("scale vector has wrong size");
  CMatrix out = h;
  for (int i = 0; i < h.rows(); ++i) {
    for (int j = 0; j < h.cols(); ++j) out(i, j) *= scales(i) / scales(j);
  }
  return out;
}

}  // namespace paircond
