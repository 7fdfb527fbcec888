#include "paircond/eigensolver.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace paircond {

namespace {

void require_hermitian(const SparseOperator& op, double tol) {
  if (!op.is_square()) throw SectorError("ground_state needs a square operator");
  if (!op.is_hermitian(tol)) throw PreconditionError("ground_state needs a Hermitian operator");
}

double residual_of(const SparseOperator& op, const CVector& v, double e) {
  return (op.matrix() * v - e * v).norm();
}

CVector start_vector(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CVector v(static_cast<Eigen::Index>(dim));
  const double scale = 1.0 / 9007199254740992.0;  // 2^-53
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = static_cast<double>(rng() >> 11) * scale - 0.5;
    const double im = static_cast<double>(rng() >> 11) * scale - 0.5;
    v(i) = cplx(re, im);
  }
  return v.normalized();
}

Eigenpair dense_ground_state(const SparseOperator& op) {
  CMatrix h = op.dense();
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  Eigenpair out;
  out.energy = es.eigenvalues()(0);
  out.state = StateVector{op.source_basis(), es.eigenvectors().col(0)};
  out.residual = residual_of(op, out.state.amplitudes, out.energy);
  return out;
}

Eigenpair lanczos_ground_state(const SparseOperator& op, const SolverOptions& opts) {
  const auto dim = op.source().size();
  const int k = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(opts.krylov_dim), dim));
  CVector x = start_vector(dim, opts.seed);
  double energy = 0.0;
  double res = 0.0;
  CMatrix basis(static_cast<Eigen::Index>(dim), k);
  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    Eigen::VectorXd alpha(k), beta(k);
    basis.col(0) = x;
    int steps = 0;
    for (int j = 0; j < k; ++j) {
      CVector w = op.matrix() * basis.col(j);
      alpha(j) = basis.col(j).dot(w).real();
      // full reorthogonalization, applied twice
      for (int pass = 0; pass < 2; ++pass) {
        const CVector c = basis.leftCols(j + 1).adjoint() * w;
        w -= basis.leftCols(j + 1) * c;
      }
      steps = j + 1;
      beta(j) = w.norm();
      if (j + 1 == k || beta(j) < 1e-14 * std::max(1.0, std::abs(alpha(j)))) break;
      basis.col(j + 1) = w / beta(j);
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(steps, steps);
    for (int j = 0; j < steps; ++j) {
      t(j, j) = alpha(j);
      if (j + 1 < steps) t(j, j + 1) = t(j + 1, j) = beta(j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    energy = es.eigenvalues()(0);
    const Eigen::VectorXd y = es.eigenvectors().col(0);
    x = (basis.leftCols(steps) * y.cast<cplx>()).normalized();
    res = residual_of(op, x, energy);
    if (res <= opts.residual_tol * std::max(1.0, std::abs(energy))) {
      // refine the Rayleigh quotient on the returned vector
      energy = x.dot(op.matrix() * x).real();
      res = residual_of(op, x, energy);
      if (res <= opts.residual_tol * std::max(1.0, std::abs(energy))) {
        return Eigenpair{energy, StateVector{op.source_basis(), x}, res};
      }
    }
  }
  std::ostringstream os;
  os << "Lanczos did not converge: residual " << res;
  throw SolverError(os.str(), res);
}

}  // namespace

Eigenpair ground_state(const SparseOperator& op, const SolverOptions& opts) {
  require_hermitian(op, opts.hermitian_tol);
  if (op.source().size() == 0) throw SectorError("ground_state on an empty sector");
  Eigenpair out = op.source().size() < opts.dense_threshold ? dense_ground_state(op)
                                                             : lanczos_ground_state(op, opts);
  if (out.residual > opts.residual_tol * std::max(1.0, std::abs(out.energy))) {
    std::ostringstream os;
    os << "ground state residual " << out.residual << " above target";
    throw SolverError(os.str(), out.residual);
  }
  return out;
}

RVector lowest_eigenvalues(const SparseOperator& op, int count) {
  if (!op.is_square()) throw SectorError("eigenvalues need a square operator");
  CMatrix h = op.dense();
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  const int c = std::min<int>(count, static_cast<int>(es.eigenvalues().size()));
  return es.eigenvalues().head(c);
}

}  // namespace paircond
