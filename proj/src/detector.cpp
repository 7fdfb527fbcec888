#include "paircond/detector.hpp"

#include <cmath>
#include <random>

namespace paircond {

namespace {

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

long binom2(long k) { return k * (k - 1) / 2; }

void check_dms(const DensityMatrices& dms) {
  const auto p = static_cast<Eigen::Index>(pair_index_set(dms.n, dms.statistics).size());
  if (dms.rho1.rows() != dms.n || dms.rho1.cols() != dms.n) throw DimensionError("rho1 size does not match n");
  if (dms.rho2.rows() != p || dms.rho2.cols() != p) throw DimensionError("rho2 size does not match the packed pair count");
}

}  // namespace

CMatrix one_body_pair_term(const CMatrix& r, int n, Statistics s) {
  const double sx = -upper_sign(s);
  CMatrix f = CMatrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          cplx v = 0.0;
          if (i == k) v += r(j, l);
          if (i == l) v += sx * r(j, k);
          if (j == l) v += r(i, k);
          if (j == k) v += sx * r(i, l);
          f(i * n + j, k * n + l) = v;
        }
      }
    }
  }
  const CMatrix v = pair_isometry(n, s);
  return 0.5 * v.adjoint() * f * v;
}

ModifiedRho2 modified_rho2(const DensityMatrices& dms, double m) {
  check_dms(dms);
  ModifiedRho2 out{m, dms.statistics, dms.n, dms.rho2};
  if (m != 1.0) {
    out.matrix += (upper_sign(dms.statistics) * 0.5 * (m - 1.0)) * one_body_pair_term(dms.rho1, dms.n, dms.statistics);
  }
  out.matrix = hermitian_part(out.matrix);
  return out;
}

ModifiedRho2 modified_rho2_from_pair_hole(const CMatrix& rho2, const CMatrix& rhobar, int n, Statistics s, double m) {
  if (rho2.rows() != rhobar.rows() || rho2.cols() != rhobar.cols()) throw DimensionError("rho2 and rhobar differ in size");
  const CMatrix id = CMatrix::Identity(rho2.rows(), rho2.cols());
  return {m, s, n, hermitian_part(0.5 * ((1.0 + m) * rho2 + (1.0 - m) * (rhobar - id)))};
}

CVector pair_vector(const CMatrix& a, Statistics s) {
  const int n = static_cast<int>(a.rows());
  const auto pairs = pair_index_set(n, s);
  CVector v(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    v(static_cast<Eigen::Index>(p)) = i == j ? a(i, i) / std::sqrt(2.0) : a(i, j);
  }
  return v;
}

CMatrix pair_matrix_from_vector(const CVector& v, int n, Statistics s) {
  const CVector full = std::sqrt(2.0) * (pair_isometry(n, s) * v);
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = full(i * n + j);
  }
  return a;
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::true_condensate: return "true_condensate";
    case Classification::slater_limit: return "slater_limit";
    case Classification::frozen_pair_limit: return "frozen_pair_limit";
    case Classification::not_condensate: return "not_condensate";
  }
  return "unknown";
}

double default_tolerance(double m) { return 1e-8 * std::max(1.0, m); }

DetectorReport analyze(const ModifiedRho2& mod, double tol, const CMatrix* rho1) {
  DetectorReport rep;
  rep.m = mod.m;
  rep.tolerance = tol < 0.0 ? default_tolerance(mod.m) : tol;
  if (mod.matrix.rows() == 0) throw DimensionError("empty pair space");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(mod.matrix));
  const auto dim = es.eigenvalues().size();
  rep.spectrum = es.eigenvalues().reverse();
  rep.lambda_max = rep.spectrum(0);
  const double group = 100.0 * rep.tolerance;
  rep.degeneracy = 1;
  while (rep.degeneracy < dim && rep.lambda_max - rep.spectrum(rep.degeneracy) <= group) ++rep.degeneracy;
  rep.gap = rep.degeneracy < dim ? rep.lambda_max - rep.spectrum(rep.degeneracy) : 0.0;

  CVector a = es.eigenvectors().col(dim - 1);
  if (rep.degeneracy > 1) {
    // generic member of the top eigenspace, reproducible across runs
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> gauss;
    CVector ref(dim);
    for (Eigen::Index k = 0; k < dim; ++k) ref(k) = cplx(gauss(rng), gauss(rng));
    const auto top = es.eigenvectors().rightCols(rep.degeneracy);
    a = top * (top.adjoint() * ref);
    a.normalize();
  }
  Eigen::Index big = 0;
  a.cwiseAbs().maxCoeff(&big);
  a *= std::conj(a(big)) / std::abs(a(big));
  rep.pair_vector = a;
  rep.best_pair = pair_matrix_from_vector(a, mod.n, mod.statistics);
  rep.d2 = mod.m - rep.lambda_max;
  rep.is_condensate = std::abs(rep.lambda_max - mod.m) <= rep.tolerance;

  if (!rep.is_condensate) {
    rep.classification = Classification::not_condensate;
    return rep;
  }
  rep.classification = Classification::true_condensate;
  const long mi = std::lround(mod.m);
  if (mod.statistics == Statistics::fermion && rho1 != nullptr && mi >= 2 && rep.degeneracy > 1) {
    const double proj = (*rho1 * *rho1 - *rho1).norm();
    if (proj <= 1e-6 && rep.degeneracy == binom2(2 * mi)) {
      rep.classification = Classification::slater_limit;
      return rep;
    }
    for (long l = 2; l < mi; ++l) {
      if (rep.degeneracy == binom2(2 * l)) rep.classification = Classification::frozen_pair_limit;
    }
  }
  return rep;
}

DetectorReport detect(const DensityMatrices& dms, double m, double tol) {
  check_dms(dms);
  const double half = 0.5 * dms.rho1.trace().real();
  if (std::abs(half - m) > 1e-8 * std::max(1.0, m)) throw SectorError("pair number does not match Tr rho1 / 2");
  return analyze(modified_rho2(dms, m), tol, &dms.rho1);
}

DetectorReport detect(const StateVector& state, double tol) {
  if (state.basis->particles() % 2) throw PreconditionError("detect needs an even particle number");
  const DensityMatrices dms = reduced_dms(state, {true, true, false});
  return detect(dms, 0.5 * state.basis->particles(), tol);
}

Proximity proximity(const DensityMatrices& dms, double m) {
  const DetectorReport r = detect(dms, m);
  return {r.d2, r.best_pair};
}

double h_A_expectation(const ModifiedRho2& mod, const CMatrix& pair) {
  CVector a = pair_vector(pair, mod.statistics);
  a /= a.norm();
  return mod.m - a.dot(mod.matrix * a).real();
}

double d1_proximity(const CMatrix& rho1, double particles) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(rho1), Eigen::EigenvaluesOnly);
  return particles - es.eigenvalues().maxCoeff();
}

GeneralizedInput generalized_input(const Ensemble& ensemble) {
  if (ensemble.states.empty() || ensemble.states.size() != ensemble.weights.size()) {
    throw PreconditionError("ensemble needs one weight per state");
  }
  GeneralizedInput in;
  const auto& b0 = *ensemble.states.front().basis;
  in.statistics = b0.statistics();
  in.n = b0.modes();
  const auto p = static_cast<Eigen::Index>(pair_index_set(in.n, in.statistics).size());
  in.rho2 = CMatrix::Zero(p, p);
  in.rho1_tilde = CMatrix::Zero(in.n, in.n);
  double total = 0.0;
  for (std::size_t k = 0; k < ensemble.states.size(); ++k) {
    const StateVector& s = ensemble.states[k];
    if (s.basis->modes() != in.n || s.basis->statistics() != in.statistics) {
      throw SectorError("ensemble members live on different mode spaces");
    }
    const double w = ensemble.weights[k];
    const StateVector v = s.normalized();
    const double pairs = 0.5 * s.basis->particles();
    if (s.basis->particles() >= 1) in.rho1_tilde += (w * (pairs - 1.0)) * one_body_dm(v);
    if (s.basis->particles() >= 2) in.rho2 += w * packed_two_body_dm(v);
    in.mean_pairs += w * pairs;
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10) throw PreconditionError("ensemble weights do not sum to 1");
  return in;
}

DetectorReport detect_general(const GeneralizedInput& in, double tol) {
  ModifiedRho2 mod{in.mean_pairs, in.statistics, in.n, in.rho2};
  mod.matrix += (upper_sign(in.statistics) * 0.5) * one_body_pair_term(in.rho1_tilde, in.n, in.statistics);
  mod.matrix = hermitian_part(mod.matrix);
  return analyze(mod, tol, nullptr);
}

DetectorReport detect_general(const Ensemble& ensemble, double tol) {
  return detect_general(generalized_input(ensemble), tol);
}

OddReport detect_odd(const DensityMatrices& dms, double tol) {
  check_dms(dms);
  if (dms.statistics != Statistics::fermion) throw StatisticsError("odd-state detection is defined for fermions");
  if (dms.particles % 2 == 0) throw PreconditionError("detect_odd needs an odd particle number");
  const int n = dms.n;
  const double otol = tol < 0.0 ? 1e-8 : tol;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(dms.rho1));
  const RVector& ev = es.eigenvalues();
  const CMatrix& w = es.eigenvectors();
  OddReport out;
  out.occupied_orbital = static_cast<int>(ev.size() - 1);
  out.empty_orbital = 0;
  if (std::abs(ev(out.occupied_orbital) - 1.0) > otol) throw PreconditionError("no unit-occupancy orbital: not an odd condensate");
  if (std::abs(ev(out.empty_orbital)) > otol) throw PreconditionError("no empty partner orbital: not an odd condensate");
  out.occupied_vector = w.col(out.occupied_orbital);

  std::vector<int> keep;
  for (int k = 0; k < n; ++k) {
    if (k != out.occupied_orbital && k != out.empty_orbital) keep.push_back(k);
  }
  const int nc = static_cast<int>(keep.size());
  CMatrix kron(n * n, nc * nc);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < nc; ++a) {
        for (int b = 0; b < nc; ++b) kron(i * n + j, a * nc + b) = w(i, keep[a]) * w(j, keep[b]);
      }
    }
  }
  const CMatrix full = 2.0 * unpack_two_body(dms.rho2, n, dms.statistics);
  const CMatrix full_c = kron.adjoint() * full * kron;
  CMatrix wc(n, nc);
  for (int a = 0; a < nc; ++a) wc.col(a) = w.col(keep[a]);

  DensityMatrices inner;
  inner.statistics = Statistics::fermion;
  inner.n = nc;
  inner.particles = dms.particles - 1;
  inner.rho1 = hermitian_part(wc.adjoint() * dms.rho1 * wc);
  inner.rho2 = hermitian_part(0.5 * pack_two_body(full_c, nc, Statistics::fermion));
  out.inner = detect(inner, 0.5 * inner.particles, tol);
  out.pair_original = wc * out.inner.best_pair * wc.transpose();
  return out;
}

}  // namespace paircond
