#include "paircond/conserved.hpp"

#include <cmath>
#include <limits>

namespace paircond {

CMatrix q_coefficients(const PairMatrix& a, int i, int j) {
  const int n = a.n();
  const double sgn = upper_sign(a.statistics());
  CMatrix h = CMatrix::Zero(n, n);
  for (int l = 0; l < n; ++l) {
    h(l, j) += a(i, l);
    h(l, i) += sgn * a(j, l);
  }
  return h;
}

QFamily q_ops(const PairMatrix& a) {
  QFamily f;
  f.statistics = a.statistics();
  const int n = a.n();
  for (int i = 0; i < n; ++i) {
    for (int j = (a.statistics() == Statistics::fermion ? i : i + 1); j < n; ++j) {
      f.members.push_back({i, j, q_coefficients(a, i, j)});
    }
  }
  return f;
}

QFamily qbar_ops(const PairMatrix& a) {
  const int n = a.n();
  if (a.rank() < n) throw RankError("Qbar family needs a full-rank pair matrix");
  const CMatrix inv = a.matrix().inverse();
  const double sgn = upper_sign(a.statistics());
  QFamily f;
  f.statistics = a.statistics();
  for (int i = 0; i < n; ++i) {
    for (int j = (a.statistics() == Statistics::fermion ? i : i + 1); j < n; ++j) {
      CMatrix h = CMatrix::Zero(n, n);
      for (int k = 0; k < n; ++k) {
        h(i, k) += inv(j, k);
        h(j, k) += sgn * inv(i, k);
      }
      f.members.push_back({i, j, h});
    }
  }
  return f;
}

int family_rank(const std::vector<CMatrix>& hs, double tol) {
  if (hs.empty()) return 0;
  const auto len = hs.front().size();
  CMatrix stack(len, static_cast<Eigen::Index>(hs.size()));
  for (std::size_t k = 0; k < hs.size(); ++k) {
    stack.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const CVector>(hs[k].data(), len);
  }
  Eigen::JacobiSVD<CMatrix> svd(stack);
  const auto& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > tol * std::max(1.0, s(0)) ? 1 : 0;
  return r;
}

namespace {

CMatrix unit(int n, int i, int j) {
  CMatrix e = CMatrix::Zero(n, n);
  e(i, j) = 1.0;
  return e;
}

}  // namespace

std::vector<OperatorTriad> su2_scaled_ops(const CanonicalForm& cf) {
  const CMatrix& u = cf.unitary;
  const int n = static_cast<int>(u.rows());
  const RVector& s = cf.sigmas;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (!(s(k) > 0.0)) throw RankError("scaled triads need positive sigmas");
  }
  auto lift = [&](const CMatrix& h) -> CMatrix { return u * h * u.adjoint(); };
  std::vector<OperatorTriad> out;
  const cplx I(0.0, 1.0);

  if (cf.statistics == Statistics::fermion) {
    const int d = n / 2;
    auto a = [](int k) { return 2 * k; };
    auto abar = [](int k) { return 2 * k + 1; };
    for (int k = 0; k < d; ++k) {
      for (int l = k + 1; l < d; ++l) {
        const double r = std::sqrt(s(k) / s(l));
        const double ri = 1.0 / r;
        OperatorTriad t1{"S_" + std::to_string(k) + "," + std::to_string(l), TriadKind::ladder, {}};
        t1.ops[0] = r * unit(n, a(k), abar(l)) + ri * unit(n, a(l), abar(k));
        t1.ops[1] = r * unit(n, abar(k), a(l)) + ri * unit(n, abar(l), a(k));
        t1.ops[2] = 0.5 * (unit(n, a(k), a(k)) - unit(n, abar(k), abar(k)) + unit(n, a(l), a(l)) -
                           unit(n, abar(l), abar(l)));
        OperatorTriad t2{"S_" + std::to_string(k) + "bar," + std::to_string(l), TriadKind::ladder, {}};
        t2.ops[0] = r * unit(n, a(k), a(l)) - ri * unit(n, abar(l), abar(k));
        t2.ops[1] = ri * unit(n, a(l), a(k)) - r * unit(n, abar(k), abar(l));
        t2.ops[2] = 0.5 * (unit(n, a(k), a(k)) - unit(n, a(l), a(l)) + unit(n, abar(l), abar(l)) -
                           unit(n, abar(k), abar(k)));
        for (auto& m : t1.ops) m = lift(m);
        for (auto& m : t2.ops) m = lift(m);
        out.push_back(std::move(t1));
        out.push_back(std::move(t2));
      }
    }
    for (int k = 0; k < d; ++k) {
      OperatorTriad t{"S_" + std::to_string(k), TriadKind::ladder, {}};
      t.ops[0] = lift(unit(n, a(k), abar(k)));
      t.ops[1] = lift(unit(n, abar(k), a(k)));
      t.ops[2] = lift(0.5 * (unit(n, a(k), a(k)) - unit(n, abar(k), abar(k))));
      out.push_back(std::move(t));
    }
    return out;
  }

  auto qt = [&](int k, int l) -> CMatrix {
    const double r = std::sqrt(s(k) / s(l));
    return I * (r * unit(n, k, l) - (1.0 / r) * unit(n, l, k));
  };
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      for (int l = k + 1; l < n; ++l) {
        OperatorTriad t{"Qt_" + std::to_string(j) + "," + std::to_string(k) + "," + std::to_string(l),
                        TriadKind::cartesian, {}};
        t.ops[0] = lift(qt(j, k));
        t.ops[1] = lift(qt(k, l));
        t.ops[2] = lift(qt(j, l));
        out.push_back(std::move(t));
      }
    }
  }
  return out;
}

double triad_residual(const OperatorTriad& t) {
  const auto& o = t.ops;
  const cplx I(0.0, 1.0);
  double r = 0.0;
  if (t.kind == TriadKind::ladder) {
    r = std::max(r, (coefficient_commutator(o[0], o[1]) - 2.0 * o[2]).norm());
    r = std::max(r, (coefficient_commutator(o[2], o[0]) - o[0]).norm());
    r = std::max(r, (coefficient_commutator(o[2], o[1]) + o[1]).norm());
  } else {
    r = std::max(r, (coefficient_commutator(o[0], o[1]) - I * o[2]).norm());
    r = std::max(r, (coefficient_commutator(o[1], o[2]) - I * o[0]).norm());
    r = std::max(r, (coefficient_commutator(o[2], o[0]) - I * o[1]).norm());
  }
  return r;
}

AlgebraReport verify_commutator_algebra(const PairMatrix& a) {
  const int n = a.n();
  const double sgn = upper_sign(a.statistics());
  std::vector<CMatrix> q(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) q[static_cast<std::size_t>(i * n + j)] = q_coefficients(a, i, j);
  }
  auto Q = [&](int i, int j) -> const CMatrix& { return q[static_cast<std::size_t>(i * n + j)]; };
  AlgebraReport rep;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          const CMatrix lhs = coefficient_commutator(Q(i, j), Q(k, l));
          const CMatrix rhs = sgn * (a(k, i) * Q(j, l) + a(l, j) * Q(i, k)) -
                              sgn * (a(j, k) * Q(i, l) + a(i, l) * Q(j, k));
          rep.max_residual = std::max(rep.max_residual, (lhs - rhs).norm());
          ++rep.checked;
        }
      }
    }
  }
  return rep;
}

NullspaceResult hermitian_nullspace(const CMatrix& m, double rel) {
  NullspaceResult res;
  if (m.rows() == 0) return res;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()));
  res.spectrum = es.eigenvalues();
  const double top = res.spectrum(res.spectrum.size() - 1);
  res.tolerance = rel * std::max(top, 1.0);
  int z = 0;
  while (z < res.spectrum.size() && res.spectrum(z) < res.tolerance) ++z;
  res.dimension = z;
  res.count = z;
  res.basis = es.eigenvectors().leftCols(z);
  const double inf = std::numeric_limits<double>::infinity();
  if (z == 0 || z == res.spectrum.size()) {
    res.gap_ratio = inf;
  } else {
    const double big = res.spectrum(z);
    const double small = std::max(std::abs(res.spectrum(z - 1)), 1e-300);
    res.gap_ratio = big / small;
  }
  return res;
}

CMatrix covariance_C11(const StateVector& state) {
  return covariance_11(reduced_dms(state, {true, false, true}));
}

CMatrix covariance_C20(const StateVector& state) { return packed_two_body_dm(state).transpose(); }

CMatrix covariance_C02(const StateVector& state) { return packed_pair_hole_dm(state); }

NullspaceResult conserved_count(const StateVector& state, OperatorClass cls, double rel) {
  switch (cls) {
    case OperatorClass::one_body: {
      NullspaceResult r = hermitian_nullspace(rho11_matrix(state), rel);
      r.count = r.dimension + 1;
      return r;
    }
    case OperatorClass::pair_annihilation:
      return hermitian_nullspace(covariance_C20(state), rel);
    case OperatorClass::pair_creation:
      return hermitian_nullspace(covariance_C02(state), rel);
  }
  throw Error("unknown operator class");
}

CMatrix joint_kernel(const std::vector<SparseOperator>& ops, double tol) {
  if (ops.empty()) throw PreconditionError("joint kernel of an empty operator list");
  const auto dim = static_cast<Eigen::Index>(ops.front().source().size());
  CMatrix g = CMatrix::Zero(dim, dim);
  for (const auto& op : ops) {
    if (!(op.source().sector() == ops.front().source().sector())) throw SectorError("operators act on different sectors");
    const CMatrix d = op.dense();
    g += d.adjoint() * d;
  }
  NullspaceResult r = hermitian_nullspace(g, tol);
  return r.basis;
}

}  // namespace paircond
