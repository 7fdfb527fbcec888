#include "paircond/density.hpp"

#include <cmath>

namespace paircond {

std::vector<std::pair<int, int>> pair_index_set(int n, Statistics s) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i) {
    for (int j = (s == Statistics::fermion ? i + 1 : i); j < n; ++j) out.emplace_back(i, j);
  }
  return out;
}

int packed_index(int i, int j, int n, Statistics s) {
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= n) return -1;
  if (s == Statistics::fermion) {
    if (i == j) return -1;
    // pairs before row i: sum_{r<i} (n-1-r)
    return i * (n - 1) - i * (i - 1) / 2 + (j - i - 1);
  }
  return i * n - i * (i - 1) / 2 + (j - i);
}

CMatrix pair_isometry(int n, Statistics s) {
  const auto pairs = pair_index_set(n, s);
  CMatrix v = CMatrix::Zero(n * n, static_cast<Eigen::Index>(pairs.size()));
  const double r = 1.0 / std::sqrt(2.0);
  const double sgn = s == Statistics::fermion ? -1.0 : 1.0;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    if (i == j) {
      v(i * n + i, p) = 1.0;
    } else {
      v(i * n + j, p) = r;
      v(j * n + i, p) = sgn * r;
    }
  }
  return v;
}

namespace {

void require_state(const StateVector& state) {
  if (!state.basis) throw SectorError("state without basis");
  if (static_cast<std::size_t>(state.amplitudes.size()) != state.basis->size()) {
    throw DimensionError("state amplitudes do not match its basis");
  }
}

// Columns are op_k |psi> for each ladder term list.
CMatrix apply_terms(const StateVector& state, const std::vector<std::vector<LadderTerm>>& ops) {
  CMatrix out;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const auto op = build_operator(state.basis, ops[k]);
    if (k == 0) out = CMatrix::Zero(static_cast<Eigen::Index>(op.target().size()),
                                    static_cast<Eigen::Index>(ops.size()));
    if (out.rows() > 0) out.col(static_cast<Eigen::Index>(k)) = op.apply(state.amplitudes);
  }
  return out;
}

std::vector<std::vector<LadderTerm>> pair_annihilators(int n, Statistics s, bool dagger) {
  std::vector<std::vector<LadderTerm>> ops;
  const double r = 1.0 / std::sqrt(2.0);
  for (const auto& [i, j] : pair_index_set(n, s)) {
    const double c = i == j ? r : 1.0;
    if (dagger) {
      ops.push_back({LadderTerm{c, {Ladder{i, true}, Ladder{j, true}}}});
    } else {
      ops.push_back({LadderTerm{c, {Ladder{j, false}, Ladder{i, false}}}});
    }
  }
  return ops;
}

CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

CMatrix one_body_dm(const StateVector& state) {
  require_state(state);
  const int n = state.basis->modes();
  std::vector<std::vector<LadderTerm>> ops;
  for (int i = 0; i < n; ++i) ops.push_back({LadderTerm{1.0, {Ladder{i, false}}}});
  const CMatrix y = apply_terms(state, ops);
  return hermitize((y.adjoint() * y).transpose());
}

CMatrix packed_two_body_dm(const StateVector& state) {
  require_state(state);
  const CMatrix x = apply_terms(state, pair_annihilators(state.basis->modes(), state.basis->statistics(), false));
  return hermitize((x.adjoint() * x).transpose());
}

CMatrix packed_pair_hole_dm(const StateVector& state) {
  require_state(state);
  const CMatrix x = apply_terms(state, pair_annihilators(state.basis->modes(), state.basis->statistics(), true));
  return hermitize(x.adjoint() * x);
}

CMatrix full_two_body_dm(const StateVector& state) {
  require_state(state);
  const int n = state.basis->modes();
  std::vector<std::vector<LadderTerm>> ops;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) ops.push_back({LadderTerm{1.0, {Ladder{j, false}, Ladder{i, false}}}});
  }
  const CMatrix w = apply_terms(state, ops);
  return hermitize((w.adjoint() * w).transpose());
}

CMatrix rho11_matrix(const StateVector& state) {
  require_state(state);
  const int n = state.basis->modes();
  std::vector<std::vector<LadderTerm>> ops;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) ops.push_back({LadderTerm{1.0, {Ladder{i, true}, Ladder{j, false}}}});
  }
  const CMatrix phi = apply_terms(state, ops);
  return hermitize(phi.adjoint() * phi);
}

DensityMatrices reduced_dms(const StateVector& state, DensityRequest what) {
  require_state(state);
  DensityMatrices dm;
  dm.statistics = state.basis->statistics();
  dm.n = state.basis->modes();
  dm.particles = state.basis->particles();
  if (what.rho1) dm.rho1 = one_body_dm(state);
  if (what.rho2) dm.rho2 = packed_two_body_dm(state);
  if (what.rho11) dm.rho11 = rho11_matrix(state);
  return dm;
}

CMatrix unpack_two_body(const CMatrix& packed, int n, Statistics s) {
  const CMatrix v = pair_isometry(n, s);
  if (packed.rows() != v.cols() || packed.cols() != v.cols()) {
    throw DimensionError("packed two-body matrix has wrong size");
  }
  return v * packed * v.adjoint();
}

CMatrix pack_two_body(const CMatrix& full, int n, Statistics s) {
  if (full.rows() != n * n || full.cols() != n * n) throw DimensionError("full two-body matrix has wrong size");
  const CMatrix v = pair_isometry(n, s);
  return v.adjoint() * full * v;
}

CMatrix covariance_11(const DensityMatrices& dm) {
  const int n = dm.n;
  if (dm.rho11.rows() != n * n || dm.rho1.rows() != n) throw DimensionError("covariance needs rho1 and rho11");
  CVector w(n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w(i * n + j) = dm.rho1(i, j);
  }
  return hermitize(dm.rho11 - w * w.adjoint());
}

double min_eigenvalue(const CMatrix& h) {
  if (h.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace paircond
