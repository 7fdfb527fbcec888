#include "paircond/hamiltonians.hpp"

#include <cmath>
#include <limits>

#include "paircond/states.hpp"

namespace paircond {

namespace {

void require_basis(const PairMatrix& a, const BasisPtr& basis) {
  if (a.statistics() != basis->statistics()) throw StatisticsError("pair matrix statistics differ from the sector");
  if (a.n() != basis->modes()) throw DimensionError("pair matrix size differs from the mode count");
}

double sector_pairs(const BasisPtr& basis) { return 0.5 * basis->particles(); }

// Rank of the column span from the eigenvalues of a Gram matrix (cut at
// rel * top), with the gap between the smallest kept and largest dropped
// singular value.
struct GramRank {
  int rank = 0;
  double gap = std::numeric_limits<double>::infinity();
};

GramRank gram_rank(const CMatrix& gram, double rel) {
  GramRank out;
  if (gram.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (gram + gram.adjoint()), Eigen::EigenvaluesOnly);
  const RVector& ev = es.eigenvalues();
  const double top = std::max(ev(ev.size() - 1), 0.0);
  const double tol = rel * std::max(top, 1e-300);
  Eigen::Index z = 0;
  while (z < ev.size() && ev(z) < tol) ++z;
  out.rank = static_cast<int>(ev.size() - z);
  if (z > 0 && z < ev.size()) {
    out.gap = std::sqrt(ev(z) / std::max(std::abs(ev(z - 1)), 1e-300));
  }
  return out;
}

// Columns vec(op) of square sector operators as a sparse matrix.
SparseMatrix stack_vec(const std::vector<SparseOperator>& ops, Eigen::Index dim) {
  std::vector<Eigen::Triplet<cplx>> trip;
  for (std::size_t c = 0; c < ops.size(); ++c) {
    const SparseMatrix& m = ops[c].matrix();
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
      for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
        if (it.value() != cplx(0.0)) {
          trip.emplace_back(it.row() * dim + it.col(), static_cast<Eigen::Index>(c), it.value());
        }
      }
    }
  }
  SparseMatrix s(dim * dim, static_cast<Eigen::Index>(ops.size()));
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

CMatrix sparse_gram(const SparseMatrix& s) {
  const SparseMatrix g = SparseMatrix(s.adjoint()) * s;
  return CMatrix(g);
}

}  // namespace

void validate_pair_interaction(const CMatrix& v, int n, Statistics statistics, double tol) {
  const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
  if (v.rows() != nn || v.cols() != nn) throw DimensionError("pair interaction must be n^2 x n^2");
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  if ((v - v.adjoint()).cwiseAbs().maxCoeff() > tol * scale) throw PreconditionError("pair interaction is not Hermitian");
  const double sgn = upper_sign(statistics);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (Eigen::Index c = 0; c < nn; ++c) {
        if (std::abs(v(i * n + j, c) - sgn * v(j * n + i, c)) > tol * scale) {
          throw PreconditionError("pair interaction breaks the exchange symmetry of Q_ij");
        }
      }
    }
  }
}

SparseOperator h_Q(const PairMatrix& a, const CMatrix& v, const BasisPtr& basis) {
  require_basis(a, basis);
  const int n = a.n();
  validate_pair_interaction(v, n, a.statistics());
  std::vector<CMatrix> q(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) q[static_cast<std::size_t>(i * n + j)] = q_coefficients(a, i, j);
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (v + v.adjoint()));
  const RVector& lam = es.eigenvalues();
  const CMatrix& w = es.eigenvectors();
  const double cut = 1e-14 * std::max(1.0, lam.cwiseAbs().maxCoeff());
  SparseOperator h = SparseOperator::zero(basis, basis);
  for (Eigen::Index nu = 0; nu < lam.size(); ++nu) {
    if (std::abs(lam(nu)) <= cut) continue;
    CMatrix o = CMatrix::Zero(n, n);
    for (std::size_t b = 0; b < q.size(); ++b) o += std::conj(w(static_cast<Eigen::Index>(b), nu)) * q[b];
    const SparseOperator op = build_one_body(o, basis);
    h += (lam(nu) / 8.0) * (op.adjoint() * op);
  }
  return h;
}

SparseOperator h_Q_general(const PairMatrix& a, const CMatrix& h, const std::vector<CMatrix>& o_list,
                           const std::vector<CMatrix>& v_list, const BasisPtr& basis) {
  require_basis(a, basis);
  const int n = a.n();
  if (h.size() != 0 && (h.rows() != n || h.cols() != n)) throw DimensionError("h must be n x n");
  if (o_list.size() != v_list.size()) throw DimensionError("one interaction matrix per operator O_mu");
  CMatrix lin = h.size() == 0 ? CMatrix::Zero(n, n) : h;
  SparseOperator out = SparseOperator::zero(basis, basis);
  CMatrix first = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) first += lin(i, j) * q_coefficients(a, i, j);
  }
  out += build_one_body(first, basis);
  for (std::size_t mu = 0; mu < o_list.size(); ++mu) {
    const CMatrix& vm = v_list[mu];
    if (vm.rows() != n || vm.cols() != n) throw DimensionError("V_mu must be n x n");
    CMatrix qsum = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) qsum += vm(i, j) * q_coefficients(a, i, j);
    }
    out += build_one_body(o_list[mu], basis) * build_one_body(qsum, basis);
  }
  return out;
}

int natural_level(int mode, Statistics statistics) { return statistics == Statistics::fermion ? mode / 2 : mode; }

CMatrix level_interaction(const Eigen::MatrixXd& vkl, Statistics statistics) {
  const int levels = static_cast<int>(vkl.rows());
  const int n = statistics == Statistics::fermion ? 2 * levels : levels;
  const double sgn = upper_sign(statistics);
  CMatrix v = CMatrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = 0.5 * vkl(natural_level(i, statistics), natural_level(j, statistics));
      v(i * n + j, i * n + j) += x;
      v(i * n + j, j * n + i) += sgn * x;
    }
  }
  return v;
}

namespace {

Ladder cr(int m) { return {m, true}; }
Ladder an(int m) { return {m, false}; }

void check_levels(const RVector& sigmas, const Eigen::MatrixXd& vkl, const BasisPtr& basis, int n) {
  if (basis->modes() != n) throw DimensionError("sigma count does not match the sector");
  if (vkl.rows() != sigmas.size() || vkl.cols() != sigmas.size()) throw DimensionError("V_kl must be square in levels");
  if ((vkl - vkl.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, vkl.cwiseAbs().maxCoeff())) {
    throw PreconditionError("V_kl must be symmetric");
  }
}

}  // namespace

SparseOperator h_QF(const RVector& sigmas, const Eigen::MatrixXd& vkl, const BasisPtr& basis) {
  const int d = static_cast<int>(sigmas.size());
  if (basis->statistics() != Statistics::fermion) throw StatisticsError("h_QF acts on fermion sectors");
  check_levels(sigmas, vkl, basis, 2 * d);
  std::vector<LadderTerm> terms;
  auto nk = [](int mode) { return std::vector<Ladder>{cr(mode), an(mode)}; };
  auto add = [&](cplx c, std::vector<Ladder> f) { terms.push_back({c, std::move(f)}); };
  auto cat = [](std::vector<Ladder> x, const std::vector<Ladder>& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };
  for (int k = 0; k < d; ++k) {
    const int a = 2 * k;
    const int b = 2 * k + 1;
    double eps = 0.0;
    for (int l = 0; l < d; ++l) {
      if (l != k) eps += vkl(k, l) * sigmas(l) * sigmas(l);
    }
    add(0.5 * eps, nk(a));
    add(0.5 * eps, nk(b));
    // (n_a - n_b)^2 = n_a + n_b - 2 n_a n_b
    const double c = 0.75 * vkl(k, k) * sigmas(k) * sigmas(k);
    add(c, nk(a));
    add(c, nk(b));
    add(-2.0 * c, cat(nk(a), nk(b)));
    for (int l = 0; l < d; ++l) {
      if (l == k) continue;
      const double v = vkl(k, l);
      const double pair = -0.5 * v * sigmas(k) * sigmas(l);
      // A_k+ A_l + h.c. summed over ordered (k,l) counts each h.c. once per order
      add(pair, {cr(a), cr(b), an(2 * l + 1), an(2 * l)});
      add(pair, {cr(2 * l), cr(2 * l + 1), an(b), an(a)});
      const double dens = -0.5 * v * (sigmas(k) * sigmas(k) + sigmas(l) * sigmas(l)) * 0.25;
      for (int x : {a, b}) {
        for (int y : {2 * l, 2 * l + 1}) add(dens, cat(nk(x), nk(y)));
      }
    }
  }
  return build_operator(basis, terms);
}

SparseOperator h_QB(const RVector& sigmas, const Eigen::MatrixXd& vkl, const BasisPtr& basis) {
  const int n = static_cast<int>(sigmas.size());
  if (basis->statistics() != Statistics::boson) throw StatisticsError("h_QB acts on boson sectors");
  check_levels(sigmas, vkl, basis, n);
  std::vector<LadderTerm> terms;
  for (int k = 0; k < n; ++k) {
    double eps = 0.0;
    for (int l = 0; l < n; ++l) {
      if (l != k) eps += vkl(k, l) * sigmas(l) * sigmas(l);
    }
    terms.push_back({0.5 * eps, {cr(k), an(k)}});
    for (int l = 0; l < n; ++l) {
      if (l == k) continue;
      const double v = vkl(k, l);
      const double pair = -0.25 * v * sigmas(k) * sigmas(l);
      terms.push_back({pair, {cr(k), cr(k), an(l), an(l)}});
      terms.push_back({pair, {cr(l), cr(l), an(k), an(k)}});
      const double dens = 0.25 * v * (sigmas(k) * sigmas(k) + sigmas(l) * sigmas(l));
      terms.push_back({dens, {cr(k), an(k), cr(l), an(l)}});
    }
  }
  return build_operator(basis, terms);
}

SparseOperator pair_number_term(const PairMatrix& a, const BasisPtr& basis) {
  require_basis(a, basis);
  if (basis->particles() < 2) return SparseOperator::zero(basis, basis);
  const SparseOperator down = build_pair_annihilation(a, basis);
  return build_pair_creation(a, down.target_basis()) * down;
}

SparseOperator pair_commutator(const PairMatrix& a, const BasisPtr& basis) {
  require_basis(a, basis);
  const SparseOperator up = build_pair_creation(a, basis);
  SparseOperator aad = up.target().size() == 0 ? SparseOperator::zero(basis, basis) : up.adjoint() * up;
  return aad - pair_number_term(a, basis);
}

SparseOperator m_A_op(const PairMatrix& a, const BasisPtr& basis) {
  const double m = sector_pairs(basis);
  const SparseOperator id = SparseOperator::identity(basis);
  return pair_number_term(a, basis) - (0.5 * (m - 1.0)) * (pair_commutator(a, basis) - id);
}

SparseOperator h_A(const PairMatrix& a, const BasisPtr& basis) {
  return sector_pairs(basis) * SparseOperator::identity(basis) - m_A_op(a, basis);
}

SparseOperator h_A_from_q(const PairMatrix& a, const BasisPtr& basis) {
  require_basis(a, basis);
  const int n = a.n();
  SparseOperator h = SparseOperator::zero(basis, basis);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const SparseOperator q = build_one_body(q_coefficients(a, i, j), basis);
      h += 0.125 * (q.adjoint() * q);
    }
  }
  return h;
}

SparseOperator h_bar(const PairMatrix& a, const BasisPtr& basis) {
  require_basis(a, basis);
  const PairMatrix b = normalized_dual(a);
  const double m = sector_pairs(basis);
  const double shift = m - upper_sign(a.statistics()) * 0.5 * a.n() - 1.0;
  const SparseOperator id = SparseOperator::identity(basis);
  return (0.5 * shift) * (pair_commutator(b, basis) - id) - pair_number_term(b, basis);
}

SparseOperator h_bar_from_qbar(const PairMatrix& a, const BasisPtr& basis) {
  require_basis(a, basis);
  const int n = a.n();
  if (a.rank() < n) throw RankError("Hbar needs a full-rank pair matrix");
  const CMatrix inv = a.matrix().inverse();
  const double nu = 0.5 * (inv.adjoint() * inv).trace().real();
  const double sgn = upper_sign(a.statistics());
  SparseOperator h = SparseOperator::zero(basis, basis);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      CMatrix c = CMatrix::Zero(n, n);
      for (int k = 0; k < n; ++k) {
        c(i, k) += inv(j, k);
        c(j, k) += sgn * inv(i, k);
      }
      const SparseOperator q = build_one_body(c, basis);
      h += (1.0 / (8.0 * nu)) * (q.adjoint() * q);
    }
  }
  return h;
}

SparseOperator model_hamiltonian(const ModelParams& p, const BasisPtr& basis) {
  return p.statistics == Statistics::fermion ? model_fermion(p, basis) : model_boson(p, basis);
}

SparseOperator model_boson(const ModelParams& p, const BasisPtr& basis) {
  const int n = static_cast<int>(p.sigmas.size());
  if (basis->statistics() != Statistics::boson) throw StatisticsError("boson model on a fermion sector");
  if (basis->modes() != n || p.energies.size() != n) throw DimensionError("model sizes do not match the sector");
  const PairMatrix a = PairMatrix::from_sigmas(p.sigmas, Statistics::boson);
  const CMatrix h = p.energies.cast<cplx>().asDiagonal();
  return build_one_body(h, basis) - p.g * pair_number_term(a, basis);
}

SparseOperator model_fermion(const ModelParams& p, const BasisPtr& basis) {
  const int d = static_cast<int>(p.sigmas.size());
  if (basis->statistics() != Statistics::fermion) throw StatisticsError("fermion model on a boson sector");
  if (basis->modes() != 2 * d || p.energies.size() != d) throw DimensionError("model sizes do not match the sector");
  const PairMatrix a = PairMatrix::from_sigmas(p.sigmas, Statistics::fermion);
  CMatrix h = CMatrix::Zero(2 * d, 2 * d);
  for (int k = 0; k < d; ++k) {
    h(2 * k, 2 * k) = 0.5 * p.energies(k);
    h(2 * k + 1, 2 * k + 1) = 0.5 * p.energies(k);
  }
  return build_one_body(h, basis) - p.g * pair_number_term(a, basis);
}

CriticalCouplings critical_couplings(const ModelParams& p, int m) {
  if (m < 2) throw PreconditionError("critical coupling needs m >= 2");
  const Eigen::Index d = p.sigmas.size();
  if (d == 0 || p.energies.size() != d) throw DimensionError("model sizes differ");
  RVector ratio(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    if (!(p.sigmas(k) > 0.0)) throw PreconditionError("sigmas must be positive");
    ratio(k) = p.energies(k) / (p.sigmas(k) * p.sigmas(k));
  }
  const double spread = ratio.maxCoeff() - ratio.minCoeff();
  if (spread > 1e-10 * std::max(1.0, ratio.cwiseAbs().maxCoeff())) {
    throw PreconditionError("eps_k / sigma_k^2 is not constant");
  }
  CriticalCouplings c;
  const double r = ratio.mean();
  const double n = p.statistics == Statistics::fermion ? 2.0 * static_cast<double>(d) : static_cast<double>(d);
  c.eps_eff = p.statistics == Statistics::fermion ? -r : r;
  c.g_c = c.eps_eff / (m - 1);
  if (p.statistics == Statistics::boson) {
    c.g_c_dual = c.g_c * (m - 1) / (0.5 * n + m - 1);
  } else {
    c.g_c_dual = c.g_c * (m - 1) / (0.5 * n - (m - 1));
  }
  return c;
}

SparseOperator model_mixed(double p, const SparseOperator& h1, const SparseOperator& h2) {
  if (!(h1.source().sector() == h2.source().sector())) throw SectorError("mixed model terms act on different sectors");
  return (1.0 - p) * h1 + p * h2;
}

CMatrix rotate_one_body(const CMatrix& h, const CMatrix& u) { return u * h * u.adjoint(); }

SpanCheck theorem2_span_check(const PairMatrix& a, int m) {
  const int n = a.n();
  const Statistics st = a.statistics();
  const StateVector psi = build_condensate(a, m).state;
  const BasisPtr& basis = psi.basis;
  const auto dim = static_cast<Eigen::Index>(basis->size());
  const auto pairs = pair_index_set(n, st);
  const double rt = 1.0 / std::sqrt(2.0);

  std::vector<SparseOperator> gens;
  for (const auto& [i, j] : pairs) {
    for (const auto& [k, l] : pairs) {
      double c = 1.0;
      if (i == j) c *= rt;
      if (k == l) c *= rt;
      gens.push_back(build_operator(basis, {{c, {cr(i), cr(j), an(l), an(k)}}}));
    }
  }
  SpanCheck out;
  out.generators = static_cast<int>(gens.size());
  const auto kcount = static_cast<Eigen::Index>(gens.size());

  const GramRank rg = gram_rank(sparse_gram(stack_vec(gens, dim)), 1e-11);
  CMatrix bmat(dim, kcount);
  const CVector& v = psi.amplitudes;
  for (Eigen::Index c = 0; c < kcount; ++c) {
    CVector w = gens[static_cast<std::size_t>(c)].apply(v);
    w -= v * v.dot(w);
    bmat.col(c) = w;
  }
  const GramRank rb = gram_rank(bmat.adjoint() * bmat, 1e-11);
  const int nullity = static_cast<int>(kcount) - rb.rank;
  out.annihilator_dim = nullity - (static_cast<int>(kcount) - rg.rank) - 1;
  out.gap_route1 = std::min(rg.gap, rb.gap);

  std::vector<SparseOperator> fam;
  const QFamily q = q_ops(a);
  for (const auto& mem : q.members) fam.push_back(build_one_body(mem.h, basis));
  const std::size_t nq = fam.size();
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      CMatrix e = CMatrix::Zero(n, n);
      e(k, l) = 1.0;
      const SparseOperator el = build_one_body(e, basis);
      for (std::size_t t = 0; t < nq; ++t) fam.push_back(el * fam[t]);
    }
  }
  const GramRank rf = gram_rank(sparse_gram(stack_vec(fam, dim)), 1e-11);
  out.family_dim = rf.rank;
  out.gap_route2 = rf.gap;
  return out;
}

}  // namespace paircond
