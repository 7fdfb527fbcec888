#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "paircond/conserved.hpp"
#include "paircond/states.hpp"

using namespace paircond;

namespace {

// Conserved one-body operators: nullity of the stacked (E_ij - <E_ij>)|psi>.
int oracle_one_body_count(const StateVector& s) {
  const int n = s.basis->modes();
  oracle::Space sp(n, s.basis->statistics(), s.basis->particles());
  const CVector psi = sp.embed(s);
  CMatrix cols(psi.size(), n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const CVector v = sp.cd(i) * (sp.c(j) * psi);
      cols.col(i * n + j) = v - psi.dot(v) * psi;
    }
  }
  Eigen::JacobiSVD<CMatrix> svd(cols);
  const RVector sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) rank += sv(k) > 1e-8 * sv(0) ? 1 : 0;
  return n * n - rank;
}

}  // namespace

TEST_CASE("Q operators annihilate the condensate") {
  std::mt19937_64 rng(51);
  for (auto st : {Statistics::fermion, Statistics::boson}) {
    const PairMatrix a = PairMatrix::random(6, st, rng);
    const StateVector c = build_condensate(a, 2).state;
    for (const auto& q : q_ops(a).members) CHECK(build_one_body(q.h, c.basis).apply(c.amplitudes).norm() < 1e-11);
    for (const auto& q : qbar_ops(a).members) CHECK(build_one_body(q.h, c.basis).apply(c.amplitudes).norm() < 1e-10);
  }
}

TEST_CASE("Q family sizes") {
  std::mt19937_64 rng(52);
  const int n = 6;
  CHECK(q_ops(PairMatrix::random(n, Statistics::fermion, rng)).members.size() == n * (n + 1) / 2);
  CHECK(q_ops(PairMatrix::random(n, Statistics::boson, rng)).members.size() == n * (n - 1) / 2);
  std::vector<CMatrix> hs;
  for (const auto& q : q_ops(PairMatrix::random(n, Statistics::fermion, rng)).members) hs.push_back(q.h);
  CHECK(family_rank(hs) == n * (n + 1) / 2);
}

TEST_CASE("commutator algebra of the Q operators") {
  for (auto st : {Statistics::fermion, Statistics::boson}) {
    for (int n : {2, 3, 4, 5, 6}) {
      // odd fermion n: singular A, which the identity does not need
      const CMatrix g = CMatrix::Random(n, n);
      const CMatrix sym = st == Statistics::fermion ? CMatrix(g - g.transpose()) : CMatrix(g + g.transpose());
      const AlgebraReport r = verify_commutator_algebra(PairMatrix(sym, st).normalized());
      CHECK(r.checked > 0);
      CHECK(r.max_residual <= 1e-12);
    }
  }
}

TEST_CASE("scaled SU(2) triads") {
  std::mt19937_64 rng(54);
  for (auto st : {Statistics::fermion, Statistics::boson}) {
    const auto triads = su2_scaled_ops(canonical_decompose(PairMatrix::random(6, st, rng)));
    CHECK(!triads.empty());
    for (const auto& t : triads) CHECK(triad_residual(t) <= 1e-10);
  }
}

TEST_CASE("one-body conserved counts agree with the stacked-vector oracle") {
  std::mt19937_64 rng(55);
  for (auto st : {Statistics::fermion, Statistics::boson}) {
    // the boson oracle space grows as (N+1)^n
    for (int n : st == Statistics::fermion ? std::vector<int>{4, 6} : std::vector<int>{3, 4}) {
      const StateVector c = build_condensate(PairMatrix::random(n, st, rng), st == Statistics::fermion ? 1 : 2).state;
      CHECK(conserved_count(c, OperatorClass::one_body).count == oracle_one_body_count(c));
      const StateVector r = random_state(FockBasis::make(n, 3, st), rng);
      CHECK(conserved_count(r, OperatorClass::one_body).count == oracle_one_body_count(r));
    }
  }
}

TEST_CASE("condensate counts follow the closed forms") {
  std::mt19937_64 rng(56);
  // n(n+1)/2 + 1 (F), n(n-1)/2 + 1 (B)
  CHECK(conserved_count(build_condensate(PairMatrix::random(6, Statistics::fermion, rng), 2).state,
                        OperatorClass::one_body)
            .count == 22);
  CHECK(conserved_count(build_condensate(PairMatrix::random(4, Statistics::boson, rng), 2).state,
                        OperatorClass::one_body)
            .count == 7);
  CHECK(conserved_count(random_state(FockBasis::make(8, 4, Statistics::fermion), rng), OperatorClass::one_body)
            .count == 1);
}

TEST_CASE("joint kernel of the Q family is the condensate") {
  std::mt19937_64 rng(57);
  const PairMatrix a = PairMatrix::random(6, Statistics::fermion, rng);
  const StateVector c = build_condensate(a, 2).state;
  std::vector<SparseOperator> ops;
  for (const auto& q : q_ops(a).members) ops.push_back(build_one_body(q.h, c.basis));
  const CMatrix k = joint_kernel(ops);
  REQUIRE(k.cols() == 1);
  CHECK(std::abs(k.col(0).dot(c.amplitudes)) == doctest::Approx(1.0));
}

TEST_CASE("covariance matrices and nullspace helper") {
  std::mt19937_64 rng(58);
  const StateVector s = random_state(FockBasis::make(5, 2, Statistics::fermion), rng);
  CHECK(covariance_C11(s).rows() == 25);
  CHECK(covariance_C20(s).rows() == 10);
  CHECK(covariance_C02(s).rows() == 10);
  RVector d(3);
  d << 0.0, 1e-14, 2.0;
  const NullspaceResult r = hermitian_nullspace(CMatrix(d.asDiagonal()));
  CHECK(r.dimension == 2);
  CHECK(r.basis.cols() == 2);
}
