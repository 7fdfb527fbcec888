#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "paircond/states.hpp"

using namespace paircond;

namespace {

double overlap(const StateVector& a, const StateVector& b) { return std::abs(a.amplitudes.dot(b.amplitudes)); }

}  // namespace

TEST_CASE("condensate equals repeated pair creation on the oracle space") {
  std::mt19937_64 rng(41);
  for (auto st : {Statistics::fermion, Statistics::boson}) {
    const int n = 4;
    oracle::Space sp(n, st, 4);
    const PairMatrix a = PairMatrix::random(n, st, rng);
    const CMatrix ad = sp.pair_creation(a.matrix());
    CVector v = sp.vacuum();
    for (int m = 1; m <= 2; ++m) {
      v = ad * v;
      const Condensate c = build_condensate(a, m);
      CHECK(c.norm == doctest::Approx(v.squaredNorm()).epsilon(1e-10));
      CHECK(std::abs(sp.embed(c.state).dot(v.normalized())) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("condensate preconditions") {
  std::mt19937_64 rng(42);
  const PairMatrix a = PairMatrix::random(4, Statistics::fermion, rng);
  CHECK_THROWS_AS(build_condensate(a, 3), PreconditionError);
  CHECK_THROWS_AS(build_condensate(a, -1), PreconditionError);
  CHECK(build_condensate(a, 0).state.basis->particles() == 0);
  CMatrix r = CMatrix::Zero(4, 4);
  r(0, 1) = std::sqrt(2.0);
  r(1, 0) = -std::sqrt(2.0);
  CHECK_THROWS_AS(build_condensate(PairMatrix(r, Statistics::fermion), 2), PreconditionError);
}

TEST_CASE("particle and hole condensates coincide") {
  std::mt19937_64 rng(43);
  for (int n : {4, 6, 8}) {
    const PairMatrix a = PairMatrix::random(n, Statistics::fermion, rng);
    for (int m = 0; m <= n / 2; ++m) {
      CHECK(overlap(build_condensate(a, m).state, hole_condensate(a, m)) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("mode change commutes with condensation") {
  std::mt19937_64 rng(44);
  for (auto st : {Statistics::fermion, Statistics::boson}) {
    const int n = 6;
    const PairMatrix a = PairMatrix::random(n, st, rng);
    const CMatrix u = canonical_decompose(PairMatrix::random(n, Statistics::boson, rng)).unitary;
    const StateVector lhs = transform_state(build_condensate(a, 2).state, u);
    const StateVector rhs = build_condensate(a.transformed(u), 2).state;
    CHECK(overlap(lhs, rhs) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("scaling map takes one natural condensate to another") {
  RVector from(3), to(3);
  from << 0.2, 0.5, std::sqrt(1 - 0.04 - 0.25);
  to << 0.6, 0.3, std::sqrt(1 - 0.36 - 0.09);
  for (auto st : {Statistics::fermion, Statistics::boson}) {
    const StateVector src = build_condensate(PairMatrix::from_sigmas(from, st), 2).state;
    const StateVector dst = build_condensate(PairMatrix::from_sigmas(to, st), 2).state;
    CHECK(overlap(scaling_state_map(from, to, src), dst) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("structured state families") {
  const StateVector ghz = build_ghz_state(8, 1.0, 2.0, Statistics::fermion);
  CHECK(ghz.norm() == doctest::Approx(1.0));
  CHECK(ghz.basis->particles() == 4);
  CHECK(std::abs(ghz.amplitudes(0)) == doctest::Approx(1.0 / std::sqrt(5.0)));
  CHECK_THROWS_AS(build_ghz_state(6, 1.0, 1.0, Statistics::fermion), PreconditionError);

  const StateVector paired =
      build_paired_state(8, Statistics::fermion, {{{1, 1, 0, 0}, 1.0}, {{0, 0, 1, 1}, cplx(0.0, 1.0)}});
  CHECK(paired.basis->particles() == 4);
  CHECK(paired.norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(build_paired_state(8, Statistics::fermion, {{{2, 0, 0, 0}, 1.0}}), PreconditionError);

  const StateVector sq = build_paired_state(3, Statistics::boson, {{{2, 0, 0}, 1.0}}, BosonPairing::squared);
  CHECK(sq.basis->particles() == 4);

  const StateVector group = build_group_state({{2, 2}, {}}, Statistics::boson, {{{1, 1}, 1.0}, {{2, 0}, 1.0}});
  CHECK(group.basis->particles() == 4);

  const StateVector mono = monomial_state({2, 0, 1}, Statistics::boson);
  CHECK(mono.norm() == doctest::Approx(1.0));
  CHECK(fully_occupied(5).basis->particles() == 5);
  CHECK(vacuum(3, Statistics::boson).basis->size() == 1);
}

TEST_CASE("mixtures, superpositions and odd states") {
  std::mt19937_64 rng(45);
  const PairMatrix a = PairMatrix::random(6, Statistics::fermion, rng);
  const Ensemble mix = build_mixture(a, {{1, 1.0}, {2, 3.0}});
  CHECK(mix.weights[0] == doctest::Approx(0.25));
  CHECK_THROWS_AS(build_mixture(a, {{1, -1.0}}), PreconditionError);

  const PureSuperposition sup = build_superposition(a, {{0, 1.0}, {1, 0.5}, {2, 0.25}});
  const Ensemble w = sup.sector_weights();
  double total = 0.0;
  for (double x : w.weights) total += x;
  CHECK(total == doctest::Approx(1.0));

  const StateVector odd = build_odd_state(a, 2, 1, OddMode::create);
  CHECK(odd.basis->particles() == 5);
  CHECK(build_odd_state(a, 2, 1, OddMode::annihilate).basis->particles() == 3);
  CHECK(random_state(FockBasis::make(6, 3, Statistics::fermion), rng).norm() == doctest::Approx(1.0));
}
