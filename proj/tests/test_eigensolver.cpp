#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "paircond/eigensolver.hpp"
#include "paircond/states.hpp"

using namespace paircond;

namespace {

SparseOperator random_hamiltonian(const BasisPtr& b, std::mt19937_64& rng) {
  const int n = b->modes();
  std::normal_distribution<double> g;
  CMatrix h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(i, j) = cplx(g(rng), g(rng));
  h = (h + h.adjoint()).eval();
  const PairMatrix a = PairMatrix::random(n, b->statistics(), rng);
  const SparseOperator ad = build_pair_creation(a, b);
  return build_one_body(h, b) - 2.0 * (ad.adjoint() * ad);
}

}  // namespace

TEST_CASE("Lanczos ground state equals the dense lowest eigenvalue") {
  std::mt19937_64 rng(21);
  for (auto [n, particles, st] : {std::tuple{10, 4, Statistics::fermion}, std::tuple{5, 4, Statistics::boson}}) {
    auto b = FockBasis::make(n, particles, st);
    const SparseOperator h = random_hamiltonian(b, rng);
    SolverOptions lanczos;
    lanczos.dense_threshold = 0;
    const Eigenpair gs = ground_state(h, lanczos);
    const double ref = oracle::eigenvalues(h.dense())(0);
    CHECK(gs.energy == doctest::Approx(ref).epsilon(1e-10));
    CHECK(gs.residual < 1e-8);
    CHECK(gs.state.norm() == doctest::Approx(1.0));
    const CVector r = h.apply(gs.state.amplitudes) - gs.energy * gs.state.amplitudes;
    CHECK(r.norm() < 1e-8);
  }
}

TEST_CASE("dense path and lowest eigenvalues") {
  std::mt19937_64 rng(22);
  auto b = FockBasis::make(6, 3, Statistics::fermion);
  const SparseOperator h = random_hamiltonian(b, rng);
  const Eigenpair gs = ground_state(h);
  const RVector low = lowest_eigenvalues(h, 3);
  CHECK(low.size() == 3);
  CHECK(gs.energy == doctest::Approx(low(0)));
  CHECK(low(0) <= low(1));
}

TEST_CASE("fixed seed gives identical results") {
  std::mt19937_64 rng(23);
  auto b = FockBasis::make(12, 4, Statistics::fermion);
  const SparseOperator h = random_hamiltonian(b, rng);
  SolverOptions o;
  o.dense_threshold = 0;
  const Eigenpair x = ground_state(h, o);
  const Eigenpair y = ground_state(h, o);
  CHECK(x.energy == y.energy);
  CHECK((x.state.amplitudes - y.state.amplitudes).norm() == 0.0);
}

TEST_CASE("solver preconditions") {
  auto b = FockBasis::make(4, 2, Statistics::fermion);
  CMatrix h = CMatrix::Zero(4, 4);
  h(0, 1) = 1.0;
  CHECK_THROWS_AS(ground_state(build_one_body(h, b)), PreconditionError);
  CHECK_THROWS_AS(ground_state(creation_op(0, b)), SectorError);
}
