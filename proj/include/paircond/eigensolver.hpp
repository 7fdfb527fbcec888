#pragma once

#include <cstdint>

#include "paircond/fock.hpp"

namespace paircond {

struct SolverOptions {
  std::size_t dense_threshold = 2000;
  double residual_tol = 1e-9;
  double hermitian_tol = 1e-10;
  int krylov_dim = 120;
  int max_restarts = 200;
  std::uint64_t seed = 12345;
};

struct Eigenpair {
  double energy = 0.0;
  StateVector state;
  double residual = 0.0;
};

/// Lowest eigenpair of a Hermitian operator. Throws SolverError when the
/// residual target is not met.
Eigenpair ground_state(const SparseOperator& op, const SolverOptions& opts = {});

/// Lowest `count` eigenvalues (dense path only; for tests and small sectors).
RVector lowest_eigenvalues(const SparseOperator& op, int count);

}  // namespace paircond
