#pragma once

#include <iosfwd>
#include <string>

#include "paircond/fock.hpp"

namespace paircond {

/// kind: rho1 | rho2 | rhobar | rho1_tilde | pair | unitary.
/// index_convention: packed_lex (packed pair index) or full (index i*n + j).
struct MatrixFile {
  std::string kind;
  Statistics statistics = Statistics::fermion;
  int n = 0;
  std::string index_convention = "packed_lex";
  CMatrix data;
};

void write_matrix(std::ostream& os, const MatrixFile& m);
void write_matrix_file(const std::string& path, const MatrixFile& m);

/// Throws SchemaError naming the offending field or entry. Density kinds are
/// checked for Hermiticity within `herm_tol` relative to the largest entry.
MatrixFile read_matrix(std::istream& is, double herm_tol = 1e-10);
MatrixFile read_matrix_file(const std::string& path, double herm_tol = 1e-10);

/// rho2 in the packed convention whatever the file used.
CMatrix packed_rho2(const MatrixFile& m);

/// {kind: "state", statistics, n, particles, data: [[re, im], ...]} in basis order.
void write_state_file(const std::string& path, const StateVector& state);
StateVector read_state_file(const std::string& path);

}  // namespace paircond
