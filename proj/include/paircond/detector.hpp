#pragma once

#include <string>
#include <vector>

#include "paircond/density.hpp"
#include "paircond/pair_algebra.hpp"
#include "paircond/states.hpp"

namespace paircond {

/// Packed-pair matrix whose top eigenvalue equals m exactly on (A+)^m|0>.
struct ModifiedRho2 {
  double m = 0.0;
  Statistics statistics = Statistics::fermion;
  int n = 0;
  CMatrix matrix;
};

/// rho2 +- (m-1)/4 V^+ (1 (x)s rho1 + rho1 (x)s 1) V.
ModifiedRho2 modified_rho2(const DensityMatrices& dms, double m);

/// Same matrix from the pair-hole matrix: ((1+m) rho2 + (1-m)(rhobar - 1)) / 2.
ModifiedRho2 modified_rho2_from_pair_hole(const CMatrix& rho2, const CMatrix& rhobar, int n, Statistics s, double m);

/// Packed correction V^+ (1 (x)s r + r (x)s 1) V / 2 for a one-body matrix r.
CMatrix one_body_pair_term(const CMatrix& r, int n, Statistics s);

/// Pair vector a (packed, ||a|| = 1 when Tr A+A = 2) of a pair matrix, and back.
CVector pair_vector(const CMatrix& a, Statistics s);
CMatrix pair_matrix_from_vector(const CVector& v, int n, Statistics s);

enum class Classification { true_condensate, slater_limit, frozen_pair_limit, not_condensate };
std::string to_string(Classification c);

struct DetectorReport {
  double m = 0.0;
  double tolerance = 0.0;
  double lambda_max = 0.0;
  double gap = 0.0;               ///< lambda_max minus the next distinct eigenvalue
  int degeneracy = 0;
  RVector spectrum;               ///< descending
  CVector pair_vector;            ///< top eigenvector, largest entry real positive;
                                  ///< generic projection when degenerate
  CMatrix best_pair;              ///< n x n, Tr A+A = 2
  bool is_condensate = false;
  double d2 = 0.0;
  Classification classification = Classification::not_condensate;
};

/// Default tolerance 1e-8 max(1, m).
double default_tolerance(double m);

/// Eigen-analysis of a prepared matrix; classification uses rho1 when given.
DetectorReport analyze(const ModifiedRho2& mod, double tol, const CMatrix* rho1 = nullptr);

/// Throws SectorError when Tr rho1 / 2 differs from m by more than 1e-8.
DetectorReport detect(const DensityMatrices& dms, double m, double tol = -1.0);
DetectorReport detect(const StateVector& state, double tol = -1.0);

struct Proximity {
  double d2 = 0.0;
  CMatrix best_pair;
};
Proximity proximity(const DensityMatrices& dms, double m);

/// m - a+ M a: expectation of H_A for any pair matrix from the modified matrix.
double h_A_expectation(const ModifiedRho2& mod, const CMatrix& pair);

/// N - largest eigenvalue of rho1.
double d1_proximity(const CMatrix& rho1, double particles);

/// Ensemble-averaged quantities for the generalized test.
struct GeneralizedInput {
  Statistics statistics = Statistics::fermion;
  int n = 0;
  double mean_pairs = 0.0;   ///< <M> = <N>/2
  CMatrix rho2;              ///< averaged packed rho2
  CMatrix rho1_tilde;        ///< <(M - 1) c+_j c_i>
};
GeneralizedInput generalized_input(const Ensemble& ensemble);

/// lambda_max compared with <M>.
DetectorReport detect_general(const GeneralizedInput& in, double tol = -1.0);
DetectorReport detect_general(const Ensemble& ensemble, double tol = -1.0);

struct OddReport {
  int occupied_orbital = 0;       ///< rho1 eigen-index with occupancy 1
  int empty_orbital = 0;          ///< rho1 eigen-index with occupancy 0
  CVector occupied_vector;        ///< orbital coefficients on the original modes
  DetectorReport inner;           ///< detection on the remaining n-2 modes
  CMatrix pair_original;          ///< A' lifted to the original modes
};

/// Odd-N fermion states of the form c+_i (A+)^m|0> (or c_i (A+)^m|0>).
OddReport detect_odd(const DensityMatrices& dms, double tol = -1.0);

}  // namespace paircond
