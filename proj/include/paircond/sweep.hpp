#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "paircond/detector.hpp"
#include "paircond/eigensolver.hpp"
#include "paircond/hamiltonians.hpp"

namespace paircond {

enum class SweepModel { boson, fermion, mixed };
SweepModel sweep_model_from_string(const std::string& s);
std::string to_string(SweepModel m);

struct SweepConfig {
  SweepModel model = SweepModel::boson;
  int n = 8;                        ///< sp states (fermions: 2 x levels)
  int m = 4;
  std::string sigma_rule = "sqrt-k";
  std::string eps_rule = "linear";
  double eps = 1.0;
  std::vector<double> grid;         ///< g/g_c (boson, fermion) or p (mixed)
  double tol = -1.0;                ///< detector tolerance, default 1e-8 max(1, m)
  int workers = 1;
  std::uint64_t seed = 12345;
  /// mixed model: second sp basis and its coupling in units of g_c
  CMatrix rotation;
  double g2_ratio = 1.5;
  std::string out;
  std::string svg;
};

/// sigma_k for k = 1..levels: "sqrt-k" (sigma_k^2 = k / sum k) or "uniform".
RVector sigma_rule(const std::string& rule, int levels);
/// "linear": eps_k = eps k; "proportional": eps_k = eps sigma_k^2.
RVector eps_rule(const std::string& rule, double eps, const RVector& sigmas);

/// "a:b:step" or a comma list; entries may be fractions like "-3/5".
/// Throws PreconditionError unless strictly increasing.
std::vector<double> parse_grid(const std::string& text);
/// Sorted union of a grid and extra points (duplicates within 1e-12 dropped).
std::vector<double> merge_grid(std::vector<double> grid, const std::vector<double>& extra);

/// Default second basis of the mixed model: mode 2k+2 (mod n) takes the
/// place of mode 2k, odd modes stay. With g2_ratio = 1.5 the N = 4, n = 16
/// ground state has a true level crossing near p = 0.41.
CMatrix default_mixed_rotation(int n);

struct SweepRow {
  double x = 0.0;
  double lambda1_over_m = 0.0;
  double overlap = 0.0;
  double d2 = 0.0;
  double h_a = 0.0;                 ///< <H_A> for the reconstructed pair
  double d1 = 0.0;
  double energy = 0.0;
  double residual = 0.0;
  double entropy = 0.0;             ///< S(rho1 / N), log2
  double delta_entropy = 0.0;       ///< S - log2 N
  double lambda2_max = 0.0;
  int degeneracy = 0;
  double gap = 0.0;
  std::string classification;
  RVector rho1_eigs;                ///< descending
  RVector rho2_collective;          ///< descending
  RVector mod_collective;           ///< descending
};

struct SweepProblem {
  Statistics statistics = Statistics::boson;
  RVector sigmas;
  RVector energies;
  CriticalCouplings couplings;
  BasisPtr basis;
};

SweepProblem prepare(const SweepConfig& cfg);

/// Hamiltonian at one abscissa. Negative fermion abscissae flip the sp
/// spectrum and use g = |x| g_c.
SparseOperator sweep_hamiltonian(const SweepConfig& cfg, const SweepProblem& prob, double x);

SweepRow evaluate_point(const SweepConfig& cfg, const SweepProblem& prob, double x);

struct SweepResult {
  std::vector<SweepRow> rows;
  int failed_index = -1;
  std::string error;
};

/// Evaluates every grid point with cfg.workers threads; rows keep grid order.
SweepResult run_sweep(const SweepConfig& cfg);

void write_csv(std::ostream& os, const SweepConfig& cfg, const SweepResult& res);
void write_svg(std::ostream& os, const SweepConfig& cfg, const SweepResult& res);

/// Runs, writes cfg.out / cfg.svg when set, and throws SolverError after
/// writing partial results if a point failed.
SweepResult run_and_write(const SweepConfig& cfg);

}  // namespace paircond
