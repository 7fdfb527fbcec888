#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace paircond {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Particle statistics. Wherever a formula carries a double sign (±, ∓) the
/// upper sign belongs to fermions and the lower one to bosons.
enum class Statistics { fermion, boson };

inline const char* to_string(Statistics s) { return s == Statistics::fermion ? "fermion" : "boson"; }

Statistics statistics_from_string(const std::string& s);

/// +1 for fermions, -1 for bosons (the "±" sign).
inline double upper_sign(Statistics s) { return s == Statistics::fermion ? 1.0 : -1.0; }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SectorError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class RankError : public Error {
 public:
  using Error::Error;
};

class StatisticsError : public Error {
 public:
  using Error::Error;
};

class DecompositionError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class InvalidDensityError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace paircond
