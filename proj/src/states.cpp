#include "paircond/states.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace paircond {

StateVector vacuum(int n, Statistics statistics) {
  auto basis = FockBasis::make(n, 0, statistics);
  return {basis, CVector::Ones(1)};
}

StateVector fully_occupied(int n) {
  auto basis = FockBasis::make(n, n, Statistics::fermion);
  return {basis, CVector::Ones(1)};
}

SparseOperator build_pair_creation(const PairMatrix& a, const BasisPtr& source) {
  if (a.statistics() != source->statistics()) throw StatisticsError("pair matrix statistics differ from the sector");
  if (a.n() != source->modes()) throw DimensionError("pair matrix size differs from the mode count");
  return build_pair_creation(a.matrix(), source);
}

SparseOperator build_pair_annihilation(const PairMatrix& b, const BasisPtr& source) {
  const int n = source->modes();
  auto lower = FockBasis::make(n, source->particles() - 2, source->statistics(), true);
  if (lower->size() == 0) return SparseOperator::zero(source, lower);
  return build_pair_creation(b, lower).adjoint();
}

Condensate build_condensate(const PairMatrix& a, int m) {
  if (m < 0) throw PreconditionError("negative pair number");
  if (a.statistics() == Statistics::fermion && 2 * m > a.n()) {
    throw PreconditionError("(A+)^m vanishes for m > n/2");
  }
  StateVector v = vacuum(a.n(), a.statistics());
  for (int k = 0; k < m; ++k) v = build_pair_creation(a, v.basis).apply(v);
  const double nrm2 = v.amplitudes.squaredNorm();
  if (!(nrm2 > 0.0)) throw PreconditionError("condensate vanishes (rank-deficient pair matrix)");
  return {v.normalized(), nrm2};
}

StateVector hole_condensate(const PairMatrix& a, int m) {
  if (a.statistics() != Statistics::fermion) throw StatisticsError("hole condensate is defined for fermions");
  const int n = a.n();
  if (n % 2) throw DimensionError("hole condensate needs even n");
  if (m < 0 || 2 * m > n) throw PreconditionError("pair number outside [0, n/2]");
  const PairMatrix b = dual(a);
  StateVector v = fully_occupied(n);
  for (int k = 0; k < n / 2 - m; ++k) v = build_pair_annihilation(b, v.basis).apply(v);
  return v.normalized();
}

StateVector scaling_state_map(const RVector& from, const RVector& to, const StateVector& state) {
  const RVector s = mode_scales(from, to, state.basis->statistics());
  if (s.size() != state.basis->modes()) throw DimensionError("sigma lists do not match the mode count");
  StateVector out = state;
  for (std::size_t k = 0; k < state.basis->size(); ++k) {
    const auto occ = state.basis->occupations(k);
    double f = 1.0;
    for (int i = 0; i < s.size(); ++i) f *= std::pow(s(i), occ[i]);
    out.amplitudes(static_cast<Eigen::Index>(k)) *= f;
  }
  return out.normalized();
}

namespace {

double factorial_sqrt(const std::vector<int>& e) {
  double f = 1.0;
  for (int v : e) {
    for (int k = 2; k <= v; ++k) f *= std::sqrt(static_cast<double>(k));
  }
  return f;
}

// Accumulates coefficient * prod (c+_i)^{e_i}|0> into a state.
struct MonomialSum {
  int n;
  Statistics stats;
  BasisPtr basis;
  CVector amps;

  void add(const std::vector<int>& e, cplx coeff) {
    int total = 0;
    for (int v : e) {
      if (v < 0) throw PreconditionError("negative exponent");
      if (stats == Statistics::fermion && v > 1) return;  // (c+)^2 = 0
      total += v;
    }
    if (!basis) {
      basis = FockBasis::make(n, total, stats);
      amps = CVector::Zero(static_cast<Eigen::Index>(basis->size()));
    } else if (total != basis->particles()) {
      throw PreconditionError("terms carry different particle numbers");
    }
    std::vector<std::uint8_t> occ(e.begin(), e.end());
    const auto idx = basis->rank(occ);
    amps(idx) += coeff * (stats == Statistics::boson ? factorial_sqrt(e) : 1.0);
  }

  StateVector finish() const {
    if (!basis) throw PreconditionError("no terms supplied");
    StateVector v{basis, amps};
    if (!(v.norm() > 0.0)) throw PreconditionError("state vanishes");
    return v.normalized();
  }
};

}  // namespace

StateVector monomial_state(const std::vector<int>& exponents, Statistics statistics) {
  MonomialSum sum{static_cast<int>(exponents.size()), statistics, nullptr, {}};
  sum.add(exponents, 1.0);
  return sum.finish();
}

StateVector build_paired_state(int n, Statistics statistics, const std::vector<PairedTerm>& terms,
                               BosonPairing pairing) {
  const bool squared = statistics == Statistics::boson && pairing == BosonPairing::squared;
  MonomialSum sum{n, statistics, nullptr, {}};
  for (const auto& t : terms) {
    const int expected = squared ? n : n / 2;
    if (static_cast<int>(t.pairs.size()) != expected || (!squared && n % 2)) {
      throw DimensionError("paired-state term has the wrong number of pair slots");
    }
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < expected; ++k) {
      const int mk = t.pairs[static_cast<std::size_t>(k)];
      if (statistics == Statistics::fermion && (mk < 0 || mk > 1)) {
        throw PreconditionError("fermion pair occupations must be 0 or 1");
      }
      if (squared) {
        e[static_cast<std::size_t>(k)] = 2 * mk;
      } else {
        e[static_cast<std::size_t>(2 * k)] = mk;
        e[static_cast<std::size_t>(2 * k + 1)] = mk;
      }
    }
    // (b+^2)^m / sqrt(2)^m style prefactors are left to the coefficients
    sum.add(e, t.coefficient);
  }
  return sum.finish();
}

StateVector build_group_state(const GroupSpec& spec, Statistics statistics, const std::vector<GroupTerm>& terms) {
  int n = 0;
  for (int s : spec.sizes) {
    if (s < 1) throw DimensionError("empty group block");
    n += s;
  }
  if (!spec.powers.empty() && spec.powers.size() != spec.sizes.size()) {
    throw DimensionError("powers must be given for every block");
  }
  MonomialSum sum{n, statistics, nullptr, {}};
  for (const auto& t : terms) {
    if (t.exponents.size() != spec.sizes.size()) throw DimensionError("group term has the wrong number of blocks");
    std::vector<int> e;
    for (std::size_t p = 0; p < spec.sizes.size(); ++p) {
      const int mp = t.exponents[p];
      if (statistics == Statistics::fermion && (mp < 0 || mp > 1)) {
        throw PreconditionError("fermion block exponents must be 0 or 1");
      }
      for (int i = 0; i < spec.sizes[p]; ++i) {
        int l = 1;
        if (!spec.powers.empty()) {
          if (static_cast<int>(spec.powers[p].size()) != spec.sizes[p]) throw DimensionError("powers size mismatch");
          l = spec.powers[p][static_cast<std::size_t>(i)];
        }
        if (statistics == Statistics::fermion && l != 1) throw PreconditionError("fermion powers must be 1");
        e.push_back(mp * l);
      }
    }
    sum.add(e, t.coefficient);
  }
  return sum.finish();
}

StateVector build_ghz_state(int n, cplx alpha, cplx beta, Statistics statistics) {
  if (n < 8 || n % 2) throw PreconditionError("GHZ-like states need an even n >= 8");
  GroupSpec spec{{n / 2, n / 2}, {}};
  return build_group_state(spec, statistics, {{{1, 0}, alpha}, {{0, 1}, beta}});
}

Ensemble build_mixture(const PairMatrix& a, const std::vector<std::pair<int, double>>& weights) {
  Ensemble e;
  double total = 0.0;
  for (const auto& [m, p] : weights) {
    if (p < 0.0) throw PreconditionError("negative mixture weight");
    total += p;
  }
  if (!(total > 0.0)) throw PreconditionError("mixture weights sum to zero");
  for (const auto& [m, p] : weights) {
    if (p == 0.0) continue;
    e.weights.push_back(p / total);
    e.states.push_back(build_condensate(a, m).state);
  }
  return e;
}

double PureSuperposition::norm2() const {
  double s = 0.0;
  for (const auto& c : components) s += c.amplitudes.squaredNorm();
  return s;
}

Ensemble PureSuperposition::sector_weights() const {
  Ensemble e;
  const double total = norm2();
  if (!(total > 0.0)) throw PreconditionError("superposition vanishes");
  for (const auto& c : components) {
    const double w = c.amplitudes.squaredNorm();
    if (w == 0.0) continue;
    e.weights.push_back(w / total);
    e.states.push_back(c.normalized());
  }
  return e;
}

PureSuperposition build_superposition(const PairMatrix& a, const std::vector<std::pair<int, cplx>>& coefficients) {
  PureSuperposition out;
  for (const auto& [m, alpha] : coefficients) {
    const Condensate c = build_condensate(a, m);
    StateVector v = c.state;
    v.amplitudes *= alpha * std::sqrt(c.norm);
    out.pair_numbers.push_back(m);
    out.components.push_back(std::move(v));
  }
  return out;
}

StateVector build_odd_state(const PairMatrix& a, int m, int mode, OddMode kind) {
  if (a.statistics() != Statistics::fermion) throw StatisticsError("odd states are built for fermions");
  if (mode < 0 || mode >= a.n()) throw DimensionError("mode index out of range");
  const StateVector base = build_condensate(a, m).state;
  const SparseOperator op = kind == OddMode::create ? creation_op(mode, base.basis) : annihilation_op(mode, base.basis);
  StateVector v = op.apply(base);
  if (!(v.norm() > 1e-12)) throw PreconditionError("odd state vanishes");
  return v.normalized();
}

StateVector random_state(const BasisPtr& basis, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVector v(static_cast<Eigen::Index>(basis->size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(g(rng), g(rng));
  return StateVector{basis, v}.normalized();
}

StateVector transform_state(const StateVector& state, const CMatrix& u) {
  const int n = state.basis->modes();
  if (u.rows() != n || u.cols() != n) throw DimensionError("mode transformation has wrong size");
  const CMatrix k = u.log();
  const SparseOperator gen = build_one_body(k, state.basis);
  // exp(gen) v by scaled Taylor series
  double bound = 0.0;
  for (Eigen::Index r = 0; r < gen.matrix().outerSize(); ++r) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(gen.matrix(), r); it; ++it) row += std::abs(it.value());
    bound = std::max(bound, row);
  }
  const int steps = std::max(1, static_cast<int>(std::ceil(bound)));
  CVector v = state.amplitudes;
  for (int s = 0; s < steps; ++s) {
    CVector term = v;
    CVector acc = v;
    for (int j = 1; j < 60; ++j) {
      term = (gen.matrix() * term) / (static_cast<double>(j) * steps);
      acc += term;
      if (term.norm() <= 1e-17 * acc.norm()) break;
    }
    v = acc;
  }
  return {state.basis, v};
}

}  // namespace paircond
