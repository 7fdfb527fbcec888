#include "paircond/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace paircond {

Statistics statistics_from_string(const std::string& s) {
  if (s == "fermion" || s == "fermions" || s == "F") return Statistics::fermion;
  if (s == "boson" || s == "bosons" || s == "B") return Statistics::boson;
  throw StatisticsError("unknown statistics '" + s + "'");
}

namespace {

void check_sector(int n, int N, Statistics s) {
  if (n < 1 || n > kMaxModes) {
    throw SectorError("mode count " + std::to_string(n) + " outside [1, " +
                      std::to_string(kMaxModes) + "]");
  }
  if (N < 0) throw SectorError("negative particle number");
  if (s == Statistics::fermion && N > n) {
    throw SectorError("fermion sector with N=" + std::to_string(N) + " > n=" + std::to_string(n));
  }
  if (s == Statistics::boson && n + N - 1 > 64) {
    throw SectorError("boson sector too large to encode (n+N-1 > 64)");
  }
}

}  // namespace

FockBasis::FockBasis(int modes, int particles, Statistics statistics)
    : n_(modes), particles_(particles), stats_(statistics) {
  check_sector(modes, particles, statistics);
  enumerate();
}

FockBasis::FockBasis(int modes, int particles, Statistics statistics, EmptyTag)
    : n_(modes), particles_(particles), stats_(statistics) {}

void FockBasis::enumerate() {
  const std::uint64_t dim = sector_dimension(n_, particles_, stats_);
  if (dim > 50'000'000ULL) throw SectorError("sector dimension too large");
  occ_.reserve(dim * static_cast<std::size_t>(n_));
  keys_.reserve(dim);
  rank_.reserve(dim);

  std::vector<std::uint8_t> cur(static_cast<std::size_t>(n_), 0);
  auto rec = [&](auto&& self, int mode, int remaining) -> void {
    if (mode == n_ - 1) {
      if (stats_ == Statistics::fermion && remaining > 1) return;
      cur[mode] = static_cast<std::uint8_t>(remaining);
      const std::uint64_t k = encode(cur);
      rank_.emplace(k, static_cast<std::uint32_t>(keys_.size()));
      keys_.push_back(k);
      occ_.insert(occ_.end(), cur.begin(), cur.end());
      return;
    }
    const int cap = stats_ == Statistics::fermion ? std::min(1, remaining) : remaining;
    for (int v = cap; v >= 0; --v) {
      // fermions: remaining modes must be able to hold what is left
      if (stats_ == Statistics::fermion && remaining - v > n_ - mode - 1) continue;
      cur[mode] = static_cast<std::uint8_t>(v);
      self(self, mode + 1, remaining - v);
    }
  };
  rec(rec, 0, particles_);
}

std::uint64_t FockBasis::encode(std::span<const std::uint8_t> occ) const {
  std::uint64_t k = 0;
  if (stats_ == Statistics::fermion) {
    for (int i = 0; i < n_; ++i) {
      if (occ[i]) k |= (std::uint64_t{1} << i);
    }
    return k;
  }
  int bit = 0;
  for (int i = 0; i < n_; ++i) {
    for (int c = 0; c < occ[i]; ++c) k |= (std::uint64_t{1} << bit++);
    ++bit;  // separator
  }
  return k;
}

std::int64_t FockBasis::rank_of_key(std::uint64_t key) const {
  auto it = rank_.find(key);
  return it == rank_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::int64_t FockBasis::rank(std::span<const std::uint8_t> occ) const {
  if (static_cast<int>(occ.size()) != n_) return -1;
  int total = 0;
  for (auto o : occ) {
    if (stats_ == Statistics::fermion && o > 1) return -1;
    total += o;
  }
  if (total != particles_) return -1;
  return rank_of_key(encode(occ));
}

std::shared_ptr<const FockBasis> FockBasis::make(int modes, int particles, Statistics statistics,
                                                 bool allow_empty) {
  if (allow_empty && (particles < 0 || (statistics == Statistics::fermion && particles > modes))) {
    if (modes < 1 || modes > kMaxModes) check_sector(modes, 0, statistics);
    return std::shared_ptr<const FockBasis>(
        new FockBasis(modes, particles, statistics, EmptyTag{}));
  }
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const FockBasis>> cache;
  const auto key = std::make_tuple(modes, particles, static_cast<int>(statistics));
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto basis = std::make_shared<const FockBasis>(modes, particles, statistics);
  std::lock_guard<std::mutex> lock(mutex);
  auto [it, inserted] = cache.emplace(key, basis);
  return it->second;
}

FockBasis enumerate_basis(int modes, int particles, Statistics statistics) {
  return FockBasis(modes, particles, statistics);
}

std::uint64_t sector_dimension(int modes, int particles, Statistics statistics) {
  if (particles < 0) return 0;
  const int top = statistics == Statistics::fermion ? modes : modes + particles - 1;
  int k = particles;
  if (k > top) return 0;
  k = std::min(k, top - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(top - k + i) / i;
  return r;
}

StateVector StateVector::normalized() const {
  const double nrm = norm();
  if (!(nrm > 0.0)) throw PreconditionError("cannot normalize a zero state");
  return {basis, amplitudes / nrm};
}

// ---------------------------------------------------------------- operators

SparseOperator::SparseOperator(BasisPtr source, BasisPtr target, SparseMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (!source_ || !target_) throw SectorError("operator without basis");
  if (source_->modes() != target_->modes() || source_->statistics() != target_->statistics()) {
    throw SectorError("operator connects incompatible mode spaces");
  }
  if (static_cast<std::size_t>(matrix_.rows()) != target_->size() ||
      static_cast<std::size_t>(matrix_.cols()) != source_->size()) {
    throw DimensionError("operator matrix does not match its sectors");
  }
}

SparseOperator SparseOperator::zero(BasisPtr source, BasisPtr target) {
  SparseMatrix m(static_cast<Eigen::Index>(target->size()), static_cast<Eigen::Index>(source->size()));
  return SparseOperator(std::move(source), std::move(target), std::move(m));
}

SparseOperator SparseOperator::identity(BasisPtr basis) {
  const auto d = static_cast<Eigen::Index>(basis->size());
  SparseMatrix m(d, d);
  m.setIdentity();
  return SparseOperator(basis, basis, std::move(m));
}

SparseOperator SparseOperator::adjoint() const {
  SparseMatrix m = matrix_.adjoint();
  return SparseOperator(target_, source_, std::move(m));
}

CVector SparseOperator::apply(const CVector& v) const {
  if (static_cast<std::size_t>(v.size()) != source_->size()) {
    throw DimensionError("state size does not match operator source sector");
  }
  return matrix_ * v;
}

StateVector SparseOperator::apply(const StateVector& v) const {
  if (!(v.basis->sector() == source_->sector())) throw SectorError("state sector mismatch");
  return {target_, matrix_ * v.amplitudes};
}

bool SparseOperator::is_hermitian(double tol) const {
  if (!is_square()) return false;
  SparseMatrix d = matrix_ - SparseMatrix(matrix_.adjoint());
  return d.norm() <= tol * std::max(1.0, matrix_.norm());
}

SparseOperator& SparseOperator::operator+=(const SparseOperator& other) {
  if (!(source_->sector() == other.source_->sector()) ||
      !(target_->sector() == other.target_->sector())) {
    throw SectorError("adding operators on different sectors");
  }
  matrix_ += other.matrix_;
  return *this;
}

SparseOperator& SparseOperator::operator-=(const SparseOperator& other) {
  if (!(source_->sector() == other.source_->sector()) ||
      !(target_->sector() == other.target_->sector())) {
    throw SectorError("subtracting operators on different sectors");
  }
  matrix_ -= other.matrix_;
  return *this;
}

SparseOperator& SparseOperator::operator*=(cplx s) {
  matrix_ *= s;
  return *this;
}

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
  if (!(a.source_->sector() == b.target_->sector())) {
    throw SectorError("composing operators with mismatched sectors");
  }
  SparseMatrix m = a.matrix_ * b.matrix_;
  m.prune(cplx(0.0, 0.0));
  return SparseOperator(b.source_, a.target_, std::move(m));
}

namespace {

// Applies one ladder operator in place; returns the amplitude factor or 0.
double apply_ladder(Statistics stats, std::uint8_t* occ, const Ladder& op) {
  const int i = op.mode;
  if (stats == Statistics::fermion) {
    if (op.dagger == (occ[i] != 0)) return 0.0;
    int below = 0;
    for (int k = 0; k < i; ++k) below += occ[k];
    occ[i] = op.dagger ? 1 : 0;
    return (below & 1) ? -1.0 : 1.0;
  }
  if (op.dagger) {
    occ[i] += 1;
    return std::sqrt(static_cast<double>(occ[i]));
  }
  if (occ[i] == 0) return 0.0;
  const double f = std::sqrt(static_cast<double>(occ[i]));
  occ[i] -= 1;
  return f;
}

}  // namespace

SparseOperator build_operator(const BasisPtr& source, const std::vector<LadderTerm>& terms) {
  const int n = source->modes();
  int change = 0;
  bool first = true;
  for (const auto& t : terms) {
    int c = 0;
    for (const auto& f : t.factors) {
      if (f.mode < 0 || f.mode >= n) throw DimensionError("ladder mode out of range");
      c += f.dagger ? 1 : -1;
    }
    if (first) {
      change = c;
      first = false;
    } else if (c != change) {
      throw SectorError("ladder terms change the particle number differently");
    }
  }
  const Statistics stats = source->statistics();
  auto target = FockBasis::make(n, source->particles() + change, stats, true);
  if (target->size() == 0 || source->size() == 0) return SparseOperator::zero(source, target);

  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(source->size() * terms.size());
  std::array<std::uint8_t, kMaxModes> work{};
  for (std::size_t col = 0; col < source->size(); ++col) {
    const auto occ = source->occupations(col);
    for (const auto& t : terms) {
      if (t.coefficient == cplx(0.0, 0.0)) continue;
      std::copy(occ.begin(), occ.end(), work.begin());
      double amp = 1.0;
      for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it) {
        amp *= apply_ladder(stats, work.data(), *it);
        if (amp == 0.0) break;
      }
      if (amp == 0.0) continue;
      const auto row = target->rank(std::span<const std::uint8_t>(work.data(), n));
      if (row < 0) continue;
      trips.emplace_back(static_cast<int>(row), static_cast<int>(col), t.coefficient * amp);
    }
  }
  SparseMatrix m(static_cast<Eigen::Index>(target->size()), static_cast<Eigen::Index>(source->size()));
  m.setFromTriplets(trips.begin(), trips.end());
  m.prune(cplx(0.0, 0.0));
  return SparseOperator(source, target, std::move(m));
}

SparseOperator creation_op(int mode, const BasisPtr& source) {
  return build_operator(source, {LadderTerm{1.0, {Ladder{mode, true}}}});
}

SparseOperator annihilation_op(int mode, const BasisPtr& source) {
  return build_operator(source, {LadderTerm{1.0, {Ladder{mode, false}}}});
}

SparseOperator build_one_body(const CMatrix& h, const BasisPtr& basis) {
  const int n = basis->modes();
  if (h.rows() != n || h.cols() != n) throw DimensionError("one-body matrix has wrong size");
  std::vector<LadderTerm> terms;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (h(i, j) != cplx(0.0, 0.0)) terms.push_back({h(i, j), {Ladder{i, true}, Ladder{j, false}}});
    }
  }
  if (terms.empty()) return SparseOperator::zero(basis, basis);
  return build_operator(basis, terms);
}

SparseOperator number_op(const BasisPtr& basis) {
  const auto d = static_cast<Eigen::Index>(basis->size());
  SparseMatrix m(d, d);
  m.reserve(Eigen::VectorXi::Constant(d, 1));
  for (Eigen::Index i = 0; i < d; ++i) m.insert(i, i) = static_cast<double>(basis->particles());
  return SparseOperator(basis, basis, std::move(m));
}

SparseOperator build_pair_creation(const CMatrix& pair, const BasisPtr& source) {
  const int n = source->modes();
  if (pair.rows() != n || pair.cols() != n) throw DimensionError("pair matrix has wrong size");
  const Statistics stats = source->statistics();
  const double sgn = stats == Statistics::fermion ? -1.0 : 1.0;
  const double scale = std::max(1.0, pair.cwiseAbs().maxCoeff());
  const double asym = (pair - sgn * pair.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw StatisticsError(stats == Statistics::fermion ? "fermion pair matrix is not antisymmetric"
                                                       : "boson pair matrix is not symmetric");
  }
  std::vector<LadderTerm> terms;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (i == j) {
        if (stats == Statistics::fermion || pair(i, i) == cplx(0.0, 0.0)) continue;
        terms.push_back({0.5 * pair(i, i), {Ladder{i, true}, Ladder{i, true}}});
      } else if (pair(i, j) != cplx(0.0, 0.0)) {
        terms.push_back({pair(i, j), {Ladder{i, true}, Ladder{j, true}}});
      }
    }
  }
  if (terms.empty()) {
    return SparseOperator::zero(source, FockBasis::make(n, source->particles() + 2, stats, true));
  }
  return build_operator(source, terms);
}

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
  return a * b - b * a;
}

cplx expectation(const StateVector& state, const SparseOperator& op) {
  if (!op.is_square() || !(op.source().sector() == state.sector())) {
    throw SectorError("expectation needs a square operator on the state's sector");
  }
  return state.amplitudes.dot(op.matrix() * state.amplitudes);
}

double frobenius_norm(const SparseOperator& op) { return op.matrix().norm(); }

double entropy(const CMatrix& rho) {
  if (rho.rows() != rho.cols()) throw DimensionError("entropy needs a square matrix");
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "density matrix trace " << tr << " differs from 1";
    throw InvalidDensityError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l < -1e-10) {
      std::ostringstream os;
      os << "negative eigenvalue " << l << " in density matrix";
      throw InvalidDensityError(os.str());
    }
    if (l > 0.0) s -= l * std::log2(l);
  }
  return s;
}

}  // namespace paircond
