#include "paircond/audit.hpp"

#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

namespace paircond {

GeneratorSpec parse_generator_spec(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("generator spec: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("generator spec must be an object");
  GeneratorSpec s;
  try {
    s.family = doc.value("family", s.family);
    s.statistics = statistics_from_string(doc.value("statistics", std::string("fermion")));
    s.n = doc.value("n", s.n);
    s.m = doc.value("m", s.m);
    s.particles = doc.value("particles", s.particles);
    s.sizes = doc.value("sizes", s.sizes);
    s.alpha = doc.value("alpha", s.alpha);
    s.beta = doc.value("beta", s.beta);
    s.seed = doc.value("seed", s.seed);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("generator spec: ") + e.what());
  }
  return s;
}

namespace {

// All vectors of length `len` with entries in [0, cap] and weighted sum `total`.
void compositions(int len, int cap, const std::vector<int>& weight, int total,
                  const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> cur(static_cast<std::size_t>(len), 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == len) {
      if (left == 0) visit(cur);
      return;
    }
    const int w = weight[static_cast<std::size_t>(pos)];
    for (int v = 0; v <= cap && v * w <= left; ++v) {
      cur[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, left - v * w);
    }
    cur[static_cast<std::size_t>(pos)] = 0;
  };
  rec(0, total);
}

}  // namespace

StateVector generate_state(const GeneratorSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> coef(0.5, 1.5);
  const bool fermion = spec.statistics == Statistics::fermion;
  if (spec.family == "condensate") {
    return build_condensate(PairMatrix::random(spec.n, spec.statistics, rng), spec.m).state;
  }
  if (spec.family == "random") {
    const int particles = spec.particles < 0 ? 2 * spec.m : spec.particles;
    return random_state(FockBasis::make(spec.n, particles, spec.statistics), rng);
  }
  if (spec.family == "paired") {
    if (spec.n % 2) throw DimensionError("paired states need even n");
    const int d = spec.n / 2;
    std::vector<PairedTerm> terms;
    compositions(d, fermion ? 1 : spec.m, std::vector<int>(static_cast<std::size_t>(d), 1), spec.m,
                 [&](const std::vector<int>& v) { terms.push_back({v, coef(rng)}); });
    return build_paired_state(spec.n, spec.statistics, terms);
  }
  if (spec.family == "ghz") {
    return build_ghz_state(spec.n, spec.alpha, spec.beta, spec.statistics);
  }
  if (spec.family == "group") {
    if (spec.sizes.empty()) throw PreconditionError("group states need block sizes");
    const int total = std::accumulate(spec.sizes.begin(), spec.sizes.end(), 0);
    if (total != spec.n) throw DimensionError("block sizes must add up to n");
    const int particles = spec.particles < 0 ? 2 * spec.m : spec.particles;
    std::vector<GroupTerm> terms;
    compositions(static_cast<int>(spec.sizes.size()), fermion ? 1 : particles, spec.sizes, particles,
                 [&](const std::vector<int>& v) { terms.push_back({v, coef(rng)}); });
    if (terms.empty()) throw PreconditionError("no block pattern reaches the requested particle number");
    return build_group_state({spec.sizes, {}}, spec.statistics, terms);
  }
  throw PreconditionError("unknown generator family '" + spec.family + "'");
}

std::optional<int> expected_one_body_count(const GeneratorSpec& spec) {
  const int n = spec.n;
  const bool fermion = spec.statistics == Statistics::fermion;
  if (spec.family == "condensate") {
    if (spec.m < 1 || (fermion && 2 * spec.m >= n)) return std::nullopt;
    return fermion ? n * (n + 1) / 2 + 1 : n * (n - 1) / 2 + 1;
  }
  if (spec.family == "random") return 1;
  if (spec.family == "paired") {
    if (spec.m < 2 || (fermion && spec.m > n / 2 - 2)) return std::nullopt;
    return fermion ? 3 * n / 2 + 1 : n / 2 + 1;
  }
  if (spec.family == "ghz") return fermion ? n * n / 2 - 1 : n - 1;
  if (spec.family == "group") {
    const int d = static_cast<int>(spec.sizes.size());
    if (!fermion) return n - d + 1;
    int l = 1;
    for (int s : spec.sizes) l += s * s - 1;
    return l;
  }
  return std::nullopt;
}

AuditReport audit_state(const StateVector& state, const std::string& label) {
  AuditReport r;
  r.label = label;
  r.n = state.basis->modes();
  r.particles = state.basis->particles();
  r.statistics = state.basis->statistics();
  const NullspaceResult one = conserved_count(state, OperatorClass::one_body);
  r.one_body = one.count;
  r.gap_ratio = one.gap_ratio;
  r.c11_spectrum = hermitian_nullspace(covariance_C11(state)).spectrum;
  if (r.particles >= 2) {
    r.pair_annihilation = conserved_count(state, OperatorClass::pair_annihilation).count;
  }
  const bool full = r.statistics == Statistics::fermion && r.particles + 2 > r.n;
  if (!full) r.pair_creation = conserved_count(state, OperatorClass::pair_creation).count;
  return r;
}

AuditReport audit_spec(const GeneratorSpec& spec) {
  std::ostringstream label;
  label << spec.family << " " << to_string(spec.statistics) << " n=" << spec.n;
  AuditReport r = audit_state(generate_state(spec), label.str());
  r.expected = expected_one_body_count(spec);
  return r;
}

std::string format_audit(const AuditReport& r) {
  std::ostringstream os;
  os << "label: " << r.label << "\n";
  os << "statistics: " << to_string(r.statistics) << "\n";
  os << "n: " << r.n << "\n";
  os << "particles: " << r.particles << "\n";
  os << "one_body_conserved: " << r.one_body << "\n";
  os << "pair_annihilation_conserved: " << r.pair_annihilation << "\n";
  os << "pair_creation_conserved: " << r.pair_creation << "\n";
  os << "gap_ratio: " << r.gap_ratio << "\n";
  if (r.expected) os << "expected_one_body: " << *r.expected << (r.matches() ? " (match)" : " (MISMATCH)") << "\n";
  os << "c11_spectrum:";
  for (Eigen::Index k = 0; k < r.c11_spectrum.size(); ++k) os << ' ' << r.c11_spectrum(k);
  os << "\n";
  return os.str();
}

}  // namespace paircond
