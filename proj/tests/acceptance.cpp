// Acceptance gate: one PASS/FAIL line per criterion.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "paircond/audit.hpp"
#include "paircond/detector.hpp"
#include "paircond/hamiltonians.hpp"
#include "paircond/sweep.hpp"

using namespace paircond;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

double top_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double bottom_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

PairMatrix random_pair_any_rank(int n, Statistics s, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  const CMatrix sym = s == Statistics::fermion ? CMatrix(m - m.transpose()) : CMatrix(m + m.transpose());
  return PairMatrix(sym, s).normalized();
}

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

// 1: detector round trip on random condensates
void round_trip(Outcome& o) {
  std::mt19937_64 rng(1001);
  double worst_lambda = 0.0;
  double worst_overlap = 1.0;
  int trials = 0;
  for (auto st : {Statistics::boson, Statistics::fermion}) {
    for (int t = 0; t < 100; ++t) {
      int n, m;
      if (st == Statistics::boson) {
        n = 2 + t % 7;
        m = 1 + (t / 7) % 4;
      } else {
        n = 4 + 2 * (t % 5);
        m = 1 + (t / 5) % std::min(4, n / 2 - 1);
      }
      const PairMatrix a = PairMatrix::random(n, st, rng);
      const DetectorReport r = detect(build_condensate(a, m).state);
      const double dl = std::abs(r.lambda_max - m);
      const double ov = std::abs((r.best_pair.adjoint() * a.matrix()).trace()) / 2.0;
      worst_lambda = std::max(worst_lambda, dl);
      worst_overlap = std::min(worst_overlap, ov);
      o.require(dl <= 1e-8, "lambda_max off by " + std::to_string(dl));
      o.require(ov >= 1.0 - 1e-7, "pair overlap " + std::to_string(ov));
      ++trials;
    }
  }
  o.detail << trials << " condensates, max |lambda-m| " << worst_lambda << ", min overlap " << std::setprecision(12)
           << worst_overlap;
}

// 2: one-body conserved counts on condensates and random states
void theorem1_counts(Outcome& o) {
  std::mt19937_64 rng(1002);
  int cases = 0;
  for (auto st : {Statistics::fermion, Statistics::boson}) {
    for (int n : {4, 6, 8}) {
      const int mmax = st == Statistics::fermion ? n / 2 - 1 : 4;
      for (int m = 1; m <= mmax; ++m) {
        const StateVector c = build_condensate(PairMatrix::random(n, st, rng), m).state;
        const int want = st == Statistics::fermion ? n * (n + 1) / 2 + 1 : n * (n - 1) / 2 + 1;
        const int got = conserved_count(c, OperatorClass::one_body).count;
        o.require(got == want, std::string(to_string(st)) + " n=" + std::to_string(n) + " m=" + std::to_string(m) + " gave " +
                                   std::to_string(got));
        ++cases;
      }
    }
  }
  // random states in sectors that are not automatically condensates
  for (auto [st, n, particles] : {std::tuple{Statistics::fermion, 8, 4}, std::tuple{Statistics::boson, 4, 4},
                                  std::tuple{Statistics::boson, 6, 4}, std::tuple{Statistics::boson, 8, 4}}) {
    const StateVector r = random_state(FockBasis::make(n, particles, st), rng);
    const int got = conserved_count(r, OperatorClass::one_body).count;
    o.require(got == 1, "random " + std::string(to_string(st)) + " n=" + std::to_string(n) + " gave " + std::to_string(got));
    ++cases;
  }
  o.detail << cases << " states";
}

// 3: rho2 has no zero eigenvalue on condensates with m >= 2
void proposition2(Outcome& o) {
  std::mt19937_64 rng(1003);
  double worst = 1e300;
  for (int t = 0; t < 50; ++t) {
    const Statistics st = t % 2 ? Statistics::boson : Statistics::fermion;
    int n, m;
    if (st == Statistics::fermion) {
      n = 8 + 2 * ((t / 2) % 3);
      m = 2 + (t / 6) % (n / 2 - 3);
    } else {
      n = 3 + (t / 2) % 4;
      m = 2 + (t / 8) % 2;
    }
    const StateVector c = build_condensate(PairMatrix::random(n, st, rng), m).state;
    const double low = bottom_eigenvalue(packed_two_body_dm(c));
    worst = std::min(worst, low);
    o.require(low > 1e-12, "min eigenvalue " + std::to_string(low));
  }
  o.detail << "50 condensates, smallest rho2 eigenvalue " << worst;
}

// 4: pair-number operator, positivity of H_A and Hbar, three H_A constructions
void pair_number_operator(Outcome& o) {
  std::mt19937_64 rng(1004);
  double worst_psd = 0.0;
  double worst_agree = 0.0;
  double worst_eig = 0.0;
  int sectors = 0;
  for (auto st : {Statistics::fermion, Statistics::boson}) {
    for (int n = 2; n <= 6; ++n) {
      if (st == Statistics::fermion && n % 2) continue;
      const PairMatrix a = PairMatrix::random(n, st, rng);
      CMatrix v = CMatrix::Zero(n * n, n * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          v(i * n + j, i * n + j) += 0.5;
          v(i * n + j, j * n + i) += 0.5 * upper_sign(st);
        }
      const int nmax = st == Statistics::fermion ? n : 6;
      for (int particles = 0; particles <= nmax; ++particles) {
        auto b = FockBasis::make(n, particles, st);
        const CMatrix ha = h_A(a, b).dense();
        const double agree = std::max((ha - h_A_from_q(a, b).dense()).cwiseAbs().maxCoeff(),
                                      (ha - h_Q(a, v, b).dense()).cwiseAbs().maxCoeff());
        worst_agree = std::max(worst_agree, agree);
        const double psd = std::min(bottom_eigenvalue(ha), bottom_eigenvalue(h_bar(a, b).dense()));
        worst_psd = std::min(worst_psd, psd);
        o.require(agree <= 1e-10, "H_A constructions differ by " + std::to_string(agree));
        o.require(psd >= -1e-9, "negative eigenvalue " + std::to_string(psd));
        if (particles % 2 == 0 && (st == Statistics::boson || particles < n)) {
          const int m = particles / 2;
          const StateVector c = build_condensate(a, m).state;
          const SparseOperator ma = m_A_op(a, b);
          const double res = (ma.apply(c.amplitudes) - double(m) * c.amplitudes).norm();
          const double top = top_eigenvalue(ma.dense());
          worst_eig = std::max({worst_eig, res, std::abs(top - m)});
          o.require(res <= 1e-9 && std::abs(top - m) <= 1e-9, "M_A eigenvalue check failed");
        }
        ++sectors;
      }
    }
  }
  o.detail << sectors << " sectors, min eigenvalue " << worst_psd << ", construction spread " << worst_agree
           << ", M_A residual " << worst_eig;
}

// 5: boson sweep
void figure_boson(Outcome& o) {
  SweepConfig c;
  c.model = SweepModel::boson;
  c.n = 8;
  c.m = 4;
  c.workers = workers();
  const SweepProblem p = prepare(c);
  const double dual = p.couplings.g_c_dual / p.couplings.g_c;
  c.grid = merge_grid(parse_grid("0:2:0.05"), {dual, 1.0});
  const SweepResult r = run_sweep(c);
  o.require(r.failed_index < 0, "sweep failed: " + r.error);
  double min_overlap = 1.0;
  double worst_exact = 0.0;
  for (const auto& row : r.rows) {
    min_overlap = std::min(min_overlap, row.overlap);
    if (row.x == 0.0 || row.x == dual || row.x == 1.0) worst_exact = std::max(worst_exact, std::abs(row.lambda1_over_m - 1.0));
  }
  o.require(std::abs(dual - 3.0 / 7.0) < 1e-12, "dual point " + std::to_string(dual));
  o.require(worst_exact <= 1e-8, "lambda1/m off by " + std::to_string(worst_exact));
  o.require(min_overlap >= 0.996, "overlap " + std::to_string(min_overlap));
  o.detail << r.rows.size() << " points on [0,2], |lambda1/m - 1| at {0,3/7,1} <= " << worst_exact
           << ", min overlap " << std::setprecision(6) << min_overlap;
}

// 6: fermion sweep on the signed axis
void figure_fermion(Outcome& o) {
  SweepConfig c;
  c.model = SweepModel::fermion;
  c.n = 16;
  c.m = 4;
  c.workers = workers();
  c.grid = {-3.0, -0.6, 0.0, 1.0};
  const SweepResult r = run_sweep(c);
  o.require(r.failed_index < 0, "sweep failed: " + r.error);
  if (r.rows.size() != 4) return;
  double worst = 0.0;
  for (int k : {1, 2, 3}) worst = std::max(worst, std::abs(r.rows[static_cast<std::size_t>(k)].lambda1_over_m - 1.0));
  const RVector& occ = r.rows[0].rho1_eigs;
  const double merge = (occ.array() - 0.5).abs().maxCoeff();
  o.require(worst <= 1e-8, "lambda1/m off by " + std::to_string(worst));
  o.require(r.rows[2].degeneracy == 28, "degeneracy at 0 is " + std::to_string(r.rows[2].degeneracy));
  o.require(merge <= 1e-6, "occupations at -3 deviate by " + std::to_string(merge));
  o.detail << "|lambda1/m - 1| at {-3/5,0,1} <= " << worst << ", degeneracy at 0: " << r.rows[2].degeneracy
           << ", max |n_k - 1/2| at -3: " << merge;
}

// 7: bounds on the largest rho2 eigenvalue of condensates
void eigenvalue_bounds(Outcome& o) {
  std::mt19937_64 rng(1007);
  double worst_eq = 0.0;
  int checked = 0;
  for (int n : {6, 8}) {
    for (int m : {2, 3}) {
      const double fb = m * (1.0 - 2.0 * (m - 1) / n);
      const double bb = m * (1.0 + 2.0 * (m - 1) / n);
      const double f0 = top_eigenvalue(packed_two_body_dm(build_condensate(PairMatrix::uniform(n, Statistics::fermion), m).state));
      const double b0 = top_eigenvalue(packed_two_body_dm(build_condensate(PairMatrix::uniform(n, Statistics::boson), m).state));
      worst_eq = std::max({worst_eq, std::abs(f0 - fb), std::abs(b0 - bb)});
      o.require(std::abs(f0 - fb) <= 1e-9 && std::abs(b0 - bb) <= 1e-9, "uniform condensate misses the bound");
      for (int t = 0; t < 10; ++t) {
        const double f = top_eigenvalue(packed_two_body_dm(build_condensate(PairMatrix::random(n, Statistics::fermion, rng), m).state));
        const double b = top_eigenvalue(packed_two_body_dm(build_condensate(PairMatrix::random(n, Statistics::boson, rng), m).state));
        o.require(f <= fb + 1e-9, "fermion bound violated");
        o.require(b >= bb - 1e-9, "boson bound violated");
        checked += 2;
      }
    }
  }
  o.detail << checked << " random condensates within bounds, uniform equality to " << worst_eq;
}

// 8: commutator algebra and SU(2) triads
void algebra(Outcome& o) {
  std::mt19937_64 rng(1008);
  double worst = 0.0;
  std::size_t checked = 0;
  for (auto st : {Statistics::fermion, Statistics::boson}) {
    for (int n = st == Statistics::fermion ? 2 : 1; n <= 6; ++n) {
      const AlgebraReport r = verify_commutator_algebra(random_pair_any_rank(n, st, rng));
      worst = std::max(worst, r.max_residual);
      checked += r.checked;
    }
  }
  o.require(worst <= 1e-12, "commutator residual " + std::to_string(worst));
  // operator-level check of the same identity on a sector
  double op_worst = 0.0;
  for (auto st : {Statistics::fermion, Statistics::boson}) {
    const PairMatrix a = PairMatrix::random(4, st, rng);
    auto b = FockBasis::make(4, 3, st);
    const double sgn = upper_sign(st);
    std::vector<SparseOperator> q;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) q.push_back(build_one_body(q_coefficients(a, i, j), b));
    auto Q = [&](int i, int j) -> const SparseOperator& { return q[static_cast<std::size_t>(i * 4 + j)]; };
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            const SparseOperator rhs = (sgn * a(k, i)) * Q(j, l) + (sgn * a(l, j)) * Q(i, k) -
                                       (sgn * a(j, k)) * Q(i, l) - (sgn * a(i, l)) * Q(j, k);
            op_worst = std::max(op_worst, frobenius_norm(commutator(Q(i, j), Q(k, l)) - rhs));
          }
  }
  o.require(op_worst <= 1e-12, "operator-level residual " + std::to_string(op_worst));
  double triad_worst = 0.0;
  std::size_t triads = 0;
  for (auto st : {Statistics::fermion, Statistics::boson}) {
    for (int n : {4, 6}) {
      const auto ts = su2_scaled_ops(canonical_decompose(PairMatrix::random(n, st, rng)));
      auto b = FockBasis::make(n, 3, st);
      for (const auto& t : ts) {
        triad_worst = std::max(triad_worst, triad_residual(t));
        std::array<SparseOperator, 3> s{build_one_body(t.ops[0], b), build_one_body(t.ops[1], b),
                                        build_one_body(t.ops[2], b)};
        const cplx I(0.0, 1.0);
        double r = 0.0;
        if (t.kind == TriadKind::ladder) {
          r = std::max({frobenius_norm(commutator(s[0], s[1]) - 2.0 * s[2]),
                        frobenius_norm(commutator(s[2], s[0]) - s[0]), frobenius_norm(commutator(s[2], s[1]) + s[1])});
        } else {
          r = std::max({frobenius_norm(commutator(s[0], s[1]) - I * s[2]),
                        frobenius_norm(commutator(s[1], s[2]) - I * s[0]),
                        frobenius_norm(commutator(s[2], s[0]) - I * s[1])});
        }
        triad_worst = std::max(triad_worst, r);
        ++triads;
      }
    }
  }
  o.require(triads > 0 && triad_worst <= 1e-10, "triad residual " + std::to_string(triad_worst));
  o.detail << checked << " index quadruples, residual " << worst << " (operator level " << op_worst << "), " << triads
           << " triads, residual " << triad_worst;
}

// 9: closed-form counts for structured states at n = 8
void fixtures(Outcome& o) {
  const char* specs[] = {
      R"({"family":"paired","statistics":"fermion","n":8,"m":2,"seed":11})",
      R"({"family":"paired","statistics":"boson","n":8,"m":3,"seed":12})",
      R"({"family":"ghz","statistics":"fermion","n":8,"alpha":1.0,"beta":0.7})",
      R"({"family":"ghz","statistics":"boson","n":8,"alpha":1.0,"beta":0.7})",
      R"({"family":"group","statistics":"fermion","n":8,"sizes":[2,2,2,2],"particles":4,"seed":13})",
      R"({"family":"group","statistics":"fermion","n":8,"sizes":[4,4],"particles":4,"seed":14})",
      R"({"family":"group","statistics":"boson","n":8,"sizes":[3,2,3],"particles":6,"seed":15})",
  };
  for (const char* s : specs) {
    const GeneratorSpec g = parse_generator_spec(s);
    const AuditReport r = audit_spec(g);
    o.require(r.expected.has_value() && r.matches(),
              r.label + " gave " + std::to_string(r.one_body) + " expected " + std::to_string(r.expected.value_or(-1)));
    o.detail << g.family << "/" << to_string(g.statistics)[0] << "=" << r.one_body << " ";
  }
}

// 10: generalized test on truncated exponentials
void theorem4(Outcome& o) {
  std::mt19937_64 rng(1010);
  double worst = 0.0;
  double worst_ov = 1.0;
  double min_drop = 1e300;
  for (auto [st, n, kmax] : {std::tuple{Statistics::fermion, 8, 4}, std::tuple{Statistics::boson, 4, 5},
                             std::tuple{Statistics::fermion, 6, 3}}) {
    for (double alpha : {0.6, 1.3}) {
      const PairMatrix a = PairMatrix::random(n, st, rng);
      std::vector<std::pair<int, cplx>> coef;
      double f = 1.0;
      for (int m = 0; m <= kmax; ++m) {
        if (m > 0) f *= alpha / m;
        coef.push_back({m, f});
      }
      Ensemble e = build_superposition(a, coef).sector_weights();
      const DetectorReport r = detect_general(e);
      const double ov = std::abs((r.best_pair.adjoint() * a.matrix()).trace()) / 2.0;
      worst = std::max(worst, std::abs(r.lambda_max - r.m));
      worst_ov = std::min(worst_ov, ov);
      o.require(std::abs(r.lambda_max - r.m) <= 1e-8, "lambda_max differs from <M>");
      o.require(ov >= 1.0 - 1e-7, "pair not recovered");
      if (st == Statistics::fermion) {
        for (double& w : e.weights) w *= 0.9;
        e.weights.push_back(0.1);
        e.states.push_back(build_odd_state(a, 1, 0, OddMode::create));
        const DetectorReport bad = detect_general(e);
        const double drop = bad.m - bad.lambda_max;
        min_drop = std::min(min_drop, drop / bad.tolerance);
        o.require(drop > 10.0 * bad.tolerance, "contaminated ensemble not rejected");
      }
    }
  }
  o.detail << "max |lambda_max - <M>| " << worst << ", min pair overlap " << std::setprecision(12) << worst_ov
           << ", contaminated drop >= " << std::setprecision(3) << min_drop << " x tol";
}

// 11: two-body annihilators versus the Q-family span
void theorem2(Outcome& o) {
  std::mt19937_64 rng(1011);
  for (auto [st, n, m] : {std::tuple{Statistics::boson, 2, 2}, std::tuple{Statistics::fermion, 8, 2}}) {
    const SpanCheck s = theorem2_span_check(PairMatrix::random(n, st, rng), m);
    o.require(s.annihilator_dim == s.family_dim, "dimensions differ");
    o.detail << to_string(st) << " n=" << n << ": " << s.annihilator_dim << " vs " << s.family_dim << " (gaps "
             << std::setprecision(3) << s.gap_route1 << ", " << s.gap_route2 << ") ";
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"detector round trip on random condensates", round_trip},
      {"one-body conserved counts", theorem1_counts},
      {"rho2 nonsingular on condensates", proposition2},
      {"pair-number operator and positive Hamiltonians", pair_number_operator},
      {"boson model sweep", figure_boson},
      {"fermion model sweep", figure_fermion},
      {"two-body eigenvalue bounds", eigenvalue_bounds},
      {"Q commutator algebra and SU(2) triads", algebra},
      {"structured-state fixtures", fixtures},
      {"generalized test on superpositions", theorem4},
      {"two-body annihilator span", theorem2},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << k + 1 << "] " << criteria[k].first << ": " << o.detail.str()
              << " (" << std::fixed << std::setprecision(1) << secs << " s)" << std::defaultfloat << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
