#include "paircond/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

namespace paircond {

SweepModel sweep_model_from_string(const std::string& s) {
  if (s == "boson") return SweepModel::boson;
  if (s == "fermion") return SweepModel::fermion;
  if (s == "mixed") return SweepModel::mixed;
  throw PreconditionError("unknown sweep model '" + s + "'");
}

std::string to_string(SweepModel m) {
  switch (m) {
    case SweepModel::boson: return "boson";
    case SweepModel::fermion: return "fermion";
    case SweepModel::mixed: return "mixed";
  }
  return "unknown";
}

RVector sigma_rule(const std::string& rule, int levels) {
  if (levels < 1) throw DimensionError("no levels");
  RVector s(levels);
  if (rule == "sqrt-k") {
    for (int k = 0; k < levels; ++k) s(k) = std::sqrt(static_cast<double>(k + 1));
  } else if (rule == "uniform") {
    s.setOnes();
  } else {
    throw PreconditionError("unknown sigma rule '" + rule + "'");
  }
  return s / s.norm();
}

RVector eps_rule(const std::string& rule, double eps, const RVector& sigmas) {
  RVector e(sigmas.size());
  if (rule == "linear") {
    for (Eigen::Index k = 0; k < e.size(); ++k) e(k) = eps * static_cast<double>(k + 1);
  } else if (rule == "proportional") {
    e = eps * sigmas.cwiseAbs2();
  } else {
    throw PreconditionError("unknown eps rule '" + rule + "'");
  }
  return e;
}

namespace {

double parse_number(const std::string& tok) {
  const auto slash = tok.find('/');
  std::size_t used = 0;
  try {
    if (slash == std::string::npos) {
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw PreconditionError("bad grid entry '" + tok + "'");
      return v;
    }
    const std::string a = tok.substr(0, slash);
    const std::string b = tok.substr(slash + 1);
    const double num = std::stod(a, &used);
    if (used != a.size()) throw PreconditionError("bad grid entry '" + tok + "'");
    const double den = std::stod(b, &used);
    if (used != b.size() || den == 0.0) throw PreconditionError("bad grid entry '" + tok + "'");
    return num / den;
  } catch (const std::logic_error&) {
    throw PreconditionError("bad grid entry '" + tok + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> g;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw PreconditionError("range grid must be a:b:step");
    const double a = parse_number(parts[0]);
    const double b = parse_number(parts[1]);
    const double step = parse_number(parts[2]);
    if (!(step > 0.0) || b < a) throw PreconditionError("range grid needs a <= b and step > 0");
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long k = 0; k <= count; ++k) g.push_back(a + static_cast<double>(k) * step);
  } else {
    for (const auto& tok : split(text, ',')) g.push_back(parse_number(tok));
  }
  if (g.empty()) throw PreconditionError("empty grid");
  for (std::size_t k = 1; k < g.size(); ++k) {
    if (!(g[k] > g[k - 1])) throw PreconditionError("grid must be strictly increasing");
  }
  return g;
}

std::vector<double> merge_grid(std::vector<double> grid, const std::vector<double>& extra) {
  for (double e : extra) {
    bool present = false;
    for (double& v : grid) {
      if (std::abs(v - e) <= 1e-9) {
        v = e;
        present = true;
      }
    }
    if (!present) grid.push_back(e);
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

CMatrix default_mixed_rotation(int n) {
  if (n % 2) throw DimensionError("mixed model needs even n");
  CMatrix u = CMatrix::Zero(n, n);
  for (int k = 0; 2 * k < n; ++k) {
    u((2 * k + 2) % n, 2 * k) = 1.0;
    u(2 * k + 1, 2 * k + 1) = 1.0;
  }
  return u;
}

SweepProblem prepare(const SweepConfig& cfg) {
  SweepProblem p;
  const bool fermion = cfg.model != SweepModel::boson;
  p.statistics = fermion ? Statistics::fermion : Statistics::boson;
  if (fermion && cfg.n % 2) throw DimensionError("fermion models need even n");
  if (cfg.m < 2) throw PreconditionError("sweeps need m >= 2");
  if (fermion && 2 * cfg.m > cfg.n) throw PreconditionError("m exceeds n/2");
  const int levels = fermion ? cfg.n / 2 : cfg.n;
  p.sigmas = sigma_rule(cfg.sigma_rule, levels);
  p.energies = eps_rule(cfg.eps_rule, cfg.eps, p.sigmas);
  if (fermion) p.energies = -p.energies;
  ModelParams mp{p.statistics, p.sigmas, p.energies, 0.0};
  p.couplings = critical_couplings(mp, cfg.m);
  p.basis = FockBasis::make(cfg.n, 2 * cfg.m, p.statistics);
  if (cfg.model == SweepModel::mixed && cfg.rotation.size() != 0) {
    if (cfg.rotation.rows() != cfg.n || cfg.rotation.cols() != cfg.n) throw DimensionError("rotation must be n x n");
    const double err = (cfg.rotation.adjoint() * cfg.rotation - CMatrix::Identity(cfg.n, cfg.n)).norm();
    if (err > 1e-10) throw PreconditionError("rotation is not unitary");
  }
  return p;
}

SparseOperator sweep_hamiltonian(const SweepConfig& cfg, const SweepProblem& prob, double x) {
  const double gc = prob.couplings.g_c;
  switch (cfg.model) {
    case SweepModel::boson:
      return model_boson({prob.statistics, prob.sigmas, prob.energies, x * gc}, prob.basis);
    case SweepModel::fermion: {
      if (x >= 0.0) return model_fermion({prob.statistics, prob.sigmas, prob.energies, x * gc}, prob.basis);
      return model_fermion({prob.statistics, prob.sigmas, -prob.energies, -x * gc}, prob.basis);
    }
    case SweepModel::mixed: {
      if (x < 0.0 || x > 1.0) throw PreconditionError("mixing parameter outside [0, 1]");
      const SparseOperator h1 = model_fermion({prob.statistics, prob.sigmas, prob.energies, gc}, prob.basis);
      const CMatrix u = cfg.rotation.size() != 0 ? cfg.rotation : default_mixed_rotation(cfg.n);
      const int d = static_cast<int>(prob.sigmas.size());
      CMatrix h = CMatrix::Zero(cfg.n, cfg.n);
      for (int k = 0; k < d; ++k) {
        h(2 * k, 2 * k) = 0.5 * prob.energies(k);
        h(2 * k + 1, 2 * k + 1) = 0.5 * prob.energies(k);
      }
      const PairMatrix a2 = PairMatrix::from_sigmas(prob.sigmas, Statistics::fermion).transformed(u);
      const SparseOperator h2 = build_one_body(rotate_one_body(h, u), prob.basis) -
                                (cfg.g2_ratio * gc) * pair_number_term(a2, prob.basis);
      return model_mixed(x, h1, h2);
    }
  }
  throw Error("unknown model");
}

namespace {

RVector descending_eigs(const CMatrix& m) {
  if (m.rows() == 0) return RVector();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

std::vector<int> collective_indices(int n, Statistics s) {
  std::vector<int> idx;
  if (s == Statistics::fermion) {
    for (int k = 0; 2 * k + 1 < n; ++k) idx.push_back(packed_index(2 * k, 2 * k + 1, n, s));
  } else {
    for (int k = 0; k < n; ++k) idx.push_back(packed_index(k, k, n, s));
  }
  return idx;
}

CMatrix sub_block(const CMatrix& m, const std::vector<int>& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  CMatrix out(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) out(a, b) = m(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
  }
  return out;
}

}  // namespace

SweepRow evaluate_point(const SweepConfig& cfg, const SweepProblem& prob, double x) {
  SweepRow row;
  row.x = x;
  const SparseOperator h = sweep_hamiltonian(cfg, prob, x);
  SolverOptions opts;
  opts.dense_threshold = 400;
  opts.seed = cfg.seed;
  const Eigenpair gs = ground_state(h, opts);
  row.energy = gs.energy;
  row.residual = gs.residual;

  const DensityMatrices dms = reduced_dms(gs.state, {true, true, false});
  const double m = cfg.m;
  const ModifiedRho2 mod = modified_rho2(dms, m);
  const DetectorReport rep = analyze(mod, cfg.tol, &dms.rho1);
  row.lambda1_over_m = rep.lambda_max / m;
  row.d2 = rep.d2;
  row.degeneracy = rep.degeneracy;
  row.gap = rep.gap;
  row.classification = to_string(rep.classification);

  const PairMatrix best(rep.best_pair, prob.statistics);
  try {
    const StateVector c = build_condensate(best, cfg.m).state;
    row.overlap = std::abs(c.amplitudes.dot(gs.state.amplitudes));
  } catch (const PreconditionError&) {
    row.overlap = 0.0;
  }
  row.h_a = expectation(gs.state, h_A(best, prob.basis)).real();

  const double particles = 2.0 * m;
  row.rho1_eigs = descending_eigs(dms.rho1);
  row.d1 = particles - row.rho1_eigs(0);
  row.entropy = entropy(dms.rho1 / particles);
  row.delta_entropy = row.entropy - std::log2(particles);
  row.lambda2_max = descending_eigs(dms.rho2)(0);
  const auto idx = collective_indices(cfg.n, prob.statistics);
  row.rho2_collective = descending_eigs(sub_block(dms.rho2, idx));
  row.mod_collective = descending_eigs(sub_block(mod.matrix, idx));
  return row;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  if (cfg.grid.empty()) throw PreconditionError("empty grid");
  for (std::size_t k = 1; k < cfg.grid.size(); ++k) {
    if (!(cfg.grid[k] > cfg.grid[k - 1])) throw PreconditionError("grid must be strictly increasing");
  }
  const SweepProblem prob = prepare(cfg);
  const std::size_t count = cfg.grid.size();
  std::vector<SweepRow> rows(count);
  std::vector<std::string> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        rows[k] = evaluate_point(cfg, prob, cfg.grid[k]);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(count)));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  SweepResult res;
  for (std::size_t k = 0; k < count; ++k) {
    if (!errors[k].empty()) {
      res.failed_index = static_cast<int>(k);
      res.error = errors[k];
      break;
    }
    res.rows.push_back(std::move(rows[k]));
  }
  return res;
}

namespace {

std::string join(const RVector& v) {
  std::ostringstream os;
  os << std::setprecision(12);
  for (Eigen::Index k = 0; k < v.size(); ++k) os << (k ? ";" : "") << v(k);
  return os.str();
}

}  // namespace

void write_csv(std::ostream& os, const SweepConfig& cfg, const SweepResult& res) {
  const SweepProblem prob = prepare(cfg);
  os << std::setprecision(12);
  os << "#schema=paircond-sweep/1 model=" << to_string(cfg.model) << " n=" << cfg.n << " m=" << cfg.m
     << " sigma_rule=" << cfg.sigma_rule << " eps_rule=" << cfg.eps_rule << " eps=" << cfg.eps
     << " eps_eff=" << prob.couplings.eps_eff << " g_c=" << prob.couplings.g_c
     << " g_c_dual=" << prob.couplings.g_c_dual << "\n";
  os << (cfg.model == SweepModel::mixed ? "p" : "g_over_gc")
     << ",lambda1_over_m,overlap,d2,h_a,d1,energy,residual,entropy,delta_entropy,lambda2_max,degeneracy,gap,"
        "classification,rho1_eigs,rho2_collective,mod_collective\n";
  for (const auto& r : res.rows) {
    os << r.x << ',' << r.lambda1_over_m << ',' << r.overlap << ',' << r.d2 << ',' << r.h_a << ',' << r.d1 << ','
       << r.energy << ',' << r.residual << ',' << r.entropy << ',' << r.delta_entropy << ',' << r.lambda2_max << ','
       << r.degeneracy << ',' << r.gap << ',' << r.classification << ',' << join(r.rho1_eigs) << ','
       << join(r.rho2_collective) << ',' << join(r.mod_collective) << '\n';
  }
  if (res.failed_index >= 0) os << "#error row=" << res.failed_index << " " << res.error << "\n";
}

void write_svg(std::ostream& os, const SweepConfig& cfg, const SweepResult& res) {
  const double w = 640.0;
  const double h = 400.0;
  const double left = 60.0;
  const double right = 20.0;
  const double top = 20.0;
  const double bottom = 50.0;
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 1.0;
  double y1 = 1.0;
  if (!res.rows.empty()) {
    x0 = res.rows.front().x;
    x1 = res.rows.back().x;
    for (const auto& r : res.rows) y0 = std::min({y0, r.lambda1_over_m, r.overlap});
  }
  if (x1 <= x0) x1 = x0 + 1.0;
  y0 = std::max(0.0, y0 - 0.1 * (1.0 - y0) - 1e-3);
  y1 = 1.0 + 0.05 * (1.0 - y0);
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (w - left - right); };
  auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * (h - top - bottom); };
  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\"" << w - right << "\" y2=\"" << h - bottom
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << h - bottom
     << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x0 + (x1 - x0) * t / 4.0;
    const double yv = y0 + (y1 - y0) * t / 4.0;
    os << "<text x=\"" << px(xv) << "\" y=\"" << h - bottom + 18 << "\" font-size=\"11\" text-anchor=\"middle\">" << xv
       << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" font-size=\"11\" text-anchor=\"end\">" << yv
       << "</text>\n";
  }
  os << "<text x=\"" << (left + w - right) / 2 << "\" y=\"" << h - 10 << "\" font-size=\"12\" text-anchor=\"middle\">"
     << (cfg.model == SweepModel::mixed ? "p" : "g/g_c") << "</text>\n";
  auto series = [&](const char* color, const char* dash, auto value) {
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-dasharray=\"" << dash << "\" points=\"";
    for (const auto& r : res.rows) os << px(r.x) << ',' << py(value(r)) << ' ';
    os << "\"/>\n";
  };
  series("blue", "none", [](const SweepRow& r) { return r.lambda1_over_m; });
  series("red", "5,3", [](const SweepRow& r) { return r.overlap; });
  os << "<text x=\"" << w - right - 150 << "\" y=\"" << top + 40 << "\" font-size=\"12\" fill=\"blue\">lambda1/m</text>\n";
  os << "<text x=\"" << w - right - 150 << "\" y=\"" << top + 56 << "\" font-size=\"12\" fill=\"red\">overlap</text>\n";
  os << "</svg>\n";
}

SweepResult run_and_write(const SweepConfig& cfg) {
  SweepResult res = run_sweep(cfg);
  if (!cfg.out.empty()) {
    std::ofstream os(cfg.out);
    if (!os) throw Error("cannot open '" + cfg.out + "' for writing");
    write_csv(os, cfg, res);
  }
  if (!cfg.svg.empty()) {
    std::ofstream os(cfg.svg);
    if (!os) throw Error("cannot open '" + cfg.svg + "' for writing");
    write_svg(os, cfg, res);
  }
  if (res.failed_index >= 0) {
    std::ostringstream msg;
    msg << "sweep failed at row " << res.failed_index << ": " << res.error;
    throw SolverError(msg.str(), std::nan(""));
  }
  return res;
}

}  // namespace paircond
