// paircond command-line driver: model sweeps, conserved-operator audits,
// condensate detection on density-matrix files.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "paircond/audit.hpp"
#include "paircond/density.hpp"
#include "paircond/detector.hpp"
#include "paircond/matrix_io.hpp"
#include "paircond/states.hpp"
#include "paircond/sweep.hpp"

using namespace paircond;
using nlohmann::json;

namespace {

struct SweepArgs {
  SweepConfig cfg;
  std::string grid;
  std::string rotation;
  std::string config;
};

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw SchemaError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Values from --config fill every option not given on the command line.
void apply_config(CLI::App* sub, SweepArgs& a) {
  if (a.config.empty()) return;
  json doc;
  try {
    doc = json::parse(slurp(a.config));
  } catch (const json::parse_error& e) {
    throw SchemaError(a.config + ": " + e.what());
  }
  if (!doc.is_object()) throw SchemaError(a.config + ": top level must be an object");
  auto unset = [&](const char* flag) { return sub->get_option(flag)->count() == 0; };
  try {
    for (const auto& [key, val] : doc.items()) {
      if (key == "n") { if (unset("--n")) a.cfg.n = val.get<int>(); }
      else if (key == "m") { if (unset("--m")) a.cfg.m = val.get<int>(); }
      else if (key == "sigma_rule") { if (unset("--sigma-rule")) a.cfg.sigma_rule = val.get<std::string>(); }
      else if (key == "eps_rule") { if (unset("--eps-rule")) a.cfg.eps_rule = val.get<std::string>(); }
      else if (key == "eps") { if (unset("--eps")) a.cfg.eps = val.get<double>(); }
      else if (key == "tol") { if (unset("--tol")) a.cfg.tol = val.get<double>(); }
      else if (key == "out") { if (unset("--out")) a.cfg.out = val.get<std::string>(); }
      else if (key == "svg") { if (unset("--svg")) a.cfg.svg = val.get<std::string>(); }
      else if (key == "workers") { if (unset("--workers")) a.cfg.workers = val.get<int>(); }
      else if (key == "seed") { if (unset("--seed")) a.cfg.seed = val.get<std::uint64_t>(); }
      else if (key == "g2") {
        if (sub->get_option_no_throw("--g2") && unset("--g2")) a.cfg.g2_ratio = val.get<double>();
      } else if (key == "rotation") {
        if (sub->get_option_no_throw("--rotation") && unset("--rotation")) a.rotation = val.get<std::string>();
      } else if (key == "grid") {
        if (!unset("--grid")) continue;
        if (val.is_string()) {
          a.grid = val.get<std::string>();
        } else {
          std::ostringstream os;
          os << std::setprecision(17);
          for (std::size_t k = 0; k < val.size(); ++k) os << (k ? "," : "") << val.at(k).get<double>();
          a.grid = os.str();
        }
      } else if (key != "model") {
        throw SchemaError(a.config + ": unknown field '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw SchemaError(a.config + ": " + e.what());
  }
}

CLI::App* add_sweep(CLI::App& app, const std::string& name, const std::string& help, SweepModel model, SweepArgs& a) {
  a.cfg.model = model;
  if (model != SweepModel::boson) a.cfg.n = 16;
  if (model == SweepModel::mixed) a.cfg.m = 2;
  auto* sub = app.add_subcommand(name, help);
  sub->add_option("--n", a.cfg.n, "single-particle states")->capture_default_str();
  sub->add_option("--m", a.cfg.m, "pairs")->capture_default_str();
  sub->add_option("--sigma-rule", a.cfg.sigma_rule, "sqrt-k | uniform")->capture_default_str();
  sub->add_option("--eps-rule", a.cfg.eps_rule, "linear | proportional")->capture_default_str();
  sub->add_option("--eps", a.cfg.eps, "energy scale")->capture_default_str();
  sub->add_option("--grid", a.grid, "a:b:step or comma list (fractions allowed)");
  sub->add_option("--tol", a.cfg.tol, "detector tolerance (default 1e-8 max(1, m))");
  sub->add_option("--out", a.cfg.out, "CSV output path");
  sub->add_option("--svg", a.cfg.svg, "SVG output path");
  sub->add_option("--workers", a.cfg.workers, "concurrent grid points")->capture_default_str();
  sub->add_option("--seed", a.cfg.seed, "Lanczos start vector seed")->capture_default_str();
  sub->add_option("--config", a.config, "JSON file with the same fields");
  if (model == SweepModel::mixed) {
    sub->add_option("--rotation", a.rotation, "unitary matrix file for the second basis");
    sub->add_option("--g2", a.cfg.g2_ratio, "second coupling in units of g_c")->capture_default_str();
  }
  return sub;
}

int run_sweep_cmd(CLI::App* sub, SweepArgs& a) {
  apply_config(sub, a);
  SweepConfig& cfg = a.cfg;
  if (!a.rotation.empty()) {
    const MatrixFile u = read_matrix_file(a.rotation);
    if (u.kind != "unitary") throw SchemaError(a.rotation + ": expected kind \"unitary\"");
    cfg.rotation = u.data;
  }
  const SweepProblem prob = prepare(cfg);
  const double dual = prob.couplings.g_c_dual / prob.couplings.g_c;
  if (!a.grid.empty()) {
    cfg.grid = parse_grid(a.grid);
  } else if (cfg.model == SweepModel::boson) {
    cfg.grid = merge_grid(parse_grid("0:2:0.05"), {dual, 1.0});
  } else if (cfg.model == SweepModel::fermion) {
    cfg.grid = merge_grid(parse_grid("-4:2:0.1"), {-dual, 0.0, 1.0});
  } else {
    cfg.grid = parse_grid("0:1:0.02");
  }
  const SweepResult res = run_and_write(cfg);
  if (cfg.out.empty()) write_csv(std::cout, cfg, res);
  return 0;
}

DensityMatrices load_dms(const std::string& rho1_path, const std::string& rho2_path) {
  const MatrixFile r1 = read_matrix_file(rho1_path);
  const MatrixFile r2 = read_matrix_file(rho2_path);
  if (r1.kind != "rho1") throw SchemaError(rho1_path + ": field 'kind': expected \"rho1\"");
  if (r2.kind != "rho2") throw SchemaError(rho2_path + ": field 'kind': expected \"rho2\"");
  if (r1.statistics != r2.statistics) throw SchemaError("rho1 and rho2 files disagree on 'statistics'");
  if (r1.n != r2.n) throw SchemaError("rho1 and rho2 files disagree on 'n'");
  DensityMatrices d;
  d.statistics = r1.statistics;
  d.n = r1.n;
  d.particles = static_cast<int>(std::lround(r1.data.trace().real()));
  d.rho1 = r1.data;
  d.rho2 = packed_rho2(r2);
  return d;
}

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

int run_detect(const std::string& rho1, const std::string& rho2, double m, double tol, const std::string& out) {
  const DensityMatrices d = load_dms(rho1, rho2);
  if (m <= 0.0) m = 0.5 * d.rho1.trace().real();
  const DetectorReport rep = detect(d, m, tol);
  json doc;
  doc["statistics"] = to_string(d.statistics);
  doc["n"] = d.n;
  doc["m"] = rep.m;
  doc["tolerance"] = rep.tolerance;
  doc["lambda_max"] = rep.lambda_max;
  doc["gap"] = rep.gap;
  doc["degeneracy"] = rep.degeneracy;
  doc["d2"] = rep.d2;
  doc["is_condensate"] = rep.is_condensate;
  doc["classification"] = to_string(rep.classification);
  doc["spectrum"] = std::vector<double>(rep.spectrum.data(), rep.spectrum.data() + rep.spectrum.size());
  doc["best_pair"] = matrix_json(rep.best_pair);
  if (out.empty()) {
    std::cout << doc.dump(1) << '\n';
  } else {
    std::ofstream os(out);
    if (!os) throw Error("cannot open '" + out + "' for writing");
    os << doc.dump(1) << '\n';
  }
  return rep.is_condensate ? 0 : 1;
}

int run_audit(const std::string& spec, const std::string& state_path, const std::string& out) {
  AuditReport r;
  if (!state_path.empty()) {
    r = audit_state(read_state_file(state_path), state_path);
  } else {
    const std::string text = std::filesystem::exists(spec) ? slurp(spec) : spec;
    r = audit_spec(parse_generator_spec(text));
  }
  const std::string txt = format_audit(r);
  if (out.empty()) {
    std::cout << txt;
  } else {
    std::ofstream os(out);
    if (!os) throw Error("cannot open '" + out + "' for writing");
    os << txt;
  }
  return r.matches() ? 0 : 1;
}

struct BuildArgs {
  std::string statistics = "fermion";
  int n = 8;
  int m = 2;
  std::uint64_t seed = 1;
  std::string pair;
  std::string spec;
  bool uniform = false;
  std::string rho1;
  std::string rho2;
  std::string convention = "packed_lex";
  std::string state;
};

int run_build(const BuildArgs& b) {
  StateVector psi;
  if (!b.spec.empty()) {
    const std::string text = std::filesystem::exists(b.spec) ? slurp(b.spec) : b.spec;
    psi = generate_state(parse_generator_spec(text));
  } else {
    const Statistics s = statistics_from_string(b.statistics);
    PairMatrix a;
    if (!b.pair.empty()) {
      const MatrixFile f = read_matrix_file(b.pair);
      if (f.kind != "pair") throw SchemaError(b.pair + ": expected kind \"pair\"");
      a = PairMatrix(f.data, f.statistics).normalized();
    } else if (b.uniform) {
      a = PairMatrix::uniform(b.n, s);
    } else {
      std::mt19937_64 rng(b.seed);
      a = PairMatrix::random(b.n, s, rng);
    }
    psi = build_condensate(a, b.m).state;
  }
  const DensityMatrices d = reduced_dms(psi, {true, true, false});
  const Statistics s = psi.basis->statistics();
  const int n = psi.basis->modes();
  if (!b.rho1.empty()) write_matrix_file(b.rho1, {"rho1", s, n, "full", d.rho1});
  if (!b.rho2.empty()) {
    if (b.convention == "full") {
      write_matrix_file(b.rho2, {"rho2", s, n, "full", full_two_body_dm(psi)});
    } else if (b.convention == "packed_lex") {
      write_matrix_file(b.rho2, {"rho2", s, n, "packed_lex", d.rho2});
    } else {
      throw PreconditionError("unknown index convention '" + b.convention + "'");
    }
  }
  if (!b.state.empty()) write_state_file(b.state, psi);
  if (b.rho1.empty() && b.rho2.empty() && b.state.empty()) write_matrix(std::cout, {"rho1", s, n, "full", d.rho1});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pair-condensate detection and model sweeps"};
  app.require_subcommand(1);

  SweepArgs boson, fermion, mixed;
  auto* sb = add_sweep(app, "sweep-boson", "boson pairing model versus g/g_c", SweepModel::boson, boson);
  auto* sf = add_sweep(app, "sweep-fermion", "fermion pairing model versus signed g/g_c", SweepModel::fermion, fermion);
  auto* sm = add_sweep(app, "sweep-mixed", "interpolation (1-p) H_F1 + p H_F2", SweepModel::mixed, mixed);

  std::string spec, state_path, audit_out;
  auto* au = app.add_subcommand("audit", "count conserved operators of a state");
  au->add_option("--spec", spec, "generator spec (JSON text or file)");
  au->add_option("--state", state_path, "state file");
  au->add_option("--out", audit_out, "report path");
  au->require_option(1);

  std::string rho1, rho2, det_out;
  double det_m = 0.0;
  double det_tol = -1.0;
  auto* de = app.add_subcommand("detect", "test density matrices for an exact pair condensate");
  de->add_option("--rho1", rho1, "rho1 matrix file")->required();
  de->add_option("--rho2", rho2, "rho2 matrix file")->required();
  de->add_option("--m", det_m, "pair number (default Tr rho1 / 2)");
  de->add_option("--tol", det_tol, "tolerance (default 1e-8 max(1, m))");
  de->add_option("--out", det_out, "report path");

  BuildArgs build;
  auto* bu = app.add_subcommand("build", "write density matrices of a pair condensate or a generated state");
  bu->add_option("--statistics", build.statistics, "fermion | boson")->capture_default_str();
  bu->add_option("--n", build.n, "single-particle states")->capture_default_str();
  bu->add_option("--m", build.m, "pairs")->capture_default_str();
  bu->add_option("--seed", build.seed, "seed for a random pair matrix")->capture_default_str();
  bu->add_option("--pair", build.pair, "pair matrix file instead of a random one");
  bu->add_flag("--uniform", build.uniform, "uniform pair matrix");
  bu->add_option("--spec", build.spec, "generator spec (JSON text or file) instead of a condensate");
  bu->add_option("--rho1", build.rho1, "rho1 output path");
  bu->add_option("--rho2", build.rho2, "rho2 output path");
  bu->add_option("--rho2-convention", build.convention, "packed_lex | full")->capture_default_str();
  bu->add_option("--state", build.state, "state output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sb) return run_sweep_cmd(sb, boson);
    if (*sf) return run_sweep_cmd(sf, fermion);
    if (*sm) return run_sweep_cmd(sm, mixed);
    if (*au) return run_audit(spec, state_path, audit_out);
    if (*de) return run_detect(rho1, rho2, det_m, det_tol, det_out);
    if (*bu) return run_build(build);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
