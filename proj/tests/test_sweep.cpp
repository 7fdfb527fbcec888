#include <algorithm>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "paircond/sweep.hpp"

using namespace paircond;

TEST_CASE("grid parsing") {
  const auto g = parse_grid("0:1:0.25");
  REQUIRE(g.size() == 5);
  CHECK(g.back() == doctest::Approx(1.0));
  const auto f = parse_grid("-3, -3/5, 0, 1");
  REQUIRE(f.size() == 4);
  CHECK(f[1] == doctest::Approx(-0.6));
  CHECK_THROWS_AS(parse_grid("1,0"), PreconditionError);
  CHECK_THROWS_AS(parse_grid("0,0"), PreconditionError);
  CHECK_THROWS_AS(parse_grid("a,b"), PreconditionError);
  CHECK_THROWS_AS(parse_grid("1/0"), PreconditionError);
  CHECK_THROWS_AS(parse_grid("0:1"), PreconditionError);
  CHECK_THROWS_AS(parse_grid(""), PreconditionError);
  const auto m = merge_grid({0.0, 0.5, 1.0}, {3.0 / 7.0, 0.5 + 1e-12});
  CHECK(m.size() == 4);
  CHECK(std::is_sorted(m.begin(), m.end()));
}

TEST_CASE("level rules") {
  const RVector s = sigma_rule("sqrt-k", 8);
  CHECK(s.squaredNorm() == doctest::Approx(1.0));
  CHECK(s(2) * s(2) == doctest::Approx(3.0 / 36.0));
  CHECK(eps_rule("linear", 2.0, s)(3) == doctest::Approx(8.0));
  CHECK(eps_rule("proportional", 2.0, s)(3) == doctest::Approx(2.0 * 4.0 / 36.0));
  CHECK_THROWS_AS(sigma_rule("cubic", 3), PreconditionError);
  CHECK_THROWS_AS(eps_rule("cubic", 1.0, s), PreconditionError);
  const CMatrix u = default_mixed_rotation(8);
  CHECK((u.adjoint() * u - CMatrix::Identity(8, 8)).norm() < 1e-14);
}

TEST_CASE("small boson sweep hits the exact points") {
  SweepConfig c;
  c.model = SweepModel::boson;
  c.n = 4;
  c.m = 2;
  const SweepProblem p = prepare(c);
  const double dual = p.couplings.g_c_dual / p.couplings.g_c;
  c.grid = merge_grid(parse_grid("0:1.5:0.25"), {dual});
  c.workers = 3;
  const SweepResult r = run_sweep(c);
  REQUIRE(r.failed_index == -1);
  REQUIRE(r.rows.size() == c.grid.size());
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const SweepRow& row = r.rows[k];
    CHECK(row.x == c.grid[k]);
    CHECK(std::abs(row.d2 - row.h_a) <= 1e-8);
    CHECK(row.lambda1_over_m <= 1.0 + 1e-8);
    CHECK(row.overlap <= 1.0 + 1e-9);
    CHECK(row.rho1_eigs.sum() == doctest::Approx(4.0));
    const bool exact = row.x == 0.0 || row.x == 1.0 || row.x == dual;
    if (exact) CHECK(row.lambda1_over_m == doctest::Approx(1.0).epsilon(1e-8));
    if (exact) CHECK(row.overlap == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("CSV is versioned and deterministic") {
  SweepConfig c;
  c.n = 4;
  c.m = 2;
  c.grid = {0.0, 0.5, 1.0};
  std::ostringstream a, b;
  write_csv(a, c, run_sweep(c));
  c.workers = 2;
  write_csv(b, c, run_sweep(c));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("#schema=paircond-sweep/1", 0) == 0);
  std::ostringstream svg;
  write_svg(svg, c, run_sweep(c));
  CHECK(svg.str().find("<polyline") != std::string::npos);
}

TEST_CASE("a failing point leaves partial results") {
  SweepConfig c;
  c.model = SweepModel::mixed;
  c.n = 8;
  c.m = 2;
  c.grid = {0.0, 0.5, 2.0};
  c.out = "partial_sweep.csv";
  CHECK_THROWS_AS(run_and_write(c), SolverError);
  std::ifstream is(c.out);
  std::stringstream ss;
  ss << is.rdbuf();
  CHECK(ss.str().find("#error row=2") != std::string::npos);
  const SweepResult r = run_sweep(c);
  CHECK(r.failed_index == 2);
  CHECK(r.rows.size() == 2);
}

TEST_CASE("invalid configurations") {
  SweepConfig c;
  c.m = 1;
  CHECK_THROWS_AS(prepare(c), PreconditionError);
  c.m = 2;
  c.model = SweepModel::fermion;
  c.n = 7;
  CHECK_THROWS_AS(prepare(c), DimensionError);
  c.n = 8;
  c.grid = {1.0, 0.0};
  CHECK_THROWS_AS(run_sweep(c), PreconditionError);
  c.model = SweepModel::mixed;
  c.grid = {0.0};
  c.rotation = CMatrix::Ones(8, 8);
  CHECK_THROWS_AS(prepare(c), PreconditionError);
}

TEST_CASE("mixed model has a slope discontinuity") {
  SweepConfig c;
  c.model = SweepModel::mixed;
  c.n = 16;
  c.m = 2;
  c.grid = parse_grid("0.30:0.50:0.02");
  c.grid.insert(c.grid.begin(), 0.0);
  const SweepResult r = run_sweep(c);
  REQUIRE(r.failed_index == -1);
  CHECK(r.rows.front().lambda1_over_m == doctest::Approx(1.0).epsilon(1e-8));
  std::vector<double> slope;
  for (std::size_t k = 2; k < r.rows.size(); ++k)
    slope.push_back((r.rows[k].energy - r.rows[k - 1].energy) / (r.rows[k].x - r.rows[k - 1].x));
  std::vector<double> jumps;
  for (std::size_t k = 1; k < slope.size(); ++k) jumps.push_back(std::abs(slope[k] - slope[k - 1]));
  std::sort(jumps.begin(), jumps.end());
  // the crossing dominates the smooth curvature changes
  CHECK(jumps.back() > 50.0 * jumps[jumps.size() / 2]);
}
