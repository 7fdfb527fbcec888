#pragma once

#include <optional>
#include <string>
#include <vector>

#include "paircond/conserved.hpp"
#include "paircond/states.hpp"

namespace paircond {

/// State generators with known conserved one-body counts.
/// family: condensate | random | paired | ghz | group.
struct GeneratorSpec {
  std::string family = "condensate";
  Statistics statistics = Statistics::fermion;
  int n = 4;
  int m = 2;                 ///< pairs (condensate, paired)
  int particles = -1;        ///< random and group sectors (default 2m)
  std::vector<int> sizes;    ///< group blocks
  double alpha = 1.0;        ///< ghz amplitudes
  double beta = 1.0;
  std::uint64_t seed = 1;
};

/// Parses {"family": ..., "statistics": ..., "n": ..., ...}.
GeneratorSpec parse_generator_spec(const std::string& json_text);

StateVector generate_state(const GeneratorSpec& spec);

/// Closed-form count when known for the family, empty otherwise.
std::optional<int> expected_one_body_count(const GeneratorSpec& spec);

struct AuditReport {
  std::string label;
  int n = 0;
  int particles = 0;
  Statistics statistics = Statistics::fermion;
  int one_body = 0;
  int pair_annihilation = 0;
  int pair_creation = 0;
  double gap_ratio = 0.0;
  RVector c11_spectrum;
  std::optional<int> expected;
  bool matches() const { return !expected || *expected == one_body; }
};

AuditReport audit_state(const StateVector& state, const std::string& label = "state");
AuditReport audit_spec(const GeneratorSpec& spec);

/// Plain-text report.
std::string format_audit(const AuditReport& r);

}  // namespace paircond
