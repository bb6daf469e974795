#pragma once

// The nine acceptance checks. Each produces a pass flag and a JSON payload
// that is a pure function of the inputs (no timings), so payloads can be
// compared byte for byte across runs and shard counts.

#include <functional>
#include <string>
#include <vector>

#include "cgk/serialize.hpp"

namespace cgk {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  /// One line: what was measured and, on failure, where it broke.
  std::string summary;
  Json data;
  double seconds = 0;  // not part of data
};

struct AcceptanceOptions {
  /// Shard count for the sharded enumerations (scans, lattice counts).
  unsigned shards = 1;
  Int count_radius = kDefaultMaxRadius;
  int count_grid = 30;
};

CriterionResult criterion_constants();
CriterionResult criterion_group_orders(const AcceptanceOptions& opt);
CriterionResult criterion_centralizers(const AcceptanceOptions& opt);
CriterionResult criterion_killing();
CriterionResult criterion_orbit_bound();
CriterionResult criterion_counting(const AcceptanceOptions& opt);
CriterionResult criterion_spherical_decay();
CriterionResult criterion_gap();
/// Re-runs 1-8 with 8 shards and compares payloads with `first`; also checks
/// group enumeration order under sharding.
CriterionResult criterion_determinism(const std::vector<CriterionResult>& first);

/// Criteria 1-8 with opt, in order.
std::vector<CriterionResult> run_criteria(const AcceptanceOptions& opt,
                                          const std::function<void(const CriterionResult&)>& on_done = {});
/// 1-9; on_done is called after each criterion.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {},
                                            const std::function<void(const CriterionResult&)>& on_done = {});

/// "criterion 3 [FAIL] centralizer formulas: ..." without a trailing newline.
std::string format_line(const CriterionResult& r);

/// {"criteria": [...], "passed": bool}; payloads only.
Json acceptance_artifact(const std::vector<CriterionResult>& results);

}  // namespace cgk
