#pragma once

// Built-in acceptance corpus, shared by `entroframe selftest` and the
// acceptance test binary.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace entroframe {

struct AcceptanceOptions {
  /// Run only this group: frames, young, shannon, hyper, flow, subadditivity.
  std::optional<std::string> only;
  std::size_t grid_n = 2049;
  double half_width = 10.0;
};

struct CriterionResult {
  int id = 0;
  std::string group;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

const std::vector<std::string>& acceptance_groups();

/// Criteria 1-10 in order, then the overall runtime criterion. Grid-dependent
/// tolerances grow with ((2048 / (n - 1)))^2 on coarser grids.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

std::string format_result(const CriterionResult& r);

}  // namespace entroframe
