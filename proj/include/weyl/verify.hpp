#pragma once

#include <string>
#include <vector>

#include "weyl/common.hpp"

namespace weyl {

// One acceptance criterion: a measured quantity checked against the band its
// statement predicts. ids 1..15 are the release gate; 101+ are cheap
// self-consistency checks grouped into the decoupling-light suite.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values and the band they were held to
  double seconds = 0;
};

// core, paraboloid, l4, sphere, decoupling-light, decoupling-heavy; the empty
// string selects everything except decoupling-heavy (the default gate).
std::vector<int> suite_criteria(const std::string& suite);

CriterionResult run_criterion(int id, int threads = 0);

// max_seconds > 0 refuses up front when the suite's cost estimate exceeds it.
std::vector<CriterionResult> run_suite(const std::string& suite, double max_seconds = 0,
                                       int threads = 0);

std::string report_json(const std::vector<CriterionResult>& results);

}  // namespace weyl
