// Registry of executable invariant checks, grouped by module. Each check
// reports a measured residual (or ratio, or violation count) against a
// tolerance and passes iff measured <= tolerance.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bsx/numeric.hpp"

namespace bsx::verify {

struct Check {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct SuiteOptions {
  std::optional<double> tol;  // replaces every check's tolerance
  Exec exec = Exec::parallel;
};

// kernels, interpolation, esseen1d, esseen_k, clt.
const std::vector<std::string>& suite_names();

// `suite` is one of suite_names() or "all"; throws std::invalid_argument otherwise.
std::vector<Check> run_suite(const std::string& suite, const SuiteOptions& opt = {});

}  // namespace bsx::verify
