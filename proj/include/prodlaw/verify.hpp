#pragma once

#include <string>
#include <vector>

namespace prodlaw {

// One deterministic identity check. pass == (worst <= bound); for counting
// checks worst is the violation count and bound is 0.
struct CheckResult {
  std::string id;
  std::string label;
  double worst;
  double bound;
  bool pass;
};

// Exact analytic identities of the resolvent cubic, the support endpoints,
// the log potential, the two g routes, eigenvalue multiplicity under the
// linearization, and the product singular value inequalities. Deterministic;
// runs in seconds.
std::vector<CheckResult> run_identity_suite();

bool all_pass(const std::vector<CheckResult>& results);

}  // namespace prodlaw
