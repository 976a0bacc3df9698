#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tausim {

enum class VerifyLevel { quick, full };

/// One invariant check: the measured defect and the tolerance it must stay
/// under. For detection checks (a deliberately broken input must be noticed)
/// `measured` is the margin by which detection succeeded.
struct CheckResult {
    std::string module;
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Runs the registered invariant checks of every module at their stated
/// tolerances. `quick` covers at least one invariant per module in seconds;
/// `full` adds the convergence study, flow Jacobians, long reversibility and
/// quadrature refinement.
std::vector<CheckResult> verify_all(VerifyLevel level);

bool all_passed(const std::vector<CheckResult>& results);

/// One line per check: status, module, name, measured value, tolerance.
void print_report(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace tausim
