#ifndef SGRED_ACCEPTANCE_HPP
#define SGRED_ACCEPTANCE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sgred/types.hpp"

namespace sgred {

// The verification suite: one entry per check, every compared number carries
// the tolerance it was held to.  The CLI `suite` command and the acceptance
// test binary both run exactly this.

struct CheckResult {
    std::string id;      // short stable identifier, e.g. "fuchs-indices"
    std::string name;    // human-readable description
    bool pass = false;
    double value = 0.0;  // worst observed quantity (relative residual etc.)
    double tol = 0.0;    // the bound `value` was compared against
    int exit_code = 5;   // exit class when this is the first failure
    std::string detail;
};

// Named fault injections: each one perturbs exactly one check.
struct FaultFlags {
    bool perturb_nolog = false;        // g5 -> 0.1 in the no-log residuals
    bool perturb_conservation = false; // corrupt one K2 drift comparison
    bool perturb_indices = false;      // shift one Fuchs index before matching
};

std::vector<CheckResult> run_acceptance(std::uint64_t seed, const FaultFlags& faults = {});

// First failing check decides the exit code (0 when all pass).
int suite_exit_code(const std::vector<CheckResult>& results);

}  // namespace sgred

#endif
