#pragma once
// Cross-module invariant suite. Every check runs a library operation against
// an independently computed prediction and reports the measured defect next
// to the bound it was held to, so a regression names itself instead of
// surfacing as a distant test failure. Deterministic for fixed (seed, tol).
//
// Thresholds on identity checks are fixed constants; the operations under
// test still read cfg.tol internally. Running the suite with a deliberately
// loose tolerance (e.g. 1e-2) therefore fails the checks whose acceptance
// gates scale with cfg.tol — the tangent-count checks and the basket
// predicates — by name, rather than silently widening every bound.

#include "tangentloci/types.hpp"

#include <string>
#include <vector>

namespace tangentloci::selfcheck {

struct CheckResult {
    std::string name;
    bool pass = false;
    double metric = 0.0;     // measured worst defect (count checks: deviation)
    double threshold = 0.0;  // the bound metric was compared against
    std::string note;        // what the metric measures; error text on a throw
};

// Runs every check; never throws (a thrown Error fails that check with the
// message in its note). Order and names are stable across releases.
std::vector<CheckResult> run_all(const Config& cfg = {});

}  // namespace tangentloci::selfcheck
