#pragma once

// Desk-scale property suite behind `sqrtlab verify`: every module invariant
// exercised at small scale with one PASS/FAIL line per property.

#include <ostream>

namespace sqrtlab {

bool run_selfcheck(std::ostream& out, unsigned threads = 0);

}  // namespace sqrtlab
