#pragma once

#include "rcrs/expr.hpp"

namespace rcrs {

// Terminating syntactic rewriting to a fixed point: boolean identities,
// ground folding, the one-point rule, quantifier miniscoping and the
// until/leads/globally identities.  Never calls a solver.
Expr simplify(const Expr& e);

// Single bottom-up rewrite pass (exposed for tests).
Expr simplify_once(const Expr& e);

}  // namespace rcrs
