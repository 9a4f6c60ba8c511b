#pragma once

#include "rcrs/component.hpp"

#include <set>
#include <utility>

namespace rcrs {

// Symbolic composition of atomic components.  Mixed kinds are lifted to
// their join first; results are simplified.
Atomic serial(const AtomicComponent& a, const AtomicComponent& b);
Atomic parallel(const AtomicComponent& a, const AtomicComponent& b);

// det / stateless_det whose first output does not mention the first input.
bool decomposable(const AtomicComponent& c);
Atomic feedback(const AtomicComponent& c);

bool determ(const Component& c);

// Output-input dependencies as 1-based (output, input) pairs.
using OIRelation = std::set<std::pair<int, int>>;
OIRelation oi(const Component& c);
OIRelation oi(const AtomicComponent& c);
bool loop_free(const Component& c);

// Reduce a composite to one atomic component; FeedbackOnNonDecomposable
// names the path (e.g. "fdbk.serial.0") of the failing subterm.
Atomic atomic(const Component& c);

}  // namespace rcrs
