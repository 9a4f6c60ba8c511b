#pragma once

#include "rcrs/component.hpp"
#include "rcrs/domain.hpp"
#include "rcrs/result.hpp"

#include <functional>
#include <optional>
#include <set>
#include <vector>

namespace rcrs {

// trace[slot][step]
using Trace = std::vector<std::vector<Value>>;

// Every trace over `sig` of length H; lexicographically least first (step 0
// most significant, values in domain order).
std::vector<Trace> enumerate_traces(const Signature& sig, const FiniteDomain& dom, int H);

struct ExecResult {
    int illegal_at = -1;  // first step whose input violates a precondition
    Trace outputs;        // values for the steps before illegal_at (all H when legal)
};

// Stepwise execution of a deterministic, loop-free composite.  Feedback is
// evaluated in two passes, the first with a placeholder for the fed-back input.
ExecResult exec_det(const Component& c, const Trace& in, int H);

struct RelResult {
    int illegal_at = -1;     // least n < H at which some run has no successor
    std::set<Trace> outputs;  // output traces of full runs (empty when illegal)
};

// All runs of an atomic component (lifted to sts) on one input trace.
RelResult bounded_rel(const AtomicComponent& c, const Trace& in, int H, const FiniteDomain& dom);

struct BoundedRelation {
    std::vector<Trace> inputs;
    std::vector<RelResult> results;
};

BoundedRelation bounded_rel(const AtomicComponent& c, const FiniteDomain& dom, int H);

// Behaviour of a component on one input: exec_det for deterministic
// loop-free composites, bounded_rel for atomic ones.
RelResult behaviour(const Component& c, const Trace& in, int H, const FiniteDomain& dom);

struct EquivResult {
    bool equivalent = true;
    std::optional<Trace> counterexample;
    std::string detail;
};

EquivResult bounded_equiv(const Component& a, const Component& b, const FiniteDomain& dom, int H);

// Searches horizons 1..H for an input legal for `abstract` and illegal for
// `concrete`, then for a concrete output outside the abstract relation.
// Never proves: the best outcome without a counterexample is Unknown.
CheckResult bounded_refute_refinement(const Component& abstract, const Component& concrete, const FiniteDomain& dom,
                                      int H);

using TracePred = std::function<bool(const Trace& in)>;
using TraceRel = std::function<bool(const Trace& in, const Trace& out)>;

CheckResult bounded_hoare(const TracePred& pre, const Component& c, const TraceRel& post, const FiniteDomain& dom, int H);

Witness trace_witness(const Signature& in_sig, const Trace& in, const Signature& out_sig, const Trace* out, int H);

}  // namespace rcrs
