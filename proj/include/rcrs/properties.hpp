#pragma once

#include "rcrs/component.hpp"
#include "rcrs/domain.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace rcrs {

// Seeded generators for random components over small finite types.
class ComponentGen {
public:
    explicit ComponentGen(uint64_t seed) : rng_(seed) {}

    int uniform(int lo, int hi);
    bool chance(double p);

    // A finite type with at most `max_values` values: bool or int[0..k].
    SemType small_type(int max_values = 3);
    Expr term(const SemType& t, const VarList& scope, int depth);
    Expr formula(const VarList& scope, int depth);

    // det / stateless_det atom; when `first_free` is set, the first output
    // does not mention the first input.
    Atomic det_atom(const Signature& in, const Signature& out, bool first_free);
    // Deterministic loop-free composite with the given signatures.
    Component det_composite(const Signature& in, const Signature& out, int atoms, int depth);
    Atomic stateless_atom(const Signature& in, const Signature& out);
    // Stateless atom refined by `a` with good probability.
    Atomic stateless_variant(const AtomicComponent& a);
    Atomic sts_atom(const Signature& in, const Signature& out, const Signature& state);

    Signature ports(const std::string& base, int n, int max_values = 3);

private:
    Expr leaf(const SemType& t, const VarList& scope);
    std::mt19937_64 rng_;
    int fresh_ = 0;
};

struct SuiteReport {
    std::string name;
    uint64_t seed = 0;
    int cases = 0;
    int failures = 0;
    int vacuous = 0;  // cases whose premise did not hold
    std::vector<std::string> details;
    double seconds = 0;

    bool ok() const { return failures == 0 && cases > 0; }
    std::string summary(bool timing = true) const;
};

// atomic(C) bounded-equivalent to C and oi(atomic(C)) = oi(C) for random
// deterministic loop-free composites.
SuiteReport oracle_equivalence_suite(uint64_t seed, int cases = 200, int horizon = 4);
// atomic((A;B);C) bounded-equivalent to atomic(A;(B;C)) for stateless atoms.
SuiteReport associativity_suite(uint64_t seed, int cases = 100);
// Refinement of stateless pairs carries over to their serial compositions.
SuiteReport precongruence_suite(uint64_t seed, int cases = 100);
// Illegal prefixes from bounded_rel agree with legal_formula on prefixes.
SuiteReport legality_coherence_suite(uint64_t seed, int cases = 100, int max_prefix = 4);
// check_refines agrees with brute-force evaluation on stateless pairs.
SuiteReport stateless_refinement_agreement_suite(uint64_t seed, int cases = 60);

// Refinement of stateless atoms by enumeration of inputs and outputs.
bool stateless_refines_exhaustive(const AtomicComponent& abstract, const AtomicComponent& concrete,
                                  const FiniteDomain& dom);

}  // namespace rcrs
