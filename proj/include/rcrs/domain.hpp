#pragma once

#include "rcrs/expr.hpp"

#include <map>
#include <string>
#include <vector>

namespace rcrs {

// Explicit value lists for every type an enumeration touches.  Declared
// finite types (bool, int[lo..hi], enums, unit) resolve on their own; int and
// real need an override line `domain int = {...}` or `domain real = {...}`.
struct FiniteDomain {
    std::map<std::string, std::vector<Value>> overrides;  // keyed by SemType::str()
    size_t explosion_cap = 10'000'000;

    bool resolves(const SemType& t) const;
    // Values in enumeration order; DomainNotFinite when unresolved.
    const std::vector<Value>& values(const SemType& t) const;
    // Declared finite and not narrowed by an override.
    bool exact(const SemType& t) const;

    void set(const SemType& t, std::vector<Value> vals);

    static FiniteDomain parse(const std::string& text);
    static FiniteDomain load(const std::string& path);

private:
    mutable std::map<std::string, std::vector<Value>> cache_;
};

// Integers of [lo, hi] ordered 0, -1, 1, -2, 2, ... (clipped to the range).
std::vector<Value> shrink_order(long long lo, long long hi);

// Values for `t`: the domain's list when it resolves, otherwise the numeric
// constants of `hint` (plus neighbours and 0) in shrink order.
std::vector<Value> candidate_values(const SemType& t, const FiniteDomain& dom, const Expr& hint);

// Product size of value lists, saturating at SIZE_MAX.
size_t product_size(const std::vector<size_t>& sizes);

}  // namespace rcrs
