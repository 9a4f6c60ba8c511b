#pragma once

#include "rcrs/eval.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rcrs {

enum class Verdict { Proven, Refuted, Unknown };

const char* verdict_name(Verdict v);

struct Slot {
    std::string name;
    std::vector<Value> values;  // one per step; a single value for assignments
};

// A concrete counterexample: an assignment (horizon 0), a finite trace, or
// lasso words for temporal goals.
struct Witness {
    std::vector<Slot> inputs;
    std::vector<Slot> outputs;
    std::map<std::string, LassoWord> lasso;
    int horizon = 0;
    int illegal_at = -1;  // step at which the input becomes illegal, if that is the violation
    std::string kind;     // short description of what the witness shows

    std::string str() const;
};

struct CheckResult {
    Verdict verdict = Verdict::Unknown;
    std::optional<Witness> witness;
    std::string method;  // solver, exhaustive, bounded-trace, lasso, syntactic
    std::string reason;
    std::vector<std::string> notes;

    static CheckResult proven(std::string method, std::string reason = {});
    static CheckResult refuted(std::string method, std::optional<Witness> w, std::string reason = {});
    static CheckResult unknown(std::string reason);
};

}  // namespace rcrs
