#pragma once

#include "rcrs/domain.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace rcrs {

// Scalar valuation for first-order evaluation; keys are "x" and "x'".
// Later entries shadow earlier ones.
class Env {
public:
    void push(std::string key, Value v) { slots_.emplace_back(std::move(key), std::move(v)); }
    void pop() { slots_.pop_back(); }
    const Value* find(const std::string& key) const;
    size_t size() const { return slots_.size(); }

private:
    std::vector<std::pair<std::string, Value>> slots_;
};

// Arithmetic on values; division by zero yields 0, integer division is Euclidean.
Value apply_arith(Op op, const Value& a, const Value& b, bool integral);
bool apply_cmp(Op op, const Value& a, const Value& b);

// First-order evaluation; quantifiers range over `dom`.  NonTemporalMisuse
// on temporal operators, UnboundVariable on unassigned free variables.
Value eval_term(const Expr& e, const Env& env, const FiniteDomain& dom);
bool eval_formula(const Expr& f, Env& env, const FiniteDomain& dom);

// Ultimately periodic word stem . loop^omega.
struct LassoWord {
    std::vector<Value> stem;
    std::vector<Value> loop;

    const Value& at(long long i) const;
    std::string str() const;
};

// All words with |stem| <= max_stem and 1 <= |loop| <= max_loop, shortest
// first; loops that repeat a shorter loop are skipped.
std::vector<LassoWord> lasso_family(const std::vector<Value>& vals, int max_stem, int max_loop);

enum class Tri { False, True, Unknown };

struct LassoBounds {
    int stem = 1;  // extra stem length for quantified sequences
    int loop = 1;
    size_t cap = 2'000'000;  // evaluation-work guard
    size_t* shared_work = nullptr;  // when set, `cap` bounds the total across calls
};

// `definite` is exact three-valued truth: quantifiers over sequences are
// expanded over a finite lasso family, so a universal that holds on the
// family is only Unknown (and dually).  `bounded` treats the family as
// the whole sequence space.
struct LassoVerdict {
    Tri definite = Tri::Unknown;
    bool bounded = false;
};

LassoVerdict eval_qltl(const Expr& f, const std::map<std::string, LassoWord>& words, const FiniteDomain& dom,
                       const LassoBounds& bounds = {});

// Evaluation on finite prefixes of length k: temporal operators range over
// positions < k, quantified sequences over all sequences of length
// k + next_depth(f).  Free sequences shorter than that are padded with
// their last value.
bool eval_prefix(const Expr& f, const std::map<std::string, std::vector<Value>>& seqs, int k, const FiniteDomain& dom);

}  // namespace rcrs
