#pragma once

#include "rcrs/expr.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rcrs {

enum class Fragment { FirstOrder, Temporal };

// A verification condition: `goal` must be valid (free variables universally
// quantified).  `origin` names the rule that produced it.
struct Vc {
    Expr goal;
    Fragment fragment = Fragment::FirstOrder;
    std::string origin;
};

Vc make_vc(Expr goal, std::string origin);

// Deterministic SMT-LIB 2 script whose check-sat answers unsat exactly when
// the goal is valid.  TemporalFragment for temporal goals.
std::string emit_smtlib(const Vc& vc);

// Symbol as written in scripts (quoted when not a plain identifier).
std::string smt_symbol(const std::string& name);

struct SolverConfig {
    std::vector<std::string> argv;
    double timeout_s = 10.0;

    // RCRS_SMT_SOLVER, split on whitespace ("z3 -in").
    static std::optional<SolverConfig> from_env();
};

enum class SatAnswer { Sat, Unsat, Unknown, Timeout, Failure };

struct SolverOutcome {
    SatAnswer answer = SatAnswer::Failure;
    std::map<std::string, Value> model;  // keyed as in Subst ("x", "x'")
    std::string output;
};

// Runs the solver on `script`; when `model_vars` is nonempty and the answer
// is sat, their values are requested with get-value.  Primed variables are
// passed with a trailing ' in the name.
SolverOutcome run_solver(const SolverConfig& cfg, const std::string& script, const VarList& model_vars = {});

}  // namespace rcrs
