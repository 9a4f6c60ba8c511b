#pragma once

#include "rcrs/component.hpp"
#include "rcrs/domain.hpp"
#include "rcrs/eval.hpp"
#include "rcrs/result.hpp"
#include "rcrs/smt.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rcrs {

struct AnalysisOptions {
    FiniteDomain dom;   // finite domains for exhaustive and bounded-trace checks
    int horizon = 4;    // bounded-trace horizon
    bool use_solver = true;
    bool syntactic = true;  // simplify goals before deciding them
    std::optional<SolverConfig> solver;
    LassoBounds lasso;  // expansion of quantified sequences
    int word_stem = 2;  // lasso search over free sequences
    int word_loop = 2;
    size_t search_budget = 4'000'000;  // total lasso evaluation work per query

    // Solver taken from RCRS_SMT_SOLVER.
    static AnalysisOptions defaults();
};

// Formula over the inputs characterising legal input sequences.
Expr legal_formula(const AtomicComponent& c);

// Validity of a first-order goal (free variables universally quantified):
// syntactic, then solver, then exhaustive enumeration over finite domains.
CheckResult decide_valid(const Expr& goal, const AnalysisOptions& o);

// Validity of a temporal goal.  Proofs only for goals that reduce to first
// order (G p) or closed goals with a definite lasso verdict; otherwise the
// lasso search can only refute.
CheckResult decide_temporal(const Expr& goal, const AnalysisOptions& o);

// Satisfiability of a temporal formula by lasso search; Proven carries the model.
CheckResult decide_sat_temporal(const Expr& f, const AnalysisOptions& o);

// Proven: some input is accepted (the component is not Fail).
CheckResult is_valid(const Component& c, const AnalysisOptions& o);
CheckResult is_input_receptive(const Component& c, const AnalysisOptions& o);
// Validity of the serial composition; Proven means compatible.
CheckResult check_compat(const Component& a, const Component& b, const AnalysisOptions& o);

// Goal whose validity is equivalent to the contract being satisfiable.
Vc validity_vc(const AtomicComponent& c);

struct RefinementVcs {
    std::vector<Vc> vcs;
    Kind kind = Kind::Stateless;  // common kind both sides were lifted to
    bool sufficient_only = false;  // sts condition with shared state
    std::string rule;
    std::vector<std::string> notes;
};

// With options, legality facts the analysis can establish (receptive
// abstract side, total sts) are folded into the temporal condition.
RefinementVcs refine_vc(const Component& abstract, const Component& concrete, const AnalysisOptions* o = nullptr);

CheckResult check_refines(const Component& abstract, const Component& concrete, const AnalysisOptions& o);

// Three conditions for data refinement through the relation `rel` over the
// abstract states and the concrete states (concrete names as given).
std::vector<Vc> data_refine_vc(const AtomicComponent& abstract, const AtomicComponent& concrete, const Expr& rel);

CheckResult check_data_refines(const AtomicComponent& abstract, const AtomicComponent& concrete, const Expr& rel,
                               const AnalysisOptions& o);

// True when every signature slot and quantified variable has a finite domain.
bool enumerable(const AtomicComponent& c, const FiniteDomain& dom);

}  // namespace rcrs
