#include "rcrs/analysis.hpp"

#include "rcrs/compose.hpp"
#include "rcrs/lattice.hpp"
#include "rcrs/oracle.hpp"
#include "rcrs/simplify.hpp"

#include <cmath>
#include <functional>

namespace rcrs {

AnalysisOptions AnalysisOptions::defaults() {
    AnalysisOptions o;
    o.solver = SolverConfig::from_env();
    return o;
}

Expr legal_formula(const AtomicComponent& c) {
    switch (c.kind) {
    case Kind::Qltl: return simplify(ex::exists(as_vars(c.out), c.rel));
    case Kind::Stateless: return simplify(ex::globally(ex::exists(as_vars(c.out), c.rel)));
    case Kind::StatelessDet: return simplify(ex::globally(c.inpt));
    case Kind::Sts: {
        VarList s = as_vars(c.state);
        VarList y = as_vars(c.out);
        Expr phi = primes_to_next(c.rel, s);
        Expr step_ok = ex::exists(y, exists_primed(s, c.rel));
        VarList sy = s;
        sy.insert(sy.end(), y.begin(), y.end());
        return simplify(ex::forall(sy, ex::implies(c.init, ex::leads(phi, step_ok))));
    }
    case Kind::Det: {
        VarList s = as_vars(c.state);
        VarList y = as_vars(c.out);
        std::vector<Expr> init_terms, next_s, outs_y;
        for (size_t i = 0; i < c.state.size(); ++i) {
            init_terms.push_back(ex::constant(c.init_vals[i], c.state[i].type));
            next_s.push_back(ex::next(ex::var(s[i])));
        }
        Expr run = ex::land(ex::tuple_eq(next_s, c.next), ex::tuple_eq(as_terms(c.out), c.outs));
        VarList sy = s;
        sy.insert(sy.end(), y.begin(), y.end());
        return simplify(ex::forall(sy, ex::implies(ex::tuple_eq(as_terms(c.state), init_terms), ex::leads(run, c.inpt))));
    }
    }
    return ex::tt();
}

namespace {

void bound_types(const Expr& e, std::vector<SemType>& out) {
    if (is_binder(e->op))
        out.push_back(e->var_type);
    for (auto& a : e->args)
        bound_types(a, out);
}

// Free variables in declaration order of the emitted scripts; primed ones
// carry a trailing '.
VarList free_var_list(const Expr& g) {
    FreeVars fv = free_vars(g);
    std::map<std::string, SemType> types;
    for (auto& v : fv.vars)
        types[v.name] = v.type;
    VarList out;
    for (auto& n : free_names(g))
        out.push_back(Var{n, types.at(n)});
    for (auto& n : free_primed(g))
        out.push_back(Var{n + "'", types.at(n)});
    std::sort(out.begin(), out.end(), [](const Var& a, const Var& b) { return a.name < b.name; });
    return out;
}

Witness assignment_witness(const VarList& vs, const std::vector<Value>& vals, std::string kind) {
    Witness w;
    w.kind = std::move(kind);
    for (size_t i = 0; i < vs.size(); ++i)
        w.inputs.push_back(Slot{vs[i].name, {vals[i]}});
    return w;
}

Expr substitute_assignment(const Expr& g, const VarList& vs, const std::vector<Value>& vals) {
    Subst s;
    for (size_t i = 0; i < vs.size(); ++i) {
        std::string key = vs[i].name;
        if (!key.empty() && key.back() == '\'')
            key = primed_key(key.substr(0, key.size() - 1));
        s[key] = ex::constant(vals[i], vs[i].type);
    }
    return substitute(g, s);
}

std::string answer_name(SatAnswer a) {
    switch (a) {
    case SatAnswer::Sat: return "sat";
    case SatAnswer::Unsat: return "unsat";
    case SatAnswer::Unknown: return "unknown";
    case SatAnswer::Timeout: return "timeout";
    case SatAnswer::Failure: return "failure";
    }
    return "?";
}

// Odometer over the cartesian product of index ranges.
bool advance(std::vector<size_t>& idx, const std::vector<size_t>& sizes) {
    int i = (int)idx.size() - 1;
    while (i >= 0 && ++idx[i] == sizes[i])
        idx[i--] = 0;
    return i >= 0;
}

}  // namespace

CheckResult decide_valid(const Expr& goal, const AnalysisOptions& o) {
    Expr g = o.syntactic ? simplify(goal) : goal;
    if (has_temporal(g))
        throw Error(ErrorCode::TemporalFragment, "first-order decision on a temporal goal");
    if (is_const_true(g))
        return CheckResult::proven("syntactic", "simplifies to true");
    VarList fv = free_var_list(g);
    std::vector<std::string> notes;

    if (is_const_false(g)) {
        std::vector<Value> vals;
        for (auto& v : fv)
            vals.push_back(candidate_values(v.type, o.dom, g).front());
        return CheckResult::refuted("syntactic", assignment_witness(fv, vals, "assignment"), "simplifies to false");
    }

    if (o.use_solver && o.solver) {
        SolverOutcome out = run_solver(*o.solver, emit_smtlib(make_vc(g, "")), fv);
        if (out.answer == SatAnswer::Unsat)
            return CheckResult::proven("smt", "negation unsat");
        if (out.answer == SatAnswer::Sat) {
            std::vector<Value> vals;
            for (auto& v : fv) {
                auto it = out.model.find(v.name);
                vals.push_back(it != out.model.end() ? it->second : candidate_values(v.type, o.dom, g).front());
            }
            return CheckResult::refuted("smt", assignment_witness(fv, vals, "assignment"), "negation sat");
        }
        notes.push_back("solver answered " + answer_name(out.answer));
    }

    std::vector<SemType> types;
    for (auto& v : fv)
        types.push_back(v.type);
    std::vector<SemType> bound;
    bound_types(g, bound);
    bool resolvable = true, exact = true, bound_exact = true;
    for (auto& t : types) {
        resolvable = resolvable && o.dom.resolves(t);
        exact = exact && o.dom.exact(t);
    }
    for (auto& t : bound) {
        resolvable = resolvable && o.dom.resolves(t);
        bound_exact = bound_exact && o.dom.exact(t);
    }
    if (!resolvable) {
        CheckResult r = CheckResult::unknown(o.solver && o.use_solver ? "solver inconclusive and domains not finite"
                                                                      : "no solver and domains not finite");
        r.notes = notes;
        return r;
    }
    exact = exact && bound_exact;

    std::vector<size_t> sizes;
    for (auto& t : types)
        sizes.push_back(o.dom.values(t).size());
    if (product_size(sizes) > o.dom.explosion_cap) {
        CheckResult r = CheckResult::unknown("finite domains too large to enumerate");
        r.notes = notes;
        return r;
    }
    std::vector<size_t> idx(types.size(), 0);
    Env env;
    do {
        std::vector<Value> vals;
        for (size_t i = 0; i < types.size(); ++i) {
            vals.push_back(o.dom.values(types[i])[idx[i]]);
            env.push(fv[i].name, vals.back());
        }
        bool ok = eval_formula(g, env, o.dom);
        for (size_t i = 0; i < types.size(); ++i)
            env.pop();
        if (!ok) {
            Witness w = assignment_witness(fv, vals, "assignment");
            if (bound_exact || is_const_false(simplify(substitute_assignment(g, fv, vals)))) {
                CheckResult r = CheckResult::refuted("exhaustive", w);
                r.notes = notes;
                return r;
            }
            CheckResult r = CheckResult::unknown("counterexample holds only on the finite domains");
            r.witness = w;
            r.notes = notes;
            return r;
        }
    } while (advance(idx, sizes));
    CheckResult r = exact ? CheckResult::proven("exhaustive") : CheckResult::unknown("no counterexample on the finite domains");
    r.notes = notes;
    return r;
}

namespace {

// Lasso words per free variable, shrinking the bounds until the family is small.
std::vector<std::vector<LassoWord>> word_families(const VarList& fv, const Expr& g, const AnalysisOptions& o) {
    std::vector<std::vector<LassoWord>> fams;
    for (auto& v : fv) {
        auto vals = candidate_values(v.type, o.dom, g);
        int stem = o.word_stem, loop = o.word_loop;
        auto size = [&](int s, int l) {
            double n = 0;
            for (int a = 0; a <= s; ++a)
                for (int b = 1; b <= l; ++b)
                    n += std::pow((double)vals.size(), a + b);
            return n;
        };
        while ((stem > 0 || loop > 1) && size(stem, loop) > 20000) {
            if (stem > 0)
                --stem;
            else
                --loop;
        }
        fams.push_back(lasso_family(vals, stem, loop));
    }
    return fams;
}

Witness lasso_witness(const VarList& fv, const std::map<std::string, LassoWord>& words, std::string kind) {
    Witness w;
    w.kind = std::move(kind);
    for (auto& v : fv)
        w.lasso[v.name] = words.at(v.name);
    return w;
}

// Calls `visit` on word assignments until it returns true; ExplosionGuard
// propagates when the shared budget runs out.
bool search_words(const VarList& fv, const std::vector<std::vector<LassoWord>>& fams,
                  const std::function<bool(const std::map<std::string, LassoWord>&)>& visit) {
    std::vector<size_t> sizes;
    for (auto& f : fams)
        sizes.push_back(f.size());
    if (product_size(sizes) == 0)
        return false;
    std::vector<size_t> idx(fv.size(), 0);
    do {
        std::map<std::string, LassoWord> words;
        for (size_t i = 0; i < fv.size(); ++i)
            words[fv[i].name] = fams[i][idx[i]];
        if (visit(words))
            return true;
    } while (advance(idx, sizes));
    return false;
}

}  // namespace

CheckResult decide_temporal(const Expr& goal, const AnalysisOptions& o) {
    Expr g = simplify(goal);
    if (!has_temporal(g))
        return decide_valid(g, o);
    if (g->op == Op::Globally && !has_temporal(g->args[0])) {
        CheckResult r = decide_valid(g->args[0], o);
        if (r.witness) {
            r.witness->horizon = 1;
            r.witness->illegal_at = 0;
        }
        r.notes.push_back("G p is valid exactly when p is");
        return r;
    }
    VarList fv = free_var_list(g);
    size_t spent = 0;
    LassoBounds lb = o.lasso;
    lb.cap = o.search_budget;
    lb.shared_work = &spent;
    try {
        if (fv.empty()) {
            LassoVerdict v = eval_qltl(g, {}, o.dom, lb);
            if (v.definite == Tri::True)
                return CheckResult::proven("lasso", "closed formula holds");
            if (v.definite == Tri::False) {
                Witness w;
                w.kind = "closed formula is false";
                return CheckResult::refuted("lasso", w);
            }
            return CheckResult::unknown("closed temporal formula undecided within lasso bounds");
        }
        auto fams = word_families(fv, g, o);
        std::optional<Witness> found;
        search_words(fv, fams, [&](const std::map<std::string, LassoWord>& words) {
            if (eval_qltl(g, words, o.dom, lb).definite == Tri::False) {
                found = lasso_witness(fv, words, "lasso counterexample");
                return true;
            }
            return false;
        });
        if (found)
            return CheckResult::refuted("lasso", found);
        return CheckResult::unknown("no lasso counterexample within bounds; temporal proofs are out of reach");
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ExplosionGuard)
            throw;
        return CheckResult::unknown(std::string("lasso search abandoned: ") + e.what());
    }
}

CheckResult decide_sat_temporal(const Expr& f, const AnalysisOptions& o) {
    Expr g = simplify(f);
    VarList fv = free_var_list(g);
    if (!has_temporal(g)) {
        CheckResult r = decide_valid(ex::lnot(ex::exists(fv, g)), o);
        if (r.verdict == Verdict::Proven)
            return CheckResult::refuted(r.method, Witness{{}, {}, {}, 0, -1, "formula unsatisfiable"});
        if (r.verdict == Verdict::Refuted)
            return CheckResult::proven(r.method, "satisfiable");
        return r;
    }
    size_t spent = 0;
    LassoBounds lb = o.lasso;
    lb.cap = o.search_budget;
    lb.shared_work = &spent;
    try {
        if (fv.empty()) {
            LassoVerdict v = eval_qltl(g, {}, o.dom, lb);
            if (v.definite == Tri::True)
                return CheckResult::proven("lasso", "closed formula holds");
            if (v.definite == Tri::False)
                return CheckResult::refuted("lasso", Witness{{}, {}, {}, 0, -1, "closed formula is false"});
            return CheckResult::unknown("closed temporal formula undecided within lasso bounds");
        }
        // constant words first: substituting them lets the simplifier discharge
        // quantified subformulas the lasso family cannot settle
        std::vector<std::vector<LassoWord>> consts;
        for (auto& v : fv) {
            std::vector<LassoWord> ws;
            for (auto& val : candidate_values(v.type, o.dom, g))
                ws.push_back(LassoWord{{}, {val}});
            consts.push_back(ws);
        }
        std::optional<Witness> found;
        search_words(fv, consts, [&](const std::map<std::string, LassoWord>& words) {
            std::vector<Value> vals;
            for (auto& v : fv)
                vals.push_back(words.at(v.name).loop[0]);
            Expr h = simplify(substitute_assignment(g, fv, vals));
            if (eval_qltl(h, {}, o.dom, lb).definite == Tri::True) {
                found = lasso_witness(fv, words, "model");
                return true;
            }
            return false;
        });
        if (!found) {
            auto fams = word_families(fv, g, o);
            search_words(fv, fams, [&](const std::map<std::string, LassoWord>& words) {
                if (eval_qltl(g, words, o.dom, lb).definite == Tri::True) {
                    found = lasso_witness(fv, words, "model");
                    return true;
                }
                return false;
            });
        }
        if (found) {
            CheckResult r = CheckResult::proven("lasso", "satisfying lasso found");
            r.witness = found;
            return r;
        }
        return CheckResult::unknown("no satisfying lasso within bounds");
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ExplosionGuard)
            throw;
        return CheckResult::unknown(std::string("lasso search abandoned: ") + e.what());
    }
}

Vc validity_vc(const AtomicComponent& c) {
    switch (c.kind) {
    case Kind::StatelessDet: return make_vc(ex::exists(as_vars(c.in), c.inpt), "validity (stateless_det)");
    case Kind::Stateless: {
        VarList xy = as_vars(c.in);
        VarList y = as_vars(c.out);
        xy.insert(xy.end(), y.begin(), y.end());
        return make_vc(ex::exists(xy, c.rel), "validity (stateless)");
    }
    default:
        throw Error(ErrorCode::TemporalFragment,
                    std::string("validity of a ") + kind_name(c.kind) + " component is a temporal question");
    }
}

namespace {

CheckResult with_reason(CheckResult r, const std::string& reason) {
    if (r.reason.empty())
        r.reason = reason;
    else
        r.reason = reason + ": " + r.reason;
    return r;
}

// Every state has a successor for every input, and some initial state exists.
bool sts_total(const AtomicComponent& sts, const AnalysisOptions& o) {
    VarList s = as_vars(sts.state);
    if (decide_valid(ex::exists(s, sts.init), o).verdict != Verdict::Proven)
        return false;
    Expr step = ex::exists(as_vars(sts.out), exists_primed(s, sts.rel));
    return decide_valid(step, o).verdict == Verdict::Proven;
}

}  // namespace

CheckResult is_valid(const Component& c, const AnalysisOptions& o) {
    Atomic a = atomic(c);
    switch (a->kind) {
    case Kind::StatelessDet:
    case Kind::Stateless: {
        CheckResult r = decide_valid(validity_vc(*a).goal, o);
        if (r.verdict == Verdict::Refuted)
            r.witness = Witness{{}, {}, {}, 0, -1, "contract unsatisfiable"};
        else
            r.witness.reset();
        return with_reason(r, "contract satisfiability");
    }
    case Kind::Det:
    case Kind::Sts: {
        Atomic s = lift_to(*a, Kind::Sts);
        VarList sv = as_vars(s->state);
        CheckResult init = decide_valid(ex::exists(sv, s->init), o);
        if (init.verdict == Verdict::Refuted)
            return with_reason(CheckResult::refuted(init.method, Witness{{}, {}, {}, 0, -1, "no initial state"}),
                               "initial condition unsatisfiable");
        VarList all = sv;
        for (auto& v : as_vars(s->in))
            all.push_back(v);
        for (auto& v : as_vars(s->out))
            all.push_back(v);
        CheckResult first = decide_valid(ex::exists(all, exists_primed(sv, ex::land(s->init, s->rel))), o);
        if (first.verdict == Verdict::Refuted)
            return with_reason(CheckResult::refuted(first.method, Witness{{}, {}, {}, 0, -1, "no legal first step"}),
                               "first step unsatisfiable");
        if (init.verdict == Verdict::Proven && sts_total(*s, o))
            return CheckResult::proven(init.method, "every input is accepted");
        return with_reason(decide_sat_temporal(lift_to(*s, Kind::Qltl)->rel, o), "temporal satisfiability");
    }
    case Kind::Qltl: return with_reason(decide_sat_temporal(a->rel, o), "temporal satisfiability");
    }
    return CheckResult::unknown("unknown kind");
}

CheckResult is_input_receptive(const Component& c, const AnalysisOptions& o) {
    Atomic a = atomic(c);
    Expr legal = legal_formula(*a);
    CheckResult r = has_temporal(legal) ? decide_temporal(legal, o) : decide_valid(legal, o);
    if (r.witness && r.witness->kind.empty())
        r.witness->kind = "illegal input";
    else if (r.witness)
        r.witness->kind = "illegal input (" + r.witness->kind + ")";
    return with_reason(r, "legal inputs: " + to_string(legal));
}

CheckResult check_compat(const Component& a, const Component& b, const AnalysisOptions& o) {
    Component s = serial_of(a, b);
    WfResult w = wf(s);
    if (!w.ok)
        throw Error(ErrorCode::WfError, w.diagnostic);
    return is_valid(s, o);
}

namespace {

void require_matching(const Signature& a, const Signature& b, const char* what) {
    if (a.size() != b.size())
        throw Error(ErrorCode::SignatureMismatch, std::string(what) + " arity " + std::to_string(a.size()) + " vs " +
                                                      std::to_string(b.size()));
    for (size_t i = 0; i < a.size(); ++i)
        if (!same_sort(a[i].type, b[i].type))
            throw Error(ErrorCode::SignatureMismatch, std::string(what) + " slot " + std::to_string(i + 1) + ": " +
                                                          a[i].type.str() + " vs " + b[i].type.str());
}

// Rename `b`'s inputs and outputs to `a`'s names; states follow `state_target`
// positionally when given, and are moved apart from `a`'s names otherwise.
Atomic align(const AtomicComponent& a, const AtomicComponent& b, const Signature* state_target,
             std::map<std::string, std::string>* state_map = nullptr) {
    std::map<std::string, std::string> m;
    for (size_t i = 0; i < b.in.size(); ++i)
        m[b.in[i].name] = a.in[i].name;
    for (size_t i = 0; i < b.out.size(); ++i)
        m[b.out[i].name] = a.out[i].name;
    std::set<std::string> used = all_names(a);
    for (auto& n : all_names(b))
        used.insert(n);
    for (size_t i = 0; i < b.state.size(); ++i) {
        std::string n = state_target ? (*state_target)[i].name : b.state[i].name;
        if (!state_target && all_names(a).count(n)) {
            n = fresh_name(n, used);
            used.insert(n);
        }
        m[b.state[i].name] = n;
    }
    if (state_map)
        for (auto& p : b.state)
            (*state_map)[p.name] = m[p.name];
    return rename_atomic(b, m);
}

bool same_state_types(const AtomicComponent& a, const AtomicComponent& b) {
    if (a.state.size() != b.state.size())
        return false;
    for (size_t i = 0; i < a.state.size(); ++i)
        if (a.state[i].type != b.state[i].type)
            return false;
    return true;
}

// Legality of a lifted component established by first-order means.
bool legality_known(const AtomicComponent& c, const AnalysisOptions& o) {
    switch (c.kind) {
    case Kind::StatelessDet:
    case Kind::Stateless:
    case Kind::Qltl: {
        Expr l = legal_formula(c);
        CheckResult r = has_temporal(l) ? decide_temporal(l, o) : decide_valid(l, o);
        return r.verdict == Verdict::Proven;
    }
    case Kind::Det:
    case Kind::Sts: return sts_total(*lift_to(c, Kind::Sts), o);
    }
    return false;
}

// Qltl formula of a component, reduced to its run part when the sts is total.
Expr qltl_formula(const AtomicComponent& c, bool total) {
    if (total && (c.kind == Kind::Det || c.kind == Kind::Sts)) {
        Atomic s = lift_to(c, Kind::Sts);
        VarList sv = as_vars(s->state);
        return simplify(ex::exists(sv, ex::land(s->init, ex::globally(primes_to_next(s->rel, sv)))));
    }
    return lift_to(c, Kind::Qltl)->rel;
}

}  // namespace

RefinementVcs refine_vc(const Component& abstract, const Component& concrete, const AnalysisOptions* o) {
    require_matching(sigma_in(abstract), sigma_in(concrete), "input");
    require_matching(sigma_out(abstract), sigma_out(concrete), "output");
    Atomic a0 = atomic(abstract);
    Atomic b0 = atomic(concrete);
    RefinementVcs r;
    Kind k = join_kind(a0->kind, b0->kind);
    if (k == Kind::Det)
        k = Kind::Sts;
    if (k == Kind::StatelessDet)
        k = Kind::Stateless;

    if (k == Kind::Sts) {
        Atomic a = lift_to(*a0, Kind::Sts);
        Atomic b = lift_to(*b0, Kind::Sts);
        if (same_state_types(*a, *b)) {
            b = align(*a, *b, &a->state);
            VarList s = as_vars(a->state);
            VarList y = as_vars(a->out);
            Expr p1 = ex::exists(y, exists_primed(s, a->rel));
            Expr p2 = ex::exists(y, exists_primed(s, b->rel));
            Expr goal = ex::land({ex::implies(b->init, a->init), ex::implies(p1, p2),
                                  ex::implies(ex::land(p1, b->rel), a->rel)});
            r.kind = Kind::Sts;
            r.sufficient_only = true;
            r.rule = "sts refinement with shared state (sufficient condition)";
            r.vcs.push_back(make_vc(goal, r.rule));
            return r;
        }
        r.notes.push_back("state types differ; comparing as qltl");
        k = Kind::Qltl;
    }

    if (k == Kind::Stateless) {
        Atomic a = lift_to(*a0, Kind::Stateless);
        Atomic b = align(*a, *lift_to(*b0, Kind::Stateless), nullptr);
        VarList y = as_vars(a->out);
        Expr p1 = ex::exists(y, a->rel);
        Expr p2 = ex::exists(y, b->rel);
        Expr goal = ex::land(ex::implies(p1, p2), ex::implies(ex::land(p1, b->rel), a->rel));
        r.kind = Kind::Stateless;
        r.rule = "stateless refinement";
        r.vcs.push_back(make_vc(goal, r.rule));
        return r;
    }

    bool la = false, lb = false;
    if (o) {
        la = legality_known(*a0, *o);
        lb = legality_known(*b0, *o);
        if (la)
            r.notes.push_back("abstract side accepts every input");
        if (lb)
            r.notes.push_back("concrete side accepts every input");
    }
    Atomic a = make_qltl(a0->in, a0->out, qltl_formula(*a0, la));
    Atomic bq = make_qltl(b0->in, b0->out, qltl_formula(*b0, lb));
    Atomic b = align(*a, *bq, nullptr);
    VarList y = as_vars(a->out);
    Expr p1 = la ? ex::tt() : ex::exists(y, a->rel);
    Expr p2 = lb ? ex::tt() : ex::exists(y, b->rel);
    Expr goal = ex::land(ex::implies(p1, p2), ex::implies(ex::land(p1, b->rel), a->rel));
    r.kind = Kind::Qltl;
    r.rule = "qltl refinement";
    r.vcs.push_back(make_vc(goal, r.rule));
    return r;
}

bool enumerable(const AtomicComponent& c0, const FiniteDomain& dom) {
    if (c0.kind == Kind::Qltl)
        return false;
    Atomic c = lift_to(c0, Kind::Sts);
    for (const Signature* sig : {&c->in, &c->out, &c->state})
        for (auto& p : *sig)
            if (!dom.resolves(p.type))
                return false;
    std::vector<SemType> bound;
    bound_types(c->init, bound);
    bound_types(c->rel, bound);
    for (auto& t : bound)
        if (!dom.resolves(t))
            return false;
    return true;
}

CheckResult check_refines(const Component& abstract, const Component& concrete, const AnalysisOptions& o) {
    RefinementVcs rv = refine_vc(abstract, concrete, &o);
    Atomic a = atomic(abstract);
    Atomic b = atomic(concrete);

    std::optional<CheckResult> bounded;
    if (enumerable(*a, o.dom) && enumerable(*b, o.dom)) {
        try {
            CheckResult br = bounded_refute_refinement(atom(a), atom(b), o.dom, o.horizon);
            if (br.verdict == Verdict::Refuted)
                bounded = br;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ExplosionGuard && e.code() != ErrorCode::DomainNotFinite)
                throw;
        }
    }

    const Vc& vc = rv.vcs.front();
    CheckResult r = vc.fragment == Fragment::Temporal ? decide_temporal(vc.goal, o) : decide_valid(vc.goal, o);
    r.notes.insert(r.notes.begin(), rv.notes.begin(), rv.notes.end());
    r.notes.push_back("rule: " + rv.rule);
    r.notes.push_back("vc: " + to_string(simplify(vc.goal)));

    auto take_bounded = [&](CheckResult res) {
        CheckResult out = *bounded;
        out.notes = res.notes;
        if (res.verdict == Verdict::Refuted)
            out.method = res.method + "+" + out.method;
        return out;
    };

    switch (r.verdict) {
    case Verdict::Proven:
        if (rv.sufficient_only)
            r.notes.push_back("sufficient condition holds");
        return r;
    case Verdict::Refuted:
        if (bounded)
            return take_bounded(r);
        if (rv.sufficient_only) {
            CheckResult u = CheckResult::unknown("sufficient condition fails; no bounded counterexample");
            u.notes = r.notes;
            if (r.witness)
                u.notes.push_back("condition counterexample: " + r.witness->str());
            return u;
        }
        return r;
    case Verdict::Unknown:
        if (bounded)
            return take_bounded(r);
        return r;
    }
    return r;
}

std::vector<Vc> data_refine_vc(const AtomicComponent& abstract, const AtomicComponent& concrete, const Expr& rel) {
    if (abstract.kind == Kind::Qltl || concrete.kind == Kind::Qltl)
        throw Error(ErrorCode::KindError, "data refinement needs sts components");
    require_matching(abstract.in, concrete.in, "input");
    require_matching(abstract.out, concrete.out, "output");
    Atomic a = lift_to(abstract, Kind::Sts);
    Atomic b0 = lift_to(concrete, Kind::Sts);
    std::map<std::string, std::string> smap;
    Atomic b = align(*a, *b0, nullptr, &smap);
    Expr d = rename_vars(rel, smap);

    VarList s = as_vars(a->state);
    VarList t = as_vars(b->state);
    VarList x = as_vars(a->in);
    VarList y = as_vars(a->out);
    Expr p1 = ex::exists(y, exists_primed(s, a->rel));
    Expr p2 = ex::exists(y, exists_primed(t, b->rel));

    auto cat = [](std::initializer_list<const VarList*> ls) {
        VarList r;
        for (auto* l : ls)
            r.insert(r.end(), l->begin(), l->end());
        return r;
    };

    Expr vc1 = ex::forall(t, ex::implies(b->init, ex::exists(s, ex::land(d, a->init))));
    Expr vc2 = ex::forall(cat({&t, &x, &s}), ex::implies(ex::land(d, p1), p2));
    Subst next_states;
    for (auto& v : s)
        next_states[v.name] = ex::primed(v);
    for (auto& v : t)
        next_states[v.name] = ex::primed(v);
    Expr d_next = substitute(d, next_states);
    Expr inner = ex::implies(ex::land({d, p1, b->rel}), exists_primed(s, ex::land(d_next, a->rel)));
    Expr vc3 = ex::forall(cat({&t, &x, &s}), ex::forall(y, forall_primed(t, inner)));
    return {make_vc(vc1, "data refinement: initial states"), make_vc(vc2, "data refinement: legal inputs"),
            make_vc(vc3, "data refinement: transitions")};
}

CheckResult check_data_refines(const AtomicComponent& abstract, const AtomicComponent& concrete, const Expr& rel,
                               const AnalysisOptions& o) {
    auto vcs = data_refine_vc(abstract, concrete, rel);
    bool all = true;
    std::vector<std::string> notes;
    for (auto& vc : vcs) {
        CheckResult r = decide_valid(vc.goal, o);
        notes.push_back(vc.origin + ": " + verdict_name(r.verdict));
        if (r.verdict == Verdict::Refuted) {
            r.reason = vc.origin + " fails";
            r.notes = notes;
            r.notes.push_back("data refinement conditions are sufficient only");
            // a failed sufficient condition does not refute refinement itself
            CheckResult u = CheckResult::unknown(vc.origin + " fails");
            u.notes = r.notes;
            if (r.witness)
                u.notes.push_back("condition counterexample: " + r.witness->str());
            return u;
        }
        all = all && r.verdict == Verdict::Proven;
    }
    CheckResult r = all ? CheckResult::proven("conditions", "all data refinement conditions hold")
                        : CheckResult::unknown("some data refinement condition undecided");
    r.notes = notes;
    return r;
}

}  // namespace rcrs
