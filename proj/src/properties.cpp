#include "rcrs/properties.hpp"

#include "rcrs/analysis.hpp"
#include "rcrs/compose.hpp"
#include "rcrs/eval.hpp"
#include "rcrs/lattice.hpp"
#include "rcrs/oracle.hpp"

#include <chrono>
#include <sstream>

namespace rcrs {

int ComponentGen::uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

bool ComponentGen::chance(double p) { return std::bernoulli_distribution(p)(rng_); }

SemType ComponentGen::small_type(int max_values) {
    int hi = uniform(1, std::max(1, max_values - 1));
    if (chance(0.4))
        return SemType::boolean();
    return SemType::range(0, hi);
}

Signature ComponentGen::ports(const std::string& base, int n, int max_values) {
    Signature s;
    for (int i = 0; i < n; ++i)
        s.push_back(Port{base + std::to_string(fresh_++), small_type(max_values)});
    return s;
}

Expr ComponentGen::leaf(const SemType& t, const VarList& scope) {
    std::vector<Var> same;
    for (auto& v : scope)
        if (v.type == t)
            same.push_back(v);
    if (!same.empty() && chance(0.7))
        return ex::var(same[uniform(0, (int)same.size() - 1)]);
    if (t.tag == SemType::Tag::Bool)
        return ex::boolean(chance(0.5));
    return ex::constant(Value::integer(uniform((int)t.lo, (int)t.hi)), t);
}

Expr ComponentGen::term(const SemType& t, const VarList& scope, int depth) {
    if (t.tag == SemType::Tag::Bool)
        return formula(scope, depth);
    if (depth <= 0 || chance(0.5))
        return leaf(t, scope);
    Expr a = term(t, scope, depth - 1);
    Expr b = term(t, scope, depth - 1);
    if (equal(a, b))
        b = leaf(t, scope);
    return ex::ite(formula(scope, depth - 1), a, b);
}

Expr ComponentGen::formula(const VarList& scope, int depth) {
    if (scope.empty())
        return ex::boolean(chance(0.5));
    if (depth <= 0 || chance(0.4)) {
        const Var& v = scope[uniform(0, (int)scope.size() - 1)];
        if (v.type.tag == SemType::Tag::Bool)
            return chance(0.5) ? ex::var(v) : ex::lnot(ex::var(v));
        VarList others;
        for (auto& w : scope)
            if (w.name != v.name)
                others.push_back(w);
        static const Op ops[] = {Op::Eq, Op::Ne, Op::Lt, Op::Le};
        return ex::cmp(ops[uniform(0, 3)], ex::var(v), leaf(v.type, others));
    }
    switch (uniform(0, 2)) {
    case 0: return ex::land(formula(scope, depth - 1), formula(scope, depth - 1));
    case 1: return ex::lor(formula(scope, depth - 1), formula(scope, depth - 1));
    default: return ex::lnot(formula(scope, depth - 1));
    }
}

Atomic ComponentGen::det_atom(const Signature& in, const Signature& out, bool first_free) {
    Signature state;
    if (chance(0.5))
        state = ports("s", 1);
    VarList scope = as_vars(in);
    for (auto& v : as_vars(state))
        scope.push_back(v);
    VarList without_first = scope;
    if (first_free && !in.empty())
        without_first.erase(without_first.begin());
    Expr inpt = chance(0.5) ? ex::tt() : formula(scope, 0);
    std::vector<Expr> outs;
    for (size_t i = 0; i < out.size(); ++i)
        outs.push_back(term(out[i].type, i == 0 ? without_first : scope, 2));
    if (state.empty())
        return simplify_atomic(*make_stateless_det(in, inpt, outs));
    const SemType& st = state[0].type;
    Value init = st.tag == SemType::Tag::Bool ? Value::boolean(chance(0.5)) : Value::integer(uniform((int)st.lo, (int)st.hi));
    return simplify_atomic(*make_det(in, state, {init}, inpt, {term(st, scope, 2)}, outs));
}

Component ComponentGen::det_composite(const Signature& in, const Signature& out, int atoms, int depth) {
    if (atoms <= 1 || depth <= 0) {
        if (atoms >= 1 && depth > 0 && chance(0.3)) {
            // feedback around a single atom
            Signature t = ports("f", 1);
            Signature bin = t, bout = t;
            bin.insert(bin.end(), in.begin(), in.end());
            bout.insert(bout.end(), out.begin(), out.end());
            return fdbk_of(atom(det_atom(bin, bout, true)));
        }
        return atom(det_atom(in, out, false));
    }
    int choice = uniform(0, 2);
    if (choice == 1 && out.size() < 2)
        choice = 0;
    if (choice == 2) {
        Signature t = ports("f", 1);
        Signature bin = t, bout = t;
        bin.insert(bin.end(), in.begin(), in.end());
        bout.insert(bout.end(), out.begin(), out.end());
        for (int attempt = 0; attempt < 8; ++attempt) {
            Component body = det_composite(bin, bout, atoms, depth - 1);
            if (!oi(body).count({1, 1}))
                return fdbk_of(body);
        }
        choice = 0;
    }
    int left = uniform(1, atoms - 1);
    if (choice == 1) {
        size_t ki = (size_t)uniform(0, (int)in.size());
        size_t ko = (size_t)uniform(1, (int)out.size() - 1);
        Signature in1(in.begin(), in.begin() + ki), in2(in.begin() + ki, in.end());
        Signature out1(out.begin(), out.begin() + ko), out2(out.begin() + ko, out.end());
        return parallel_of(det_composite(in1, out1, left, depth - 1), det_composite(in2, out2, atoms - left, depth - 1));
    }
    Signature mid = ports("m", uniform(1, 2));
    return serial_of(det_composite(in, mid, left, depth - 1), det_composite(mid, out, atoms - left, depth - 1));
}

Atomic ComponentGen::stateless_atom(const Signature& in, const Signature& out) {
    VarList scope = as_vars(in);
    for (auto& v : as_vars(out))
        scope.push_back(v);
    return make_stateless(in, out, formula(scope, 2));
}

Atomic ComponentGen::stateless_variant(const AtomicComponent& a0) {
    Atomic a = lift_to(a0, Kind::Stateless);
    if (chance(0.25))
        return stateless_atom(a->in, a->out);
    VarList scope = as_vars(a->in);
    for (auto& v : as_vars(a->out))
        scope.push_back(v);
    Expr legal = ex::exists(as_vars(a->out), a->rel);
    Expr narrow = chance(0.5) ? ex::tt() : formula(scope, 1);
    Expr elsewhere = formula(scope, 1);
    return make_stateless(a->in, a->out,
                          ex::lor(ex::land({legal, a->rel, narrow}), ex::land(ex::lnot(legal), elsewhere)));
}

Atomic ComponentGen::sts_atom(const Signature& in, const Signature& out, const Signature& state) {
    VarList sv = as_vars(state);
    Expr init = formula(sv, 1);
    VarList scope = as_vars(in);
    scope.insert(scope.end(), sv.begin(), sv.end());
    for (auto& v : as_vars(out))
        scope.push_back(v);
    Subst to_primed;
    for (auto& v : sv) {
        Var p{v.name + "_next", v.type};
        scope.push_back(p);
        to_primed[p.name] = ex::primed(v);
    }
    Expr trs = substitute(formula(scope, 2), to_primed);
    return make_sts(in, out, state, init, trs);
}

std::string SuiteReport::summary(bool timing) const {
    std::ostringstream os;
    os << name << " seed=" << seed << " cases=" << cases << " failures=" << failures;
    if (vacuous)
        os << " vacuous=" << vacuous;
    os.precision(3);
    if (timing)
        os << " time=" << seconds << "s";
    return os.str();
}

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
};

void fail(SuiteReport& r, int index, const std::string& what) {
    ++r.failures;
    if (r.details.size() < 10)
        r.details.push_back("case " + std::to_string(index) + ": " + what);
}

std::string oi_str(const OIRelation& rel) {
    std::string s = "{";
    for (auto& [o, i] : rel)
        s += "(" + std::to_string(o) + "," + std::to_string(i) + ")";
    return s + "}";
}

// Every assignment of the signature's types, in domain order.
std::vector<std::vector<Value>> assignments(const Signature& sig, const FiniteDomain& dom) {
    std::vector<std::vector<Value>> out{{}};
    for (auto& p : sig) {
        std::vector<std::vector<Value>> next;
        for (auto& prefix : out)
            for (auto& v : dom.values(p.type)) {
                next.push_back(prefix);
                next.back().push_back(v);
            }
        out = std::move(next);
    }
    return out;
}

bool holds(const Expr& f, const Signature& a, const std::vector<Value>& av, const Signature& b,
           const std::vector<Value>& bv, const FiniteDomain& dom) {
    Env env;
    for (size_t i = 0; i < a.size(); ++i)
        env.push(a[i].name, av[i]);
    for (size_t i = 0; i < b.size(); ++i)
        env.push(b[i].name, bv[i]);
    return eval_formula(f, env, dom);
}

}  // namespace

bool stateless_refines_exhaustive(const AtomicComponent& abstract, const AtomicComponent& concrete,
                                  const FiniteDomain& dom) {
    Atomic a = lift_to(abstract, Kind::Stateless);
    Atomic c = lift_to(concrete, Kind::Stateless);
    auto ys = assignments(a->out, dom);
    for (auto& x : assignments(a->in, dom)) {
        bool legal_a = false, legal_c = false;
        std::vector<bool> ra, rc;
        for (auto& y : ys) {
            ra.push_back(holds(a->rel, a->in, x, a->out, y, dom));
            rc.push_back(holds(c->rel, c->in, x, c->out, y, dom));
            legal_a = legal_a || ra.back();
            legal_c = legal_c || rc.back();
        }
        if (!legal_a)
            continue;
        if (!legal_c)
            return false;
        for (size_t k = 0; k < ys.size(); ++k)
            if (rc[k] && !ra[k])
                return false;
    }
    return true;
}

SuiteReport oracle_equivalence_suite(uint64_t seed, int cases, int horizon) {
    SuiteReport r;
    r.name = "oracle-equivalence";
    r.seed = seed;
    Timer t;
    ComponentGen g(seed);
    FiniteDomain dom;
    for (int i = 0; i < cases; ++i) {
        Signature in = g.ports("x", g.uniform(1, 2));
        Signature out = g.ports("y", g.uniform(1, 2));
        Component c = g.det_composite(in, out, g.uniform(1, 4), g.uniform(1, 3));
        ++r.cases;
        WfResult w = wf(c);
        if (!w.ok || !determ(c) || !loop_free(c)) {
            fail(r, i, "generator produced an ill-formed or looping composite: " + print_component(c));
            continue;
        }
        try {
            Atomic a = atomic(c);
            EquivResult eq = bounded_equiv(atom(a), c, dom, horizon);
            if (!eq.equivalent)
                fail(r, i, "behaviour differs (" + eq.detail + ") for " + print_component(c));
            if (oi(*a) != oi(c))
                fail(r, i, "oi " + oi_str(oi(*a)) + " vs " + oi_str(oi(c)) + " for " + print_component(c));
        } catch (const Error& e) {
            fail(r, i, std::string(e.what()) + " for " + print_component(c));
        }
    }
    r.seconds = t.seconds();
    return r;
}

SuiteReport associativity_suite(uint64_t seed, int cases) {
    SuiteReport r;
    r.name = "serial-associativity";
    r.seed = seed;
    Timer t;
    ComponentGen g(seed);
    FiniteDomain dom;
    for (int i = 0; i < cases; ++i) {
        Signature s0 = g.ports("x", g.uniform(1, 2));
        Signature s1 = g.ports("y", g.uniform(1, 2));
        Signature s2 = g.ports("z", g.uniform(1, 2));
        Signature s3 = g.ports("w", 1);
        Component a = atom(g.stateless_atom(s0, s1));
        Component b = atom(g.stateless_atom(s1, s2));
        Component c = atom(g.stateless_atom(s2, s3));
        ++r.cases;
        try {
            Atomic left = atomic(serial_of(serial_of(a, b), c));
            Atomic right = atomic(serial_of(a, serial_of(b, c)));
            EquivResult eq = bounded_equiv(atom(left), atom(right), dom, 2);
            if (!eq.equivalent)
                fail(r, i, eq.detail + ": " + print_atomic(*left) + " vs " + print_atomic(*right));
        } catch (const Error& e) {
            fail(r, i, e.what());
        }
    }
    r.seconds = t.seconds();
    return r;
}

SuiteReport precongruence_suite(uint64_t seed, int cases) {
    SuiteReport r;
    r.name = "serial-precongruence";
    r.seed = seed;
    Timer t;
    ComponentGen g(seed);
    FiniteDomain dom;
    for (int i = 0; i < cases; ++i) {
        Signature s0 = g.ports("x", g.uniform(1, 2));
        Signature s1 = g.ports("y", g.uniform(1, 2));
        Signature s2 = g.ports("z", 1);
        Atomic a1 = g.stateless_atom(s0, s1);
        Atomic a2 = g.stateless_variant(*a1);
        Atomic b1 = g.stateless_atom(s1, s2);
        Atomic b2 = g.stateless_variant(*b1);
        ++r.cases;
        try {
            if (!stateless_refines_exhaustive(*a1, *a2, dom) || !stateless_refines_exhaustive(*b1, *b2, dom)) {
                ++r.vacuous;
                continue;
            }
            Atomic s = atomic(serial_of(atom(a1), atom(b1)));
            Atomic c = atomic(serial_of(atom(a2), atom(b2)));
            if (!stateless_refines_exhaustive(*s, *c, dom))
                fail(r, i, print_atomic(*s) + " not refined by " + print_atomic(*c));
        } catch (const Error& e) {
            fail(r, i, e.what());
        }
    }
    r.seconds = t.seconds();
    return r;
}

SuiteReport legality_coherence_suite(uint64_t seed, int cases, int max_prefix) {
    SuiteReport r;
    r.name = "legality-coherence";
    r.seed = seed;
    Timer t;
    ComponentGen g(seed);
    FiniteDomain dom;
    for (int i = 0; i < cases; ++i) {
        Atomic a = g.sts_atom(g.ports("x", 1, 2), g.ports("y", 1, 2), g.ports("s", 1, 2));
        Expr legal = legal_formula(*a);
        ++r.cases;
        try {
            std::string bad;
            for (int k = 1; k <= max_prefix && bad.empty(); ++k)
                for (auto& in : enumerate_traces(a->in, dom, k)) {
                    RelResult rel = bounded_rel(*a, in, k, dom);
                    bool bounded_legal = rel.illegal_at < 0;
                    bool formula_legal = eval_prefix(legal, {{a->in[0].name, in[0]}}, k, dom);
                    if (bounded_legal != formula_legal) {
                        bad = "prefix " + trace_witness(a->in, in, {}, nullptr, k).str() + " bounded=" +
                              (bounded_legal ? "legal" : "illegal") + " formula=" + (formula_legal ? "legal" : "illegal");
                        break;
                    }
                }
            if (!bad.empty())
                fail(r, i, bad + " for " + print_atomic(*a));
        } catch (const Error& e) {
            fail(r, i, std::string(e.what()) + " for " + print_atomic(*a));
        }
    }
    r.seconds = t.seconds();
    return r;
}

SuiteReport stateless_refinement_agreement_suite(uint64_t seed, int cases) {
    SuiteReport r;
    r.name = "stateless-refinement-agreement";
    r.seed = seed;
    Timer t;
    ComponentGen g(seed);
    AnalysisOptions o;
    o.use_solver = false;
    for (int i = 0; i < cases; ++i) {
        Signature in = g.ports("x", g.uniform(1, 2));
        Signature out = g.ports("y", 1);
        Atomic a = g.stateless_atom(in, out);
        Atomic c = g.stateless_variant(*a);
        ++r.cases;
        try {
            bool expect = stateless_refines_exhaustive(*a, *c, o.dom);
            CheckResult got = check_refines(atom(a), atom(c), o);
            bool agree = got.verdict == (expect ? Verdict::Proven : Verdict::Refuted);
            if (!agree)
                fail(r, i, std::string("check_refines ") + verdict_name(got.verdict) + ", enumeration " +
                               (expect ? "refines" : "does not refine") + ": " + print_atomic(*a) + " vs " +
                               print_atomic(*c));
        } catch (const Error& e) {
            fail(r, i, e.what());
        }
    }
    r.seconds = t.seconds();
    return r;
}

}  // namespace rcrs
