#include "rcrs/component.hpp"

#include "rcrs/simplify.hpp"

#include <functional>
#include <sstream>

namespace rcrs {

VarList as_vars(const Signature& sig) {
    VarList vs;
    for (auto& p : sig)
        vs.push_back(Var{p.name, p.type});
    return vs;
}

std::vector<Expr> as_terms(const Signature& sig) {
    std::vector<Expr> ts;
    for (auto& p : sig)
        ts.push_back(ex::var(p.name, p.type));
    return ts;
}

std::vector<std::string> names_of(const Signature& sig) {
    std::vector<std::string> ns;
    for (auto& p : sig)
        ns.push_back(p.name);
    return ns;
}

const char* kind_name(Kind k) {
    switch (k) {
    case Kind::StatelessDet: return "stateless_det";
    case Kind::Det: return "det";
    case Kind::Stateless: return "stateless";
    case Kind::Sts: return "sts";
    case Kind::Qltl: return "qltl";
    }
    return "?";
}

Signature derived_outputs(const std::vector<Expr>& outs, const std::set<std::string>& avoid) {
    std::set<std::string> used = avoid;
    Signature sig;
    for (auto& t : outs) {
        std::string n = fresh_name("y", used);
        used.insert(n);
        sig.push_back(Port{n, t->type});
    }
    return sig;
}

std::set<std::string> declared_names(const AtomicComponent& c) {
    std::set<std::string> s;
    for (auto* sig : {&c.in, &c.out, &c.state})
        for (auto& p : *sig)
            s.insert(p.name);
    return s;
}

std::set<std::string> all_names(const AtomicComponent& c) {
    std::set<std::string> used = declared_names(c);
    for (auto* e : {&c.init, &c.rel, &c.inpt})
        if (*e)
            collect_names(*e, used);
    for (auto& t : c.next)
        collect_names(t, used);
    for (auto& t : c.outs)
        collect_names(t, used);
    return used;
}

Atomic make_sts(Signature in, Signature out, Signature state, Expr init, Expr trs) {
    auto c = std::make_shared<AtomicComponent>();
    c->kind = Kind::Sts;
    c->in = std::move(in);
    c->out = std::move(out);
    c->state = std::move(state);
    c->init = std::move(init);
    c->rel = std::move(trs);
    return c;
}

Atomic make_stateless(Signature in, Signature out, Expr io) {
    auto c = std::make_shared<AtomicComponent>();
    c->kind = Kind::Stateless;
    c->in = std::move(in);
    c->out = std::move(out);
    c->rel = std::move(io);
    return c;
}

Atomic make_det(Signature in, Signature state, std::vector<Value> init_vals, Expr inpt, std::vector<Expr> next,
                std::vector<Expr> outs) {
    auto c = std::make_shared<AtomicComponent>();
    c->kind = Kind::Det;
    c->in = std::move(in);
    c->state = std::move(state);
    c->init_vals = std::move(init_vals);
    c->inpt = std::move(inpt);
    c->next = std::move(next);
    c->outs = std::move(outs);
    std::set<std::string> avoid;
    for (auto& p : c->in)
        avoid.insert(p.name);
    for (auto& p : c->state)
        avoid.insert(p.name);
    c->out = derived_outputs(c->outs, avoid);
    return c;
}

Atomic make_stateless_det(Signature in, Expr inpt, std::vector<Expr> outs) {
    auto c = std::make_shared<AtomicComponent>();
    c->kind = Kind::StatelessDet;
    c->in = std::move(in);
    c->inpt = std::move(inpt);
    c->outs = std::move(outs);
    std::set<std::string> avoid;
    for (auto& p : c->in)
        avoid.insert(p.name);
    c->out = derived_outputs(c->outs, avoid);
    return c;
}

Atomic make_qltl(Signature in, Signature out, Expr phi) {
    auto c = std::make_shared<AtomicComponent>();
    c->kind = Kind::Qltl;
    c->in = std::move(in);
    c->out = std::move(out);
    c->rel = std::move(phi);
    return c;
}

Component atom(Atomic a) {
    auto n = std::make_shared<CompNode>();
    n->tag = CompNode::Tag::Atom;
    n->atom = std::move(a);
    return n;
}

Component serial_of(Component a, Component b) {
    auto n = std::make_shared<CompNode>();
    n->tag = CompNode::Tag::Serial;
    n->kids = {std::move(a), std::move(b)};
    return n;
}

Component parallel_of(Component a, Component b) {
    auto n = std::make_shared<CompNode>();
    n->tag = CompNode::Tag::Parallel;
    n->kids = {std::move(a), std::move(b)};
    return n;
}

Component fdbk_of(Component a) {
    auto n = std::make_shared<CompNode>();
    n->tag = CompNode::Tag::Fdbk;
    n->kids = {std::move(a)};
    return n;
}

Signature sigma_in(const AtomicComponent& c) { return c.in; }
Signature sigma_out(const AtomicComponent& c) { return c.out; }

namespace {

Signature concat_distinct(const Signature& a, const Signature& b) {
    Signature r = a;
    std::set<std::string> used;
    for (auto& p : a)
        used.insert(p.name);
    for (auto& p : b) {
        std::string n = fresh_name(p.name, used);
        used.insert(n);
        r.push_back(Port{n, p.type});
    }
    return r;
}

Signature drop_first(const Signature& s, const char* what) {
    if (s.empty())
        throw Error(ErrorCode::EmptyFeedbackSignature, std::string("feedback needs a first ") + what + " slot");
    return Signature(s.begin() + 1, s.end());
}

}  // namespace

Signature sigma_in(const Component& c) {
    switch (c->tag) {
    case CompNode::Tag::Atom: return c->atom->in;
    case CompNode::Tag::Serial: return sigma_in(c->kids[0]);
    case CompNode::Tag::Parallel: return concat_distinct(sigma_in(c->kids[0]), sigma_in(c->kids[1]));
    case CompNode::Tag::Fdbk: {
        if (sigma_out(c->kids[0]).empty())
            throw Error(ErrorCode::EmptyFeedbackSignature, "feedback needs a first output slot");
        return drop_first(sigma_in(c->kids[0]), "input");
    }
    }
    return {};
}

Signature sigma_out(const Component& c) {
    switch (c->tag) {
    case CompNode::Tag::Atom: return c->atom->out;
    case CompNode::Tag::Serial: return sigma_out(c->kids[1]);
    case CompNode::Tag::Parallel: return concat_distinct(sigma_out(c->kids[0]), sigma_out(c->kids[1]));
    case CompNode::Tag::Fdbk: {
        if (sigma_in(c->kids[0]).empty())
            throw Error(ErrorCode::EmptyFeedbackSignature, "feedback needs a first input slot");
        return drop_first(sigma_out(c->kids[0]), "output");
    }
    }
    return {};
}

namespace {

WfResult fail(std::string msg) { return WfResult{false, std::move(msg)}; }

// Check that every free variable of `e` is in `allowed` (matching sort) and
// that primed occurrences only refer to `primed_ok`.
std::string scope_check(const Expr& e, const Signature& allowed, const Signature& primed_ok, bool temporal_ok,
                        const std::string& what) {
    if (!e)
        return what + " is missing";
    if (!temporal_ok && has_temporal(e))
        return what + " uses temporal operators: " + to_string(e);
    if (temporal_ok && has_primed(e))
        return what + " mixes primed variables with temporal operators";
    auto find = [](const Signature& s, const std::string& n) -> const Port* {
        for (auto& p : s)
            if (p.name == n)
                return &p;
        return nullptr;
    };
    std::function<std::string(const Expr&, std::set<std::string>&)> go = [&](const Expr& n,
                                                                             std::set<std::string>& bound) -> std::string {
        switch (n->op) {
        case Op::Var: {
            if (bound.count(n->name))
                return "";
            const Port* p = find(allowed, n->name);
            if (!p)
                return what + " mentions undeclared variable " + n->name;
            if (!same_sort(p->type, n->type))
                return what + " uses " + n->name + " at type " + n->type.str() + ", declared " + p->type.str();
            return "";
        }
        case Op::Primed: {
            const Port* p = find(primed_ok, n->name);
            if (!p)
                return what + " primes non-state variable " + n->name;
            return "";
        }
        case Op::Forall:
        case Op::Exists: {
            bool added = bound.insert(n->name).second;
            std::string r = go(n->args[0], bound);
            if (added)
                bound.erase(n->name);
            return r;
        }
        default:
            for (auto& a : n->args) {
                std::string r = go(a, bound);
                if (!r.empty())
                    return r;
            }
            return "";
        }
    };
    std::set<std::string> bound;
    return go(e, bound);
}

Signature join(std::initializer_list<const Signature*> sigs) {
    Signature r;
    for (auto* s : sigs)
        r.insert(r.end(), s->begin(), s->end());
    return r;
}

}  // namespace

WfResult wf_atomic(const AtomicComponent& c) {
    std::set<std::string> seen;
    for (auto* sig : {&c.in, &c.out, &c.state})
        for (auto& p : *sig) {
            if (p.name.empty())
                return fail("empty variable name");
            if (!seen.insert(p.name).second)
                return fail("variable " + p.name + " declared twice");
        }
    const Signature none;
    std::string err;
    switch (c.kind) {
    case Kind::Sts:
        err = scope_check(c.init, c.state, none, false, "init");
        if (err.empty())
            err = scope_check(c.rel, join({&c.in, &c.out, &c.state}), c.state, false, "trs");
        break;
    case Kind::Stateless: err = scope_check(c.rel, join({&c.in, &c.out}), none, false, "io"); break;
    case Kind::Qltl: err = scope_check(c.rel, join({&c.in, &c.out}), none, true, "phi"); break;
    case Kind::Det:
    case Kind::StatelessDet: {
        if (c.kind == Kind::Det && (c.init_vals.size() != c.state.size() || c.next.size() != c.state.size()))
            return fail("det needs one initial value and one next expression per state variable");
        for (size_t i = 0; i < c.init_vals.size(); ++i) {
            const Value& v = c.init_vals[i];
            const SemType& t = c.state[i].type;
            bool ok = (v.tag == Value::Tag::Bool && t.tag == SemType::Tag::Bool) ||
                      (v.tag == Value::Tag::Num && t.is_numeric() && (t.tag == SemType::Tag::Real || v.is_integer())) ||
                      (v.tag == Value::Tag::Sym && t.tag == SemType::Tag::Enum) ||
                      (v.tag == Value::Tag::Unit && t.tag == SemType::Tag::Unit);
            if (t.tag == SemType::Tag::IntRange && ok)
                ok = v.q >= t.lo && v.q <= t.hi;
            if (!ok)
                return fail("initial value " + v.str() + " does not fit state " + c.state[i].name + ":" + t.str());
        }
        Signature scope = join({&c.in, &c.state});
        err = scope_check(c.inpt, scope, none, false, "precondition");
        for (size_t i = 0; err.empty() && i < c.next.size(); ++i) {
            err = scope_check(c.next[i], scope, none, false, "next");
            if (err.empty() && !same_sort(c.next[i]->type, c.state[i].type) &&
                !(c.state[i].type.tag == SemType::Tag::Real && c.next[i]->type.is_integral()))
                err = "next expression for " + c.state[i].name + " has type " + c.next[i]->type.str();
        }
        for (size_t i = 0; err.empty() && i < c.outs.size(); ++i)
            err = scope_check(c.outs[i], scope, none, false, "output");
        break;
    }
    }
    if (!err.empty())
        return fail(err);
    return {};
}

WfResult wf(const Component& c) {
    switch (c->tag) {
    case CompNode::Tag::Atom: return wf_atomic(*c->atom);
    case CompNode::Tag::Serial: {
        for (auto& k : c->kids) {
            auto r = wf(k);
            if (!r.ok)
                return r;
        }
        Signature o = sigma_out(c->kids[0]);
        Signature i = sigma_in(c->kids[1]);
        if (o.size() != i.size())
            return fail("serial arity mismatch " + std::to_string(o.size()) + " vs " + std::to_string(i.size()));
        for (size_t k = 0; k < o.size(); ++k)
            if (!same_sort(o[k].type, i[k].type))
                return fail("serial slot " + std::to_string(k + 1) + ": " + o[k].type.str() + " vs " + i[k].type.str());
        return {};
    }
    case CompNode::Tag::Parallel: {
        for (auto& k : c->kids) {
            auto r = wf(k);
            if (!r.ok)
                return r;
        }
        return {};
    }
    case CompNode::Tag::Fdbk: {
        auto r = wf(c->kids[0]);
        if (!r.ok)
            return r;
        Signature i = sigma_in(c->kids[0]);
        Signature o = sigma_out(c->kids[0]);
        if (i.empty() || o.empty())
            return fail("feedback on a component without a first input and output");
        if (i[0].type.tag == SemType::Tag::Unit)
            return fail("feedback on a unit-typed slot");
        if (!same_sort(i[0].type, o[0].type))
            return fail("feedback slot 1: " + o[0].type.str() + " vs " + i[0].type.str());
        return {};
    }
    }
    return {};
}

// ---------------------------------------------------------------- renaming

namespace {

Expr map_expr(const Expr& e, const std::function<Expr(const Expr&)>& f) { return e ? f(e) : e; }

template <class F>
Atomic transform(const AtomicComponent& c, F f) {
    auto r = std::make_shared<AtomicComponent>(c);
    r->init = map_expr(c.init, f);
    r->rel = map_expr(c.rel, f);
    r->inpt = map_expr(c.inpt, f);
    for (auto& n : r->next)
        n = f(n);
    for (auto& o : r->outs)
        o = f(o);
    return r;
}

Signature rename_sig(const Signature& s, const std::map<std::string, std::string>& m) {
    Signature r;
    for (auto& p : s) {
        auto it = m.find(p.name);
        r.push_back(Port{it == m.end() ? p.name : it->second, p.type});
    }
    return r;
}

Expr rename_bound(const Expr& e, int& counter) {
    if (is_binder(e->op)) {
        std::string nn = "b" + std::to_string(counter++);
        Expr body = substitute(e->args[0], Subst{{e->name, ex::var(nn, e->var_type)}});
        return ex::rebind(e, nn, rename_bound(body, counter));
    }
    if (e->args.empty())
        return e;
    std::vector<Expr> args;
    for (auto& a : e->args)
        args.push_back(rename_bound(a, counter));
    return ex::rebuild(e, std::move(args));
}

}  // namespace

Atomic rename_atomic(const AtomicComponent& c, const std::map<std::string, std::string>& m) {
    Atomic r = transform(c, [&](const Expr& e) { return rename_vars(e, m); });
    auto w = std::make_shared<AtomicComponent>(*r);
    w->in = rename_sig(c.in, m);
    w->out = rename_sig(c.out, m);
    w->state = rename_sig(c.state, m);
    return w;
}

Atomic simplify_atomic(const AtomicComponent& c) {
    Atomic r = transform(c, [](const Expr& e) { return simplify(e); });
    if (c.kind != Kind::Det && c.kind != Kind::StatelessDet)
        return r;
    // an output keeps its unsimplified form when simplification would drop
    // an input it mentions, so the output-input dependencies stay intact
    auto inputs_of = [&](const Expr& e) {
        std::set<std::string> fv = free_names(e), r;
        for (auto& p : c.in)
            if (fv.count(p.name))
                r.insert(p.name);
        return r;
    };
    auto w = std::make_shared<AtomicComponent>(*r);
    for (size_t i = 0; i < c.outs.size(); ++i)
        if (inputs_of(c.outs[i]) != inputs_of(w->outs[i]))
            w->outs[i] = c.outs[i];
    return w;
}

Atomic alpha_normalize(const AtomicComponent& c) {
    // bound variables first get names that cannot clash with the canonical ones
    int pre = 0;
    std::function<Expr(const Expr&)> park = [&](const Expr& e) -> Expr {
        if (is_binder(e->op)) {
            std::string nn = "%" + std::to_string(pre++);
            Expr body = substitute(e->args[0], Subst{{e->name, ex::var(nn, e->var_type)}});
            return ex::rebind(e, nn, park(body));
        }
        if (e->args.empty())
            return e;
        std::vector<Expr> args;
        for (auto& a : e->args)
            args.push_back(park(a));
        return ex::rebuild(e, std::move(args));
    };
    Atomic parked = transform(c, park);
    std::map<std::string, std::string> m;
    for (size_t i = 0; i < c.in.size(); ++i)
        m[c.in[i].name] = "x" + std::to_string(i);
    for (size_t i = 0; i < c.out.size(); ++i)
        m[c.out[i].name] = "y" + std::to_string(i);
    for (size_t i = 0; i < c.state.size(); ++i)
        m[c.state[i].name] = "s" + std::to_string(i);
    Atomic renamed = rename_atomic(*parked, m);
    int counter = 0;
    return transform(*renamed, [&](const Expr& e) { return rename_bound(e, counter); });
}

Component alpha_normalize(const Component& c) {
    switch (c->tag) {
    case CompNode::Tag::Atom: return atom(alpha_normalize(*c->atom));
    case CompNode::Tag::Serial: return serial_of(alpha_normalize(c->kids[0]), alpha_normalize(c->kids[1]));
    case CompNode::Tag::Parallel: return parallel_of(alpha_normalize(c->kids[0]), alpha_normalize(c->kids[1]));
    case CompNode::Tag::Fdbk: return fdbk_of(alpha_normalize(c->kids[0]));
    }
    return c;
}

namespace {

bool sig_types_equal(const Signature& a, const Signature& b) {
    if (a.size() != b.size())
        return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!same_sort(a[i].type, b[i].type))
            return false;
    return true;
}

bool expr_eq(const Expr& a, const Expr& b) {
    if (!a || !b)
        return !a && !b;
    return equal(a, b);
}

}  // namespace

bool alpha_equivalent(const AtomicComponent& a0, const AtomicComponent& b0) {
    if (a0.kind != b0.kind)
        return false;
    Atomic a = alpha_normalize(a0);
    Atomic b = alpha_normalize(b0);
    if (!sig_types_equal(a->in, b->in) || !sig_types_equal(a->out, b->out) || !sig_types_equal(a->state, b->state))
        return false;
    if (a->init_vals != b->init_vals || a->next.size() != b->next.size() || a->outs.size() != b->outs.size())
        return false;
    if (!expr_eq(a->init, b->init) || !expr_eq(a->rel, b->rel) || !expr_eq(a->inpt, b->inpt))
        return false;
    for (size_t i = 0; i < a->next.size(); ++i)
        if (!equal(a->next[i], b->next[i]))
            return false;
    for (size_t i = 0; i < a->outs.size(); ++i)
        if (!equal(a->outs[i], b->outs[i]))
            return false;
    return true;
}

// ---------------------------------------------------------------- printing

std::string print_signature(const Signature& s) {
    std::string r = "(";
    for (size_t i = 0; i < s.size(); ++i) {
        if (i)
            r += ", ";
        r += s[i].name + ":" + s[i].type.str();
    }
    return r + ")";
}

namespace {

std::string tuple(const std::vector<Expr>& ts) {
    std::string r = "(";
    for (size_t i = 0; i < ts.size(); ++i) {
        if (i)
            r += ", ";
        r += to_string(ts[i]);
    }
    return r + ")";
}

std::string value_tuple(const std::vector<Value>& vs) {
    if (vs.size() == 1)
        return vs[0].str();
    std::string r = "(";
    for (size_t i = 0; i < vs.size(); ++i) {
        if (i)
            r += ", ";
        r += vs[i].str();
    }
    return r + ")";
}

}  // namespace

std::string print_atomic(const AtomicComponent& c) {
    std::ostringstream os;
    os << kind_name(c.kind) << "(";
    switch (c.kind) {
    case Kind::Sts:
        os << print_signature(c.in) << ", " << print_signature(c.out) << ", " << print_signature(c.state) << ", "
           << to_string(c.init) << ", " << to_string(c.rel);
        break;
    case Kind::Stateless:
    case Kind::Qltl: os << print_signature(c.in) << ", " << print_signature(c.out) << ", " << to_string(c.rel); break;
    case Kind::Det:
        os << print_signature(c.in) << ", " << print_signature(c.state) << ", " << value_tuple(c.init_vals) << ", "
           << to_string(c.inpt) << ", " << tuple(c.next) << ", " << tuple(c.outs);
        break;
    case Kind::StatelessDet: os << print_signature(c.in) << ", " << to_string(c.inpt) << ", " << tuple(c.outs); break;
    }
    os << ")";
    return os.str();
}

namespace {

// precedence: 0 serial, 1 parallel, 2 primary
std::string print_comp(const Component& c, int ctx) {
    switch (c->tag) {
    case CompNode::Tag::Atom: return print_atomic(*c->atom);
    case CompNode::Tag::Fdbk: return "fdbk(" + print_comp(c->kids[0], 0) + ")";
    case CompNode::Tag::Serial: {
        std::string s = print_comp(c->kids[0], 0) + " ; " + print_comp(c->kids[1], 1);
        return ctx > 0 ? "(" + s + ")" : s;
    }
    case CompNode::Tag::Parallel: {
        std::string s = print_comp(c->kids[0], 1) + " || " + print_comp(c->kids[1], 2);
        return ctx > 1 ? "(" + s + ")" : s;
    }
    }
    return "";
}

}  // namespace

std::string print_component(const Component& c) { return print_comp(c, 0); }

}  // namespace rcrs
