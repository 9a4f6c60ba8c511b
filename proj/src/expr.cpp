#include "rcrs/expr.hpp"

#include <functional>
#include <sstream>

namespace rcrs {

namespace {

Expr make(Op op, SemType ty, std::vector<Expr> args) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->type = std::move(ty);
    n->args = std::move(args);
    return n;
}

void require_bool(const Expr& e, const char* where) {
    if (e->type.tag != SemType::Tag::Bool)
        throw Error(ErrorCode::TypeMismatch, std::string(where) + " expects a formula, got " + e->type.str() + " in " + to_string(e));
}

void require_numeric(const Expr& e, const char* where) {
    if (!e->type.is_numeric())
        throw Error(ErrorCode::TypeMismatch, std::string(where) + " expects a number, got " + e->type.str() + " in " + to_string(e));
}

// An integer literal next to a real operand becomes a real literal.
void adapt_literals(Expr& a, Expr& b) {
    auto lift = [](Expr& lit, const Expr& other) {
        if (lit->op == Op::Const && lit->type.is_integral() && other->type.tag == SemType::Tag::Real)
            lit = ex::num(lit->value.q, SemType::real());
    };
    lift(a, b);
    lift(b, a);
}

SemType numeric_join(const SemType& a, const SemType& b) {
    if (a.tag == SemType::Tag::Real || b.tag == SemType::Tag::Real)
        return SemType::real();
    return SemType::integer();
}

}  // namespace

namespace ex {

Expr var(const std::string& name, const SemType& ty) {
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    n->type = ty;
    n->name = name;
    return n;
}

Expr var(const Var& v) { return var(v.name, v.type); }

Expr primed(const std::string& name, const SemType& ty) {
    auto n = std::make_shared<Node>();
    n->op = Op::Primed;
    n->type = ty;
    n->name = name;
    return n;
}

Expr primed(const Var& v) { return primed(v.name, v.type); }

Expr next(const Expr& t) { return make(Op::Next, t->type, {t}); }

Expr constant(const Value& v, const SemType& ty) {
    auto n = std::make_shared<Node>();
    n->op = Op::Const;
    n->type = ty;
    n->value = v;
    return n;
}

Expr boolean(bool b) { return constant(Value::boolean(b), SemType::boolean()); }
Expr tt() {
    static const Expr t = boolean(true);
    return t;
}
Expr ff() {
    static const Expr f = boolean(false);
    return f;
}
Expr integer(long long v) { return constant(Value::integer(v), SemType::integer()); }
Expr real(Rational q) { return constant(Value::number(q), SemType::real()); }

Expr num(Rational q, const SemType& ty) {
    if (ty.tag == SemType::Tag::Real)
        return real(q);
    if (q.denominator() != 1)
        throw Error(ErrorCode::TypeMismatch, "non-integral literal " + rational_str(q) + " of type " + ty.str());
    return constant(Value::number(q), SemType::integer());
}

Expr symbol(const std::string& sym, const SemType& enum_ty) {
    for (size_t i = 0; i < enum_ty.values.size(); ++i)
        if (enum_ty.values[i] == sym)
            return constant(Value::symbol(sym, (int)i), enum_ty);
    throw Error(ErrorCode::TypeMismatch, sym + " is not a value of " + enum_ty.str());
}

Expr arith(Op op, const Expr& a0, const Expr& b0) {
    Expr a = a0, b = b0;
    adapt_literals(a, b);
    require_numeric(a, "arithmetic");
    require_numeric(b, "arithmetic");
    return make(op, numeric_join(a->type, b->type), {a, b});
}

Expr add(const Expr& a, const Expr& b) { return arith(Op::Add, a, b); }
Expr sub(const Expr& a, const Expr& b) { return arith(Op::Sub, a, b); }
Expr mul(const Expr& a, const Expr& b) { return arith(Op::Mul, a, b); }
Expr div(const Expr& a, const Expr& b) { return arith(Op::Div, a, b); }

Expr neg(const Expr& a) {
    require_numeric(a, "negation");
    return make(Op::Neg, a->type.tag == SemType::Tag::Real ? SemType::real() : SemType::integer(), {a});
}

Expr ite(const Expr& c, const Expr& a0, const Expr& b0) {
    require_bool(c, "if-then-else condition");
    Expr a = a0, b = b0;
    adapt_literals(a, b);
    SemType ty;
    if (a->type == b->type)
        ty = a->type;
    else if (a->type.is_numeric() && b->type.is_numeric())
        ty = numeric_join(a->type, b->type);
    else
        throw Error(ErrorCode::TypeMismatch, "if-then-else branches differ: " + a->type.str() + " vs " + b->type.str());
    return make(Op::Ite, ty, {c, a, b});
}

Expr cmp(Op op, const Expr& a0, const Expr& b0) {
    Expr a = a0, b = b0;
    adapt_literals(a, b);
    if (op == Op::Eq || op == Op::Ne) {
        if (!same_sort(a->type, b->type) && !(a->type.is_numeric() && b->type.is_numeric()))
            throw Error(ErrorCode::TypeMismatch, "cannot compare " + a->type.str() + " with " + b->type.str() + " in " +
                                                     to_string(a) + " = " + to_string(b));
    } else {
        require_numeric(a, "comparison");
        require_numeric(b, "comparison");
    }
    return make(op, SemType::boolean(), {a, b});
}

Expr eq(const Expr& a, const Expr& b) { return cmp(Op::Eq, a, b); }
Expr ne(const Expr& a, const Expr& b) { return cmp(Op::Ne, a, b); }
Expr lt(const Expr& a, const Expr& b) { return cmp(Op::Lt, a, b); }
Expr le(const Expr& a, const Expr& b) { return cmp(Op::Le, a, b); }
Expr gt(const Expr& a, const Expr& b) { return cmp(Op::Gt, a, b); }
Expr ge(const Expr& a, const Expr& b) { return cmp(Op::Ge, a, b); }

Expr lnot(const Expr& a) {
    require_bool(a, "!");
    return make(Op::Not, SemType::boolean(), {a});
}

Expr land(std::vector<Expr> xs) {
    if (xs.empty())
        return tt();
    if (xs.size() == 1)
        return xs[0];
    for (auto& x : xs)
        require_bool(x, "&&");
    return make(Op::And, SemType::boolean(), std::move(xs));
}

Expr land(const Expr& a, const Expr& b) { return land(std::vector<Expr>{a, b}); }

Expr lor(std::vector<Expr> xs) {
    if (xs.empty())
        return ff();
    if (xs.size() == 1)
        return xs[0];
    for (auto& x : xs)
        require_bool(x, "||");
    return make(Op::Or, SemType::boolean(), std::move(xs));
}

Expr lor(const Expr& a, const Expr& b) { return lor(std::vector<Expr>{a, b}); }

Expr implies(const Expr& a, const Expr& b) {
    require_bool(a, "->");
    require_bool(b, "->");
    return make(Op::Implies, SemType::boolean(), {a, b});
}

Expr iff(const Expr& a, const Expr& b) {
    require_bool(a, "<->");
    require_bool(b, "<->");
    return make(Op::Iff, SemType::boolean(), {a, b});
}

static Expr binder(Op op, const std::string& name, const SemType& ty, const Expr& body) {
    require_bool(body, "quantifier body");
    auto n = std::make_shared<Node>();
    n->op = op;
    n->type = SemType::boolean();
    n->name = name;
    n->var_type = ty;
    n->args = {body};
    return n;
}

Expr forall(const std::string& name, const SemType& ty, const Expr& body) { return binder(Op::Forall, name, ty, body); }
Expr exists(const std::string& name, const SemType& ty, const Expr& body) { return binder(Op::Exists, name, ty, body); }

Expr forall(const VarList& vs, const Expr& body) {
    Expr r = body;
    for (auto it = vs.rbegin(); it != vs.rend(); ++it)
        r = forall(it->name, it->type, r);
    return r;
}

Expr exists(const VarList& vs, const Expr& body) {
    Expr r = body;
    for (auto it = vs.rbegin(); it != vs.rend(); ++it)
        r = exists(it->name, it->type, r);
    return r;
}

Expr until(const Expr& a, const Expr& b) {
    require_bool(a, "U");
    require_bool(b, "U");
    return make(Op::Until, SemType::boolean(), {a, b});
}

Expr leads(const Expr& a, const Expr& b) {
    require_bool(a, "L");
    require_bool(b, "L");
    return make(Op::Leads, SemType::boolean(), {a, b});
}

Expr globally(const Expr& a) {
    require_bool(a, "G");
    return make(Op::Globally, SemType::boolean(), {a});
}

Expr finally(const Expr& a) {
    require_bool(a, "F");
    return make(Op::Finally, SemType::boolean(), {a});
}

Expr rebuild(const Expr& e, std::vector<Expr> args) {
    switch (e->op) {
    case Op::Var:
    case Op::Primed:
    case Op::Const: return e;
    case Op::Next: return next(args[0]);
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: return arith(e->op, args[0], args[1]);
    case Op::Neg: return neg(args[0]);
    case Op::Ite: return ite(args[0], args[1], args[2]);
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge: return cmp(e->op, args[0], args[1]);
    case Op::Not: return lnot(args[0]);
    case Op::And: return land(std::move(args));
    case Op::Or: return lor(std::move(args));
    case Op::Implies: return implies(args[0], args[1]);
    case Op::Iff: return iff(args[0], args[1]);
    case Op::Forall:
    case Op::Exists: return binder(e->op, e->name, e->var_type, args[0]);
    case Op::Until: return until(args[0], args[1]);
    case Op::Leads: return leads(args[0], args[1]);
    case Op::Globally: return globally(args[0]);
    case Op::Finally: return finally(args[0]);
    }
    return e;
}

Expr rebind(const Expr& b, const std::string& name, const Expr& body) { return binder(b->op, name, b->var_type, body); }

Expr tuple_eq(const std::vector<Expr>& lhs, const std::vector<Expr>& rhs) {
    if (lhs.size() != rhs.size())
        throw Error(ErrorCode::TypeMismatch, "tuple arity mismatch");
    std::vector<Expr> cs;
    for (size_t i = 0; i < lhs.size(); ++i)
        cs.push_back(eq(lhs[i], rhs[i]));
    return land(std::move(cs));
}

}  // namespace ex

bool is_binder(Op op) { return op == Op::Forall || op == Op::Exists; }

bool is_temporal_op(Op op) {
    return op == Op::Until || op == Op::Leads || op == Op::Globally || op == Op::Finally || op == Op::Next;
}

bool is_const_true(const Expr& e) { return e->op == Op::Const && e->value.tag == Value::Tag::Bool && e->value.b; }
bool is_const_false(const Expr& e) { return e->op == Op::Const && e->value.tag == Value::Tag::Bool && !e->value.b; }

bool equal(const Expr& a, const Expr& b) {
    if (a == b)
        return true;
    if (a->op != b->op || a->args.size() != b->args.size())
        return false;
    switch (a->op) {
    case Op::Var:
    case Op::Primed:
        if (a->name != b->name || !same_sort(a->type, b->type))
            return false;
        break;
    case Op::Const:
        if (!(a->value == b->value))
            return false;
        break;
    case Op::Forall:
    case Op::Exists:
        if (a->name != b->name || !(a->var_type == b->var_type))
            return false;
        break;
    default: break;
    }
    for (size_t i = 0; i < a->args.size(); ++i)
        if (!equal(a->args[i], b->args[i]))
            return false;
    return true;
}

namespace {

bool alpha_rec(const Expr& a, const Expr& b, std::vector<std::pair<std::string, std::string>>& env) {
    if (a->op != b->op || a->args.size() != b->args.size())
        return false;
    switch (a->op) {
    case Op::Var: {
        for (auto it = env.rbegin(); it != env.rend(); ++it) {
            bool la = it->first == a->name, lb = it->second == b->name;
            if (la || lb)
                return la && lb;
        }
        return a->name == b->name && same_sort(a->type, b->type);
    }
    case Op::Primed: return a->name == b->name && same_sort(a->type, b->type);
    case Op::Const: return a->value == b->value;
    case Op::Forall:
    case Op::Exists: {
        if (!(a->var_type == b->var_type))
            return false;
        env.emplace_back(a->name, b->name);
        bool r = alpha_rec(a->args[0], b->args[0], env);
        env.pop_back();
        return r;
    }
    default: break;
    }
    for (size_t i = 0; i < a->args.size(); ++i)
        if (!alpha_rec(a->args[i], b->args[i], env))
            return false;
    return true;
}

void free_rec(const Expr& e, std::vector<std::string>& bound, FreeVars& out, bool under_temporal) {
    auto is_bound = [&](const std::string& n) {
        for (auto& b : bound)
            if (b == n)
                return true;
        return false;
    };
    switch (e->op) {
    case Op::Var:
        if (!is_bound(e->name))
            out.vars.insert(Var{e->name, e->type});
        return;
    case Op::Primed:
        out.uses_primed = true;
        out.vars.insert(Var{e->name, e->type});
        return;
    case Op::Const: return;
    case Op::Forall:
    case Op::Exists:
        bound.push_back(e->name);
        free_rec(e->args[0], bound, out, under_temporal);
        bound.pop_back();
        return;
    default: break;
    }
    if (is_temporal_op(e->op))
        out.uses_temporal = true;
    for (auto& a : e->args)
        free_rec(a, bound, out, under_temporal || is_temporal_op(e->op));
}

void names_rec(const Expr& e, std::vector<std::string>& bound, std::set<std::string>& out, bool primed) {
    switch (e->op) {
    case Op::Var: {
        if (primed)
            return;
        for (auto& b : bound)
            if (b == e->name)
                return;
        out.insert(e->name);
        return;
    }
    case Op::Primed:
        if (primed)
            out.insert(e->name);
        return;
    case Op::Forall:
    case Op::Exists:
        bound.push_back(e->name);
        names_rec(e->args[0], bound, out, primed);
        bound.pop_back();
        return;
    default:
        for (auto& a : e->args)
            names_rec(a, bound, out, primed);
    }
}

bool only_now_rec(const Expr& e, const std::string& name, bool under) {
    switch (e->op) {
    case Op::Var: return !(under && e->name == name);
    case Op::Primed:
    case Op::Const: return true;
    case Op::Forall:
    case Op::Exists:
        if (e->name == name)
            return true;
        return only_now_rec(e->args[0], name, under);
    default: break;
    }
    bool u = under || is_temporal_op(e->op);
    for (auto& a : e->args)
        if (!only_now_rec(a, name, u))
            return false;
    return true;
}

}  // namespace

bool alpha_equal(const Expr& a, const Expr& b) {
    std::vector<std::pair<std::string, std::string>> env;
    return alpha_rec(a, b, env);
}

FreeVars free_vars(const Expr& e) {
    FreeVars out;
    std::vector<std::string> bound;
    free_rec(e, bound, out, false);
    return out;
}

std::set<std::string> free_names(const Expr& e) {
    std::set<std::string> out;
    std::vector<std::string> bound;
    names_rec(e, bound, out, false);
    return out;
}

std::set<std::string> free_primed(const Expr& e) {
    std::set<std::string> out;
    std::vector<std::string> bound;
    names_rec(e, bound, out, true);
    return out;
}

bool occurs_free(const Expr& e, const std::string& name) { return free_names(e).count(name) > 0; }

bool has_temporal(const Expr& e) {
    if (is_temporal_op(e->op))
        return true;
    for (auto& a : e->args)
        if (has_temporal(a))
            return true;
    return false;
}

bool has_primed(const Expr& e) {
    if (e->op == Op::Primed)
        return true;
    for (auto& a : e->args)
        if (has_primed(a))
            return true;
    return false;
}

bool occurs_only_now(const Expr& e, const std::string& name) { return only_now_rec(e, name, false); }

void collect_names(const Expr& e, std::set<std::string>& out) {
    if (e->op == Op::Var || e->op == Op::Primed || is_binder(e->op))
        out.insert(e->name);
    for (auto& a : e->args)
        collect_names(a, out);
}

int next_depth(const Expr& e) {
    int d = 0;
    for (auto& a : e->args)
        d = std::max(d, next_depth(a));
    return e->op == Op::Next ? d + 1 : d;
}

std::string primed_key(const std::string& name) { return name + "'"; }

std::string fresh_name(const std::string& base, const std::set<std::string>& used) {
    if (!used.count(base))
        return base;
    for (int i = 0;; ++i) {
        std::string c = base + std::to_string(i);
        if (!used.count(c))
            return c;
    }
}

namespace {

Expr subst_rec(const Expr& e, const Subst& s) {
    if (s.empty())
        return e;
    switch (e->op) {
    case Op::Var:
    case Op::Primed: {
        auto it = s.find(e->op == Op::Var ? e->name : primed_key(e->name));
        if (it == s.end())
            return e;
        const Expr& r = it->second;
        bool ok = same_sort(e->type, r->type) || (e->type.tag == SemType::Tag::Real && r->type.is_integral());
        if (!ok)
            throw Error(ErrorCode::TypeMismatch, "cannot substitute " + to_string(r) + " : " + r->type.str() + " for " +
                                                     e->name + " : " + e->type.str());
        return r;
    }
    case Op::Const: return e;
    case Op::Forall:
    case Op::Exists: {
        Subst inner;
        const Expr& body = e->args[0];
        std::set<std::string> body_free = free_names(body);
        std::set<std::string> body_primed = free_primed(body);
        for (auto& [k, v] : s) {
            if (k == e->name)
                continue;
            bool is_primed = !k.empty() && k.back() == '\'';
            bool relevant = is_primed ? body_primed.count(k.substr(0, k.size() - 1)) > 0 : body_free.count(k) > 0;
            if (relevant)
                inner.emplace(k, v);
        }
        if (inner.empty())
            return e;
        bool capture = false;
        for (auto& [k, v] : inner)
            if (occurs_free(v, e->name)) {
                capture = true;
                break;
            }
        if (!capture)
            return ex::rebind(e, e->name, subst_rec(body, inner));
        std::set<std::string> used;
        collect_names(body, used);
        for (auto& [k, v] : inner) {
            used.insert(k);
            collect_names(v, used);
        }
        std::string nn = fresh_name(e->name, used);
        inner.emplace(e->name, ex::var(nn, e->var_type));
        return ex::rebind(e, nn, subst_rec(body, inner));
    }
    default: break;
    }
    std::vector<Expr> args;
    args.reserve(e->args.size());
    bool changed = false;
    for (auto& a : e->args) {
        args.push_back(subst_rec(a, s));
        changed = changed || args.back() != a;
    }
    return changed ? ex::rebuild(e, std::move(args)) : e;
}

}  // namespace

Expr substitute(const Expr& e, const Subst& s) { return subst_rec(e, s); }

Expr rename_vars(const Expr& e, const std::map<std::string, std::string>& m) {
    // Types are read from the occurrences, so build the substitution lazily.
    std::function<Expr(const Expr&, std::set<std::string>&)> go = [&](const Expr& n, std::set<std::string>& bound) -> Expr {
        switch (n->op) {
        case Op::Var: {
            if (bound.count(n->name))
                return n;
            auto it = m.find(n->name);
            return it == m.end() ? n : ex::var(it->second, n->type);
        }
        case Op::Primed: {
            auto it = m.find(n->name);
            return it == m.end() ? n : ex::primed(it->second, n->type);
        }
        case Op::Const: return n;
        case Op::Forall:
        case Op::Exists: {
            // a binder whose name collides with a rename target gets renamed itself
            std::set<std::string> targets;
            for (auto& [k, v] : m)
                targets.insert(v);
            if (targets.count(n->name) && !bound.count(n->name)) {
                std::set<std::string> used;
                collect_names(n->args[0], used);
                for (auto& [k, v] : m) {
                    used.insert(k);
                    used.insert(v);
                }
                std::string nn = fresh_name(n->name, used);
                Expr body = substitute(n->args[0], Subst{{n->name, ex::var(nn, n->var_type)}});
                bool added = bound.insert(nn).second;
                Expr r = ex::rebind(n, nn, go(body, bound));
                if (added)
                    bound.erase(nn);
                return r;
            }
            bool added = bound.insert(n->name).second;
            Expr r = ex::rebind(n, n->name, go(n->args[0], bound));
            if (added)
                bound.erase(n->name);
            return r;
        }
        default: break;
        }
        std::vector<Expr> args;
        for (auto& a : n->args)
            args.push_back(go(a, bound));
        return ex::rebuild(n, std::move(args));
    };
    std::set<std::string> bound;
    return go(e, bound);
}

Expr apply_next(const Expr& e) {
    std::function<Expr(const Expr&, std::set<std::string>&)> go = [&](const Expr& n, std::set<std::string>& bound) -> Expr {
        switch (n->op) {
        case Op::Var: return bound.count(n->name) ? n : ex::next(n);
        case Op::Primed: throw Error(ErrorCode::PrimedInTemporal, "primed variable " + n->name + "' in temporal formula");
        case Op::Const: return n;
        case Op::Forall:
        case Op::Exists: {
            bool added = bound.insert(n->name).second;
            Expr r = ex::rebind(n, n->name, go(n->args[0], bound));
            if (added)
                bound.erase(n->name);
            return r;
        }
        default: break;
        }
        std::vector<Expr> args;
        for (auto& a : n->args)
            args.push_back(go(a, bound));
        return ex::rebuild(n, std::move(args));
    };
    std::set<std::string> bound;
    return go(e, bound);
}

Expr primes_to_next(const Expr& e, const VarList& vs) {
    Subst s;
    for (auto& v : vs)
        s[primed_key(v.name)] = ex::next(ex::var(v));
    return substitute(e, s);
}

// ---------------------------------------------------------------- printing

namespace {

int prec(const Expr& e) {
    switch (e->op) {
    case Op::Forall:
    case Op::Exists: return 0;
    case Op::Iff: return 1;
    case Op::Implies: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    case Op::Until:
    case Op::Leads: return 5;
    case Op::Not:
    case Op::Globally:
    case Op::Finally: return 6;
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge: return 7;
    case Op::Add:
    case Op::Sub: return 8;
    case Op::Mul:
    case Op::Div: return 9;
    case Op::Neg: return 10;
    default: return 11;
    }
}

const char* op_text(Op op) {
    switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Eq: return " = ";
    case Op::Ne: return " != ";
    case Op::Lt: return " < ";
    case Op::Le: return " <= ";
    case Op::Gt: return " > ";
    case Op::Ge: return " >= ";
    case Op::And: return " && ";
    case Op::Or: return " || ";
    case Op::Implies: return " -> ";
    case Op::Iff: return " <-> ";
    case Op::Until: return " U ";
    case Op::Leads: return " L ";
    default: return "?";
    }
}

std::string const_text(const Expr& e) {
    const Value& v = e->value;
    if (v.tag == Value::Tag::Num && e->type.tag == SemType::Tag::Real && v.q.denominator() != 1) {
        std::string s = rational_str(v.q);
        if (s.find('/') != std::string::npos)
            return "(" + std::to_string(v.q.numerator()) + ".0/" + std::to_string(v.q.denominator()) + ".0)";
        return s;
    }
    return v.str();
}

void print(std::ostream& os, const Expr& e, int ctx) {
    int p = prec(e);
    bool paren = p < ctx;
    if (paren)
        os << "(";
    auto arith_child = [&](const Expr& c, int cp) {
        bool negc = c->op == Op::Neg || (c->op == Op::Const && c->value.tag == Value::Tag::Num && c->value.q < 0);
        if (negc) {
            os << "(";
            print(os, c, 0);
            os << ")";
        } else {
            print(os, c, cp);
        }
    };
    switch (e->op) {
    case Op::Var: os << e->name; break;
    case Op::Primed: os << e->name << "'"; break;
    case Op::Const: os << const_text(e); break;
    case Op::Next:
        os << "@";
        print(os, e->args[0], 11);
        break;
    case Op::Add:
    case Op::Sub:
        arith_child(e->args[0], 8);
        os << op_text(e->op);
        arith_child(e->args[1], 9);
        break;
    case Op::Mul:
    case Op::Div:
        arith_child(e->args[0], 9);
        os << op_text(e->op);
        arith_child(e->args[1], 10);
        break;
    case Op::Neg:
        os << "-";
        print(os, e->args[0], 11);
        break;
    case Op::Ite:
        os << "(if ";
        print(os, e->args[0], 0);
        os << " then ";
        print(os, e->args[1], 0);
        os << " else ";
        print(os, e->args[2], 0);
        os << ")";
        break;
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
        print(os, e->args[0], 8);
        os << op_text(e->op);
        print(os, e->args[1], 8);
        break;
    case Op::Not:
        os << "!";
        print(os, e->args[0], 6);
        break;
    case Op::Globally:
    case Op::Finally:
        os << (e->op == Op::Globally ? "G " : "F ");
        print(os, e->args[0], 6);
        break;
    case Op::And:
    case Op::Or:
        for (size_t i = 0; i < e->args.size(); ++i) {
            if (i)
                os << op_text(e->op);
            print(os, e->args[i], p + 1);
        }
        break;
    case Op::Implies:
        print(os, e->args[0], 3);
        os << op_text(e->op);
        print(os, e->args[1], 2);
        break;
    case Op::Iff:
        print(os, e->args[0], 2);
        os << op_text(e->op);
        print(os, e->args[1], 2);
        break;
    case Op::Until:
    case Op::Leads:
        print(os, e->args[0], 6);
        os << op_text(e->op);
        print(os, e->args[1], 5);
        break;
    case Op::Forall:
    case Op::Exists:
        os << (e->op == Op::Forall ? "forall " : "exists ") << e->name << ":" << e->var_type.str() << " . ";
        print(os, e->args[0], 0);
        break;
    }
    if (paren)
        os << ")";
}

}  // namespace

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print(os, e, 0);
    return os.str();
}

}  // namespace rcrs
