#include "rcrs/simplify.hpp"

#include <algorithm>
#include <optional>

namespace rcrs {

namespace {

void conjuncts(const Expr& e, std::vector<Expr>& out) {
    if (e->op == Op::And) {
        for (auto& a : e->args)
            conjuncts(a, out);
    } else {
        out.push_back(e);
    }
}

bool is_num_const(const Expr& e) { return e->op == Op::Const && e->value.tag == Value::Tag::Num; }

std::optional<Expr> fold_arith(const Expr& e) {
    const Expr& a = e->args[0];
    const Expr& b = e->args[1];
    if (!is_num_const(a) || !is_num_const(b))
        return std::nullopt;
    Rational x = a->value.q, y = b->value.q;
    Rational r;
    switch (e->op) {
    case Op::Add: r = x + y; break;
    case Op::Sub: r = x - y; break;
    case Op::Mul: r = x * y; break;
    case Op::Div:
        if (y.numerator() == 0)
            return std::nullopt;
        if (e->type.tag == SemType::Tag::Real)
            r = x / y;
        else {
            if (x.denominator() != 1 || y.denominator() != 1)
                return std::nullopt;
            r = Rational(euclid_div(x.numerator(), y.numerator()));
        }
        break;
    default: return std::nullopt;
    }
    return ex::num(r, e->type);
}

std::optional<bool> fold_cmp(Op op, const Expr& a, const Expr& b) {
    if (a->op != Op::Const || b->op != Op::Const)
        return std::nullopt;
    const Value& x = a->value;
    const Value& y = b->value;
    switch (op) {
    case Op::Eq: return x == y;
    case Op::Ne: return !(x == y);
    default: break;
    }
    if (x.tag != Value::Tag::Num || y.tag != Value::Tag::Num)
        return std::nullopt;
    switch (op) {
    case Op::Lt: return x.q < y.q;
    case Op::Le: return x.q <= y.q;
    case Op::Gt: return x.q > y.q;
    case Op::Ge: return x.q >= y.q;
    default: return std::nullopt;
    }
}

Op negate_cmp(Op op) {
    switch (op) {
    case Op::Eq: return Op::Ne;
    case Op::Ne: return Op::Eq;
    case Op::Lt: return Op::Ge;
    case Op::Le: return Op::Gt;
    case Op::Gt: return Op::Le;
    case Op::Ge: return Op::Lt;
    default: return op;
    }
}

bool is_cmp(Op op) { return op == Op::Eq || op == Op::Ne || op == Op::Lt || op == Op::Le || op == Op::Gt || op == Op::Ge; }

bool complementary(const Expr& a, const Expr& b) {
    if (a->op == Op::Not && equal(a->args[0], b))
        return true;
    if (b->op == Op::Not && equal(b->args[0], a))
        return true;
    if (is_cmp(a->op) && b->op == negate_cmp(a->op) && equal(a->args[0], b->args[0]) && equal(a->args[1], b->args[1]))
        return true;
    return false;
}

Expr flat_junction(Op op, const std::vector<Expr>& xs) {
    bool is_and = op == Op::And;
    std::vector<Expr> out;
    auto push = [&](const Expr& x) {
        for (auto& o : out)
            if (equal(o, x))
                return;
        out.push_back(x);
    };
    for (auto& x : xs) {
        if (x->op == op) {
            for (auto& y : x->args)
                push(y);
        } else {
            push(x);
        }
    }
    std::vector<Expr> kept;
    for (auto& x : out) {
        if (is_const_true(x)) {
            if (is_and)
                continue;
            return ex::tt();
        }
        if (is_const_false(x)) {
            if (!is_and)
                continue;
            return ex::ff();
        }
        kept.push_back(x);
    }
    for (size_t i = 0; i < kept.size(); ++i)
        for (size_t j = i + 1; j < kept.size(); ++j)
            if (complementary(kept[i], kept[j]))
                return is_and ? ex::ff() : ex::tt();
    return is_and ? ex::land(std::move(kept)) : ex::lor(std::move(kept));
}

// Range side condition for substituting `e` into an integer-range variable.
Expr range_guard(const SemType& ty, const Expr& e) {
    if (ty.tag != SemType::Tag::IntRange)
        return ex::tt();
    return ex::land(ex::le(ex::integer(ty.lo), e), ex::le(e, ex::integer(ty.hi)));
}

bool substitutable(const SemType& var_ty, const Expr& e) {
    return same_sort(var_ty, e->type) || (var_ty.tag == SemType::Tag::Real && e->type.is_integral());
}

// If `c` is `y = e` or `e = y` with y not free in e, return e.
std::optional<Expr> defining_term(const Expr& c, const std::string& y, const SemType& ty) {
    if (c->op != Op::Eq)
        return std::nullopt;
    for (int side = 0; side < 2; ++side) {
        const Expr& v = c->args[side];
        const Expr& t = c->args[1 - side];
        if (v->op == Op::Var && v->name == y && !occurs_free(t, y) && substitutable(ty, t))
            return t;
    }
    return std::nullopt;
}

std::optional<Expr> negated_defining_term(const Expr& c, const std::string& y, const SemType& ty) {
    if (c->op == Op::Ne) {
        Expr as_eq = ex::eq(c->args[0], c->args[1]);
        return defining_term(as_eq, y, ty);
    }
    if (c->op == Op::Not)
        return defining_term(c->args[0], y, ty);
    return std::nullopt;
}

std::vector<Expr> conjuncts(const Expr& e) {
    if (e->op == Op::And)
        return e->args;
    return {e};
}

std::vector<Expr> disjuncts(const Expr& e) {
    if (e->op == Op::Or)
        return e->args;
    return {e};
}

std::optional<Expr> rewrite_exists(const Expr& e) {
    const std::string& y = e->name;
    const SemType& ty = e->var_type;
    const Expr& body = e->args[0];
    if (is_const_true(body) || is_const_false(body))
        return body;
    if (!occurs_free(body, y))
        return body;
    // one-point rule
    if (occurs_only_now(body, y)) {
        auto cs = conjuncts(body);
        for (size_t i = 0; i < cs.size(); ++i) {
            auto t = defining_term(cs[i], y, ty);
            if (!t)
                continue;
            std::vector<Expr> rest;
            for (size_t j = 0; j < cs.size(); ++j)
                if (j != i)
                    rest.push_back(cs[j]);
            rest.push_back(range_guard(ty, *t));
            return substitute(ex::land(std::move(rest)), Subst{{y, *t}});
        }
    }
    if (body->op == Op::And) {
        std::vector<Expr> outside, inside;
        for (auto& c : body->args)
            (occurs_free(c, y) ? inside : outside).push_back(c);
        if (!outside.empty()) {
            outside.push_back(ex::exists(y, ty, ex::land(std::move(inside))));
            return ex::land(std::move(outside));
        }
    }
    if (body->op == Op::Or) {
        std::vector<Expr> parts;
        for (auto& d : body->args)
            parts.push_back(ex::exists(y, ty, d));
        return ex::lor(std::move(parts));
    }
    if (body->op == Op::Implies && !occurs_free(body->args[0], y))
        return ex::implies(body->args[0], ex::exists(y, ty, body->args[1]));
    // (exists y: G p) <-> G (exists y: p) for non-temporal p
    if (body->op == Op::Globally && !has_temporal(body->args[0]))
        return ex::globally(ex::exists(y, ty, body->args[0]));
    return std::nullopt;
}

std::optional<Expr> rewrite_forall(const Expr& e) {
    const std::string& y = e->name;
    const SemType& ty = e->var_type;
    const Expr& body = e->args[0];
    if (is_const_true(body) || is_const_false(body))
        return body;
    if (!occurs_free(body, y))
        return body;
    if (occurs_only_now(body, y)) {
        // forall y: (y = t && rest) -> p   ~~>   (rest -> p)[y := t]
        if (body->op == Op::Implies) {
            auto cs = conjuncts(body->args[0]);
            for (size_t i = 0; i < cs.size(); ++i) {
                auto t = defining_term(cs[i], y, ty);
                if (!t)
                    continue;
                std::vector<Expr> rest;
                for (size_t j = 0; j < cs.size(); ++j)
                    if (j != i)
                        rest.push_back(cs[j]);
                rest.push_back(range_guard(ty, *t));
                return substitute(ex::implies(ex::land(std::move(rest)), body->args[1]), Subst{{y, *t}});
            }
        }
        // forall y: y != t || p   ~~>   p[y := t]
        auto ds = disjuncts(body);
        for (size_t i = 0; i < ds.size(); ++i) {
            auto t = negated_defining_term(ds[i], y, ty);
            if (!t)
                continue;
            std::vector<Expr> rest;
            for (size_t j = 0; j < ds.size(); ++j)
                if (j != i)
                    rest.push_back(ds[j]);
            return substitute(ex::implies(range_guard(ty, *t), ex::lor(std::move(rest))), Subst{{y, *t}});
        }
    }
    if (body->op == Op::And) {
        std::vector<Expr> parts;
        for (auto& c : body->args)
            parts.push_back(ex::forall(y, ty, c));
        return ex::land(std::move(parts));
    }
    if (body->op == Op::Or) {
        std::vector<Expr> outside, inside;
        for (auto& d : body->args)
            (occurs_free(d, y) ? inside : outside).push_back(d);
        if (!outside.empty()) {
            outside.push_back(ex::forall(y, ty, ex::lor(std::move(inside))));
            return ex::lor(std::move(outside));
        }
    }
    if (body->op == Op::Implies) {
        if (!occurs_free(body->args[0], y))
            return ex::implies(body->args[0], ex::forall(y, ty, body->args[1]));
        if (!occurs_free(body->args[1], y))
            return ex::implies(ex::exists(y, ty, body->args[0]), body->args[1]);
    }
    // forall y: (p L q) <-> (exists y: p) L q, p non-temporal, y not free in q
    if (body->op == Op::Leads && !has_temporal(body->args[0]) && !occurs_free(body->args[1], y))
        return ex::leads(ex::exists(y, ty, body->args[0]), body->args[1]);
    if (body->op == Op::Globally && !has_temporal(body->args[0]))
        return ex::globally(ex::forall(y, ty, body->args[0]));
    return std::nullopt;
}

Expr rewrite_node(const Expr& e, bool term_ctx) {
    switch (e->op) {
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
        if (auto r = fold_arith(e))
            return *r;
        return e;
    }
    case Op::Neg: {
        const Expr& a = e->args[0];
        if (is_num_const(a))
            return ex::num(-a->value.q, e->type);
        if (a->op == Op::Neg)
            return a->args[0];
        return e;
    }
    case Op::Next:
        if (e->args[0]->op == Op::Const)
            return e->args[0];
        return e;
    case Op::Ite:
        if (is_const_true(e->args[0]))
            return e->args[1];
        if (is_const_false(e->args[0]))
            return e->args[2];
        return e;
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge: {
        if (auto r = fold_cmp(e->op, e->args[0], e->args[1]))
            return ex::boolean(*r);
        if (!term_ctx && equal(e->args[0], e->args[1])) {
            bool refl = e->op == Op::Eq || e->op == Op::Le || e->op == Op::Ge;
            return ex::boolean(refl);
        }
        return e;
    }
    default: break;
    }
    if (term_ctx) {
        // inside terms only ground folding is allowed (keeps term dependencies intact)
        if (e->op == Op::Not && e->args[0]->op == Op::Const)
            return ex::boolean(!e->args[0]->value.b);
        return e;
    }
    switch (e->op) {
    case Op::Not: {
        const Expr& a = e->args[0];
        if (a->op == Op::Const)
            return ex::boolean(!a->value.b);
        if (a->op == Op::Not)
            return a->args[0];
        if (is_cmp(a->op))
            return ex::cmp(negate_cmp(a->op), a->args[0], a->args[1]);
        return e;
    }
    case Op::And:
    case Op::Or: {
        Expr r = flat_junction(e->op, e->args);
        return r;
    }
    case Op::Implies: {
        const Expr& a = e->args[0];
        const Expr& b = e->args[1];
        if (is_const_true(a))
            return b;
        if (is_const_false(a) || is_const_true(b))
            return ex::tt();
        if (is_const_false(b))
            return ex::lnot(a);
        if (equal(a, b))
            return ex::tt();
        std::vector<Expr> ca, cb;
        conjuncts(a, ca);
        conjuncts(b, cb);
        if (std::all_of(cb.begin(), cb.end(), [&](const Expr& c) {
                return std::any_of(ca.begin(), ca.end(), [&](const Expr& d) { return equal(c, d); });
            }))
            return ex::tt();
        return e;
    }
    case Op::Iff: {
        const Expr& a = e->args[0];
        const Expr& b = e->args[1];
        if (is_const_true(a))
            return b;
        if (is_const_true(b))
            return a;
        if (is_const_false(a))
            return ex::lnot(b);
        if (is_const_false(b))
            return ex::lnot(a);
        if (equal(a, b))
            return ex::tt();
        return e;
    }
    case Op::Globally:
    case Op::Finally: {
        const Expr& a = e->args[0];
        if (a->op == Op::Const)
            return a;
        if (a->op == e->op)
            return a;
        return e;
    }
    case Op::Until: {
        const Expr& a = e->args[0];
        const Expr& b = e->args[1];
        if (b->op == Op::Const)
            return b;
        if (is_const_false(a))
            return b;
        if (is_const_true(a))
            return ex::finally(b);
        return e;
    }
    case Op::Leads: {
        const Expr& a = e->args[0];
        const Expr& b = e->args[1];
        if (b->op == Op::Const)
            return b;
        if (is_const_true(a))
            return ex::globally(b);
        if (is_const_false(a))
            return b;
        if (equal(a, b))
            return ex::globally(a);
        return e;
    }
    case Op::Exists:
        if (auto r = rewrite_exists(e))
            return *r;
        return e;
    case Op::Forall:
        if (auto r = rewrite_forall(e))
            return *r;
        return e;
    default: return e;
    }
}

Expr pass(const Expr& e, bool term_ctx) {
    if (e->args.empty())
        return e;
    bool child_term = term_ctx || e->type.tag != SemType::Tag::Bool;
    std::vector<Expr> args;
    args.reserve(e->args.size());
    bool changed = false;
    for (auto& a : e->args) {
        args.push_back(pass(a, child_term));
        changed = changed || args.back() != a;
    }
    Expr n = changed ? ex::rebuild(e, std::move(args)) : e;
    return rewrite_node(n, term_ctx);
}

}  // namespace

Expr simplify_once(const Expr& e) { return pass(e, e->type.tag != SemType::Tag::Bool); }

Expr simplify(const Expr& e) {
    Expr cur = e;
    for (int i = 0; i < 64; ++i) {
        Expr nxt = simplify_once(cur);
        if (nxt == cur || equal(nxt, cur))
            return nxt;
        cur = nxt;
    }
    return cur;
}

}  // namespace rcrs
