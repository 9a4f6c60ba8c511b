#include "rcrs/eval.hpp"

#include <cmath>
#include <numeric>

namespace rcrs {

const Value* Env::find(const std::string& key) const {
    for (auto it = slots_.rbegin(); it != slots_.rend(); ++it)
        if (it->first == key)
            return &it->second;
    return nullptr;
}

Value apply_arith(Op op, const Value& a, const Value& b, bool integral) {
    const Rational& x = a.q;
    const Rational& y = b.q;
    switch (op) {
    case Op::Add: return Value::number(x + y);
    case Op::Sub: return Value::number(x - y);
    case Op::Mul: return Value::number(x * y);
    case Op::Div:
        if (y.numerator() == 0)
            return Value::number(Rational(0));
        if (integral)
            return Value::integer(euclid_div(x.numerator(), y.numerator()));
        return Value::number(x / y);
    default: throw Error(ErrorCode::TypeMismatch, "not an arithmetic operator");
    }
}

bool apply_cmp(Op op, const Value& a, const Value& b) {
    switch (op) {
    case Op::Eq: return a == b;
    case Op::Ne: return a != b;
    case Op::Lt: return a.q < b.q;
    case Op::Le: return a.q <= b.q;
    case Op::Gt: return a.q > b.q;
    case Op::Ge: return a.q >= b.q;
    default: throw Error(ErrorCode::TypeMismatch, "not a comparison");
    }
}

namespace {

bool is_cmp(Op op) { return op == Op::Eq || op == Op::Ne || op == Op::Lt || op == Op::Le || op == Op::Gt || op == Op::Ge; }

bool is_arith(Op op) { return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div; }

}  // namespace

Value eval_term(const Expr& e, const Env& env, const FiniteDomain& dom) {
    switch (e->op) {
    case Op::Const: return e->value;
    case Op::Var:
    case Op::Primed: {
        const Value* v = env.find(e->op == Op::Var ? e->name : primed_key(e->name));
        if (!v)
            throw Error(ErrorCode::UnboundVariable, "no value for " + (e->op == Op::Var ? e->name : e->name + "'"));
        return *v;
    }
    case Op::Neg: return Value::number(-eval_term(e->args[0], env, dom).q);
    case Op::Ite: {
        Env& m = const_cast<Env&>(env);
        return eval_formula(e->args[0], m, dom) ? eval_term(e->args[1], env, dom) : eval_term(e->args[2], env, dom);
    }
    default:
        if (is_arith(e->op))
            return apply_arith(e->op, eval_term(e->args[0], env, dom), eval_term(e->args[1], env, dom),
                               e->type.is_integral());
        if (e->type.tag == SemType::Tag::Bool)
            return Value::boolean(eval_formula(e, const_cast<Env&>(env), dom));
        throw Error(ErrorCode::NonTemporalMisuse, "cannot evaluate " + to_string(e) + " at a single state");
    }
}

bool eval_formula(const Expr& f, Env& env, const FiniteDomain& dom) {
    switch (f->op) {
    case Op::Const: return f->value.b;
    case Op::Var:
    case Op::Primed:
    case Op::Ite: return eval_term(f, env, dom).b;
    case Op::Not: return !eval_formula(f->args[0], env, dom);
    case Op::And:
        for (auto& a : f->args)
            if (!eval_formula(a, env, dom))
                return false;
        return true;
    case Op::Or:
        for (auto& a : f->args)
            if (eval_formula(a, env, dom))
                return true;
        return false;
    case Op::Implies: return !eval_formula(f->args[0], env, dom) || eval_formula(f->args[1], env, dom);
    case Op::Iff: return eval_formula(f->args[0], env, dom) == eval_formula(f->args[1], env, dom);
    case Op::Forall:
    case Op::Exists: {
        bool all = f->op == Op::Forall;
        for (auto& v : dom.values(f->var_type)) {
            env.push(f->name, v);
            bool r = eval_formula(f->args[0], env, dom);
            env.pop();
            if (all && !r)
                return false;
            if (!all && r)
                return true;
        }
        return all;
    }
    default:
        if (is_cmp(f->op))
            return apply_cmp(f->op, eval_term(f->args[0], env, dom), eval_term(f->args[1], env, dom));
        throw Error(ErrorCode::NonTemporalMisuse, "temporal operator in first-order evaluation: " + to_string(f));
    }
}

const Value& LassoWord::at(long long i) const {
    if (i < (long long)stem.size())
        return stem[i];
    return loop[(i - stem.size()) % loop.size()];
}

std::string LassoWord::str() const {
    std::string s = "stem(";
    for (size_t i = 0; i < stem.size(); ++i)
        s += (i ? "," : "") + stem[i].str();
    s += ") loop(";
    for (size_t i = 0; i < loop.size(); ++i)
        s += (i ? "," : "") + loop[i].str();
    return s + ")";
}

namespace {

void all_sequences(const std::vector<Value>& vals, int len, std::vector<std::vector<Value>>& out) {
    std::vector<size_t> idx(len, 0);
    if (vals.empty())
        return;
    while (true) {
        std::vector<Value> s;
        for (int i = 0; i < len; ++i)
            s.push_back(vals[idx[i]]);
        out.push_back(std::move(s));
        int i = len - 1;
        while (i >= 0 && ++idx[i] == vals.size())
            idx[i--] = 0;
        if (i < 0)
            break;
    }
}

bool primitive_loop(const std::vector<Value>& l) {
    size_t n = l.size();
    for (size_t p = 1; p < n; ++p) {
        if (n % p)
            continue;
        bool rep = true;
        for (size_t i = p; i < n && rep; ++i)
            rep = l[i] == l[i - p];
        if (rep)
            return false;
    }
    return true;
}

}  // namespace

std::vector<LassoWord> lasso_family(const std::vector<Value>& vals, int max_stem, int max_loop) {
    std::vector<LassoWord> out;
    for (int total = 1; total <= max_stem + max_loop; ++total) {
        for (int sl = 0; sl <= max_stem; ++sl) {
            int ll = total - sl;
            if (ll < 1 || ll > max_loop)
                continue;
            std::vector<std::vector<Value>> stems, loops;
            all_sequences(vals, sl, stems);
            all_sequences(vals, ll, loops);
            for (auto& s : stems)
                for (auto& l : loops) {
                    if (!primitive_loop(l))
                        continue;
                    // stem ending in the loop's last letter is a shorter word rotated
                    if (!s.empty() && s.back() == l.back())
                        continue;
                    out.push_back(LassoWord{s, l});
                }
        }
    }
    return out;
}

namespace {

Tri tri_not(Tri a) { return a == Tri::Unknown ? a : (a == Tri::True ? Tri::False : Tri::True); }
Tri tri_and(Tri a, Tri b) {
    if (a == Tri::False || b == Tri::False)
        return Tri::False;
    if (a == Tri::True && b == Tri::True)
        return Tri::True;
    return Tri::Unknown;
}
Tri tri_or(Tri a, Tri b) { return tri_not(tri_and(tri_not(a), tri_not(b))); }
Tri tri_of(bool b) { return b ? Tri::True : Tri::False; }

struct V {
    Tri d;
    bool b;
};

V v_not(V a) { return {tri_not(a.d), !a.b}; }
V v_and(V a, V b) { return {tri_and(a.d, b.d), a.b && b.b}; }
V v_or(V a, V b) { return {tri_or(a.d, b.d), a.b || b.b}; }

struct Binding {
    std::string name;
    const LassoWord* word;
    long long offset;
};

class LassoEval {
public:
    LassoEval(const Expr& root, const FiniteDomain& dom, const LassoBounds& bounds)
        : root_(root), dom_(dom), bounds_(bounds) {}

    std::vector<Binding> env;

    V formula(const Expr& f, long long pos) {
        size_t& w = bounds_.shared_work ? *bounds_.shared_work : work_;
        if (++w > bounds_.cap)
            throw Error(ErrorCode::ExplosionGuard, "lasso evaluation exceeded " + std::to_string(bounds_.cap) + " steps");
        switch (f->op) {
        case Op::Const: return {tri_of(f->value.b), f->value.b};
        case Op::Var:
        case Op::Next:
        case Op::Ite: {
            bool b = term(f, pos).b;
            return {tri_of(b), b};
        }
        case Op::Not: return v_not(formula(f->args[0], pos));
        case Op::And: {
            V r{Tri::True, true};
            for (auto& a : f->args) {
                r = v_and(r, formula(a, pos));
                if (r.d == Tri::False && !r.b)
                    break;
            }
            return r;
        }
        case Op::Or: {
            V r{Tri::False, false};
            for (auto& a : f->args) {
                r = v_or(r, formula(a, pos));
                if (r.d == Tri::True && r.b)
                    break;
            }
            return r;
        }
        case Op::Implies: return v_or(v_not(formula(f->args[0], pos)), formula(f->args[1], pos));
        case Op::Iff: {
            V a = formula(f->args[0], pos), b = formula(f->args[1], pos);
            Tri d = (a.d == Tri::Unknown || b.d == Tri::Unknown) ? Tri::Unknown : tri_of(a.d == b.d);
            return {d, a.b == b.b};
        }
        case Op::Globally:
        case Op::Finally: {
            bool all = f->op == Op::Globally;
            long long end = horizon(pos);
            V r = all ? V{Tri::True, true} : V{Tri::False, false};
            for (long long j = pos; j < end; ++j) {
                V x = formula(f->args[0], j);
                r = all ? v_and(r, x) : v_or(r, x);
                if (all && r.d == Tri::False && !r.b)
                    break;
                if (!all && r.d == Tri::True && r.b)
                    break;
            }
            return r;
        }
        case Op::Until:
        case Op::Leads: {
            bool until = f->op == Op::Until;
            long long end = horizon(pos);
            V prefix{Tri::True, true};
            V acc = until ? V{Tri::False, false} : V{Tri::True, true};
            for (long long j = pos; j < end; ++j) {
                V b = formula(f->args[1], j);
                if (until)
                    acc = v_or(acc, v_and(prefix, b));
                else
                    acc = v_and(acc, v_or(v_not(prefix), b));
                prefix = v_and(prefix, formula(f->args[0], j));
                if (prefix.d == Tri::False && !prefix.b)
                    break;
            }
            return acc;
        }
        case Op::Forall:
        case Op::Exists: return quantifier(f, pos);
        case Op::Primed: throw Error(ErrorCode::PrimedInTemporal, "primed variable in temporal evaluation: " + to_string(f));
        default: {
            bool b = apply_cmp(f->op, term(f->args[0], pos), term(f->args[1], pos));
            return {tri_of(b), b};
        }
        }
    }

private:
    const Expr& root_;
    const FiniteDomain& dom_;
    LassoBounds bounds_;
    size_t work_ = 0;

    long long horizon(long long pos) const {
        long long t = 0, p = 1;
        for (auto& b : env) {
            t = std::max<long long>(t, b.offset + (long long)b.word->stem.size());
            p = std::lcm(p, (long long)b.word->loop.size());
        }
        return std::max(pos, t) + p;
    }

    Value term(const Expr& e, long long pos) {
        switch (e->op) {
        case Op::Const: return e->value;
        case Op::Var:
            for (auto it = env.rbegin(); it != env.rend(); ++it)
                if (it->name == e->name)
                    return it->word->at(pos - it->offset);
            throw Error(ErrorCode::UnboundVariable, "no word for " + e->name);
        case Op::Next: return term(e->args[0], pos + 1);
        case Op::Neg: return Value::number(-term(e->args[0], pos).q);
        case Op::Ite: {
            V c = formula(e->args[0], pos);
            return c.b ? term(e->args[1], pos) : term(e->args[2], pos);
        }
        case Op::Primed: throw Error(ErrorCode::PrimedInTemporal, "primed variable in temporal evaluation");
        default:
            if (is_arith(e->op))
                return apply_arith(e->op, term(e->args[0], pos), term(e->args[1], pos), e->type.is_integral());
            return Value::boolean(formula(e, pos).b);
        }
    }

    V quantifier(const Expr& f, long long pos) {
        bool all = f->op == Op::Forall;
        std::vector<Value> vals = candidate_values(f->var_type, dom_, root_);
        bool exact = dom_.exact(f->var_type);
        std::vector<LassoWord> family;
        if (occurs_only_now(f->args[0], f->name)) {
            for (auto& v : vals)
                family.push_back(LassoWord{{}, {v}});
        } else {
            long long t = 0;
            for (auto& b : env)
                t = std::max<long long>(t, b.offset + (long long)b.word->stem.size());
            int stem = (int)std::max<long long>(0, t - pos) + bounds_.stem;
            double size = 0;
            for (int sl = 0; sl <= stem; ++sl)
                for (int ll = 1; ll <= bounds_.loop; ++ll)
                    size += std::pow((double)vals.size(), sl + ll);
            if (size > (double)bounds_.cap)
                throw Error(ErrorCode::ExplosionGuard, "lasso family for " + f->name + " too large");
            family = lasso_family(vals, stem, bounds_.loop);
            exact = false;
        }
        V r = all ? V{Tri::True, true} : V{Tri::False, false};
        for (auto& w : family) {
            env.push_back(Binding{f->name, &w, pos});
            V x = formula(f->args[0], pos);
            env.pop_back();
            r = all ? v_and(r, x) : v_or(r, x);
            if (all && r.d == Tri::False && !r.b)
                break;
            if (!all && r.d == Tri::True && r.b)
                break;
        }
        if (!exact) {
            if (all && r.d == Tri::True)
                r.d = Tri::Unknown;
            if (!all && r.d == Tri::False)
                r.d = Tri::Unknown;
        }
        return r;
    }
};

}  // namespace

LassoVerdict eval_qltl(const Expr& f, const std::map<std::string, LassoWord>& words, const FiniteDomain& dom,
                       const LassoBounds& bounds) {
    if (has_primed(f))
        throw Error(ErrorCode::PrimedInTemporal, "primed variable in temporal formula");
    LassoEval ev(f, dom, bounds);
    for (auto& [n, w] : words)
        ev.env.push_back(Binding{n, &w, 0});
    V r = ev.formula(f, 0);
    return {r.d, r.b};
}

namespace {

class PrefixEval {
public:
    PrefixEval(const FiniteDomain& dom, int k, int len) : dom_(dom), k_(k), len_(len) {}

    std::vector<std::pair<std::string, const std::vector<Value>*>> env;

    bool formula(const Expr& f, int pos) {
        if (++work_ > dom_.explosion_cap)
            throw Error(ErrorCode::ExplosionGuard, "prefix evaluation exceeded the enumeration cap");
        switch (f->op) {
        case Op::Const: return f->value.b;
        case Op::Var:
        case Op::Next:
        case Op::Ite: return term(f, pos).b;
        case Op::Not: return !formula(f->args[0], pos);
        case Op::And:
            for (auto& a : f->args)
                if (!formula(a, pos))
                    return false;
            return true;
        case Op::Or:
            for (auto& a : f->args)
                if (formula(a, pos))
                    return true;
            return false;
        case Op::Implies: return !formula(f->args[0], pos) || formula(f->args[1], pos);
        case Op::Iff: return formula(f->args[0], pos) == formula(f->args[1], pos);
        case Op::Globally:
            for (int j = pos; j < k_; ++j)
                if (!formula(f->args[0], j))
                    return false;
            return true;
        case Op::Finally:
            for (int j = pos; j < k_; ++j)
                if (formula(f->args[0], j))
                    return true;
            return false;
        case Op::Until:
            for (int j = pos; j < k_; ++j) {
                if (formula(f->args[1], j))
                    return true;
                if (!formula(f->args[0], j))
                    return false;
            }
            return false;
        case Op::Leads:
            for (int j = pos; j < k_; ++j) {
                if (!formula(f->args[1], j))
                    return false;
                if (!formula(f->args[0], j))
                    return true;
            }
            return true;
        case Op::Forall:
        case Op::Exists: {
            bool all = f->op == Op::Forall;
            const auto& vals = dom_.values(f->var_type);
            int from = pos;
            int to = occurs_only_now(f->args[0], f->name) ? pos + 1 : len_;
            std::vector<Value> seq(len_, vals.front());
            std::vector<size_t> idx(to - from, 0);
            env.emplace_back(f->name, &seq);
            bool result = all;
            while (true) {
                for (int i = from; i < to; ++i)
                    seq[i] = vals[idx[i - from]];
                bool r = formula(f->args[0], pos);
                if (all != r) {
                    result = r;
                    break;
                }
                int i = (int)idx.size() - 1;
                while (i >= 0 && ++idx[i] == vals.size())
                    idx[i--] = 0;
                if (i < 0)
                    break;
            }
            env.pop_back();
            return result;
        }
        case Op::Primed: throw Error(ErrorCode::PrimedInTemporal, "primed variable in temporal evaluation");
        default: return apply_cmp(f->op, term(f->args[0], pos), term(f->args[1], pos));
        }
    }

private:
    const FiniteDomain& dom_;
    int k_;
    int len_;
    size_t work_ = 0;

    Value term(const Expr& e, int pos) {
        switch (e->op) {
        case Op::Const: return e->value;
        case Op::Var:
            for (auto it = env.rbegin(); it != env.rend(); ++it)
                if (it->first == e->name) {
                    const auto& s = *it->second;
                    return s[std::min<size_t>(pos, s.size() - 1)];
                }
            throw Error(ErrorCode::UnboundVariable, "no sequence for " + e->name);
        case Op::Next: return term(e->args[0], pos + 1);
        case Op::Neg: return Value::number(-term(e->args[0], pos).q);
        case Op::Ite: return formula(e->args[0], pos) ? term(e->args[1], pos) : term(e->args[2], pos);
        case Op::Primed: throw Error(ErrorCode::PrimedInTemporal, "primed variable in temporal evaluation");
        default:
            if (is_arith(e->op))
                return apply_arith(e->op, term(e->args[0], pos), term(e->args[1], pos), e->type.is_integral());
            return Value::boolean(formula(e, pos));
        }
    }
};

}  // namespace

bool eval_prefix(const Expr& f, const std::map<std::string, std::vector<Value>>& seqs, int k, const FiniteDomain& dom) {
    if (has_primed(f))
        throw Error(ErrorCode::PrimedInTemporal, "primed variable in temporal formula");
    int len = k + next_depth(f);
    std::map<std::string, std::vector<Value>> padded;
    for (auto& [n, s] : seqs) {
        if (s.empty())
            throw Error(ErrorCode::BadParams, "empty sequence for " + n);
        auto p = s;
        while ((int)p.size() < len)
            p.push_back(p.back());
        padded[n] = std::move(p);
    }
    PrefixEval ev(dom, k, std::max(len, 1));
    for (auto& [n, s] : padded)
        ev.env.emplace_back(n, &s);
    return ev.formula(f, 0);
}

}  // namespace rcrs
