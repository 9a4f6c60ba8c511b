#include "rcrs/compose.hpp"

#include "rcrs/lattice.hpp"
#include "rcrs/simplify.hpp"

namespace rcrs {

namespace {

void require_wf_serial(const AtomicComponent& a, const AtomicComponent& b) {
    if (a.out.size() != b.in.size())
        throw Error(ErrorCode::WfError,
                    "serial arity mismatch " + std::to_string(a.out.size()) + " vs " + std::to_string(b.in.size()));
    for (size_t i = 0; i < a.out.size(); ++i)
        if (!same_sort(a.out[i].type, b.in[i].type))
            throw Error(ErrorCode::WfError, "serial slot " + std::to_string(i + 1) + ": " + a.out[i].type.str() + " vs " +
                                                b.in[i].type.str());
}

// Rename `b` so that its states, outputs and (optionally) inputs avoid the
// names used by `a`; inputs listed in `input_names` are renamed to those.
Atomic rename_apart(const AtomicComponent& a, const AtomicComponent& b, const std::vector<std::string>* input_names) {
    std::set<std::string> used = all_names(a);
    std::set<std::string> b_names = all_names(b);
    std::map<std::string, std::string> m;
    if (input_names) {
        for (size_t i = 0; i < b.in.size(); ++i) {
            m[b.in[i].name] = (*input_names)[i];
            used.insert((*input_names)[i]);
        }
    }
    auto pick = [&](const std::string& n) {
        std::string r = n;
        if (used.count(n)) {
            std::set<std::string> avoid = used;
            avoid.insert(b_names.begin(), b_names.end());
            r = fresh_name(n, avoid);
        }
        used.insert(r);
        return r;
    };
    if (!input_names)
        for (auto& p : b.in)
            m[p.name] = pick(p.name);
    for (auto& p : b.state)
        m[p.name] = pick(p.name);
    for (auto& p : b.out)
        if (!m.count(p.name))
            m[p.name] = pick(p.name);
    return rename_atomic(b, m);
}

Subst input_subst(const Signature& in, const std::vector<Expr>& terms) {
    Subst s;
    for (size_t i = 0; i < in.size(); ++i)
        s[in[i].name] = terms[i];
    return s;
}

std::vector<Expr> subst_all(const std::vector<Expr>& ts, const Subst& s) {
    std::vector<Expr> r;
    for (auto& t : ts)
        r.push_back(substitute(t, s));
    return r;
}

Signature concat(const Signature& a, const Signature& b) {
    Signature r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

template <class T>
std::vector<T> concat(const std::vector<T>& a, const std::vector<T>& b) {
    std::vector<T> r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

// Output names of det-kind results follow the right-hand operand when possible.
Atomic with_outputs(Atomic c, const Signature& preferred) {
    if (preferred.size() != c->out.size())
        return c;
    std::set<std::string> taken = declared_names(*c);
    for (auto& p : c->out)
        taken.erase(p.name);
    auto w = std::make_shared<AtomicComponent>(*c);
    std::set<std::string> used = taken;
    for (size_t i = 0; i < w->out.size(); ++i) {
        std::string n = fresh_name(preferred[i].name, used);
        used.insert(n);
        w->out[i].name = n;
    }
    return w;
}

Atomic serial_same(const AtomicComponent& a, const AtomicComponent& b0) {
    switch (a.kind) {
    case Kind::StatelessDet:
    case Kind::Det: {
        Atomic b = rename_apart(a, b0, nullptr);
        Subst s = input_subst(b->in, a.outs);
        Expr p = ex::land(a.inpt, substitute(b->inpt, s));
        std::vector<Expr> outs = subst_all(b->outs, s);
        Atomic r;
        if (a.kind == Kind::StatelessDet)
            r = make_stateless_det(a.in, p, outs);
        else
            r = make_det(a.in, concat(a.state, b->state), concat(a.init_vals, b->init_vals), p,
                         concat(a.next, subst_all(b->next, s)), outs);
        return with_outputs(r, b0.out);
    }
    case Kind::Stateless:
    case Kind::Sts:
    case Kind::Qltl: {
        std::vector<std::string> ys = names_of(a.out);
        Atomic b = rename_apart(a, b0, &ys);
        VarList y = as_vars(a.out);
        VarList z = as_vars(b->out);
        if (a.kind == Kind::Qltl) {
            Expr f = ex::land(ex::forall(y, ex::implies(a.rel, ex::exists(z, b->rel))), ex::exists(y, ex::land(a.rel, b->rel)));
            return make_qltl(a.in, b->out, f);
        }
        VarList s = as_vars(a.state);
        VarList t = as_vars(b->state);
        VarList sy = s;  // s' and y, quantified over the primed copies of s
        Expr legal_a = ex::exists(y, exists_primed(s, a.rel));
        Expr guarantee = ex::forall(y, forall_primed(s, ex::implies(a.rel, ex::exists(z, exists_primed(t, b->rel)))));
        Expr joint = ex::exists(y, ex::land(a.rel, b->rel));
        Expr trs = ex::land({legal_a, guarantee, joint});
        if (a.kind == Kind::Stateless)
            return make_stateless(a.in, b->out, trs);
        return make_sts(a.in, b->out, concat(a.state, b->state), ex::land(a.init, b->init), trs);
    }
    }
    throw Error(ErrorCode::KindError, "unknown kind");
}

Atomic parallel_same(const AtomicComponent& a, const AtomicComponent& b0) {
    Atomic b = rename_apart(a, b0, nullptr);
    switch (a.kind) {
    case Kind::StatelessDet: return make_stateless_det(concat(a.in, b->in), ex::land(a.inpt, b->inpt), concat(a.outs, b->outs));
    case Kind::Det:
        return make_det(concat(a.in, b->in), concat(a.state, b->state), concat(a.init_vals, b->init_vals),
                        ex::land(a.inpt, b->inpt), concat(a.next, b->next), concat(a.outs, b->outs));
    case Kind::Stateless: return make_stateless(concat(a.in, b->in), concat(a.out, b->out), ex::land(a.rel, b->rel));
    case Kind::Sts:
        return make_sts(concat(a.in, b->in), concat(a.out, b->out), concat(a.state, b->state), ex::land(a.init, b->init),
                        ex::land(a.rel, b->rel));
    case Kind::Qltl: return make_qltl(concat(a.in, b->in), concat(a.out, b->out), ex::land(a.rel, b->rel));
    }
    throw Error(ErrorCode::KindError, "unknown kind");
}

}  // namespace

Atomic serial(const AtomicComponent& a, const AtomicComponent& b) {
    require_wf_serial(a, b);
    Kind k = join_kind(a.kind, b.kind);
    Atomic la = lift_to(a, k);
    Atomic lb = lift_to(b, k);
    return simplify_atomic(*serial_same(*la, *lb));
}

Atomic parallel(const AtomicComponent& a, const AtomicComponent& b) {
    Kind k = join_kind(a.kind, b.kind);
    Atomic la = lift_to(a, k);
    Atomic lb = lift_to(b, k);
    return simplify_atomic(*parallel_same(*la, *lb));
}

bool decomposable(const AtomicComponent& c) {
    if (c.kind != Kind::Det && c.kind != Kind::StatelessDet)
        throw Error(ErrorCode::KindError, std::string("decomposability is defined for det components, got ") + kind_name(c.kind));
    if (c.in.empty() || c.outs.empty())
        return false;
    return !occurs_free(c.outs[0], c.in[0].name);
}

Atomic feedback(const AtomicComponent& c) {
    if (!decomposable(c))
        throw Error(ErrorCode::NotDecomposable, "first output depends on the first input: " + print_atomic(c));
    Subst s{{c.in[0].name, c.outs[0]}};
    Signature in(c.in.begin() + 1, c.in.end());
    std::vector<Expr> outs = subst_all(std::vector<Expr>(c.outs.begin() + 1, c.outs.end()), s);
    Expr p = substitute(c.inpt, s);
    Atomic r;
    if (c.kind == Kind::StatelessDet)
        r = make_stateless_det(in, p, outs);
    else
        r = make_det(in, c.state, c.init_vals, p, subst_all(c.next, s), outs);
    return simplify_atomic(*with_outputs(r, Signature(c.out.begin() + 1, c.out.end())));
}

bool determ(const Component& c) {
    switch (c->tag) {
    case CompNode::Tag::Atom: return c->atom->kind == Kind::Det || c->atom->kind == Kind::StatelessDet;
    case CompNode::Tag::Serial:
    case CompNode::Tag::Parallel: return determ(c->kids[0]) && determ(c->kids[1]);
    case CompNode::Tag::Fdbk: return determ(c->kids[0]);
    }
    return false;
}

OIRelation oi(const AtomicComponent& c) {
    if (c.kind != Kind::Det && c.kind != Kind::StatelessDet)
        throw Error(ErrorCode::NotDeterministic, std::string("dependency relation needs a det component, got ") + kind_name(c.kind));
    OIRelation r;
    for (size_t i = 0; i < c.outs.size(); ++i) {
        auto fv = free_names(c.outs[i]);
        for (size_t j = 0; j < c.in.size(); ++j)
            if (fv.count(c.in[j].name))
                r.insert({(int)i + 1, (int)j + 1});
    }
    return r;
}

OIRelation oi(const Component& c) {
    switch (c->tag) {
    case CompNode::Tag::Atom: return oi(*c->atom);
    case CompNode::Tag::Serial: {
        OIRelation first = oi(c->kids[0]);
        OIRelation second = oi(c->kids[1]);
        OIRelation r;
        for (auto& [i, k] : second)
            for (auto& [k2, j] : first)
                if (k == k2)
                    r.insert({i, j});
        return r;
    }
    case CompNode::Tag::Parallel: {
        OIRelation r = oi(c->kids[0]);
        int m = (int)sigma_out(c->kids[0]).size();
        int n = (int)sigma_in(c->kids[0]).size();
        for (auto& [i, j] : oi(c->kids[1]))
            r.insert({i + m, j + n});
        return r;
    }
    case CompNode::Tag::Fdbk: {
        OIRelation inner = oi(c->kids[0]);
        int m = (int)sigma_out(c->kids[0]).size();
        int n = (int)sigma_in(c->kids[0]).size();
        OIRelation r;
        for (int i = 1; i < m; ++i)
            for (int j = 1; j < n; ++j)
                if (inner.count({i + 1, j + 1}) || (inner.count({i + 1, 1}) && inner.count({1, j + 1})))
                    r.insert({i, j});
        return r;
    }
    }
    return {};
}

bool loop_free(const Component& c) {
    if (!determ(c))
        throw Error(ErrorCode::NotDeterministic, "loop freedom is defined for deterministic components");
    switch (c->tag) {
    case CompNode::Tag::Atom: return true;
    case CompNode::Tag::Serial:
    case CompNode::Tag::Parallel: return loop_free(c->kids[0]) && loop_free(c->kids[1]);
    case CompNode::Tag::Fdbk: return loop_free(c->kids[0]) && !oi(c->kids[0]).count({1, 1});
    }
    return false;
}

namespace {

Atomic atomic_at(const Component& c, const std::string& path) {
    switch (c->tag) {
    case CompNode::Tag::Atom: return c->atom;
    case CompNode::Tag::Serial:
        return serial(*atomic_at(c->kids[0], path + ".serial.0"), *atomic_at(c->kids[1], path + ".serial.1"));
    case CompNode::Tag::Parallel:
        return parallel(*atomic_at(c->kids[0], path + ".parallel.0"), *atomic_at(c->kids[1], path + ".parallel.1"));
    case CompNode::Tag::Fdbk: {
        Atomic inner = atomic_at(c->kids[0], path + ".fdbk");
        bool ok = (inner->kind == Kind::Det || inner->kind == Kind::StatelessDet) && decomposable(*inner);
        if (!ok)
            throw Error(ErrorCode::FeedbackOnNonDecomposable,
                        "at " + path + ": feedback of " + print_atomic(*inner));
        return feedback(*inner);
    }
    }
    throw Error(ErrorCode::KindError, "unknown component node");
}

}  // namespace

Atomic atomic(const Component& c) {
    WfResult w = wf(c);
    if (!w.ok)
        throw Error(ErrorCode::WfError, w.diagnostic);
    return atomic_at(c, "root");
}

}  // namespace rcrs
