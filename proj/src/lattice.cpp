#include "rcrs/lattice.hpp"

#include "rcrs/simplify.hpp"

namespace rcrs {

bool kind_leq(Kind a, Kind b) {
    if (a == b)
        return true;
    switch (a) {
    case Kind::StatelessDet: return true;
    case Kind::Det: return b == Kind::Sts || b == Kind::Qltl;
    case Kind::Stateless: return b == Kind::Sts || b == Kind::Qltl;
    case Kind::Sts: return b == Kind::Qltl;
    case Kind::Qltl: return false;
    }
    return false;
}

Kind join_kind(Kind a, Kind b) {
    if (kind_leq(a, b))
        return b;
    if (kind_leq(b, a))
        return a;
    // det and stateless are the only incomparable pair
    return Kind::Sts;
}

namespace {

Expr primed_to_fresh(const VarList& vs, const Expr& f, VarList& fresh) {
    std::set<std::string> used;
    collect_names(f, used);
    for (auto& v : vs)
        used.insert(v.name);
    Subst s;
    for (auto& v : vs) {
        std::string n = fresh_name(v.name + "_n", used);
        used.insert(n);
        fresh.push_back(Var{n, v.type});
        s[primed_key(v.name)] = ex::var(n, v.type);
    }
    return substitute(f, s);
}

}  // namespace

Expr exists_primed(const VarList& vs, const Expr& f) {
    VarList fresh;
    Expr g = primed_to_fresh(vs, f, fresh);
    return ex::exists(fresh, g);
}

Expr forall_primed(const VarList& vs, const Expr& f) {
    VarList fresh;
    Expr g = primed_to_fresh(vs, f, fresh);
    return ex::forall(fresh, g);
}

Atomic stateless_to_sts(const AtomicComponent& c) {
    if (c.kind != Kind::Stateless)
        throw Error(ErrorCode::KindError, "stateless_to_sts expects a stateless component");
    return make_sts(c.in, c.out, {}, ex::tt(), c.rel);
}

Atomic det_to_sts(const AtomicComponent& c) {
    if (c.kind != Kind::Det)
        throw Error(ErrorCode::KindError, "det_to_sts expects a det component");
    std::vector<Expr> init;
    for (size_t i = 0; i < c.state.size(); ++i)
        init.push_back(ex::eq(ex::var(c.state[i].name, c.state[i].type), ex::constant(c.init_vals[i], c.state[i].type)));
    std::vector<Expr> trs{c.inpt};
    for (size_t i = 0; i < c.state.size(); ++i)
        trs.push_back(ex::eq(ex::primed(c.state[i].name, c.state[i].type), c.next[i]));
    for (size_t i = 0; i < c.out.size(); ++i)
        trs.push_back(ex::eq(ex::var(c.out[i].name, c.out[i].type), c.outs[i]));
    return simplify_atomic(*make_sts(c.in, c.out, c.state, ex::land(init), ex::land(trs)));
}

Atomic sd_to_det(const AtomicComponent& c) {
    if (c.kind != Kind::StatelessDet)
        throw Error(ErrorCode::KindError, "sd_to_det expects a stateless_det component");
    return make_det(c.in, {}, {}, c.inpt, {}, c.outs);
}

Atomic sd_to_stateless(const AtomicComponent& c) {
    if (c.kind != Kind::StatelessDet)
        throw Error(ErrorCode::KindError, "sd_to_stateless expects a stateless_det component");
    std::vector<Expr> io{c.inpt};
    for (size_t i = 0; i < c.out.size(); ++i)
        io.push_back(ex::eq(ex::var(c.out[i].name, c.out[i].type), c.outs[i]));
    return simplify_atomic(*make_stateless(c.in, c.out, ex::land(io)));
}

Atomic sts_to_qltl(const AtomicComponent& c) {
    if (c.kind != Kind::Sts)
        throw Error(ErrorCode::KindError, "sts_to_qltl expects an sts component");
    VarList s = as_vars(c.state);
    VarList y = as_vars(c.out);
    Expr phi = primes_to_next(c.rel, s);
    Expr phi_legal = ex::exists(y, exists_primed(s, c.rel));
    VarList sy = s;
    sy.insert(sy.end(), y.begin(), y.end());
    Expr legal = ex::forall(sy, ex::implies(c.init, ex::leads(phi, phi_legal)));
    Expr run = ex::exists(s, ex::land(c.init, ex::globally(phi)));
    return simplify_atomic(*make_qltl(c.in, c.out, ex::land(legal, run)));
}

Atomic stateless_to_qltl(const AtomicComponent& c) {
    if (c.kind != Kind::Stateless)
        throw Error(ErrorCode::KindError, "stateless_to_qltl expects a stateless component");
    return simplify_atomic(*make_qltl(c.in, c.out, ex::globally(c.rel)));
}

Atomic lift_to(const AtomicComponent& c, Kind k) {
    if (!kind_leq(c.kind, k))
        throw Error(ErrorCode::NotAbove, std::string(kind_name(k)) + " is not above " + kind_name(c.kind));
    if (c.kind == k)
        return std::make_shared<AtomicComponent>(c);
    switch (c.kind) {
    case Kind::StatelessDet:
        if (k == Kind::Det)
            return sd_to_det(c);
        return lift_to(*sd_to_stateless(c), k);
    case Kind::Det: return lift_to(*det_to_sts(c), k);
    case Kind::Stateless:
        if (k == Kind::Qltl)
            return stateless_to_qltl(c);
        return stateless_to_sts(c);
    case Kind::Sts: return sts_to_qltl(c);
    case Kind::Qltl: break;
    }
    throw Error(ErrorCode::NotAbove, "no lifting path");
}

}  // namespace rcrs
