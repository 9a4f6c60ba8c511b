#include "rcrs/oracle.hpp"

#include "rcrs/compose.hpp"
#include "rcrs/lattice.hpp"

#include <cassert>
#include <map>

namespace rcrs {

namespace {

// Odometer over per-slot value lists, first slot most significant.
std::vector<std::vector<Value>> tuples(const std::vector<const std::vector<Value>*>& lists) {
    std::vector<std::vector<Value>> out;
    std::vector<size_t> idx(lists.size(), 0);
    for (auto* l : lists)
        if (l->empty())
            return out;
    while (true) {
        std::vector<Value> t;
        for (size_t i = 0; i < lists.size(); ++i)
            t.push_back((*lists[i])[idx[i]]);
        out.push_back(std::move(t));
        int i = (int)lists.size() - 1;
        while (i >= 0 && ++idx[i] == lists[i]->size())
            idx[i--] = 0;
        if (i < 0)
            break;
    }
    return out;
}

std::vector<std::vector<Value>> sig_tuples(const Signature& sig, const FiniteDomain& dom) {
    std::vector<const std::vector<Value>*> lists;
    std::vector<size_t> sizes;
    for (auto& p : sig) {
        lists.push_back(&dom.values(p.type));
        sizes.push_back(lists.back()->size());
    }
    if (product_size(sizes) > dom.explosion_cap)
        throw Error(ErrorCode::ExplosionGuard, "signature " + print_signature(sig) + " has too many value tuples");
    return tuples(lists);
}

Value placeholder(const SemType& t) {
    switch (t.tag) {
    case SemType::Tag::Bool: return Value::boolean(false);
    case SemType::Tag::Enum: return Value::symbol(t.values[0], 0);
    case SemType::Tag::Unit: return Value::unit();
    case SemType::Tag::IntRange: return Value::integer(t.lo <= 0 && 0 <= t.hi ? 0 : t.lo);
    default: return Value::integer(0);
    }
}

}  // namespace

std::vector<Trace> enumerate_traces(const Signature& sig, const FiniteDomain& dom, int H) {
    auto steps = sig_tuples(sig, dom);
    std::vector<size_t> sizes(H, steps.size());
    if (product_size(sizes) > dom.explosion_cap)
        throw Error(ErrorCode::ExplosionGuard, "too many input traces at horizon " + std::to_string(H));
    std::vector<Trace> out;
    std::vector<size_t> idx(H, 0);
    if (steps.empty())
        return out;
    while (true) {
        Trace t(sig.size(), std::vector<Value>(H));
        for (int k = 0; k < H; ++k)
            for (size_t s = 0; s < sig.size(); ++s)
                t[s][k] = steps[idx[k]][s];
        out.push_back(std::move(t));
        int k = H - 1;
        while (k >= 0 && ++idx[k] == steps.size())
            idx[k--] = 0;
        if (k < 0)
            break;
    }
    return out;
}

namespace {

class DetRunner {
public:
    explicit DetRunner(const Component& root) {
        if (!determ(root))
            throw Error(ErrorCode::NotDeterministic, "exec_det needs a deterministic component");
        if (!loop_free(root))
            throw Error(ErrorCode::NotLoopFree, "exec_det needs a loop-free component");
        index(root);
    }

    std::vector<std::vector<Value>> initial_states() const {
        std::vector<std::vector<Value>> st;
        for (auto* a : leaves_)
            st.push_back(a->init_vals);
        return st;
    }

    // nullopt when a precondition fails (only in strict mode)
    std::optional<std::vector<Value>> step(const CompNode* c, const std::vector<Value>& in,
                                           std::vector<std::vector<Value>>& st, bool strict) {
        switch (c->tag) {
        case CompNode::Tag::Atom: {
            const AtomicComponent& a = *c->atom;
            int id = leaf_id_.at(c);
            Env env;
            for (size_t i = 0; i < a.in.size(); ++i)
                env.push(a.in[i].name, in[i]);
            for (size_t i = 0; i < a.state.size(); ++i)
                env.push(a.state[i].name, st[id][i]);
            std::optional<std::vector<Value>> result;
            if (!strict || eval_formula(a.inpt, env, dom_)) {
                std::vector<Value> out;
                for (auto& e : a.outs)
                    out.push_back(eval_term(e, env, dom_));
                std::vector<Value> next;
                for (auto& e : a.next)
                    next.push_back(eval_term(e, env, dom_));
                st[id] = std::move(next);
                result = std::move(out);
            }
            return result;
        }
        case CompNode::Tag::Serial: {
            auto mid = step(c->kids[0].get(), in, st, strict);
            if (!mid)
                return mid;
            return step(c->kids[1].get(), *mid, st, strict);
        }
        case CompNode::Tag::Parallel: {
            size_t n = in_arity_.at(c->kids[0].get());
            std::vector<Value> a(in.begin(), in.begin() + n), b(in.begin() + n, in.end());
            auto ra = step(c->kids[0].get(), a, st, strict);
            if (!ra)
                return ra;
            auto rb = step(c->kids[1].get(), b, st, strict);
            if (!rb)
                return rb;
            ra->insert(ra->end(), rb->begin(), rb->end());
            return ra;
        }
        case CompNode::Tag::Fdbk: {
            const CompNode* k = c->kids[0].get();
            std::vector<Value> in1{placeholder(first_in_.at(k))};
            in1.insert(in1.end(), in.begin(), in.end());
            auto scratch = st;
            auto r1 = step(k, in1, scratch, false);
            in1[0] = (*r1)[0];
            auto r2 = step(k, in1, st, strict);
            if (!r2)
                return r2;
            assert((*r2)[0] == (*r1)[0]);
            r2->erase(r2->begin());
            return r2;
        }
        }
        return std::nullopt;
    }

private:
    std::vector<const AtomicComponent*> leaves_;
    std::map<const CompNode*, int> leaf_id_;
    std::map<const CompNode*, size_t> in_arity_;
    std::map<const CompNode*, SemType> first_in_;
    FiniteDomain dom_;

    void index(const Component& c) {
        Signature in = sigma_in(c);
        in_arity_[c.get()] = in.size();
        if (!in.empty())
            first_in_[c.get()] = in[0].type;
        if (c->tag == CompNode::Tag::Atom) {
            leaf_id_[c.get()] = (int)leaves_.size();
            leaves_.push_back(c->atom.get());
        }
        for (auto& k : c->kids)
            index(k);
    }
};

}  // namespace

ExecResult exec_det(const Component& c, const Trace& in, int H) {
    DetRunner run(c);
    auto st = run.initial_states();
    size_t n_out = sigma_out(c).size();
    ExecResult r;
    r.outputs.assign(n_out, {});
    for (int t = 0; t < H; ++t) {
        std::vector<Value> x;
        for (auto& slot : in)
            x.push_back(slot.at(t));
        auto y = run.step(c.get(), x, st, true);
        if (!y) {
            r.illegal_at = t;
            break;
        }
        for (size_t i = 0; i < n_out; ++i)
            r.outputs[i].push_back((*y)[i]);
    }
    return r;
}

RelResult bounded_rel(const AtomicComponent& c0, const Trace& in, int H, const FiniteDomain& dom) {
    if (c0.kind == Kind::Qltl)
        throw Error(ErrorCode::KindError, "qltl components have no finite transition relation");
    Atomic c = lift_to(c0, Kind::Sts);
    auto states = sig_tuples(c->state, dom);
    auto outs = sig_tuples(c->out, dom);
    if (product_size({states.size(), states.size(), outs.size()}) > dom.explosion_cap)
        throw Error(ErrorCode::ExplosionGuard, "transition enumeration too large");

    Env env;
    auto bind_state = [&](const std::vector<Value>& s, bool primed) {
        for (size_t i = 0; i < c->state.size(); ++i)
            env.push(primed ? primed_key(c->state[i].name) : c->state[i].name, s[i]);
    };

    // reachable state -> output prefixes
    std::map<std::vector<Value>, std::set<Trace>> frontier;
    for (auto& s : states) {
        bind_state(s, false);
        bool ok = eval_formula(c->init, env, dom);
        for (size_t i = 0; i < c->state.size(); ++i)
            env.pop();
        if (ok)
            frontier[s].insert(Trace(c->out.size()));
    }

    RelResult r;
    for (int t = 0; t < H; ++t) {
        std::map<std::vector<Value>, std::set<Trace>> next;
        for (auto& [s, prefixes] : frontier) {
            for (size_t i = 0; i < c->in.size(); ++i)
                env.push(c->in[i].name, in[i].at(t));
            bind_state(s, false);
            std::vector<std::pair<const std::vector<Value>*, const std::vector<Value>*>> succ;
            for (auto& s2 : states) {
                bind_state(s2, true);
                for (auto& y : outs) {
                    for (size_t i = 0; i < c->out.size(); ++i)
                        env.push(c->out[i].name, y[i]);
                    if (eval_formula(c->rel, env, dom))
                        succ.emplace_back(&s2, &y);
                    for (size_t i = 0; i < c->out.size(); ++i)
                        env.pop();
                }
                for (size_t i = 0; i < c->state.size(); ++i)
                    env.pop();
            }
            for (size_t i = 0; i < c->state.size() + c->in.size(); ++i)
                env.pop();
            if (succ.empty()) {
                r.illegal_at = t;
                return r;
            }
            for (auto& [s2, y] : succ) {
                auto& dst = next[*s2];
                for (auto& p : prefixes) {
                    Trace q = p;
                    for (size_t i = 0; i < y->size(); ++i)
                        q[i].push_back((*y)[i]);
                    dst.insert(std::move(q));
                }
            }
        }
        frontier = std::move(next);
    }
    for (auto& [s, prefixes] : frontier)
        r.outputs.insert(prefixes.begin(), prefixes.end());
    return r;
}

BoundedRelation bounded_rel(const AtomicComponent& c, const FiniteDomain& dom, int H) {
    BoundedRelation rel;
    rel.inputs = enumerate_traces(c.in, dom, H);
    for (auto& t : rel.inputs)
        rel.results.push_back(bounded_rel(c, t, H, dom));
    return rel;
}

RelResult behaviour(const Component& c, const Trace& in, int H, const FiniteDomain& dom) {
    if (determ(c) && loop_free(c)) {
        ExecResult e = exec_det(c, in, H);
        RelResult r;
        r.illegal_at = e.illegal_at;
        if (e.illegal_at < 0)
            r.outputs.insert(e.outputs);
        return r;
    }
    if (c->tag != CompNode::Tag::Atom)
        throw Error(ErrorCode::KindError, "bounded behaviour needs a deterministic or an atomic component");
    return bounded_rel(*c->atom, in, H, dom);
}

namespace {

std::string trace_str(const Trace& t) {
    std::string s;
    for (size_t i = 0; i < t.size(); ++i) {
        s += i ? " | " : "";
        for (size_t k = 0; k < t[i].size(); ++k)
            s += (k ? "," : "") + t[i][k].str();
    }
    return s;
}

void check_matching(const Signature& a, const Signature& b, const char* what) {
    if (a.size() != b.size())
        throw Error(ErrorCode::SignatureMismatch, std::string(what) + " arity " + std::to_string(a.size()) + " vs " +
                                                      std::to_string(b.size()));
    for (size_t i = 0; i < a.size(); ++i)
        if (!same_sort(a[i].type, b[i].type))
            throw Error(ErrorCode::SignatureMismatch, std::string(what) + " slot " + std::to_string(i + 1) + ": " +
                                                          a[i].type.str() + " vs " + b[i].type.str());
}

}  // namespace

EquivResult bounded_equiv(const Component& a, const Component& b, const FiniteDomain& dom, int H) {
    Signature in = sigma_in(a);
    check_matching(in, sigma_in(b), "input");
    check_matching(sigma_out(a), sigma_out(b), "output");
    for (auto& t : enumerate_traces(in, dom, H)) {
        RelResult ra = behaviour(a, t, H, dom);
        RelResult rb = behaviour(b, t, H, dom);
        if (ra.illegal_at != rb.illegal_at || ra.outputs != rb.outputs) {
            EquivResult r;
            r.equivalent = false;
            r.counterexample = t;
            r.detail = "input " + trace_str(t) + ": illegal at " + std::to_string(ra.illegal_at) + " vs " +
                       std::to_string(rb.illegal_at) + ", " + std::to_string(ra.outputs.size()) + " vs " +
                       std::to_string(rb.outputs.size()) + " output traces";
            return r;
        }
    }
    return {};
}

Witness trace_witness(const Signature& in_sig, const Trace& in, const Signature& out_sig, const Trace* out, int H) {
    Witness w;
    w.horizon = H;
    for (size_t i = 0; i < in_sig.size(); ++i)
        w.inputs.push_back(Slot{in_sig[i].name, in[i]});
    if (out)
        for (size_t i = 0; i < out_sig.size(); ++i)
            w.outputs.push_back(Slot{out_sig[i].name, (*out)[i]});
    return w;
}

CheckResult bounded_refute_refinement(const Component& abstract, const Component& concrete, const FiniteDomain& dom,
                                      int H) {
    Signature in = sigma_in(abstract);
    Signature out = sigma_out(abstract);
    check_matching(in, sigma_in(concrete), "input");
    check_matching(out, sigma_out(concrete), "output");
    for (int h = 1; h <= H; ++h) {
        auto traces = enumerate_traces(in, dom, h);
        std::vector<RelResult> ra, rc;
        for (auto& t : traces) {
            ra.push_back(behaviour(abstract, t, h, dom));
            rc.push_back(behaviour(concrete, t, h, dom));
        }
        for (size_t i = 0; i < traces.size(); ++i)
            if (ra[i].illegal_at < 0 && rc[i].illegal_at >= 0) {
                Witness w = trace_witness(in, traces[i], out, nullptr, h);
                w.illegal_at = rc[i].illegal_at;
                w.kind = "input legal for the abstract component, illegal for the concrete one";
                return CheckResult::refuted("bounded-trace", w);
            }
        for (size_t i = 0; i < traces.size(); ++i) {
            if (ra[i].illegal_at >= 0 || rc[i].illegal_at >= 0)
                continue;
            for (auto& o : rc[i].outputs)
                if (!ra[i].outputs.count(o)) {
                    Witness w = trace_witness(in, traces[i], out, &o, h);
                    w.kind = "concrete output not allowed by the abstract component";
                    return CheckResult::refuted("bounded-trace", w);
                }
        }
    }
    return CheckResult::unknown("no counterexample up to horizon " + std::to_string(H));
}

CheckResult bounded_hoare(const TracePred& pre, const Component& c, const TraceRel& post, const FiniteDomain& dom, int H) {
    Signature in = sigma_in(c);
    Signature out = sigma_out(c);
    for (auto& t : enumerate_traces(in, dom, H)) {
        if (!pre(t))
            continue;
        RelResult r = behaviour(c, t, H, dom);
        if (r.illegal_at >= 0) {
            Witness w = trace_witness(in, t, out, nullptr, H);
            w.illegal_at = r.illegal_at;
            w.kind = "input satisfying the precondition is illegal";
            return CheckResult::refuted("bounded-trace", w);
        }
        for (auto& o : r.outputs)
            if (!post(t, o)) {
                Witness w = trace_witness(in, t, out, &o, H);
                w.kind = "output violates the postcondition";
                return CheckResult::refuted("bounded-trace", w);
            }
    }
    return CheckResult::unknown("no counterexample up to horizon " + std::to_string(H));
}

}  // namespace rcrs
