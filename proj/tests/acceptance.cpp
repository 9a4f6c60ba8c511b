// One PASS/FAIL line per acceptance criterion.
#include "rcrs/analysis.hpp"
#include "rcrs/compose.hpp"
#include "rcrs/diagram.hpp"
#include "rcrs/lattice.hpp"
#include "rcrs/oracle.hpp"
#include "rcrs/parser.hpp"
#include "rcrs/properties.hpp"
#include "rcrs/simplify.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace rcrs;

namespace {

const uint64_t kSeed = 20240607;
const SemType I = SemType::integer();

std::string data(const std::string& f) { return std::string(RCRS_DATA_DIR) + "/" + f; }

Atomic atomic_of(const std::string& text) { return parse_component(text)->atom; }

struct Outcome {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

int failures = 0;

void criterion(int n, double limit_s, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.ok = false;
        o.detail = std::string("exception: ") + e.what();
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && s >= limit_s)
        o.expect(false, "runtime " + std::to_string(s) + "s over " + std::to_string(limit_s) + "s");
    if (!o.ok)
        ++failures;
    std::printf("%s criterion %d (%.3fs)%s%s\n", o.ok ? "PASS" : "FAIL", n, s, o.detail.empty() ? "" : ": ",
                o.detail.c_str());
    std::fflush(stdout);
}

bool has_solver() { return AnalysisOptions::defaults().solver.has_value(); }

std::string suite_line(const SuiteReport& r) {
    std::string s = r.summary();
    for (auto& d : r.details)
        s += " | " + d;
    return s;
}

}  // namespace

int main() {
    std::printf("seed: %llu\n", (unsigned long long)kSeed);
    std::printf("solver: %s\n", has_solver() ? "configured" : "none");

    const std::string sum_text = "det((y:int), (s:int), 0, true, (s+y), (s))";

    criterion(1, 1.0, [&] {
        Outcome o;
        Program p = parse_program_file(data("sum.rcrs"));
        Atomic a = atomic(p.get("Sum"));
        o.expect(alpha_equivalent(*a, *atomic_of(sum_text)), "got " + print_atomic(*a));
        return o;
    });

    criterion(2, 5.0, [&] {
        Outcome o;
        Program p = parse_program_file(data("div.rcrs"));
        // the serial contract before any simplification
        Expr contract = parse_formula(
            "exists u:int . exists z:int . (forall x:int . forall y:int . true -> (exists z:int . y != 0 && z = x / y))"
            " && (exists x:int . exists y:int . y != 0 && z = x / y)",
            {});

        o.expect(has_solver(), "no solver configured (RCRS_SMT_SOLVER)");
        if (has_solver()) {
            AnalysisOptions smt = AnalysisOptions::defaults();
            smt.syntactic = false;
            CheckResult r = check_compat(p.get("Source"), p.get("Div"), smt);
            o.expect(r.verdict == Verdict::Refuted && r.method == "smt",
                     std::string("compat with solver: ") + verdict_name(r.verdict) + " via " + r.method);
            CheckResult v = decide_valid(contract, smt);
            o.expect(v.verdict == Verdict::Refuted && v.method == "smt",
                     std::string("contract with solver: ") + verdict_name(v.verdict) + " via " + v.method);
        }

        AnalysisOptions fin = AnalysisOptions::defaults();
        fin.use_solver = false;
        fin.syntactic = false;
        fin.dom.set(I, shrink_order(-2, 2));  // the quotient port is plain int
        Program q = parse_program(
            "component Source = stateless((u:int[-2..2]), (x:int[-2..2], y:int[-2..2]), true)\n"
            "component Div = stateless_det((x:int[-2..2], y:int[-2..2]), y != 0, (x / y))\n");
        CheckResult r = check_compat(q.get("Source"), q.get("Div"), fin);
        o.expect(r.verdict == Verdict::Refuted && r.method == "exhaustive",
                 std::string("compat finitized: ") + verdict_name(r.verdict) + " via " + r.method);
        Expr fin_contract = parse_formula(
            "exists u:int[-2..2] . exists z:int[-2..2] . (forall x:int[-2..2] . forall y:int[-2..2] . true -> "
            "(exists z:int[-2..2] . y != 0 && z = x / y)) && "
            "(exists x:int[-2..2] . exists y:int[-2..2] . y != 0 && z = x / y)",
            {});
        CheckResult v = decide_valid(fin_contract, fin);
        o.expect(v.verdict == Verdict::Refuted && v.method == "exhaustive",
                 std::string("contract finitized: ") + verdict_name(v.verdict) + " via " + v.method);
        return o;
    });

    criterion(3, 0, [&] {
        Outcome o;
        Program p = parse_program_file(data("refine_stateless.rcrs"));
        o.expect(has_solver(), "no solver configured (RCRS_SMT_SOLVER)");
        AnalysisOptions opt = AnalysisOptions::defaults();
        if (has_solver()) {
            CheckResult r = check_refines(p.get("Spec"), p.get("Impl"), opt);
            o.expect(r.verdict == Verdict::Proven, std::string("forward: ") + verdict_name(r.verdict));
            CheckResult f = check_refines(p.get("Anything"), p.get("Different"), opt);
            o.expect(f.verdict == Verdict::Proven, std::string("footnote: ") + verdict_name(f.verdict));
        }
        FiniteDomain dom;
        dom.set(I, shrink_order(-2, 12));
        CheckResult b = bounded_refute_refinement(p.get("Impl"), p.get("Spec"), dom, 1);
        bool x_minus_one = b.witness && !b.witness->inputs.empty() && !b.witness->inputs[0].values.empty() &&
                           b.witness->inputs[0].values[0] == Value::integer(-1);
        o.expect(b.verdict == Verdict::Refuted && x_minus_one,
                 std::string("reversed (bounded): ") + verdict_name(b.verdict) +
                     (b.witness ? " " + b.witness->str() : std::string()));
        opt.dom = dom;
        opt.horizon = 1;
        CheckResult c = check_refines(p.get("Impl"), p.get("Spec"), opt);
        bool same = c.witness && !c.witness->inputs.empty() && c.witness->inputs[0].values[0] == Value::integer(-1);
        o.expect(c.verdict == Verdict::Refuted && same, std::string("reversed (check_refines): ") +
                                                            verdict_name(c.verdict));
        return o;
    });

    criterion(4, 10.0, [&] {
        Outcome o;
        Program p = parse_program_file(data("request_response.rcrs"));
        Atomic sys = atomic(p.get("System"));
        Expr legal = legal_formula(*sys);
        const std::string x = sys->in.at(0).name;
        Expr gfx = ex::globally(ex::finally(ex::var(x, SemType::boolean())));
        FiniteDomain dom;
        auto words = lasso_family(dom.values(SemType::boolean()), 3, 2);
        LassoBounds lb;
        lb.stem = 2;
        lb.loop = 2;
        int disagree = 0;
        std::string first;
        for (auto& w : words) {
            std::map<std::string, LassoWord> m{{x, w}};
            Tri expect = eval_qltl(gfx, m, dom).definite;
            LassoVerdict got = eval_qltl(legal, m, dom, lb);
            bool value = got.definite == Tri::Unknown ? got.bounded : got.definite == Tri::True;
            if (expect == Tri::Unknown || value != (expect == Tri::True)) {
                if (!disagree++)
                    first = w.str();
            }
        }
        o.expect(disagree == 0, std::to_string(disagree) + " of " + std::to_string(words.size()) +
                                    " words disagree, first " + first);
        std::printf("  words: %zu, legal: %s\n", words.size(), to_string(legal).c_str());
        return o;
    });

    criterion(5, 60.0, [&] {
        Outcome o;
        SuiteReport r = oracle_equivalence_suite(kSeed, 200, 4);
        o.expect(r.ok(), suite_line(r));
        std::printf("  %s\n", r.summary().c_str());
        return o;
    });

    criterion(6, 0, [&] {
        Outcome o;
        SuiteReport a = associativity_suite(kSeed, 100);
        SuiteReport p = precongruence_suite(kSeed, 100);
        o.expect(a.ok(), suite_line(a));
        o.expect(p.ok(), suite_line(p));
        std::printf("  %s\n  %s\n", a.summary().c_str(), p.summary().c_str());
        return o;
    });

    criterion(7, 0, [&] {
        Outcome o;
        SuiteReport r = legality_coherence_suite(kSeed, 100, 4);
        o.expect(r.ok(), suite_line(r));
        std::printf("  %s\n", r.summary().c_str());
        return o;
    });

    criterion(8, 0, [&] {
        Outcome o;
        Program p = parse_program_file(data("sum.rcrs"));
        auto ints = [](std::initializer_list<long long> xs) {
            std::vector<Value> v;
            for (long long x : xs)
                v.push_back(Value::integer(x));
            return v;
        };
        ExecResult s = exec_det(p.get("Sum"), Trace{ints({1, 1, 1, 1})}, 4);
        o.expect(s.illegal_at < 0 && s.outputs == Trace{ints({0, 1, 2, 3})}, "Sum");
        ExecResult u = exec_det(p.get("UnitDelay"), Trace{ints({5, 7, 9})}, 3);
        o.expect(u.illegal_at < 0 && u.outputs == Trace{ints({0, 5, 7})}, "UnitDelay");
        FiniteDomain dom;
        dom.set(I, shrink_order(0, 9));
        RelResult r = bounded_rel(*atomic(p.get("Sum")), Trace{ints({1, 1, 1, 1})}, 4, dom);
        o.expect(r.outputs.size() == 1 && *r.outputs.begin() == Trace{ints({0, 1, 2, 3})}, "Sum relation");
        return o;
    });

    criterion(9, 0, [&] {
        Outcome o;
        Translation d = translate_file(data("diagrams/delayed_sum.json"));
        Atomic a = atomic(d.term);
        o.expect(alpha_equivalent(*a, *atomic_of(sum_text)), "delayed sum gives " + print_atomic(*a));
        Translation t = translate_file(data("diagrams/three_block.json"));
        o.expect(t.expression == "A ; Switch1 ; (B || Id) ; Switch2 ; (C || Id)", "three block gives " + t.expression);
        std::vector<Component> chain;
        std::function<void(const Component&)> flat = [&](const Component& c) {
            if (c->tag == CompNode::Tag::Serial) {
                flat(c->kids[0]);
                flat(c->kids[1]);
            } else {
                chain.push_back(c);
            }
        };
        flat(t.term);
        bool shape = chain.size() == 5 && chain[0]->tag == CompNode::Tag::Atom &&
                     chain[1]->tag == CompNode::Tag::Atom && chain[2]->tag == CompNode::Tag::Parallel &&
                     chain[3]->tag == CompNode::Tag::Atom && chain[4]->tag == CompNode::Tag::Parallel;
        o.expect(shape, "term " + print_component(t.term));
        return o;
    });

    criterion(10, 0, [&] {
        Outcome o;
        Program p = parse_program_file(data("oven.rcrs"));
        AnalysisOptions opt = AnalysisOptions::defaults();
        RefinementVcs v = refine_vc(p.get("Oven"), p.get("Thermostat"), &opt);
        o.expect(v.vcs.size() == 1 && v.vcs[0].fragment == Fragment::Temporal, "expected one temporal condition");
        Atomic oven = atomic(p.get("Oven"));
        Atomic th = atomic(p.get("Thermostat"));
        VarList st = as_vars(th->state);
        // (exists s, sw: init && G trs[s' := @s, sw' := @sw]) -> oven
        Subst nx;
        for (auto& s : st)
            nx[primed_key(s.name)] = ex::next(ex::var(s));
        Expr lhs = ex::exists(st, ex::land(th->init, ex::globally(substitute(th->rel, nx))));
        Expr expected = ex::implies(lhs, oven->rel);
        if (!v.vcs.empty()) {
            Expr got = simplify(v.vcs[0].goal);
            o.expect(alpha_equal(got, simplify(expected)),
                     "vc " + to_string(got) + " expected " + to_string(simplify(expected)));
        }
        CheckResult r = check_refines(p.get("Oven"), p.get("Thermostat"), opt);
        o.expect(r.verdict == Verdict::Unknown, std::string("verdict ") + verdict_name(r.verdict));
        if (!v.vcs.empty())
            std::printf("  vc: %s\n", to_string(simplify(v.vcs[0].goal)).c_str());
        return o;
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
