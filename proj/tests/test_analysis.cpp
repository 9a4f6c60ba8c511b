#include "doctest.h"
#include "support.hpp"

#include "rcrs/analysis.hpp"
#include "rcrs/compose.hpp"
#include "rcrs/lattice.hpp"
#include "rcrs/oracle.hpp"
#include "rcrs/properties.hpp"
#include "rcrs/simplify.hpp"

using namespace rcrs;
using test::atomic_of;

namespace {

const SemType I = SemType::integer();

AnalysisOptions with_solver() { return AnalysisOptions::defaults(); }

AnalysisOptions no_solver() {
    AnalysisOptions o = AnalysisOptions::defaults();
    o.use_solver = false;
    return o;
}

bool have_solver() { return AnalysisOptions::defaults().solver.has_value(); }

Component C(const std::string& text) { return test::comp(text); }

}  // namespace

TEST_CASE("legal formulas") {
    Expr div = legal_formula(*atomic_of("stateless_det((x:int, y:int), y != 0, (x / y))"));
    CHECK(to_string(div) == "G y != 0");
    Expr q = legal_formula(*atomic_of("qltl((x:bool), (y:bool), G (x -> F y))"));
    CHECK(alpha_equal(q, parse_formula("exists y:bool . G (x -> F y)", {{"x", SemType::boolean()}})));
    CHECK(is_const_true(legal_formula(*atomic_of("det((x:int), (s:int), 0, true, (x), (s))"))));
}

TEST_CASE("validity") {
    AnalysisOptions o = with_solver();
    CHECK(is_valid(C("stateless((u:int), (z:int), false)"), o).verdict == Verdict::Refuted);
    Program div = test::load("div.rcrs");
    CHECK(is_valid(div.get("Pipeline"), o).verdict == Verdict::Refuted);
    CHECK(is_valid(test::load("sum.rcrs").get("Add"), o).verdict == Verdict::Proven);
    CHECK(is_valid(test::load("sum.rcrs").get("Sum"), o).verdict == Verdict::Proven);
}

TEST_CASE("input receptiveness") {
    AnalysisOptions o = with_solver();
    CHECK(is_input_receptive(test::load("sum.rcrs").get("Add"), o).verdict == Verdict::Proven);

    CheckResult d = is_input_receptive(test::load("div.rcrs").get("Div"), o);
    CHECK(d.verdict == Verdict::Refuted);
    REQUIRE(d.witness);
    CHECK(d.witness->illegal_at == 0);
    bool y_zero = false;
    for (auto& s : d.witness->inputs)
        if (s.name == "y")
            y_zero = !s.values.empty() && s.values[0] == Value::integer(0);
    CHECK(y_zero);

    CheckResult g = is_input_receptive(C("qltl((x:bool), (), G F x)"), o);
    CHECK(g.verdict == Verdict::Refuted);
    REQUIRE(g.witness);
    REQUIRE(g.witness->lasso.count("x"));
    const LassoWord& w = g.witness->lasso.at("x");
    for (int i = 0; i < 6; ++i)
        CHECK(w.at(i) == Value::boolean(false));
}

TEST_CASE("compatibility") {
    AnalysisOptions o = with_solver();
    Program div = test::load("div.rcrs");
    CHECK(check_compat(div.get("Source"), div.get("Div"), o).verdict == Verdict::Refuted);
    Component div_st = C("stateless((x:int, y:int), (z:int), y != 0 && z = x / y)");
    CHECK(check_compat(div.get("Source"), div_st, o).verdict == Verdict::Refuted);
    Program sum = test::load("sum.rcrs");
    CHECK(check_compat(sum.get("Add"), sum.get("UnitDelay"), o).verdict == Verdict::Proven);
    Program rr = test::load("request_response.rcrs");
    CHECK(check_compat(rr.get("Server"), rr.get("Client"), o).verdict == Verdict::Proven);
    try {
        check_compat(sum.get("UnitDelay"), sum.get("Add"), o);
        FAIL("expected WfError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::WfError);
    }
}

TEST_CASE("refinement conditions") {
    Program p = test::load("refine_stateless.rcrs");
    RefinementVcs v = refine_vc(p.get("Spec"), p.get("Impl"));
    REQUIRE(v.vcs.size() == 1);
    CHECK(v.vcs[0].fragment == Fragment::FirstOrder);
    VarList xy{{"x", I}, {"y", I}};
    Expr expected = parse_formula(
        "((exists y:int . x >= 0 && y >= x) -> (exists y:int . x <= y && y <= x + 10)) && "
        "((exists y:int . x >= 0 && y >= x) && x <= y && y <= x + 10 -> x >= 0 && y >= x)",
        xy);
    CHECK(alpha_equal(simplify(v.vcs[0].goal), simplify(expected)));

    RefinementVcs self = refine_vc(p.get("Spec"), p.get("Spec"));
    for (auto& vc : self.vcs)
        CHECK(is_const_true(simplify(vc.goal)));

    RefinementVcs fn = refine_vc(p.get("Anything"), p.get("Different"));
    CHECK(decide_valid(fn.vcs[0].goal, with_solver()).verdict == (have_solver() ? Verdict::Proven : Verdict::Unknown));

    CHECK_THROWS_AS(refine_vc(p.get("Spec"), C("stateless((x:int, z:int), (y:int), true)")), Error);
}

TEST_CASE("refinement checks") {
    Program p = test::load("refine_stateless.rcrs");
    AnalysisOptions o = with_solver();
    o.dom.set(I, shrink_order(-2, 12));
    o.horizon = 1;
    if (have_solver()) {
        CHECK(check_refines(p.get("Spec"), p.get("Impl"), o).verdict == Verdict::Proven);
        CHECK(check_refines(p.get("Anything"), p.get("Different"), o).verdict == Verdict::Proven);
    }
    CheckResult rev = check_refines(p.get("Impl"), p.get("Spec"), o);
    CHECK(rev.verdict == Verdict::Refuted);
    REQUIRE(rev.witness);
    REQUIRE_FALSE(rev.witness->inputs.empty());
    CHECK(rev.witness->inputs[0].values[0] == Value::integer(-1));

    // replaying the witness: legal for the abstract side, illegal for the concrete one
    Trace in{{Value::integer(-1)}};
    CHECK(behaviour(p.get("Impl"), in, 1, o.dom).illegal_at < 0);
    CHECK(behaviour(p.get("Spec"), in, 1, o.dom).illegal_at == 0);
}

TEST_CASE("oven refinement stays open") {
    Program p = test::load("oven.rcrs");
    AnalysisOptions o = with_solver();
    RefinementVcs v = refine_vc(p.get("Oven"), p.get("Thermostat"), &o);
    REQUIRE(v.vcs.size() == 1);
    CHECK(v.vcs[0].fragment == Fragment::Temporal);
    CHECK(check_refines(p.get("Oven"), p.get("Thermostat"), o).verdict == Verdict::Unknown);
}

TEST_CASE("data refinement") {
    AnalysisOptions o = with_solver();
    Atomic c = atomic_of("sts((x:int), (y:int), (s:int), s = 0, y = s && s' = s + 1)");
    Atomic c2 = atomic_of("sts((x:int), (y:int), (t:int), t = 0, y = t && t' = t + 1)");
    VarList st{{"s", I}, {"t", I}};
    for (auto& vc : data_refine_vc(*c, *c2, parse_formula("s = t", st)))
        CHECK(is_const_true(simplify(vc.goal)));

    Program cnt = test::load("counter.rcrs");
    Atomic a = lift_to(*atomic(cnt.get("Counter")), Kind::Sts);
    Atomic k = lift_to(*atomic(cnt.get("DoubleCounter")), Kind::Sts);
    Expr rel = parse_formula("t = 2 * s", st);
    std::vector<Vc> vcs = data_refine_vc(*a, *k, rel);
    CHECK(vcs.size() == 3);
    if (have_solver())
        CHECK(check_data_refines(*a, *k, rel, o).verdict == Verdict::Proven);
    AnalysisOptions fin = no_solver();
    fin.dom.set(I, shrink_order(-6, 6));
    for (auto& vc : vcs) {
        CheckResult r = decide_valid(vc.goal, fin);
        INFO(vc.origin, ": ", to_string(simplify(vc.goal)));
        CHECK(r.verdict != Verdict::Refuted);
    }

    std::vector<Vc> bad = data_refine_vc(*a, *k, ex::ff());
    CHECK(decide_valid(bad[0].goal, fin).verdict == Verdict::Refuted);
}

TEST_CASE("smt scripts") {
    Vc t = make_vc(ex::tt(), "test");
    std::string s = emit_smtlib(t);
    CHECK(s.find("(assert (not true))") != std::string::npos);
    CHECK(s.find("(check-sat)") != std::string::npos);
    CHECK(emit_smtlib(t) == s);
    Expr q = parse_formula("exists y:int . y > x", {{"x", I}});
    CHECK(emit_smtlib(make_vc(q, "q")).find("exists") != std::string::npos);
    CHECK_THROWS_AS(emit_smtlib(make_vc(parse_formula("G x > 0", {{"x", I}}), "g")), Error);
    Expr r = parse_formula("x >= 0 && x <= 2", {{"x", SemType::range(0, 2)}});
    CHECK(emit_smtlib(make_vc(r, "r")).find("(<= x 2)") != std::string::npos);
    if (have_solver()) {
        auto cfg = *AnalysisOptions::defaults().solver;
        CHECK(run_solver(cfg, s).answer == SatAnswer::Unsat);
        CHECK(run_solver(cfg, emit_smtlib(make_vc(q, "q"))).answer == SatAnswer::Unsat);
        Program p = test::load("refine_stateless.rcrs");
        Vc vc = refine_vc(p.get("Spec"), p.get("Impl")).vcs[0];
        CHECK(run_solver(cfg, emit_smtlib(vc)).answer == SatAnswer::Unsat);
    }
}

TEST_CASE("deciding first-order goals without a solver") {
    AnalysisOptions o = no_solver();
    VarList v{{"a", SemType::range(0, 3)}, {"b", SemType::boolean()}};
    CHECK(decide_valid(parse_formula("a <= 3 && (b || !b)", v), o).verdict == Verdict::Proven);
    CheckResult r = decide_valid(parse_formula("a < 3", v), o);
    CHECK(r.verdict == Verdict::Refuted);
    REQUIRE(r.witness);
    // over unbounded int a finitized domain can only refute
    o.dom.set(I, shrink_order(-2, 2));
    CHECK(decide_valid(parse_formula("x * x >= 0", {{"x", I}}), o).verdict == Verdict::Unknown);
    CHECK(decide_valid(parse_formula("x > 0", {{"x", I}}), o).verdict == Verdict::Refuted);
}

TEST_CASE("stateless refinement agrees with brute force") {
    const uint64_t seed = 21;
    test::print_seed("stateless-refinement-agreement", seed);
    SuiteReport r = stateless_refinement_agreement_suite(seed, 60);
    INFO(r.summary());
    for (auto& d : r.details)
        INFO(d);
    CHECK(r.ok());
}

TEST_CASE("legal formula is stable under lifting") {
    const uint64_t seed = 22;
    test::print_seed("legal-lift", seed);
    ComponentGen gen(seed);
    FiniteDomain dom;
    int checked = 0;
    for (int i = 0; i < 40; ++i) {
        Signature in = gen.ports("x", 1, 3), out = gen.ports("y", 1, 3);
        Atomic a = gen.stateless_atom(in, out);
        Expr l0 = legal_formula(*a);
        Expr l1 = legal_formula(*lift_to(*a, Kind::Sts));
        for (auto& tr : enumerate_traces(in, dom, 2))
            for (int k = 0; k <= 2; ++k) {
                std::map<std::string, std::vector<Value>> seqs{{in[0].name, tr[0]}};
                INFO(print_atomic(*a));
                CHECK(eval_prefix(l0, seqs, k, dom) == eval_prefix(l1, seqs, k, dom));
                ++checked;
            }
    }
    CHECK(checked > 0);
}
