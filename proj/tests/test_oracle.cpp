#include "doctest.h"
#include "support.hpp"

#include "rcrs/compose.hpp"
#include "rcrs/lattice.hpp"
#include "rcrs/oracle.hpp"

using namespace rcrs;
using test::atomic_of;

namespace {

const SemType I = SemType::integer();

std::vector<Value> ints(std::initializer_list<long long> xs) {
    std::vector<Value> v;
    for (long long x : xs)
        v.push_back(Value::integer(x));
    return v;
}

FiniteDomain ints_domain(long long lo, long long hi) {
    FiniteDomain d;
    d.set(I, shrink_order(lo, hi));
    return d;
}

}  // namespace

TEST_CASE("bounded relation of atoms") {
    Atomic ud = atomic_of("det((x:int), (s:int), 0, true, (x), (s))");
    RelResult r = bounded_rel(*ud, Trace{ints({1, 0})}, 2, ints_domain(0, 1));
    CHECK(r.illegal_at < 0);
    REQUIRE(r.outputs.size() == 1);
    CHECK(*r.outputs.begin() == Trace{ints({0, 1})});

    Program p = test::load("sum.rcrs");
    Atomic sum = lift_to(*atomic(p.get("Sum")), Kind::Sts);
    // the state reaches 4 after the last step
    RelResult s = bounded_rel(*sum, Trace{ints({1, 1, 1, 1})}, 4, ints_domain(0, 4));
    REQUIRE(s.outputs.size() == 1);
    CHECK(*s.outputs.begin() == Trace{ints({0, 1, 2, 3})});

    Atomic none = atomic_of("stateless((x:int), (y:int), false)");
    for (long long v : {0, 1})
        CHECK(bounded_rel(*none, Trace{ints({v})}, 1, ints_domain(0, 1)).illegal_at == 0);
}

TEST_CASE("stepwise execution") {
    Program p = test::load("sum.rcrs");
    ExecResult e = exec_det(p.get("Sum"), Trace{ints({1, 1, 1, 1})}, 4);
    CHECK(e.illegal_at < 0);
    CHECK(e.outputs == Trace{ints({0, 1, 2, 3})});

    Program d = test::load("div.rcrs");
    Component chain = serial_of(atom(atomic_of("stateless_det((a:int, b:int), true, (a, b))")), d.get("Div"));
    ExecResult f = exec_det(chain, Trace{ints({4, 4, 4, 4}), ints({1, 2, 0, 1})}, 4);
    CHECK(f.illegal_at == 2);
    CHECK(f.outputs == Trace{ints({4, 2})});

    Component id = atom(atomic_of("stateless_det((x:int), true, (x))"));
    Trace t{ints({3, -1, 7})};
    CHECK(exec_det(id, t, 3).outputs == t);

    CHECK(exec_det(p.get("UnitDelay"), Trace{ints({5, 7, 9})}, 3).outputs == Trace{ints({0, 5, 7})});
    CHECK_THROWS_AS(exec_det(atom(atomic_of("stateless((x:int), (y:int), y > x)")), t, 1), Error);
}

TEST_CASE("bounded equivalence") {
    Program p = test::load("sum.rcrs");
    FiniteDomain dom = ints_domain(0, 2);
    CHECK(bounded_equiv(atom(atomic(p.get("Sum"))), p.get("Sum"), dom, 4).equivalent);

    Component ud1 = atom(atomic_of("det((x:int), (s:int), 0, true, (x), (s))"));
    Component add_then = serial_of(atom(atomic_of("stateless_det((x:int), true, (x, x))")), p.get("Add"));
    EquivResult diff = bounded_equiv(add_then, ud1, dom, 2);
    CHECK_FALSE(diff.equivalent);
    REQUIRE(diff.counterexample);
    CHECK(*diff.counterexample == Trace{ints({0, 1})});  // least trace whose outputs differ

    Component a = p.get("Add"), u = p.get("UnitDelay"), s = p.get("Split");
    CHECK(bounded_equiv(serial_of(serial_of(a, u), s), serial_of(a, serial_of(u, s)), dom, 3).equivalent);
}

TEST_CASE("bounded refutation of refinement") {
    Program p = test::load("refine_stateless.rcrs");
    CheckResult r = bounded_refute_refinement(p.get("Impl"), p.get("Spec"), ints_domain(-2, 12), 1);
    CHECK(r.verdict == Verdict::Refuted);
    REQUIRE(r.witness);
    CHECK(r.witness->inputs[0].values[0] == Value::integer(-1));
    CHECK(bounded_refute_refinement(p.get("Spec"), p.get("Spec"), ints_domain(-2, 2), 2).verdict == Verdict::Unknown);

    CheckResult o = bounded_refute_refinement(p.get("Different"), p.get("Anything"), ints_domain(0, 1), 1);
    CHECK(o.verdict == Verdict::Refuted);
    REQUIRE(o.witness);
    REQUIRE_FALSE(o.witness->outputs.empty());
    CHECK(o.witness->outputs[0].values[0] == o.witness->inputs[0].values[0]);
}

TEST_CASE("bounded Hoare triples") {
    Program p = test::load("sum.rcrs");
    FiniteDomain dom = ints_domain(0, 2);
    auto nonneg = [](const Trace& in) {
        for (auto& v : in[0])
            if (v.q < Rational(0))
                return false;
        return true;
    };
    auto nondecreasing = [](const Trace&, const Trace& out) {
        for (size_t i = 1; i < out[0].size(); ++i)
            if (out[0][i].q < out[0][i - 1].q)
                return false;
        return true;
    };
    CHECK(bounded_hoare(nonneg, p.get("Sum"), nondecreasing, dom, 4).verdict == Verdict::Unknown);

    Program d = test::load("div.rcrs");
    auto yes = [](const Trace&) { return true; };
    auto any = [](const Trace&, const Trace&) { return true; };
    CheckResult r = bounded_hoare(yes, d.get("Div"), any, dom, 1);
    CHECK(r.verdict == Verdict::Refuted);
    REQUIRE(r.witness);
    CHECK(r.witness->illegal_at == 0);

    auto no = [](const Trace&) { return false; };
    CHECK(bounded_hoare(no, d.get("Div"), any, dom, 2).verdict == Verdict::Unknown);
}

TEST_CASE("lasso evaluation") {
    FiniteDomain dom;
    Expr gfx = parse_formula("G F x", {{"x", SemType::boolean()}});
    CHECK(eval_qltl(gfx, {{"x", LassoWord{{}, {Value::boolean(true)}}}}, dom).definite == Tri::True);
    CHECK(eval_qltl(gfx, {{"x", LassoWord{{Value::boolean(true)}, {Value::boolean(false)}}}}, dom).definite ==
          Tri::False);

    Expr legal = parse_formula("forall y:bool . G (x -> F y) -> G F y", {{"x", SemType::boolean()}});
    LassoBounds lb;
    lb.stem = 2;
    lb.loop = 2;
    LassoVerdict v =
        eval_qltl(legal, {{"x", LassoWord{{}, {Value::boolean(true), Value::boolean(false)}}}}, dom, lb);
    CHECK(v.bounded);
}

TEST_CASE("domains") {
    CHECK(shrink_order(-2, 2) == ints({0, -1, 1, -2, 2}));
    CHECK(shrink_order(3, 5) == ints({3, 4, 5}));
    FiniteDomain d = FiniteDomain::parse("domain int = {0, 1, 2}\ndomain real = {-1..1}\n");
    CHECK(d.values(I) == ints({0, 1, 2}));
    CHECK(d.values(SemType::real()).size() == 3);
    CHECK_FALSE(d.exact(I));
    CHECK(FiniteDomain{}.exact(SemType::range(0, 3)));
    try {
        FiniteDomain{}.values(I);
        FAIL("expected DomainNotFinite");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DomainNotFinite);
    }
}
