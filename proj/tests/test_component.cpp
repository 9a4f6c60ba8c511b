#include "doctest.h"
#include "support.hpp"

#include "rcrs/compose.hpp"
#include "rcrs/lattice.hpp"
#include "rcrs/oracle.hpp"
#include "rcrs/simplify.hpp"

using namespace rcrs;
using test::atomic_of;

namespace {

const SemType I = SemType::integer();
const char* kAdd = "stateless_det((x:int, y:int), true, (x+y))";
const char* kUnitDelay = "det((x:int), (s:int), 0, true, (x), (s))";
const char* kSplit = "stateless_det((x:int), true, (x, x))";

Program sum_program() { return test::load("sum.rcrs"); }

bool same_atomic(const Atomic& a, const std::string& text) { return alpha_equivalent(*a, *atomic_of(text)); }

}  // namespace

TEST_CASE("signatures") {
    Program p = sum_program();
    CHECK(sigma_in(p.get("Add")) == Signature{{"x", I}, {"y", I}});
    Component split2 = atom(atomic_of("stateless_det((a:int, b:int), true, (a, b))"));
    CHECK(sigma_in(fdbk_of(split2)) == Signature{{"b", I}});
    Signature outs = sigma_out(parallel_of(p.get("Add"), p.get("Add")));
    REQUIRE(outs.size() == 2);
    CHECK(outs[0].type == I);
    CHECK(outs[1].type == I);
}

TEST_CASE("well-formedness") {
    Program p = sum_program();
    CHECK(wf(serial_of(p.get("Add"), p.get("UnitDelay"))).ok);
    WfResult bad = wf(serial_of(p.get("UnitDelay"), p.get("Add")));
    CHECK_FALSE(bad.ok);
    CHECK(bad.diagnostic.find("1") != std::string::npos);
    CHECK(bad.diagnostic.find("2") != std::string::npos);
    CHECK(wf(fdbk_of(p.get("Add"))).ok);
    Component mixed = serial_of(atom(atomic_of("stateless_det((x:int), true, (x))")),
                                atom(atomic_of("stateless_det((b:bool), true, (b))")));
    CHECK_FALSE(wf(mixed).ok);
}

TEST_CASE("alpha normalization") {
    Atomic a = atomic_of("stateless((u:int), (w:int), w > u)");
    Atomic b = atomic_of("stateless((x:int), (y:int), y > x)");
    CHECK(alpha_equivalent(*a, *b));
    Atomic n = alpha_normalize(*a);
    CHECK(print_atomic(*alpha_normalize(*n)) == print_atomic(*n));
    CHECK_FALSE(alpha_equivalent(*atomic_of("stateless((x:int), (y:int), x > 0)"),
                                 *atomic_of("stateless((x:int), (y:int), x >= 0)")));
}

TEST_CASE("parsing components") {
    Program p = sum_program();
    Component add = p.get("Add");
    REQUIRE(add->tag == CompNode::Tag::Atom);
    CHECK(add->atom->kind == Kind::StatelessDet);
    Component sum = p.get("Sum");
    REQUIRE(sum->tag == CompNode::Tag::Fdbk);
    CHECK(sum->kids[0]->tag == CompNode::Tag::Serial);
    CHECK(atomic_of("qltl((x:bool), (y:bool), G (x -> F y))")->kind == Kind::Qltl);
    CHECK_THROWS_AS(test::comp("stateless_det((x:int), true, (x +))"), Error);
    CHECK_THROWS_AS(test::comp("stateless((x:int), (y:int), y > z)"), Error);
}

TEST_CASE("kind lattice") {
    CHECK(join_kind(Kind::Det, Kind::Stateless) == Kind::Sts);
    for (Kind k : {Kind::StatelessDet, Kind::Det, Kind::Stateless, Kind::Sts, Kind::Qltl})
        CHECK(join_kind(k, k) == k);
    CHECK(join_kind(Kind::StatelessDet, Kind::Qltl) == Kind::Qltl);
    CHECK(kind_leq(Kind::StatelessDet, Kind::Det));
    CHECK_FALSE(kind_leq(Kind::Det, Kind::Stateless));
    CHECK_THROWS_AS(lift_to(*atomic_of("stateless((x:int), (y:int), y > x)"), Kind::Det), Error);
}

TEST_CASE("lifting") {
    Atomic q = lift_to(*atomic_of("stateless((x:int), (y:int), y > x)"), Kind::Qltl);
    CHECK(same_atomic(q, "qltl((x:int), (y:int), G y > x)"));

    Atomic d = lift_to(*atomic_of("stateless_det((x:int, y:int), y != 0, (x / y))"), Kind::Stateless);
    CHECK(same_atomic(d, "stateless((x:int, y:int), (z:int), y != 0 && z = x / y)"));

    // UnitDelay as qltl agrees with y = 0 && G (@y = x) on every small lasso
    Atomic u = lift_to(*atomic_of(kUnitDelay), Kind::Qltl);
    REQUIRE(u->kind == Kind::Qltl);
    Expr expected = parse_formula("y = 0 && G (@y = x)", {{"x", I}, {"y", I}});
    Expr got = rename_vars(u->rel, {{u->in[0].name, "x"}, {u->out[0].name, "y"}});
    FiniteDomain dom;
    dom.set(I, {Value::integer(0), Value::integer(1)});
    auto words = lasso_family(dom.values(I), 2, 2);
    LassoBounds lb;
    lb.stem = 2;
    lb.loop = 2;
    int agree = 0;
    for (auto& wx : words)
        for (auto& wy : words) {
            std::map<std::string, LassoWord> w{{"x", wx}, {"y", wy}};
            Tri e = eval_qltl(expected, w, dom, lb).definite;
            LassoVerdict g = eval_qltl(got, w, dom, lb);
            Tri gv = g.definite != Tri::Unknown ? g.definite : (g.bounded ? Tri::True : Tri::False);
            INFO("x = ", wx.str(), ", y = ", wy.str());
            CHECK(e == gv);
            ++agree;
        }
    CHECK(agree == (int)(words.size() * words.size()));
}

TEST_CASE("lift coherence: both paths from stateless_det to sts agree") {
    Atomic div = atomic_of("stateless_det((x:int, y:int), y != 0, (x / y))");
    Atomic via_det = lift_to(*sd_to_det(*div), Kind::Sts);
    Atomic via_stateless = lift_to(*sd_to_stateless(*div), Kind::Sts);
    FiniteDomain dom;
    dom.set(I, shrink_order(-2, 2));
    CHECK(bounded_equiv(atom(via_det), atom(via_stateless), dom, 2).equivalent);
}

TEST_CASE("serial composition") {
    CHECK(same_atomic(serial(*atomic_of(kAdd), *atomic_of(kUnitDelay)),
                      "det((x:int, y:int), (s:int), 0, true, (x+y), (s))"));
    Atomic id = atomic_of("stateless_det((x:int), true, (x))");
    Atomic c = atomic_of("stateless_det((u:int), u > 0, (u * 2))");
    CHECK(alpha_equivalent(*serial(*id, *c), *c));

    Atomic src = atomic_of("stateless((u:int), (x:int, y:int), true)");
    Atomic div = atomic_of("stateless((x:int, y:int), (z:int), y != 0 && z = x / y)");
    Atomic r = serial(*src, *div);
    CHECK(r->kind == Kind::Stateless);
    CHECK(is_const_false(simplify(r->rel)));
}

TEST_CASE("parallel composition") {
    CHECK(same_atomic(parallel(*atomic_of(kAdd), *atomic_of(kAdd)),
                      "stateless_det((x:int, y:int, u:int, v:int), true, (x+y, u+v))"));
    CHECK(same_atomic(parallel(*atomic_of("qltl((x:bool), (y:bool), G (x -> F y))"),
                               *atomic_of("qltl((u:bool), (v:bool), G F u)")),
                      "qltl((x:bool, u:bool), (y:bool, v:bool), G (x -> F y) && G F u)"));

    Atomic mixed = parallel(*atomic_of("stateless((x:int), (y:int), y > x)"),
                            *atomic_of("stateless_det((u:int), u != 0, (1 / u))"));
    CHECK(mixed->kind == Kind::Stateless);
    Atomic expected = atomic_of("stateless((x:int, u:int), (y:int, v:int), y > x && u != 0 && v = 1 / u)");
    CHECK(alpha_equivalent(*mixed, *expected));
    FiniteDomain dom;
    dom.set(I, shrink_order(-2, 2));
    CHECK(bounded_equiv(atom(mixed), atom(expected), dom, 1).equivalent);
}

TEST_CASE("decomposable and feedback") {
    CHECK(decomposable(*atomic_of("det((x:int, y:int), (s:int), 0, true, (x+y), (s, s))")));
    CHECK_FALSE(decomposable(*atomic_of("stateless_det((x:int), true, (x))")));
    CHECK(decomposable(*atomic_of("stateless_det((x:int, y:int), true, (y, x))")));

    CHECK(same_atomic(feedback(*atomic_of("det((x:int, y:int), (s:int), 0, true, (x+y), (s, s))")),
                      "det((y:int), (s:int), 0, true, (s+y), (s))"));
    CHECK(same_atomic(feedback(*atomic_of("stateless_det((x:int, y:int), true, (y+1, x))")),
                      "stateless_det((y:int), true, (y+1))"));

    Atomic fb = feedback(*atomic_of("stateless_det((x:int, y:int), x < 10, (y, x))"));
    CHECK(same_atomic(fb, "stateless_det((y:int), y < 10, (y))"));
    // two-pass execution of the feedback term agrees
    Component term = fdbk_of(atom(atomic_of("stateless_det((x:int, y:int), x < 10, (y, x))")));
    for (long long v : {3LL, 9LL, 10LL, 12LL}) {
        Trace in{{Value::integer(v)}};
        ExecResult a = exec_det(term, in, 1), b = exec_det(atom(fb), in, 1);
        CHECK(a.illegal_at == b.illegal_at);
        CHECK(a.outputs == b.outputs);
    }
}

TEST_CASE("determinism, OI and loop freedom") {
    Program p = sum_program();
    CHECK(determ(serial_of(p.get("Add"), p.get("UnitDelay"))));
    CHECK_FALSE(determ(atom(atomic_of("stateless((x:int), (y:int), y > x)"))));
    CHECK(determ(p.get("Sum")));

    CHECK(oi(p.get("Add")) == OIRelation{{1, 1}, {1, 2}});
    CHECK(oi(p.get("UnitDelay")).empty());
    CHECK(oi(p.get("Sum")).empty());
    CHECK(oi(atom(atomic(p.get("Sum")))).empty());

    CHECK(loop_free(p.get("Sum")));
    Component direct = fdbk_of(atom(atomic_of("stateless_det((x:int, y:int), true, (x, y))")));
    CHECK_FALSE(loop_free(direct));
    CHECK(oi(atom(atomic_of("stateless_det((x:int, y:int), true, (x, y))"))).count({1, 1}));
    CHECK(loop_free(serial_of(p.get("Add"), p.get("UnitDelay"))));
}

TEST_CASE("atomic reduction") {
    Program p = sum_program();
    CHECK(same_atomic(atomic(p.get("Sum")), "det((y:int), (s:int), 0, true, (s+y), (s))"));
    Atomic a = atomic_of(kSplit);
    CHECK(atomic(atom(a)) == a);
    try {
        atomic(fdbk_of(atom(atomic_of("stateless_det((x:int), true, (x))"))));
        FAIL("expected FeedbackOnNonDecomposable");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FeedbackOnNonDecomposable);
    }
}

TEST_CASE("serial agrees with the oracle composition") {
    FiniteDomain dom;
    dom.set(I, shrink_order(0, 2));
    Program p = sum_program();
    Component chain = serial_of(serial_of(p.get("Add"), p.get("UnitDelay")), p.get("Split"));
    CHECK(bounded_equiv(atom(atomic(chain)), chain, dom, 3).equivalent);
}
