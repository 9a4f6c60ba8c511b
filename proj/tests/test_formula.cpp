#include "doctest.h"
#include "support.hpp"

#include "rcrs/eval.hpp"
#include "rcrs/properties.hpp"
#include "rcrs/simplify.hpp"

using namespace rcrs;

namespace {

const SemType I = SemType::integer();
const VarList scope{{"x", I}, {"y", I}, {"s", I}, {"b", SemType::boolean()}};

Expr f(const std::string& text) { return parse_formula(text, scope); }

}  // namespace

TEST_CASE("free_vars") {
    FreeVars a = free_vars(f("exists y:int . x < y"));
    CHECK(a.vars == std::set<Var>{{"x", I}});
    CHECK_FALSE(a.uses_primed);
    CHECK_FALSE(a.uses_temporal);

    FreeVars b = free_vars(f("s' = s + x"));
    CHECK(b.vars == std::set<Var>{{"s", I}, {"x", I}});
    CHECK(b.uses_primed);

    FreeVars c = free_vars(f("G (@y = x)"));
    CHECK(c.vars == std::set<Var>{{"x", I}, {"y", I}});
    CHECK(c.uses_temporal);
}

TEST_CASE("substitute") {
    Expr e = substitute(f("y = s"), {{"s", f("x + 1 = 0")->args[0]}});
    CHECK(to_string(e) == "y = x+1");

    // capture avoidance renames the binder
    Expr g = substitute(f("exists y:int . y = x"), {{"x", ex::var("y", I)}});
    REQUIRE(g->op == Op::Exists);
    CHECK(g->name != "y");
    CHECK(alpha_equal(g, f("exists z:int . z = y")));

    Expr trs = f("y = s && s' = x");
    Expr q = substitute(trs, {{primed_key("s"), ex::next(ex::var("s", I))}});
    CHECK(to_string(q) == "y = s && @s = x");

    CHECK_THROWS_AS(substitute(f("y = s"), {{"s", ex::tt()}}), Error);
}

TEST_CASE("apply_next") {
    CHECK(to_string(apply_next(f("b = true"))) == "@b = true");
    CHECK(alpha_equal(apply_next(f("forall y:int . y = x")), f("forall y:int . y = @x")));
    CHECK(to_string(apply_next(f("@x = y"))) == "@@x = @y");
    try {
        apply_next(f("s' = s"));
        FAIL("expected PrimedInTemporal");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::PrimedInTemporal);
    }
}

TEST_CASE("simplify examples") {
    CHECK(is_const_true(simplify(f("(x < y) L true"))));
    CHECK(to_string(simplify(f("true L (x < y)"))) == "G x < y");
    CHECK(is_const_false(simplify(f("(x < y) L false"))));
    CHECK(to_string(simplify(f("exists z:int . z = x / y && z > 0"))) == "x/y > 0");
    CHECK(is_const_true(simplify(f("forall z:int . z = x -> z = x"))));
    CHECK(to_string(simplify(f("b && true && (x = x)"))) == "b");
}

TEST_CASE("next and primes do not mix") {
    CHECK_THROWS_AS(f("G (s' = @s)"), Error);
}

TEST_CASE("free variables after substitution stay within the expected set") {
    const uint64_t seed = 11;
    test::print_seed("substitute-free-vars", seed);
    ComponentGen gen(seed);
    VarList fin{{"a", SemType::range(0, 2)}, {"c", SemType::range(0, 2)}, {"p", SemType::boolean()}};
    for (int i = 0; i < 200; ++i) {
        Expr e = gen.formula(fin, 3);
        Expr t = gen.term(SemType::range(0, 2), fin, 2);
        Expr r = substitute(e, {{"a", t}});
        std::set<std::string> allowed = free_names(e);
        allowed.erase("a");
        for (auto& n : free_names(t))
            allowed.insert(n);
        for (auto& n : free_names(r)) {
            INFO("case ", i, ": ", to_string(e));
            CHECK(allowed.count(n));
        }
    }
}

TEST_CASE("simplify preserves meaning and is idempotent") {
    const uint64_t seed = 12;
    test::print_seed("simplify-semantics", seed);
    ComponentGen gen(seed);
    FiniteDomain dom;
    VarList fin{{"a", SemType::range(0, 2)}, {"c", SemType::range(-1, 1)}, {"p", SemType::boolean()}};
    int mismatches = 0;
    for (int i = 0; i < 300; ++i) {
        Expr e = gen.formula(fin, 3);
        Expr s = simplify(e);
        CHECK(equal(simplify(s), s));
        for (auto& va : dom.values(fin[0].type))
            for (auto& vc : dom.values(fin[1].type))
                for (bool p : {false, true}) {
                    Env env;
                    env.push("a", va);
                    env.push("c", vc);
                    env.push("p", Value::boolean(p));
                    if (eval_formula(e, env, dom) != eval_formula(s, env, dom)) {
                        ++mismatches;
                        INFO(to_string(e), "  vs  ", to_string(s));
                        CHECK(false);
                    }
                }
    }
    CHECK(mismatches == 0);
}

TEST_CASE("apply_next commutes with substitution of temporal-free terms") {
    const uint64_t seed = 13;
    test::print_seed("next-substitution", seed);
    ComponentGen gen(seed);
    FiniteDomain dom;
    const SemType R = SemType::range(0, 2);
    VarList fin{{"a", R}, {"c", R}, {"p", SemType::boolean()}};
    VarList other{{"d", R}};
    auto words = lasso_family(dom.values(R), 1, 2);
    auto bwords = lasso_family(dom.values(SemType::boolean()), 1, 1);
    int compared = 0;
    for (int i = 0; i < 60; ++i) {
        Expr e = gen.formula(fin, 2);
        Expr t = gen.term(R, other, 2);
        Expr lhs = apply_next(substitute(e, {{"a", t}}));
        Expr rhs = substitute(apply_next(e), {{"a", t}});  // @a becomes @(t)
        for (size_t k = 0; k < 40; ++k) {
            std::map<std::string, LassoWord> w{{"a", words[(i + k) % words.size()]},
                                               {"c", words[(3 * k + i) % words.size()]},
                                               {"d", words[(7 * k + 2 * i) % words.size()]},
                                               {"p", bwords[k % bwords.size()]}};
            LassoVerdict l = eval_qltl(lhs, w, dom), r = eval_qltl(rhs, w, dom);
            INFO("case ", i, ": ", to_string(lhs), "  vs  ", to_string(rhs));
            CHECK(l.definite == r.definite);
            ++compared;
        }
    }
    CHECK(compared > 0);
}
