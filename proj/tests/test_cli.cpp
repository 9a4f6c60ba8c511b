#include "doctest.h"
#include "support.hpp"

#include "rcrs/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace rcrs;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& f) { return std::string(RCRS_DATA_DIR) + "/" + f; }

bool have_solver() { return std::getenv("RCRS_SMT_SOLVER") && *std::getenv("RCRS_SMT_SOLVER"); }

}  // namespace

TEST_CASE("simplify golden") {
    Run r = cli({"simplify", data("sum.rcrs")});
    CHECK(r.code == 0);
    CHECK(r.out == "det((y:int), (s:int), 0, true, (s+y), (s))\n");
    CHECK(cli({"simplify", data("sum.rcrs"), "--target", "Add"}).out == "stateless_det((x:int, y:int), true, (x+y))\n");
}

TEST_CASE("compat exit codes") {
    Run r = cli({"check", "compat", data("div.rcrs"), "--left", "Source", "--right", "Div"});
    CHECK(r.code == ExitRefuted);
    CHECK(r.out.find("verdict: Refuted") != std::string::npos);
    Run ok = cli({"check", "compat", data("sum.rcrs"), "--left", "Add", "--right", "UnitDelay"});
    CHECK(ok.code == ExitProven);
    Run bad = cli({"check", "compat", data("sum.rcrs"), "--left", "UnitDelay", "--right", "Add"});
    CHECK(bad.code == ExitUsage);
    CHECK_FALSE(bad.err.empty());
}

TEST_CASE("simulate golden") {
    Run r = cli({"simulate", data("sum.rcrs"), "--input", "x:1,1,1,1", "--horizon", "4"});
    CHECK(r.code == 0);
    CHECK(r.out.find("y: 0,1,2,3\n") != std::string::npos);
    Run u = cli({"simulate", data("sum.rcrs"), "--target", "UnitDelay", "--input", "x:5,7,9", "--horizon", "3"});
    CHECK(u.out.find("y: 0,5,7\n") != std::string::npos);
    Run d = cli({"simulate", data("div.rcrs"), "--target", "Div", "--input", "x:1,2;y:1,0", "--horizon", "2"});
    CHECK(d.code == ExitRefuted);
    CHECK(d.out.find("illegal_at: 1") != std::string::npos);
    CHECK(cli({"simulate", data("sum.rcrs"), "--input", "x:1,1", "--horizon", "4"}).code == ExitUsage);
    CHECK(cli({"simulate", data("sum.rcrs"), "--input", "x:1,a,1,1", "--horizon", "4"}).code == ExitUsage);
}

TEST_CASE("refuted witness replays through simulate") {
    std::string dom = "/tmp/rcrs_cli_dom.txt";
    {
        std::ofstream f(dom);
        f << "domain int = {-2..12}\n";
    }
    Run r = cli({"check", "refine", data("refine_stateless.rcrs"), "--abstract", "Impl", "--concrete", "Spec",
                 "--domains", dom, "--horizon", "1"});
    CHECK(r.code == ExitRefuted);
    auto pos = r.out.find("witness.input: ");
    REQUIRE(pos != std::string::npos);
    std::string input = r.out.substr(pos + 15, r.out.find('\n', pos) - pos - 15);
    CHECK(input.rfind("x:-1", 0) == 0);
    // legal for the abstract side, illegal for the concrete side
    std::string x = input.substr(0, input.find(';'));
    CHECK(cli({"simulate", data("refine_stateless.rcrs"), "--target", "Impl", "--input", x, "--horizon", "1",
               "--domains", dom})
              .code == 0);
    Run s = cli({"simulate", data("refine_stateless.rcrs"), "--target", "Spec", "--input", x, "--horizon", "1",
                 "--domains", dom});
    CHECK(s.code == ExitRefuted);
    CHECK(s.out.find("illegal_at: 0") != std::string::npos);
    std::remove(dom.c_str());
}

TEST_CASE("refine, legal, smt") {
    if (have_solver()) {
        Run r = cli({"check", "refine", data("refine_stateless.rcrs"), "--abstract", "Spec", "--concrete", "Impl"});
        CHECK(r.code == ExitProven);
        CHECK(r.out.find("note: rule: ") != std::string::npos);
    }
    Run l = cli({"legal", data("div.rcrs"), "--target", "Div"});
    CHECK(l.out == "legal: G y != 0\n");
    Run s = cli({"smt", data("refine_stateless.rcrs"), "--query", "refine", "--abstract", "Spec", "--concrete", "Impl"});
    CHECK(s.code == 0);
    CHECK(s.out.find("(check-sat)") != std::string::npos);
    Run t = cli({"smt", data("oven.rcrs"), "--query", "refine", "--abstract", "Oven", "--concrete", "Thermostat"});
    CHECK(t.code == ExitUnknown);
    Run o = cli({"check", "refine", data("oven.rcrs"), "--abstract", "Oven", "--concrete", "Thermostat"});
    CHECK(o.code == ExitUnknown);
    CHECK(o.out.find("note: vc: ") != std::string::npos);
}

TEST_CASE("data refinement flag") {
    if (!have_solver())
        return;
    Run r = cli({"check", "refine", data("counter.rcrs"), "--abstract", "Counter", "--concrete", "DoubleCounter",
                 "--data-refine", "t = 2 * s"});
    CHECK(r.code == ExitProven);
    Run clash = cli({"check", "refine", data("counter.rcrs"), "--abstract", "Counter", "--concrete", "Counter",
                     "--data-refine", "s = s"});
    CHECK(clash.code == ExitUsage);
}

TEST_CASE("translate") {
    Run r = cli({"translate", data("diagrams/three_block.json")});
    CHECK(r.code == 0);
    CHECK(r.out.find("term: A ; Switch1 ; (B || Id) ; Switch2 ; (C || Id)") != std::string::npos);
    Run l = cli({"translate", data("diagrams/algebraic_loop.json")});
    CHECK(l.code == ExitUsage);
    CHECK(l.err.find("algebraic loop") != std::string::npos);
}

TEST_CASE("usage errors and internal failures") {
    CHECK(cli({}).code == ExitUsage);
    CHECK(cli({"frobnicate"}).code == ExitUsage);
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({"simplify", "/nonexistent.rcrs"}).code == ExitUsage);
    std::string f = "/tmp/rcrs_cli_fb.rcrs";
    {
        std::ofstream o(f);
        o << "component Id = stateless_det((x:int), true, (x))\ncomponent Bad = fdbk(Id)\n";
    }
    Run r = cli({"simplify", f});
    CHECK(r.code == ExitInternal);
    CHECK(r.err.find("FeedbackOnNonDecomposable") != std::string::npos);
    std::remove(f.c_str());
}

TEST_CASE("reports are deterministic") {
    std::vector<std::string> a{"check", "receptive", data("div.rcrs"), "--target", "Div"};
    CHECK(cli(a).out == cli(a).out);
    std::vector<std::string> s{"selftest", "--seed", "3"};
    Run x = cli(s), y = cli(s);
    CHECK(x.out == y.out);
    CHECK(x.code == 0);
}
