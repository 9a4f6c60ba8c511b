#include "doctest.h"
#include "support.hpp"

#include "rcrs/compose.hpp"
#include "rcrs/diagram.hpp"
#include "rcrs/eval.hpp"
#include "rcrs/oracle.hpp"

#include <fstream>
#include <random>

using namespace rcrs;
using json = nlohmann::json;

namespace {

const SemType I = SemType::integer();

json load_json(const std::string& name) {
    std::ifstream f(std::string(RCRS_DATA_DIR) + "/diagrams/" + name);
    return json::parse(f);
}

// Direct per-step simulation of a flat diagram: each block output port is
// computed as soon as the inputs it mentions are known.
struct Dataflow {
    struct Block {
        Atomic a;
        std::vector<Value> state;
        std::vector<std::pair<std::string, int>> src;  // per input port
    };
    std::map<std::string, Block> blocks;
    std::vector<std::pair<std::string, int>> outputs;

    explicit Dataflow(const json& d) {
        for (auto& b : d["blocks"]) {
            Block blk;
            blk.a = library_block(b["kind"], b.value("params", json::object()));
            blk.state = blk.a->init_vals;
            blk.src.resize(blk.a->in.size());
            blocks[b["id"]] = blk;
        }
        outputs.resize(d["outputs"].size());
        for (auto& w : d["wires"]) {
            std::pair<std::string, int> s{w["src"][0], w["src"][1]};
            std::string did = w["dst"][0];
            int dp = w["dst"][1];
            if (did == "out")
                outputs[dp] = s;
            else
                blocks[did].src[dp] = s;
        }
    }

    // nullopt when some block rejects its inputs
    std::optional<std::vector<Value>> step(const std::vector<Value>& ext) {
        std::map<std::pair<std::string, int>, Value> sig;
        for (size_t i = 0; i < ext.size(); ++i)
            sig[{"in", (int)i}] = ext[i];
        auto env_of = [&](const Block& b, Env& env, bool& complete, const Expr& e) {
            complete = true;
            for (size_t j = 0; j < b.a->in.size(); ++j) {
                auto it = sig.find(b.src[j]);
                if (it != sig.end())
                    env.push(b.a->in[j].name, it->second);
                else if (occurs_free(e, b.a->in[j].name))
                    complete = false;
            }
            for (size_t j = 0; j < b.a->state.size(); ++j)
                env.push(b.a->state[j].name, b.state[j]);
        };
        FiniteDomain dom;
        for (bool progress = true; progress;) {
            progress = false;
            for (auto& [id, b] : blocks)
                for (size_t k = 0; k < b.a->outs.size(); ++k) {
                    if (sig.count({id, (int)k}))
                        continue;
                    Env env;
                    bool complete;
                    env_of(b, env, complete, b.a->outs[k]);
                    if (!complete)
                        continue;
                    sig[{id, (int)k}] = eval_term(b.a->outs[k], env, dom);
                    progress = true;
                }
        }
        for (auto& [id, b] : blocks) {
            Env env;
            bool complete;
            env_of(b, env, complete, ex::tt());
            if (!eval_formula(b.a->inpt, env, dom))
                return std::nullopt;
            std::vector<Value> next;
            for (auto& e : b.a->next)
                next.push_back(eval_term(e, env, dom));
            b.state = next;
        }
        std::vector<Value> out;
        for (auto& s : outputs)
            out.push_back(sig.at(s));
        return out;
    }
};

// Random flat diagram over Add, Sub, Gain, UnitDelay, Split, Const, Id.
// Wires mostly go forward; UnitDelay inputs, and now and then any input,
// may come from anywhere.
json random_diagram(std::mt19937_64& rng, int n_blocks) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const char* kinds[] = {"Add", "Sub", "Gain", "UnitDelay", "Split", "Const", "Id"};
    const int n_in[] = {2, 2, 1, 1, 1, 0, 1};
    const int n_out[] = {1, 1, 1, 1, 2, 1, 1};
    json d;
    int n_ext = pick(1, 2);
    d["inputs"] = json::array();
    for (int i = 0; i < n_ext; ++i)
        d["inputs"].push_back("x" + std::to_string(i));
    d["blocks"] = json::array();
    d["wires"] = json::array();
    std::vector<int> kind_of;
    for (int b = 0; b < n_blocks; ++b) {
        int k = pick(0, 6);
        kind_of.push_back(k);
        json blk{{"id", "b" + std::to_string(b)}, {"kind", kinds[k]}};
        if (k == 2)
            blk["params"] = {{"k", pick(-2, 2)}};
        if (k == 3)
            blk["params"] = {{"init", pick(0, 1)}};
        if (k == 5)
            blk["params"] = {{"c", pick(-1, 1)}};
        d["blocks"].push_back(blk);
    }
    for (int b = 0; b < n_blocks; ++b)
        for (int p = 0; p < n_in[kind_of[b]]; ++p) {
            std::vector<json> cands;
            for (int i = 0; i < n_ext; ++i)
                cands.push_back(json::array({"in", i}));
            int upto = kind_of[b] == 3 || pick(0, 9) == 0 ? n_blocks : b;
            for (int c = 0; c < upto; ++c)
                for (int q = 0; q < n_out[kind_of[c]]; ++q)
                    cands.push_back(json::array({"b" + std::to_string(c), q}));
            json src = cands[pick(0, (int)cands.size() - 1)];
            d["wires"].push_back({{"src", src}, {"dst", json::array({"b" + std::to_string(b), p})}});
        }
    int n_outs = pick(1, 2);
    d["outputs"] = json::array();
    for (int o = 0; o < n_outs; ++o) {
        int c = pick(0, n_blocks - 1);
        d["outputs"].push_back("y" + std::to_string(o));
        d["wires"].push_back({{"src", json::array({"b" + std::to_string(c), pick(0, n_out[kind_of[c]] - 1)})},
                              {"dst", json::array({"out", o})}});
    }
    return d;
}

// Back wires into non-delay blocks can close a same-step cycle.
bool translatable(const json& d) {
    try {
        translate(d);
        return true;
    } catch (const Error& e) {
        REQUIRE(e.code() == ErrorCode::AlgebraicLoop);
        return false;
    }
}

}  // namespace

TEST_CASE("library blocks") {
    CHECK(alpha_equivalent(*library_block("UnitDelay", {{"init", 0}}),
                           *test::atomic_of("det((x:int), (s:int), 0, true, (x), (s))")));
    CHECK(alpha_equivalent(*library_block("Const", {{"c", 5}}), *test::atomic_of("stateless_det((), true, (5))")));
    Atomic integ = library_block("Integrator", {{"dt", 0.1}});
    REQUIRE(integ->kind == Kind::Det);
    CHECK(alpha_equivalent(*integ, *test::atomic_of("det((x:real), (s:real), 0, true, (s + x * 0.1), (s))")));
    Atomic tf = library_block("TransferFcn", {{"dt", 0.5}});
    CHECK(tf->state.size() == 2);
    CHECK(tf->outs.size() == 1);
    Atomic div = library_block("Div", json::object());
    CHECK(to_string(div->inpt).find("!=") != std::string::npos);

    auto code = [](auto f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::SolverFailure;
    };
    CHECK(code([] { library_block("Mystery", json::object()); }) == ErrorCode::UnknownBlock);
    CHECK(code([] { library_block("Gain", {{"k", "three"}}); }) == ErrorCode::BadParams);
    CHECK(code([] { library_block("Integrator", json::object()); }) == ErrorCode::BadParams);
}

TEST_CASE("delayed sum diagram") {
    Translation t = translate(load_json("delayed_sum.json"));
    CHECK(wf(t.term).ok);
    CHECK(determ(t.term));
    CHECK(loop_free(t.term));
    Atomic a = atomic(t.term);
    CHECK(alpha_equivalent(*a, *test::atomic_of("det((y:int), (s:int), 0, true, (s+y), (s))")));
    FiniteDomain dom;
    dom.set(I, shrink_order(0, 2));
    Program sum = test::load("sum.rcrs");
    CHECK(bounded_equiv(t.term, sum.get("Sum"), dom, 4).equivalent);
    CHECK(bounded_equiv(t.term, atom(a), dom, 4).equivalent);
}

TEST_CASE("three block diagram") {
    Translation t = translate(load_json("three_block.json"));
    CHECK(t.expression == "A ; Switch1 ; (B || Id) ; Switch2 ; (C || Id)");
    // right-nested serial chain A ; (Switch1 ; (...))
    std::vector<Component> chain;
    Component c = t.term;
    while (c->tag == CompNode::Tag::Serial) {
        chain.push_back(c->kids[0]);
        c = c->kids[1];
    }
    chain.push_back(c);
    if (chain.size() != 5) {
        // left-nested: flatten the other way
        chain.clear();
        std::function<void(const Component&)> flat = [&](const Component& x) {
            if (x->tag == CompNode::Tag::Serial) {
                flat(x->kids[0]);
                flat(x->kids[1]);
            } else {
                chain.push_back(x);
            }
        };
        flat(t.term);
    }
    REQUIRE(chain.size() == 5);
    CHECK(chain[0]->tag == CompNode::Tag::Atom);
    CHECK(chain[1]->tag == CompNode::Tag::Atom);
    CHECK(chain[2]->tag == CompNode::Tag::Parallel);
    CHECK(chain[3]->tag == CompNode::Tag::Atom);
    CHECK(chain[4]->tag == CompNode::Tag::Parallel);
    CHECK(oi(chain[2]->kids[1]) == OIRelation{{1, 1}});
}

TEST_CASE("single block without wires") {
    json d{{"blocks", json::array({{{"id", "k"}, {"kind", "Const"}, {"params", {{"c", 5}}}}})},
           {"wires", json::array()}};
    Translation t = translate(d);
    REQUIRE(t.term->tag == CompNode::Tag::Atom);
    CHECK(alpha_equivalent(*t.term->atom, *library_block("Const", {{"c", 5}})));
}

TEST_CASE("nested subsystem") {
    Translation t = translate(load_json("nested_gain.json"));
    ExecResult r = exec_det(t.term, Trace{{Value::integer(1), Value::integer(2), Value::integer(0)}}, 3);
    CHECK(r.illegal_at < 0);
    // acc = 3x + delay, delay starts at 1
    CHECK(r.outputs == Trace{{Value::integer(4), Value::integer(10), Value::integer(10)}});
}

TEST_CASE("diagram errors") {
    try {
        translate(load_json("algebraic_loop.json"));
        FAIL("expected AlgebraicLoop");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AlgebraicLoop);
        CHECK(std::string(e.what()).find("->") != std::string::npos);
    }
    json d = load_json("delayed_sum.json");
    d["wires"].erase(d["wires"].begin());
    try {
        translate(d);
        FAIL("expected PortMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::PortMismatch);
    }
    json e = load_json("delayed_sum.json");
    e["wires"][1]["dst"][1] = 4;
    CHECK_THROWS_AS(translate(e), Error);
}

TEST_CASE("translation ignores block order") {
    json d = load_json("three_block.json");
    Translation a = translate(d);
    std::reverse(d["blocks"].begin(), d["blocks"].end());
    Translation b = translate(d);
    CHECK(a.expression == b.expression);
    CHECK(print_component(a.term) == print_component(b.term));
}

TEST_CASE("translated source reparses") {
    Translation t = translate(load_json("delayed_sum.json"));
    Program p = parse_program(t.source());
    CHECK(alpha_equivalent(*atomic(p.get("Diagram")), *atomic(t.term)));
}

TEST_CASE("translation matches direct dataflow simulation") {
    const uint64_t seed = 31;
    test::print_seed("diagram-adequacy", seed);
    std::mt19937_64 rng(seed);
    int translated = 0, loops = 0;
    for (int i = 0; i < 120; ++i) {
        json d = random_diagram(rng, 2 + i % 5);
        if (!translatable(d)) {
            ++loops;
            continue;
        }
        Translation t = translate(d);
        REQUIRE(wf(t.term).ok);
        REQUIRE(determ(t.term));
        REQUIRE(loop_free(t.term));
        ++translated;
        Dataflow sim(d);
        const int H = 4;
        Trace in(d["inputs"].size());
        for (auto& slot : in)
            for (int k = 0; k < H; ++k)
                slot.push_back(Value::integer(std::uniform_int_distribution<int>(-2, 2)(rng)));
        ExecResult r = exec_det(t.term, in, H);
        Trace expected(d["outputs"].size());
        int illegal = -1;
        for (int k = 0; k < H; ++k) {
            std::vector<Value> ext;
            for (auto& slot : in)
                ext.push_back(slot[k]);
            auto o = sim.step(ext);
            if (!o) {
                illegal = k;
                break;
            }
            for (size_t j = 0; j < o->size(); ++j)
                expected[j].push_back((*o)[j]);
        }
        INFO("diagram ", i, ": ", d.dump());
        CHECK(r.illegal_at == illegal);
        CHECK(r.outputs == expected);
    }
    MESSAGE("translated ", translated, " diagrams, ", loops, " rejected as algebraic loops");
    CHECK(translated >= 60);
    CHECK(loops > 0);
}
