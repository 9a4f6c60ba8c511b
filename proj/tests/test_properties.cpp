#include "doctest.h"
#include "support.hpp"

#include "rcrs/properties.hpp"

using namespace rcrs;

namespace {

void run(const SuiteReport& r) {
    std::printf("[suite] %s\n", r.summary().c_str());
    for (auto& d : r.details)
        std::printf("  %s\n", d.c_str());
    INFO(r.summary());
    CHECK(r.failures == 0);
    CHECK(r.cases > 0);
}

}  // namespace

TEST_CASE("randomized suites across seeds") {
    for (uint64_t seed : {101ULL, 202ULL, 303ULL}) {
        test::print_seed("property-suites", seed);
        run(oracle_equivalence_suite(seed, 100, 3));
        run(associativity_suite(seed, 50));
        run(precongruence_suite(seed, 50));
        run(legality_coherence_suite(seed, 50, 3));
    }
}

TEST_CASE("generator is reproducible") {
    ComponentGen a(5), b(5);
    for (int i = 0; i < 20; ++i) {
        Signature in = a.ports("x", 2), out = a.ports("y", 1);
        Signature in2 = b.ports("x", 2), out2 = b.ports("y", 1);
        CHECK(in == in2);
        CHECK(print_atomic(*a.stateless_atom(in, out)) == print_atomic(*b.stateless_atom(in2, out2)));
    }
}
