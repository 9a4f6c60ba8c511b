#pragma once

#include "rcrs/parser.hpp"

#include <cstdio>
#include <string>

namespace rcrs::test {

inline Program load(const std::string& file) { return parse_program_file(std::string(RCRS_DATA_DIR) + "/" + file); }

inline Component comp(const std::string& text, const Program* env = nullptr) { return parse_component(text, env); }

inline Atomic atomic_of(const std::string& text, const Program* env = nullptr) {
    Component c = parse_component(text, env);
    return c->atom;
}

inline void print_seed(const char* suite, unsigned long long seed) { std::printf("[seed] %s: %llu\n", suite, seed); }

}  // namespace rcrs::test
