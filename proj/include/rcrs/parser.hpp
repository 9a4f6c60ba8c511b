#pragma once

#include "rcrs/component.hpp"

#include <map>
#include <string>
#include <vector>

namespace rcrs {

// A parsed .rcrs file: named component bindings plus enum declarations.
struct Program {
    std::map<std::string, Component> defs;
    std::vector<std::string> order;  // binding order; the last one is the default target
    std::map<std::string, SemType> enums;

    Component get(const std::string& name) const;
    Component target() const;
};

Program parse_program(const std::string& text);
Program parse_program_file(const std::string& path);

// A single component expression, optionally referring to names in `env`.
Component parse_component(const std::string& text, const Program* env = nullptr);

// A formula over the given variables (and enum constants of `env`).
Expr parse_formula(const std::string& text, const VarList& scope, const Program* env = nullptr);

// Type names: bool, int, int[lo..hi], real, unit, or an enum declared in `env`.
SemType parse_type(const std::string& text, const Program* env = nullptr);

}  // namespace rcrs
