#pragma once

#include "rcrs/expr.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rcrs {

struct Port {
    std::string name;
    SemType type;

    bool operator==(const Port& o) const { return name == o.name && type == o.type; }
};

using Signature = std::vector<Port>;

VarList as_vars(const Signature& sig);
std::vector<Expr> as_terms(const Signature& sig);
std::vector<std::string> names_of(const Signature& sig);

enum class Kind { StatelessDet, Det, Stateless, Sts, Qltl };

const char* kind_name(Kind k);

// One record covers the five atomic kinds; unused fields stay empty.
//   sts:           in, out, state, init, rel (trs)
//   stateless:     in, out, rel (io)
//   det:           in, state, init_vals, inpt, next, outs  (out derived)
//   stateless_det: in, inpt, outs                          (out derived)
//   qltl:          in, out, rel (phi)
struct AtomicComponent {
    Kind kind = Kind::StatelessDet;
    Signature in;
    Signature out;
    Signature state;
    Expr init;
    Expr rel;
    std::vector<Value> init_vals;
    Expr inpt;
    std::vector<Expr> next;
    std::vector<Expr> outs;
};

using Atomic = std::shared_ptr<const AtomicComponent>;

Atomic make_sts(Signature in, Signature out, Signature state, Expr init, Expr trs);
Atomic make_stateless(Signature in, Signature out, Expr io);
Atomic make_det(Signature in, Signature state, std::vector<Value> init_vals, Expr inpt, std::vector<Expr> next,
                std::vector<Expr> outs);
Atomic make_stateless_det(Signature in, Expr inpt, std::vector<Expr> outs);
Atomic make_qltl(Signature in, Signature out, Expr phi);

// Output ports for det / stateless_det, named y, y0, y1, ... apart from `avoid`.
Signature derived_outputs(const std::vector<Expr>& outs, const std::set<std::string>& avoid);

// All variable names declared by the component's signatures.
std::set<std::string> declared_names(const AtomicComponent& c);
// Declared names plus every name occurring in its formulas (bound ones too).
std::set<std::string> all_names(const AtomicComponent& c);

struct CompNode;
using Component = std::shared_ptr<const CompNode>;

struct CompNode {
    enum class Tag { Atom, Serial, Parallel, Fdbk };
    Tag tag = Tag::Atom;
    Atomic atom;
    std::vector<Component> kids;
};

Component atom(Atomic a);
Component serial_of(Component a, Component b);
Component parallel_of(Component a, Component b);
Component fdbk_of(Component a);

Signature sigma_in(const Component& c);
Signature sigma_out(const Component& c);
Signature sigma_in(const AtomicComponent& c);
Signature sigma_out(const AtomicComponent& c);

struct WfResult {
    bool ok = true;
    std::string diagnostic;
};

// Positional type agreement for serial and feedback connections, plus
// per-atom scoping checks.
WfResult wf(const Component& c);
WfResult wf_atomic(const AtomicComponent& c);

// Canonical renaming: inputs x0.., outputs y0.., states s0.., bound b0..
Atomic alpha_normalize(const AtomicComponent& c);
Component alpha_normalize(const Component& c);
bool alpha_equivalent(const AtomicComponent& a, const AtomicComponent& b);

// Rename signature variables of an atomic component (x and x' occurrences).
Atomic rename_atomic(const AtomicComponent& c, const std::map<std::string, std::string>& m);
// Apply `simplify` to every formula and term of the component.  Det outputs
// whose simplification would lose an input variable are left as they are.
Atomic simplify_atomic(const AtomicComponent& c);

std::string print_signature(const Signature& s);
std::string print_atomic(const AtomicComponent& c);
std::string print_component(const Component& c);

}  // namespace rcrs
