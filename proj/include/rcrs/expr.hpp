#pragma once

#include "rcrs/value.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace rcrs {

// Terms and formulas share one immutable tree; a formula is a Bool-typed term.
enum class Op {
    Var,
    Primed,
    Next,
    Const,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Ite,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Forall,
    Exists,
    Until,
    Leads,
    Globally,
    Finally,
};

struct Node;
using Expr = std::shared_ptr<const Node>;
using Term = Expr;
using Formula = Expr;

struct Node {
    Op op = Op::Const;
    SemType type;          // type of the node; for Var/Primed the variable type
    std::string name;      // Var / Primed / binder name
    SemType var_type;      // binder variable type
    Value value;           // Const payload
    std::vector<Expr> args;
};

struct Var {
    std::string name;
    SemType type;

    bool operator==(const Var& o) const { return name == o.name && type == o.type; }
    bool operator<(const Var& o) const { return name != o.name ? name < o.name : type < o.type; }
};

using VarList = std::vector<Var>;

// ---- construction (type-checked; TypeMismatch on ill-typed input) ----
namespace ex {
Expr var(const std::string& name, const SemType& ty);
Expr var(const Var& v);
Expr primed(const std::string& name, const SemType& ty);
Expr primed(const Var& v);
Expr next(const Expr& t);
Expr constant(const Value& v, const SemType& ty);
Expr boolean(bool b);
Expr tt();
Expr ff();
Expr integer(long long v);
Expr real(Rational q);
Expr num(Rational q, const SemType& ty);
Expr symbol(const std::string& sym, const SemType& enum_ty);
Expr arith(Op op, const Expr& a, const Expr& b);
Expr add(const Expr& a, const Expr& b);
Expr sub(const Expr& a, const Expr& b);
Expr mul(const Expr& a, const Expr& b);
Expr div(const Expr& a, const Expr& b);
Expr neg(const Expr& a);
Expr ite(const Expr& c, const Expr& a, const Expr& b);
Expr cmp(Op op, const Expr& a, const Expr& b);
Expr eq(const Expr& a, const Expr& b);
Expr ne(const Expr& a, const Expr& b);
Expr lt(const Expr& a, const Expr& b);
Expr le(const Expr& a, const Expr& b);
Expr gt(const Expr& a, const Expr& b);
Expr ge(const Expr& a, const Expr& b);
Expr lnot(const Expr& a);
Expr land(std::vector<Expr> xs);
Expr land(const Expr& a, const Expr& b);
Expr lor(std::vector<Expr> xs);
Expr lor(const Expr& a, const Expr& b);
Expr implies(const Expr& a, const Expr& b);
Expr iff(const Expr& a, const Expr& b);
Expr forall(const std::string& name, const SemType& ty, const Expr& body);
Expr exists(const std::string& name, const SemType& ty, const Expr& body);
Expr forall(const VarList& vs, const Expr& body);
Expr exists(const VarList& vs, const Expr& body);
Expr until(const Expr& a, const Expr& b);
Expr leads(const Expr& a, const Expr& b);
Expr globally(const Expr& a);
Expr finally(const Expr& a);
// Rebuild a node of the same shape with new children.
Expr rebuild(const Expr& e, std::vector<Expr> args);
Expr rebind(const Expr& binder, const std::string& name, const Expr& body);
// Conjunction of pairwise equalities; true for empty tuples.
Expr tuple_eq(const std::vector<Expr>& lhs, const std::vector<Expr>& rhs);
}  // namespace ex

bool is_binder(Op op);
bool is_temporal_op(Op op);
bool is_const_true(const Expr& e);
bool is_const_false(const Expr& e);

// Deep structural equality (bound names included).
bool equal(const Expr& a, const Expr& b);
// Equality up to renaming of bound variables.
bool alpha_equal(const Expr& a, const Expr& b);

struct FreeVars {
    std::set<Var> vars;
    bool uses_primed = false;
    bool uses_temporal = false;
};

// Free variables; primed occurrences report the underlying variable.
FreeVars free_vars(const Expr& e);
// Free unprimed variable names (including those under next).
std::set<std::string> free_names(const Expr& e);
// Names of free primed occurrences.
std::set<std::string> free_primed(const Expr& e);
bool occurs_free(const Expr& e, const std::string& name);
bool has_temporal(const Expr& e);  // U, L, G, F or next anywhere
bool has_primed(const Expr& e);
// Every free occurrence of `name` is outside temporal operators and next.
bool occurs_only_now(const Expr& e, const std::string& name);
// All names appearing anywhere (free, bound, primed).
void collect_names(const Expr& e, std::set<std::string>& out);
int next_depth(const Expr& e);

// Substitution keys: "x" for x and "x'" for the primed x.
using Subst = std::map<std::string, Expr>;
std::string primed_key(const std::string& name);

// Capture-avoiding simultaneous substitution.
Expr substitute(const Expr& e, const Subst& s);
// Rename variables (both x and x' occurrences) by name.
Expr rename_vars(const Expr& e, const std::map<std::string, std::string>& m);
// Replace each free x by next(x); PrimedInTemporal on primed occurrences.
Expr apply_next(const Expr& e);
// Replace primed occurrences x' by next(x).
Expr primes_to_next(const Expr& e, const VarList& vs);

// Fresh identifier: base, base0, base1, ... not in `used`.
std::string fresh_name(const std::string& base, const std::set<std::string>& used);

std::string to_string(const Expr& e);

}  // namespace rcrs
