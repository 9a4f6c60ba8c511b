#pragma once

#include "rcrs/component.hpp"

namespace rcrs {

// Partial order: stateless_det < det, stateless < sts < qltl.
bool kind_leq(Kind a, Kind b);
Kind join_kind(Kind a, Kind b);

// Move a component up the lattice; NotAbove when `k` is not above its kind.
Atomic lift_to(const AtomicComponent& c, Kind k);

// Individual edge maps.
Atomic stateless_to_sts(const AtomicComponent& c);
Atomic det_to_sts(const AtomicComponent& c);
Atomic sd_to_det(const AtomicComponent& c);
Atomic sd_to_stateless(const AtomicComponent& c);
Atomic sts_to_qltl(const AtomicComponent& c);
Atomic stateless_to_qltl(const AtomicComponent& c);

// Existentially quantify the primed copies of `vs` in `f` (renamed to fresh
// unprimed names first).
Expr exists_primed(const VarList& vs, const Expr& f);
Expr forall_primed(const VarList& vs, const Expr& f);

}  // namespace rcrs
