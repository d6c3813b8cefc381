"""Acceleration of conjunctive transitions, restricted to the shapes the
checker handles exactly.

Per program variable the (composed) update must be the identity x' = x or an
increment x' = x + e with e over identity variables and constants (a guard
pinning v = c is substituted into e first, so a location variable holding
still, loc' = 1 under loc = 1, counts as identity); everything else fails
with a typed reason and the engine falls back to plain unrolling.
For supported updates the closed form after k steps is x + k*e, guards are
placed by two SMT certificates over a symbolic k (backward: the guard at
k + 1 implies it at k; forward: the other direction), and the result is

    n > 0  /\  guards-at-cf(n-1 or 0)  /\  updates x' = cf(n)

which is exactly the transitive closure of the input relation: backward
guards at n - 1 imply themselves at every earlier iteration, forward guards
propagate from iteration 0.  Exactness is what keeps the blocking engine's
Safe verdicts sound.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .formulas import conj
from .solver import SatResult, Session
from .terms import (IntTerm, Literal, Rel, Var, VarKind, aux_var, lit_eq,
                    lit_le, lit_lt)
from .transitions import Composition, Transition, compose_seq


class FailReason(enum.Enum):
    NONDETERMINISTIC_UPDATE = "nondeterministic update"
    UNSUPPORTED_UPDATE = "unsupported update"
    NONMONOTONIC_GUARD = "non-monotonic guard"
    NONPOLYNOMIAL = "non-polynomial closed form"


@dataclass(frozen=True)
class Failure:
    reason: FailReason
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.reason.value}" + (f": {self.detail}" if self.detail else "")


class Placement(enum.Enum):
    BACKWARD = "backward"   # guard asserted at iteration n - 1
    FORWARD = "forward"     # guard asserted at iteration 0


@dataclass(frozen=True)
class LearnedInfo:
    """Everything counterexample expansion needs to unroll a learned step."""

    counter: Var
    deltas: Mapping[Var, IntTerm]          # pre var -> e with cf_k(x) = x + k*e
    placements: Tuple[Tuple[Literal, Placement], ...]
    boundaries: Tuple[Mapping[Var, IntTerm], ...]  # state inside one cycle turn
    cycle_len: int

    def closed_form(self, x: Var, k: "IntTerm | int") -> IntTerm:
        return IntTerm.var(x) + IntTerm._coerce(k) * self.deltas[x]


@dataclass(frozen=True)
class Success:
    literals: Tuple[Literal, ...]
    info: LearnedInfo


AccelResult = Success | Failure


@dataclass
class AccelContext:
    """Problem-level context for the accelerator: the variable vectors, the
    problem-fresh counter variable, and a session for guard certificates."""

    pre_vars: Tuple[Var, ...]
    pre_to_post: Mapping[Var, Var]
    counter: Var
    session: Optional[Session] = None
    # guard-certificate results are worth caching: the same literal/delta
    # combinations recur every time a cycle is re-examined
    _cert_cache: Dict[tuple, Optional[Placement]] = field(default_factory=dict)


def _eliminate_aux(
    lits: Sequence[Literal],
) -> Tuple[List[Literal], Dict[Var, IntTerm]]:
    """Substitute away aux variables that a post-free equality defines with
    coefficient +-1.  Returns the remaining literals and the substitution,
    with every image fully resolved over pre variables (or surviving aux).

    Counters of learned transitions embedded in a composition are *not*
    eliminated: their defining occurrences mention post variables, which this
    pass skips, so they survive and classification rejects the composition.
    """
    remaining = list(lits)
    subst: Dict[Var, IntTerm] = {}
    while True:
        target = None
        for li, l in enumerate(sorted(remaining)):
            if l.rel is not Rel.EQ:
                continue
            if any(v.kind is VarKind.POST for v in l.vars()):
                continue
            for v in l.vars():
                if v.kind is not VarKind.AUX:
                    continue
                c = l.poly.coeff_of(v)
                if c not in (1, -1):
                    continue
                rest = IntTerm(tuple(m for m in l.poly.monomials if m[1] != (v,)))
                if rest.mentions(v):
                    continue  # v also occurs nonlinearly
                target = (l, v, (-rest) if c == 1 else rest)
                break
            if target:
                break
        if target is None:
            return remaining, subst
        l, v, image = target
        remaining = [r.subst({v: image}) for r in remaining if r is not l]
        remaining = [r for r in remaining if not (r.rel is Rel.EQ and not r.poly.monomials)]
        subst = {w: t.subst({v: image}) for w, t in subst.items()}
        subst[v] = image


@dataclass(frozen=True)
class _Classified:
    deltas: Dict[Var, IntTerm]     # per pre var; identity has delta 0
    guards: Tuple[Literal, ...]


def classify(
    lits: Sequence[Literal], ctx: AccelContext
) -> "_Classified | Failure":
    """Split a conjunctive transition into per-variable updates and guards.

    Every post variable needs exactly one defining equality x' = u with u
    either x (identity) or x + e (increment); e may only mention identity
    variables and constants.  Aux variables surviving elimination, resets,
    scaling updates, and post variables in guards all fail.
    """
    remaining, _ = _eliminate_aux(lits)
    remaining = sorted(set(remaining))
    post_of = dict(ctx.pre_to_post)
    updates: Dict[Var, IntTerm] = {}      # pre var -> u with x' = u
    defining: Dict[Var, Literal] = {}

    for x in ctx.pre_vars:
        xp = post_of[x]
        candidates = []
        for l in remaining:
            if not l.poly.mentions(xp):
                continue
            if l.rel is not Rel.EQ:
                return Failure(FailReason.UNSUPPORTED_UPDATE,
                               f"post variable {xp} in non-equality literal")
            c = l.poly.coeff_of(xp)
            others = [v for v in l.vars() if v.kind is VarKind.POST and v != xp]
            rest = IntTerm(tuple(m for m in l.poly.monomials if m[1] != (xp,)))
            if c in (1, -1) and not others and not rest.mentions(xp):
                candidates.append((l, (-rest) if c == 1 else rest))
            else:
                return Failure(FailReason.UNSUPPORTED_UPDATE,
                               f"update literal for {xp} not of the form {xp} = u")
        if not candidates:
            return Failure(FailReason.NONDETERMINISTIC_UPDATE,
                           f"no defining equality for {xp}")
        if len(candidates) > 1:
            return Failure(FailReason.UNSUPPORTED_UPDATE,
                           f"multiple defining equalities for {xp}")
        l, u = candidates[0]
        if any(v.kind is VarKind.AUX for v in u.vars()):
            return Failure(FailReason.NONDETERMINISTIC_UPDATE,
                           f"update for {x.name} is {u}, which mentions an aux variable")
        updates[x] = u
        defining[x] = l

    # pre-state pins: a guard v = c lets constant updates classify, e.g. a
    # location variable that stays put is loc' = 1 under loc = 1, which is
    # the identity.  The pinning guard stays in the guard set, so placement
    # certificates still reject pins that do not propagate.
    ground: Dict[Var, int] = {}
    for l in remaining:
        if l.rel is not Rel.EQ:
            continue
        vs = l.vars()
        if len(vs) != 1 or vs[0].kind is not VarKind.PRE:
            continue
        v = vs[0]
        if not all(pp in ((), (v,)) for _, pp in l.poly.monomials):
            continue
        c = l.poly.coeff_of(v)
        if c not in (1, -1):
            continue
        rest = l.poly.drop_var_monomials(v).const_value()
        ground[v] = -rest if c == 1 else rest

    deltas: Dict[Var, IntTerm] = {}
    for x, u in updates.items():
        e = (u - IntTerm.var(x)).subst(ground)
        if e.mentions(x):
            return Failure(FailReason.UNSUPPORTED_UPDATE,
                           f"update for {x.name} is {u}, not x + e")
        deltas[x] = e
    identity = {x for x, e in deltas.items() if not e.monomials}
    for x, e in deltas.items():
        bad = [v for v in e.vars() if v not in identity]
        if bad:
            return Failure(FailReason.UNSUPPORTED_UPDATE,
                           f"increment for {x.name} depends on updated variable"
                           f" {bad[0].name}")

    consumed = set(id(l) for l in defining.values())
    guards = []
    for l in remaining:
        if id(l) in consumed:
            continue
        lvars = l.vars()
        if any(v.kind is VarKind.POST for v in lvars):
            return Failure(FailReason.UNSUPPORTED_UPDATE,
                           f"guard {l} mentions a post variable")
        if any(v.kind is VarKind.AUX for v in lvars):
            return Failure(FailReason.NONDETERMINISTIC_UPDATE,
                           f"guard {l} mentions an aux variable")
        guards.append(l)
    return _Classified(deltas, tuple(sorted(set(guards))))


def _guard_at(l: Literal, deltas: Mapping[Var, IntTerm], k: IntTerm) -> Literal:
    """The guard literal with every variable advanced k iterations."""
    mapping = {x: IntTerm.var(x) + k * e for x, e in deltas.items() if e.monomials}
    return l.subst(mapping)


def guard_placement(
    l: Literal, deltas: Mapping[Var, IntTerm], ctx: AccelContext
) -> Optional[Placement]:
    """Certify where a guard must be asserted, via SMT queries over a
    symbolic iteration count.  Backward is preferred; None means neither
    direction could be certified (including solver Unknown)."""
    key = (l, tuple(sorted(((x, e) for x, e in deltas.items() if e.monomials),
                           key=lambda p: p[0].sort_key())))
    if key in ctx._cert_cache:
        return ctx._cert_cache[key]

    k = aux_var("k~cert")
    at_k = _guard_at(l, deltas, IntTerm.var(k))
    at_k1 = _guard_at(l, deltas, IntTerm.var(k) + 1)
    result: Optional[Placement]
    if at_k == at_k1:
        # guard only involves identity variables: both certificates hold
        result = Placement.BACKWARD
    else:
        def unsat(a: Literal, b: Literal) -> Optional[bool]:
            assert ctx.session is not None, "guard certificates need a session"
            # certificate variables live in a private namespace (~ names) so
            # the query can share the engine's session under push/pop
            rename = {v: aux_var(f"{v.name}~cert") for v in
                      set(a.vars()) | set(b.vars()) | {k} if "~cert" not in v.name}
            q = conj([
                lit_le(0, IntTerm.var(k)),
                a.rename(rename),
                b.rename(rename).negate(),
            ])
            q = _index_all(q, 0)
            ctx.session.push()
            try:
                ctx.session.assert_formula(q)
                r = ctx.session.check_sat()
            finally:
                ctx.session.pop()
            if r is SatResult.UNKNOWN:
                return None
            return r is SatResult.UNSAT

        back = unsat(at_k1, at_k)      # guard at k+1 implies guard at k
        if back:
            result = Placement.BACKWARD
        else:
            fwd = unsat(at_k, at_k1)   # guard at k implies guard at k+1
            result = Placement.FORWARD if fwd else None
    ctx._cert_cache[key] = result
    return result


def _index_all(f, i: int):
    """Index every variable of a post-free formula at step i."""
    from .formulas import map_literals

    def ren(l: Literal) -> Literal:
        return l.rename({v: v.at(i) for v in l.vars()})

    return map_literals(f, ren)


def accelerate_seq(
    seq: Sequence[Transition], ctx: AccelContext
) -> AccelResult:
    """Accelerate the composition of a transition sequence.

    On success the result literals contain the counter n (ctx.counter),
    guards placed per certificate, and one update per variable; the attached
    LearnedInfo carries closed forms and intra-cycle boundary states for
    counterexample expansion.
    """
    comp = compose_seq(seq, ctx.pre_vars, {x: ctx.pre_to_post[x] for x in ctx.pre_vars})
    remaining, subst = _eliminate_aux(comp.literals)
    cls = classify(remaining, ctx)
    if isinstance(cls, Failure):
        return cls

    placements: List[Tuple[Literal, Placement]] = []
    for g in cls.guards:
        p = guard_placement(g, cls.deltas, ctx)
        if p is None:
            return Failure(FailReason.NONMONOTONIC_GUARD, f"guard {g}")
        placements.append((g, p))

    n = ctx.counter
    n_term = IntTerm.var(n)
    out: List[Literal] = [lit_lt(0, n_term)]
    for g, p in placements:
        at = n_term - 1 if p is Placement.BACKWARD else IntTerm.const(0)
        out.append(_guard_at(g, cls.deltas, at))
    for x in ctx.pre_vars:
        cf_n = IntTerm.var(x) + n_term * cls.deltas[x]
        if not isinstance(cf_n, IntTerm):  # pragma: no cover - closed forms
            return Failure(FailReason.NONPOLYNOMIAL, f"closed form for {x}")
        out.append(lit_eq(IntTerm.var(ctx.pre_to_post[x]), cf_n))

    boundaries: List[Mapping[Var, IntTerm]] = []
    for j, bmap in enumerate(comp.boundaries):
        terms: Dict[Var, IntTerm] = {}
        for x in ctx.pre_vars:
            mid = bmap[x]
            if mid == x:
                terms[x] = IntTerm.var(x)
            elif mid in subst:
                terms[x] = subst[mid]
            else:
                # the intermediate value is unconstrained by the cycle; any
                # choice satisfies it and expansion re-validates literally
                terms[x] = IntTerm.const(0)
        boundaries.append(terms)

    info = LearnedInfo(
        counter=n,
        deltas=dict(cls.deltas),
        placements=tuple(placements),
        boundaries=tuple(boundaries),
        cycle_len=max(len(seq), 1),
    )
    return Success(tuple(sorted(set(out))), info)


def accelerate(t: Transition, ctx: AccelContext) -> AccelResult:
    return accelerate_seq([t], ctx)
