"""Shared problem builders and tiny evaluation oracles for the tests."""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple

from accelmc.formulas import And, Formula, Lit, Or, SafetyProblem, conj, eval_formula, formula_vars
from accelmc.terms import (IntTerm, Literal, Var, VarKind, aux_var, lit_eq,
                           lit_le, lit_lt, lit_ne, pre_var, post_var)

X, Y = pre_var("x"), pre_var("y")
XP, YP = post_var("x"), post_var("y")


def step_lits(limit: int) -> Tuple[Literal, ...]:
    """x < limit, x' = x + 1, y' = y."""
    return (lit_lt(X, limit), lit_eq(XP, IntTerm.var(X) + 1), lit_eq(YP, Y))


def wrap_lits(limit: int) -> Tuple[Literal, ...]:
    """x = limit, x' = 0, y' = y + 1."""
    return (lit_eq(X, limit), lit_eq(XP, 0), lit_eq(YP, IntTerm.var(Y) + 1))


def counter_wrap(limit: int, err_at: int, name: str = "wrap") -> SafetyProblem:
    """Two nested counters: x climbs to limit and wraps, bumping y; the
    error is y reaching err_at."""
    return SafetyProblem(
        pre_vars=(X, Y),
        init=conj([lit_le(X, 0), lit_le(Y, 0)]),
        trans=Or.of([conj(step_lits(limit)), conj(wrap_lits(limit))]),
        err=Lit(lit_le(err_at, Y)),
        name=name,
    )


def bounded_counter(name: str = "bounded") -> SafetyProblem:
    """x climbs while < 100; the error x > 100 is unreachable."""
    x, xp = pre_var("x"), post_var("x")
    return SafetyProblem(
        pre_vars=(x,),
        init=Lit(lit_le(x, 0)),
        trans=conj([lit_lt(x, 100), lit_eq(xp, IntTerm.var(x) + 1)]),
        err=Lit(lit_lt(100, x)),
        name=name,
    )


def assignments(vars_: Sequence[Var], lo: int, hi: int) -> Iterator[Dict[Var, int]]:
    """Every valuation of vars_ over the box [lo, hi]."""
    for vals in itertools.product(range(lo, hi + 1), repeat=len(vars_)):
        yield dict(zip(vars_, vals))


def formula_relation(f: Formula, vars_: Sequence[Var], lo: int, hi: int) -> set:
    """The set of satisfying tuples of f over the box, existentially
    projecting away any variables of f not listed (aux)."""
    inner = [v for v in formula_vars(f) if v not in vars_]
    out = set()
    for sigma in assignments(list(vars_), lo, hi):
        if any(eval_formula(f, {**sigma, **extra})
               for extra in assignments(inner, lo, hi)):
            out.add(tuple(sigma[v] for v in vars_))
    return out


def rel_chain(r1: set, r2: set, k: int) -> set:
    """Relational composition of two sets of (pre..., post...) tuples."""
    by_pre: Dict[tuple, List[tuple]] = {}
    for t in r2:
        by_pre.setdefault(t[:k], []).append(t[k:])
    out = set()
    for t in r1:
        for post in by_pre.get(t[k:], ()):
            out.add(t[:k] + post)
    return out


def bmc_oracle(problem: SafetyProblem, lo: int, hi: int, max_steps: int):
    """Explicit-state check over the box: returns the least number of steps
    to an error state, or None if unreachable within max_steps (state space
    restricted to the box, so only valid for problems that stay inside)."""
    pre = list(problem.pre_vars)
    post = [problem.pre_to_post[v] for v in pre]
    aux = [v for v in formula_vars(problem.trans)
           if v.kind is VarKind.AUX]
    frontier = {
        tuple(s[v] for v in pre)
        for s in assignments(pre, lo, hi)
        if eval_formula(problem.init, s)
    }
    seen = set(frontier)

    def hits_err(states: Iterable[tuple]) -> bool:
        return any(
            eval_formula(problem.err, dict(zip(pre, s))) for s in states
        )

    if hits_err(frontier):
        return 0
    for depth in range(1, max_steps + 1):
        nxt = set()
        for src in frontier:
            base = dict(zip(pre, src))
            for dst in assignments(post, lo, hi):
                sigma = {**base, **dst}
                ok = any(
                    eval_formula(problem.trans, {**sigma, **extra})
                    for extra in assignments(aux, lo, hi)
                )
                if ok:
                    nxt.add(tuple(sigma[p] for p in post))
        frontier = nxt - seen
        if hits_err(nxt):
            return depth
        seen |= frontier
        if not frontier:
            return None
    return None
