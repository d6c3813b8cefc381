"""Transition formulas: NNF trees of literals, step renaming, evaluation.

A step formula talks about unindexed variables: pre-state x, post-state x',
auxiliaries, and (in the blocking engine) the label variable.  rename_step
produces the step-i copy: non-post variables go to index i, post variables to
index i + 1 of their pre twin.  Only fully indexed formulas ever reach the
solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Tuple

from .terms import IntTerm, Literal, Valuation, Var, VarKind


class Formula:
    """Base class: Lit / And / Or / Not.  NNF = no Not nodes."""

    def __and__(self, other: "Formula") -> "Formula":
        return And.of([self, other])

    def __or__(self, other: "Formula") -> "Formula":
        return Or.of([self, other])


@dataclass(frozen=True)
class Lit(Formula):
    lit: Literal

    def __str__(self) -> str:
        return str(self.lit)


@dataclass(frozen=True)
class And(Formula):
    children: Tuple[Formula, ...]

    @staticmethod
    def of(children: Iterable[Formula]) -> "Formula":
        flat: list[Formula] = []
        for c in children:
            if isinstance(c, And):
                flat.extend(c.children)
            else:
                flat.append(c)
        if len(flat) == 1:
            return flat[0]
        return And(tuple(flat))

    def __str__(self) -> str:
        return "(and " + " ".join(str(c) for c in self.children) + ")"


@dataclass(frozen=True)
class Or(Formula):
    children: Tuple[Formula, ...]

    @staticmethod
    def of(children: Iterable[Formula]) -> "Formula":
        flat: list[Formula] = []
        for c in children:
            if isinstance(c, Or):
                flat.extend(c.children)
            else:
                flat.append(c)
        if len(flat) == 1:
            return flat[0]
        return Or(tuple(flat))

    def __str__(self) -> str:
        return "(or " + " ".join(str(c) for c in self.children) + ")"


@dataclass(frozen=True)
class Not(Formula):
    child: Formula

    def __str__(self) -> str:
        return f"(not {self.child})"


TRUE: Formula = And(())
FALSE: Formula = Or(())


def conj(lits: Iterable[Literal]) -> Formula:
    return And.of(Lit(l) for l in lits)


def to_nnf(f: Formula, negate: bool = False) -> Formula:
    """Push negations to the literals.  Literal negation stays canonical:
    not (p <= 0) becomes -p + 1 <= 0, not (p = 0) becomes p != 0."""
    if isinstance(f, Not):
        return to_nnf(f.child, not negate)
    if isinstance(f, Lit):
        return Lit(f.lit.negate()) if negate else f
    if isinstance(f, And):
        kids = [to_nnf(c, negate) for c in f.children]
        return Or.of(kids) if negate else And.of(kids)
    if isinstance(f, Or):
        kids = [to_nnf(c, negate) for c in f.children]
        return And.of(kids) if negate else Or.of(kids)
    raise TypeError(f"not a formula: {f!r}")


def negate(f: Formula) -> Formula:
    return to_nnf(f, negate=True)


def map_literals(f: Formula, fn: Callable[[Literal], Literal]) -> Formula:
    if isinstance(f, Lit):
        return Lit(fn(f.lit))
    if isinstance(f, And):
        return And(tuple(map_literals(c, fn) for c in f.children))
    if isinstance(f, Or):
        return Or(tuple(map_literals(c, fn) for c in f.children))
    if isinstance(f, Not):
        return Not(map_literals(f.child, fn))
    raise TypeError(f"not a formula: {f!r}")


def literals(f: Formula) -> Iterator[Literal]:
    """All literal occurrences, left to right (duplicates preserved)."""
    if isinstance(f, Lit):
        yield f.lit
    elif isinstance(f, (And, Or)):
        for c in f.children:
            yield from literals(c)
    elif isinstance(f, Not):
        yield from literals(f.child)
    else:
        raise TypeError(f"not a formula: {f!r}")


def formula_vars(f: Formula) -> Tuple[Var, ...]:
    seen: list[Var] = []
    for l in literals(f):
        for v in l.vars():
            if v not in seen:
                seen.append(v)
    return tuple(sorted(seen))


def step_rename_map(vars_: Iterable[Var], i: int, post_to_pre: Mapping[Var, Var]) -> dict[Var, Var]:
    out: dict[Var, Var] = {}
    for v in vars_:
        if v.indexed:
            raise ValueError(f"cannot step-rename already indexed variable {v}")
        if v.kind is VarKind.POST:
            out[v] = post_to_pre[v].at(i + 1)
        else:
            out[v] = v.at(i)
    return out


def rename_step(f: Formula, i: int, post_to_pre: Mapping[Var, Var]) -> Formula:
    """The step-i copy of f: x -> x^(i) for pre/aux/label, x' -> x^(i+1)."""
    mapping = step_rename_map(formula_vars(f), i, post_to_pre)
    return map_literals(f, lambda l: l.rename(mapping))


def rename_literal_step(l: Literal, i: int, post_to_pre: Mapping[Var, Var]) -> Literal:
    mapping = step_rename_map(l.vars(), i, post_to_pre)
    return l.rename(mapping)


def eval_formula(f: Formula, sigma: Valuation) -> bool:
    if isinstance(f, Lit):
        return f.lit.holds(sigma)
    if isinstance(f, And):
        return all(eval_formula(c, sigma) for c in f.children)
    if isinstance(f, Or):
        return any(eval_formula(c, sigma) for c in f.children)
    if isinstance(f, Not):
        return not eval_formula(f.child, sigma)
    raise TypeError(f"not a formula: {f!r}")


@dataclass(frozen=True)
class SafetyProblem:
    """An integer transition system with an error condition.

    init and err are NNF formulas over the pre variables only; trans is an NNF
    formula over pre, post, and aux variables.  post_of maps each pre variable
    to its primed copy.
    """

    pre_vars: Tuple[Var, ...]
    init: Formula
    trans: Formula
    err: Formula
    name: str = "problem"

    def __post_init__(self) -> None:
        for v in self.pre_vars:
            if v.kind is not VarKind.PRE or v.indexed:
                raise ValueError(f"bad program variable {v}")
        pre = set(self.pre_vars)
        for label, f in (("init", self.init), ("err", self.err)):
            for v in formula_vars(f):
                if v.kind is VarKind.POST:
                    raise ValueError(f"post variable {v} not allowed in {label}")
                if v.kind is VarKind.PRE and v not in pre:
                    raise ValueError(f"undeclared variable {v} in {label}")
        for v in formula_vars(self.trans):
            if v.kind is VarKind.PRE and v not in pre:
                raise ValueError(f"undeclared variable {v} in trans")
            if v.kind is VarKind.POST and Var(v.name, VarKind.PRE) not in pre:
                raise ValueError(f"post variable {v} has no declared pre twin")

    @property
    def dim(self) -> int:
        return len(self.pre_vars)

    @property
    def post_vars(self) -> Tuple[Var, ...]:
        return tuple(Var(v.name, VarKind.POST) for v in self.pre_vars)

    @property
    def post_to_pre(self) -> dict[Var, Var]:
        return {Var(v.name, VarKind.POST): v for v in self.pre_vars}

    @property
    def pre_to_post(self) -> dict[Var, Var]:
        return {v: Var(v.name, VarKind.POST) for v in self.pre_vars}

    def all_names(self) -> set[str]:
        names = {v.name for v in self.pre_vars}
        for f in (self.init, self.trans, self.err):
            names.update(v.name for v in formula_vars(f))
        return names

    def fresh_aux_name(self, base: str) -> str:
        """A name unused anywhere in the problem (keeps the SMT namespace,
        where x at step i serializes as x_i, collision-free)."""
        taken = self.all_names()
        if base not in taken:
            return base
        k = 1
        while f"{base}{k}" in taken:
            k += 1
        return f"{base}{k}"
