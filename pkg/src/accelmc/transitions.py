"""Interned conjunctive transitions, composition, and implicant projection.

A Transition is a set of literals over pre/post/aux variables, understood as
their conjunction.  Transitions are deduplicated through an Interner so that
structural equality of literal sets gives reference equality; traces, the
dependency graph, the cycle cache, and blocking clauses all rely on that.

Provenance records where a transition came from: Original for syntactic
implicants of the program's transition formula, Learned for acceleration
results (with the minted label id and the accelerated cycle).  The label
literal of the blocking engine is never stored in the literal set; encoders
attach it from provenance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .formulas import Formula, conj, eval_formula, literals
from .terms import IntTerm, Literal, Valuation, Var, VarKind, aux_var


@dataclass(frozen=True)
class Original:
    def __str__(self) -> str:
        return "original"


@dataclass(frozen=True)
class Learned:
    id: int
    cycle: Tuple["Transition", ...]
    info: object = field(compare=False, hash=False, default=None)

    def __str__(self) -> str:
        return f"learned#{self.id}"


Provenance = Original | Learned


class Transition:
    """Interned sorted literal set.  Compare by identity; build via Interner."""

    __slots__ = ("literals", "provenance", "_interner")

    def __init__(self, literals_: Tuple[Literal, ...], provenance: Provenance,
                 _interner: "Interner"):
        self.literals = literals_
        self.provenance = provenance
        self._interner = _interner

    @property
    def is_learned(self) -> bool:
        return isinstance(self.provenance, Learned)

    def formula(self) -> Formula:
        return conj(self.literals)

    def vars(self) -> Tuple[Var, ...]:
        seen: list[Var] = []
        for l in self.literals:
            for v in l.vars():
                if v not in seen:
                    seen.append(v)
        return tuple(sorted(seen))

    def holds(self, sigma: Valuation) -> bool:
        return all(l.holds(sigma) for l in self.literals)

    def __str__(self) -> str:
        tag = f"[{self.provenance}] " if self.is_learned else ""
        return tag + " & ".join(str(l) for l in self.literals) if self.literals \
            else tag + "true"

    def __repr__(self) -> str:
        return f"<T{'#' + str(self.provenance.id) if self.is_learned else ''} {self}>"


def _canonical(lits: Iterable[Literal]) -> Tuple[Literal, ...]:
    return tuple(sorted(set(lits)))


class Interner:
    """Per-run transition table: literal set -> unique Transition object.

    The first interning of a literal set fixes its provenance.  Acceleration
    counters are named fresh against the whole problem, so a learned literal
    set can never collide with an original one.
    """

    def __init__(self) -> None:
        self._table: Dict[Tuple[Literal, ...], Transition] = {}

    def original(self, lits: Iterable[Literal]) -> Transition:
        key = _canonical(lits)
        t = self._table.get(key)
        if t is None:
            t = Transition(key, Original(), self)
            self._table[key] = t
        return t

    def learned(self, lits: Iterable[Literal], id_: int,
                cycle: Sequence[Transition], info: object) -> Tuple[Transition, bool]:
        """Intern an acceleration result.  Returns (transition, minted): if the
        literal set already exists the old object (and its id) wins and no new
        id is consumed."""
        key = _canonical(lits)
        t = self._table.get(key)
        if t is not None:
            return t, False
        t = Transition(key, Learned(id_, tuple(cycle), info), self)
        self._table[key] = t
        return t, True

    def __len__(self) -> int:
        return len(self._table)


_mid_counter = itertools.count(1)


def _fresh_copy(v: Var) -> Var:
    """A fresh aux variable standing for v in an intermediate state.  The ~
    character cannot occur in frontend variable names, so these never collide
    with program or user aux variables."""
    return aux_var(f"{v.name}~{next(_mid_counter)}")


def rename_apart_aux(lits: Sequence[Literal]) -> list[Literal]:
    """Rename the aux variables of a literal set fresh (used before composing
    transitions that may share aux names, e.g. two learned transitions with
    the same counter name)."""
    auxes = sorted({v for l in lits for v in l.vars() if v.kind is VarKind.AUX})
    if not auxes:
        return list(lits)
    mapping = {v: _fresh_copy(v) for v in auxes}
    return [l.rename(mapping) for l in lits]


@dataclass(frozen=True)
class Composition:
    """The relational chaining of a transition sequence.

    literals conjoin all members, adjacent states glued through fresh aux
    vectors; boundaries[j] maps each pre variable to its copy at the state
    between member j-1 and member j (boundaries[0] is the identity).
    """

    literals: Tuple[Literal, ...]
    boundaries: Tuple[Mapping[Var, Var], ...]


def compose_seq(
    seq: Sequence[Transition | Sequence[Literal]],
    pre_vars: Sequence[Var],
    pre_to_post: Mapping[Var, Var],
) -> Composition:
    """Chain a sequence of transitions through fresh intermediate state
    vectors.  The empty sequence composes to the identity relation x' = x."""
    from .terms import lit_eq

    members: list[Sequence[Literal]] = [
        m.literals if isinstance(m, Transition) else m for m in seq
    ]
    n = len(members)
    if n == 0:
        idl = [lit_eq(IntTerm.var(pre_to_post[x]), IntTerm.var(x)) for x in pre_vars]
        return Composition(tuple(idl), ({x: x for x in pre_vars},))

    # state j is the valuation before member j; state 0 uses the real pre
    # variables, state n the real post variables, everything between is fresh
    states: list[Mapping[Var, Var]] = [{x: x for x in pre_vars}]
    for _ in range(n - 1):
        states.append({x: _fresh_copy(x) for x in pre_vars})
    post_state: Mapping[Var, Var] = {x: pre_to_post[x] for x in pre_vars}

    out: list[Literal] = []
    for j, lits in enumerate(members):
        src = states[j]
        dst = states[j + 1] if j + 1 < n else post_state
        mapping: dict[Var, Var] = {}
        for x in pre_vars:
            mapping[x] = src[x]
            mapping[pre_to_post[x]] = dst[x]
        for l in rename_apart_aux(lits):
            out.append(l.rename(mapping))
    return Composition(tuple(out), tuple(states))


def compose(
    t1: Transition | Sequence[Literal],
    t2: Transition | Sequence[Literal],
    pre_vars: Sequence[Var],
    pre_to_post: Mapping[Var, Var],
) -> Composition:
    return compose_seq([t1, t2], pre_vars, pre_to_post)


class ImplicantError(Exception):
    """The valuation does not satisfy the formula it supposedly models."""


def sip(f: Formula, sigma: Valuation, interner: Interner,
        strip_labels: bool = True) -> Transition:
    """Syntactic implicant projection: the conjunction of exactly those
    literals of NNF f that sigma satisfies, as an interned Original
    transition.  sigma must satisfy f itself, otherwise the projection would
    not be an implicant and we fail loudly."""
    if not eval_formula(f, sigma):
        raise ImplicantError("valuation does not satisfy the formula")
    sat = []
    for l in literals(f):
        if strip_labels and any(v.kind is VarKind.LABEL for v in l.vars()):
            continue
        if l.holds(sigma):
            sat.append(l)
    return interner.original(sat)


def sip_literals(f: Formula, sigma: Valuation) -> Tuple[Literal, ...]:
    """The satisfied-literal set itself (no interning, labels kept)."""
    if not eval_formula(f, sigma):
        raise ImplicantError("valuation does not satisfy the formula")
    return _canonical(l for l in literals(f) if l.holds(sigma))
