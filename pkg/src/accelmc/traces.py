"""Trace abstraction and the transition dependency graph.

After every satisfiable extension check the model is mapped back to the
sequence of transitions it takes, one element per asserted step formula.  In
the blocking engine the label value of a step decides whether a learned
transition was taken; otherwise the element is the syntactic implicant of the
step formula under the model.  The dependency graph accumulates all traces
seen so far; a suffix of the current trace that forms a cycle in the graph is
a candidate for acceleration, filtered by should_accel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence, Tuple

from .formulas import Formula, formula_vars
from .terms import Valuation, Var, VarKind
from .transitions import Interner, Transition, sip


@dataclass(frozen=True)
class Step:
    """One asserted unrolling step: the un-renamed step formula (a disjunction
    of the program transition and at most one learned transition) plus the
    learned disjunct itself, if any."""

    index: int
    formula: Formula
    learned: Optional[Transition] = None


def pullback_assignment(
    vars_: Iterable[Var], sigma: Valuation, index: int,
    post_to_pre: Mapping[Var, Var],
) -> dict[Var, int]:
    """Read the values of un-renamed step variables out of an indexed model:
    pre/aux/label variables at step index, post variables at index + 1."""
    out: dict[Var, int] = {}
    for v in vars_:
        if v.kind is VarKind.POST:
            out[v] = sigma[post_to_pre[v].at(index + 1)]
        else:
            out[v] = sigma[v.at(index)]
    return out


def _element(
    step: Step, sigma: Valuation, interner: Interner,
    post_to_pre: Mapping[Var, Var], label: Optional[Var],
) -> Transition:
    local = pullback_assignment(formula_vars(step.formula), sigma, step.index,
                                post_to_pre)
    if label is not None:
        lv = sigma[label.at(step.index)]
        if lv != 0:
            t = step.learned
            assert t is not None and t.provenance.id == lv, \
                f"step {step.index} label {lv} does not match its formula"
            return t
    elif step.learned is not None and step.learned.holds(local):
        return step.learned
    return sip(step.formula, local, interner)


def build_trace(
    steps: Sequence[Step], sigma: Valuation, interner: Interner,
    post_to_pre: Mapping[Var, Var], label: Optional[Var] = None,
) -> Tuple[Transition, ...]:
    """The sequence of transitions a model of the unrolling takes."""
    return tuple(_element(s, sigma, interner, post_to_pre, label)
                 for s in steps)


class DepGraph:
    """Which transition was observed to follow which, over all traces so far.

    Vertices and edges only ever grow.  Insertion order is kept so that DOT
    output and suffix search are deterministic run to run.
    """

    def __init__(self) -> None:
        self._vertices: dict[Transition, int] = {}
        self._edges: dict[Tuple[Transition, Transition], None] = {}

    @property
    def vertices(self) -> Tuple[Transition, ...]:
        return tuple(self._vertices)

    @property
    def edges(self) -> Tuple[Tuple[Transition, Transition], ...]:
        return tuple(self._edges)

    def extend(self, trace: Sequence[Transition]) -> None:
        for t in trace:
            if t not in self._vertices:
                self._vertices[t] = len(self._vertices)
        for a, b in zip(trace, trace[1:]):
            self._edges.setdefault((a, b))

    def has_edge(self, a: Transition, b: Transition) -> bool:
        return (a, b) in self._edges

    def is_cycle(self, seq: Sequence[Transition]) -> bool:
        """seq read as a cyclic word: every consecutive pair, including the
        wrap-around, must be an edge."""
        if not seq:
            return False
        pairs = list(zip(seq, seq[1:])) + [(seq[-1], seq[0])]
        return all(p in self._edges for p in pairs)

    def to_dot(self) -> str:
        lines = ["digraph dependencies {"]
        for t, i in self._vertices.items():
            if t.is_learned:
                text = f"a{t.provenance.id}: " + _short(t)
            else:
                text = _short(t)
            lines.append(f'  t{i} [label="{text}"];')
        for a, b in self._edges:
            lines.append(f"  t{self._vertices[a]} -> t{self._vertices[b]};")
        lines.append("}")
        return "\n".join(lines)


def _short(t: Transition) -> str:
    body = " & ".join(str(l) for l in t.literals) or "true"
    return body.replace('"', r"\"")


def is_square_free(seq: Sequence[Transition]) -> bool:
    """No immediate repetition ww anywhere in seq."""
    n = len(seq)
    for m in range(1, n // 2 + 1):
        for i in range(n - 2 * m + 1):
            if tuple(seq[i:i + m]) == tuple(seq[i + m:i + 2 * m]):
                return False
    return True


def _is_rotation(a: Tuple[Transition, ...], b: Tuple[Transition, ...]) -> bool:
    if len(a) != len(b):
        return False
    return any(b == a[i:] + a[:i] for i in range(len(a)))


def should_accel(seq: Sequence[Transition]) -> bool:
    """Is this cycle worth (re-)accelerating?

    A single transition qualifies unless it is itself learned.  A longer
    sequence must be square-free and must not be a rotation of some learned
    member's cycle followed by that member: accelerating those only restates
    an existing acceleration.
    """
    s = tuple(seq)
    if len(s) == 1:
        return not s[0].is_learned
    if not is_square_free(s):
        return False
    for t in s:
        if t.is_learned:
            cand = t.provenance.cycle + (t,)
            if _is_rotation(s, cand):
                return False
    return True


def shortest_cyclic_suffix(
    trace: Sequence[Transition], graph: DepGraph,
) -> Optional[Tuple[Transition, ...]]:
    """The shortest suffix of trace that is a cycle in the graph and passes
    should_accel, or None."""
    tr = tuple(trace)
    for length in range(1, len(tr) + 1):
        suffix = tr[-length:]
        if graph.is_cycle(suffix) and should_accel(suffix):
            return suffix
    return None
