"""Counterexamples: extraction from an error model, expansion of learned
steps into concrete program steps, and validation.

A counterexample records the reachable state sequence plus, for the
accelerating engines, the trace (which transition each step took) and the
full per-step assignments including aux variables, so counter values of
learned steps are available.  Expansion replaces every learned step by its
cycle unrolled the counter's number of times, using the closed forms and the
intra-cycle boundary states the accelerator recorded.  Validation re-checks
the whole concrete sequence against the problem, literal by literal; a
failure here is a checker bug and raises.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .accel import LearnedInfo
from .formulas import (Formula, SafetyProblem, conj, eval_formula,
                       formula_vars, map_literals)
from .solver import SatResult, Session
from .terms import IntTerm, Literal, Var, VarKind, aux_var
from .traces import Step, build_trace, pullback_assignment
from .transitions import Interner, Transition


class CexError(Exception):
    """A counterexample failed to check out against the problem."""


@dataclass(frozen=True)
class Counterexample:
    """states has bound + 1 entries (pre-variable valuations); steps, when
    present, has bound entries; assignments[i] values every variable of step
    i's formula, un-renamed."""

    states: Tuple[Mapping[Var, int], ...]
    steps: Optional[Tuple[Transition, ...]]
    assignments: Tuple[Mapping[Var, int], ...]

    @property
    def bound(self) -> int:
        return len(self.states) - 1


def extract(
    problem: SafetyProblem, sigma: Mapping[Var, int], bound: int,
    steps: Optional[Sequence[Step]] = None,
    interner: Optional[Interner] = None,
    label: Optional[Var] = None,
) -> Counterexample:
    """Read a counterexample out of a model of init, steps 0..bound-1 and the
    error condition at bound.  steps/interner are the accelerating engines'
    step records; plain unrolling passes neither and gets states only."""
    p2p = problem.post_to_pre
    states = tuple(
        {x: sigma[x.at(i)] for x in problem.pre_vars} for i in range(bound + 1)
    )
    if steps is None:
        trace = None
        assignments = tuple(
            pullback_assignment(formula_vars(problem.trans), sigma, i, p2p)
            for i in range(bound)
        )
    else:
        assert interner is not None and len(steps) == bound
        trace = build_trace(steps, sigma, interner, p2p, label)
        assignments = tuple(
            pullback_assignment(formula_vars(s.formula), sigma, s.index, p2p)
            for s in steps
        )
    return Counterexample(states, trace, assignments)


def _eval0(t: IntTerm, s: Mapping[Var, int]) -> int:
    return t.eval({v: s.get(v, 0) for v in t.vars()})


def expand_counterexample(
    problem: SafetyProblem, cex: Counterexample,
) -> Tuple[Dict[Var, int], ...]:
    """The concrete state sequence with every learned step unrolled.

    A learned step taken with counter value n and cycle c_0 .. c_{m-1}
    contributes n*m program steps: iteration k enters at the closed form at
    k, passes through the recorded boundary states, and exits at the closed
    form at k + 1.  Without learned steps this is just cex.states.
    """
    if cex.steps is None:
        return tuple(dict(s) for s in cex.states)
    out: list[Dict[Var, int]] = [dict(cex.states[0])]
    for i, t in enumerate(cex.steps):
        if not t.is_learned:
            out.append(dict(cex.states[i + 1]))
            continue
        info = t.provenance.info
        assert isinstance(info, LearnedInfo)
        n_val = cex.assignments[i][info.counter]
        if n_val < 1:
            raise CexError(f"learned step {i} has counter value {n_val}")
        start = cex.states[i]
        m = info.cycle_len
        for member in t.provenance.cycle:
            assert not member.is_learned, "nested learned cycles not produced"
        for k in range(n_val):
            entry = {x: _eval0(info.closed_form(x, k), start)
                     for x in problem.pre_vars}
            for j in range(1, m):
                out.append({x: _eval0(info.boundaries[j][x], entry)
                            for x in problem.pre_vars})
            out.append({x: _eval0(info.closed_form(x, k + 1), start)
                        for x in problem.pre_vars})
    return tuple(out)


def _pair_assignment(
    problem: SafetyProblem, s: Mapping[Var, int], t: Mapping[Var, int],
) -> Dict[Var, int]:
    out: Dict[Var, int] = dict(s)
    for x, xp in problem.pre_to_post.items():
        out[xp] = t[x]
    return out


def _check_pair_smt(
    trans: Formula, assignment: Mapping[Var, int], session: Session,
) -> bool:
    """Does (s, s') satisfy trans for some aux values?  Pre/post variables
    are substituted by their concrete values; the remaining aux variables are
    renamed into a private ~val namespace so the query can share the
    engine's session under push/pop."""
    consts = {v: IntTerm.const(c) for v, c in assignment.items()}
    grounded = map_literals(trans, lambda l: l.subst(consts))
    ren = {v: aux_var(f"{v.name}~val").at(0)
           for v in formula_vars(grounded)}
    query = map_literals(grounded, lambda l: l.rename(ren))
    session.push()
    try:
        session.assert_formula(query)
        r = session.check_sat()
    finally:
        session.pop()
    if r is SatResult.UNKNOWN:
        raise CexError("solver returned unknown while validating a step")
    return r is SatResult.SAT


def validate_states(
    problem: SafetyProblem, states: Sequence[Mapping[Var, int]],
    session: Optional[Session] = None,
) -> None:
    """Check init(states[0]), trans between each adjacent pair, and
    err(states[-1]).  Pairs are checked by direct evaluation when trans has
    no aux variables, otherwise through the solver."""
    if not states:
        raise CexError("empty state sequence")
    if not eval_formula(problem.init, states[0]):
        raise CexError(f"first state {_fmt(states[0])} does not satisfy init")
    if not eval_formula(problem.err, states[-1]):
        raise CexError(f"last state {_fmt(states[-1])} does not satisfy err")
    has_aux = any(v.kind is VarKind.AUX for v in formula_vars(problem.trans))
    for i in range(len(states) - 1):
        assignment = _pair_assignment(problem, states[i], states[i + 1])
        if has_aux:
            if session is None:
                raise CexError("validating a transition with aux variables "
                               "needs a solver session")
            ok = _check_pair_smt(problem.trans, assignment, session)
        else:
            ok = eval_formula(problem.trans, assignment)
        if not ok:
            raise CexError(
                f"step {i}: {_fmt(states[i])} -> {_fmt(states[i + 1])} "
                f"does not satisfy the transition formula")


def expand_and_validate(
    problem: SafetyProblem, cex: Counterexample,
    session: Optional[Session] = None,
) -> Tuple[Dict[Var, int], ...]:
    states = expand_counterexample(problem, cex)
    validate_states(problem, states, session)
    return states


def _fmt(s: Mapping[Var, int]) -> str:
    return "{" + ", ".join(f"{v.name}={c}" for v, c in sorted(s.items())) + "}"
