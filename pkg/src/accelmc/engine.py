"""The three checking loops.

Plain unrolling asserts the step formulas one bound at a time, checking the
error condition before each extension.  The accelerating loop additionally
maps each extension model to a trace, grows the dependency graph, and when
the trace ends in a cycle worth accelerating widens the next step formula
with the accelerated transition.  The blocking variant tags every step
disjunct with a label value and asserts, for each accelerated cycle, two
clauses that force the solver away from re-unrolling the cycle it could take
in one accelerated step.

Verdict bounds: Safe and Unknown report the loop bound at which the verdict
fell, Unsafe the number of steps of the counterexample.  An unknown answer
from the solver on an error check poisons Safe (a later Unsafe is still
sound); on an extension check it ends the run.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .accel import AccelContext, Success, accelerate_seq
from .cex import Counterexample, expand_and_validate, extract
from .formulas import (And, Formula, Lit, Or, SafetyProblem, eval_formula,
                       formula_vars, rename_literal_step, rename_step)
from .solver import (SatResult, Session, SolverConfig, SolverError,
                     default_solver_command)
from .terms import IntTerm, Var, VarKind, aux_var, lit_eq, lit_ne
from .traces import DepGraph, Step, build_trace, shortest_cyclic_suffix
from .transitions import Interner, Transition


class Engine(enum.Enum):
    BMC = "bmc"
    ABMC = "abmc"
    ABMC_B = "abmc-b"


class Verdict(enum.Enum):
    SAFE = "safe"
    UNSAFE = "unsafe"
    UNKNOWN = "unknown"


class UnknownReason(enum.Enum):
    BOUND_EXHAUSTED = "bound-exhausted"
    SOLVER_UNKNOWN = "solver-unknown"
    TIMEOUT = "timeout"


@dataclass
class EngineConfig:
    max_bound: int = 1000
    timeout_ms: Optional[int] = None      # wall clock for the whole run
    solver: Optional[SolverConfig] = None  # used when no session is injected
    validate: bool = False                 # expand + re-check counterexamples


@dataclass
class EngineResult:
    engine: Engine
    verdict: Verdict
    bound: Optional[int] = None
    reason: Optional[UnknownReason] = None
    detail: str = ""
    cex: Optional[Counterexample] = None
    expanded: Optional[Tuple[Mapping[Var, int], ...]] = None
    learned: int = 0
    queries: int = 0
    wall_ms: float = 0.0
    graph: Optional[DepGraph] = None

    def to_dict(self) -> dict:
        d: dict = {
            "engine": self.engine.value,
            "verdict": self.verdict.value,
            "bound": self.bound,
            "learned": self.learned,
            "queries": self.queries,
            "wall_ms": round(self.wall_ms, 3),
        }
        if self.reason is not None:
            d["reason"] = self.reason.value
        if self.detail:
            d["detail"] = self.detail
        if self.cex is not None:
            c: dict = {"states": [_state_dict(s) for s in self.cex.states]}
            if self.cex.steps is not None:
                c["steps"] = [_step_dict(t) for t in self.cex.steps]
            d["cex"] = c
        if self.expanded is not None:
            d["expanded"] = [_state_dict(s) for s in self.expanded]
        return d


def _state_dict(s: Mapping[Var, int]) -> dict:
    return {v.name: c for v, c in sorted(s.items(), key=lambda p: p[0].sort_key())}


def _step_dict(t: Transition) -> dict:
    out: dict = {"text": " & ".join(str(l) for l in t.literals) or "true"}
    if t.is_learned:
        out["learned"] = t.provenance.id
    return out


def blocking_clauses(
    t: Transition, b: int, label: Var, post_to_pre: Mapping[Var, Var],
) -> Tuple[Formula, Formula]:
    """The two clauses asserted when the cycle behind t is accelerated at
    bound b.  The first blocks re-unrolling the cycle step by step from b,
    the second blocks taking t at b and then unrolling the cycle once more.
    Cycle members carry their own label value (0 for original transitions,
    their id for learned ones)."""
    prov = t.provenance
    lits1: List[Formula] = []
    lits2: List[Formula] = [
        Lit(lit_ne(IntTerm.var(label.at(b)), prov.id))
    ]
    for i, member in enumerate(prov.cycle):
        mem_id = member.provenance.id if member.is_learned else 0
        step_lits = list(member.literals) + [lit_eq(IntTerm.var(label), mem_id)]
        for l in step_lits:
            lits1.append(Lit(rename_literal_step(l, b + i, post_to_pre).negate()))
            lits2.append(Lit(rename_literal_step(l, b + i + 1, post_to_pre).negate()))
    return Or.of(lits1), Or.of(lits2)


class _Driver:
    def __init__(self, problem: SafetyProblem, engine: Engine,
                 cfg: EngineConfig, session: Session) -> None:
        self.p = problem
        self.engine = engine
        self.cfg = cfg
        self.s = session
        self.q0 = session.num_queries
        self.interner = Interner()
        self.tracked: Dict[Var, None] = {}
        self.asserted: List[Formula] = []
        self.steps: List[Step] = []
        self.p2p = problem.post_to_pre
        self.graph = DepGraph() if engine is not Engine.BMC else None
        self.label = (Var(problem.fresh_aux_name("ell"), VarKind.LABEL)
                      if engine is Engine.ABMC_B else None)
        counter = aux_var(problem.fresh_aux_name("n"))
        self.actx = AccelContext(problem.pre_vars, problem.pre_to_post,
                                 counter, session)
        self.cycle_cache: Dict[Tuple[Transition, ...], Optional[Transition]] = {}
        self.next_id = 1
        self.minted = 0
        self.deadline = (None if cfg.timeout_ms is None
                         else time.monotonic() + cfg.timeout_ms / 1000.0)

    def run(self) -> EngineResult:
        try:
            if self.engine is Engine.BMC:
                res = self._bmc()
            else:
                res = self._abmc(blocking=self.engine is Engine.ABMC_B)
        except SolverError as e:
            res = self._result(Verdict.UNKNOWN,
                               reason=UnknownReason.SOLVER_UNKNOWN,
                               detail=str(e))
        if res.verdict is Verdict.UNSAFE and self.cfg.validate:
            res.expanded = expand_and_validate(self.p, res.cex, self.s)
        return res

    # -- plumbing ---------------------------------------------------------

    def _result(self, verdict: Verdict, bound: Optional[int] = None,
                reason: Optional[UnknownReason] = None, detail: str = "",
                cex: Optional[Counterexample] = None) -> EngineResult:
        return EngineResult(
            engine=self.engine, verdict=verdict, bound=bound, reason=reason,
            detail=detail, cex=cex, learned=self.minted,
            queries=self.s.num_queries - self.q0, graph=self.graph)

    def _timed_out(self) -> bool:
        return self.deadline is not None and time.monotonic() > self.deadline

    def _assert_top(self, f: Formula) -> None:
        self.s.assert_formula(f)
        self.asserted.append(f)
        for v in formula_vars(f):
            self.tracked.setdefault(v)

    def _fetch(self, extra: Sequence[Var]) -> Dict[Var, int]:
        request = dict(self.tracked)
        for v in extra:
            request.setdefault(v)
        return self.s.get_model(list(request))

    def _verify(self, sigma: Mapping[Var, int],
                extra_fs: Sequence[Formula] = ()) -> None:
        for f in list(self.asserted) + list(extra_fs):
            if not eval_formula(f, sigma):
                raise SolverError(f"model does not satisfy asserted {f}")

    def _err_check(self, b: int):
        self.s.push()
        try:
            err_b = rename_step(self.p.err, b, self.p2p)
            self.s.assert_formula(err_b)
            r = self.s.check_sat()
            sigma = None
            if r is SatResult.SAT:
                extra = list(formula_vars(err_b))
                for i in range(b + 1):
                    extra.extend(x.at(i) for x in self.p.pre_vars)
                sigma = self._fetch(extra)
                self._verify(sigma, extra_fs=[err_b])
            return r, sigma
        finally:
            self.s.pop()

    # -- the loops --------------------------------------------------------

    def _bmc(self) -> EngineResult:
        self._assert_top(rename_step(self.p.init, 0, self.p2p))
        b = 0
        poisoned = False
        while True:
            if self._timed_out():
                return self._result(Verdict.UNKNOWN, bound=b,
                                    reason=UnknownReason.TIMEOUT)
            r, sigma = self._err_check(b)
            if r is SatResult.SAT:
                return self._result(Verdict.UNSAFE, bound=b,
                                    cex=extract(self.p, sigma, b))
            if r is SatResult.UNKNOWN:
                poisoned = True
            self._assert_top(rename_step(self.p.trans, b, self.p2p))
            r = self.s.check_sat()
            if r is SatResult.UNSAT:
                if poisoned:
                    return self._result(
                        Verdict.UNKNOWN, bound=b,
                        reason=UnknownReason.SOLVER_UNKNOWN,
                        detail="an error check returned unknown")
                return self._result(Verdict.SAFE, bound=b)
            if r is SatResult.UNKNOWN:
                return self._result(Verdict.UNKNOWN, bound=b,
                                    reason=UnknownReason.SOLVER_UNKNOWN,
                                    detail="extension check returned unknown")
            if b >= self.cfg.max_bound:
                return self._result(Verdict.UNKNOWN, bound=b,
                                    reason=UnknownReason.BOUND_EXHAUSTED)
            b += 1

    def _abmc(self, blocking: bool) -> EngineResult:
        self._assert_top(rename_step(self.p.init, 0, self.p2p))
        r = self.s.check_sat()
        if r is SatResult.UNSAT:
            return self._result(Verdict.SAFE, bound=0)
        if r is SatResult.UNKNOWN:
            return self._result(Verdict.UNKNOWN, bound=0,
                                reason=UnknownReason.SOLVER_UNKNOWN,
                                detail="initial state check returned unknown")
        sigma = self._fetch([x.at(0) for x in self.p.pre_vars])
        self._verify(sigma)
        b = 0
        poisoned = False
        while True:
            if self._timed_out():
                return self._result(Verdict.UNKNOWN, bound=b,
                                    reason=UnknownReason.TIMEOUT)
            r, err_sigma = self._err_check(b)
            if r is SatResult.SAT:
                cex = extract(self.p, err_sigma, b, self.steps,
                              self.interner, self.label)
                return self._result(Verdict.UNSAFE, bound=b, cex=cex)
            if r is SatResult.UNKNOWN:
                poisoned = True
            trace = build_trace(self.steps, sigma, self.interner, self.p2p,
                                self.label)
            self.graph.extend(trace)
            suffix = shortest_cyclic_suffix(trace, self.graph)
            learned_t = self._accelerate(suffix) if suffix is not None else None
            f_step = self._step_formula(learned_t, blocking)
            self._assert_top(rename_step(f_step, b, self.p2p))
            if blocking and learned_t is not None:
                beta1, beta2 = blocking_clauses(learned_t, b, self.label,
                                                self.p2p)
                self._assert_top(beta1)
                self._assert_top(beta2)
            r = self.s.check_sat()
            if r is SatResult.UNSAT:
                if poisoned:
                    return self._result(
                        Verdict.UNKNOWN, bound=b,
                        reason=UnknownReason.SOLVER_UNKNOWN,
                        detail="an error check returned unknown")
                return self._result(Verdict.SAFE, bound=b)
            if r is SatResult.UNKNOWN:
                return self._result(Verdict.UNKNOWN, bound=b,
                                    reason=UnknownReason.SOLVER_UNKNOWN,
                                    detail="extension check returned unknown")
            self.steps.append(Step(b, f_step, learned_t))
            sigma = self._fetch([])
            self._verify(sigma)
            if b >= self.cfg.max_bound:
                return self._result(Verdict.UNKNOWN, bound=b,
                                    reason=UnknownReason.BOUND_EXHAUSTED)
            b += 1

    def _step_formula(self, learned_t: Optional[Transition],
                      blocking: bool) -> Formula:
        if not blocking:
            if learned_t is None:
                return self.p.trans
            return Or.of([self.p.trans, learned_t.formula()])
        lbl = IntTerm.var(self.label)
        base = And.of([self.p.trans, Lit(lit_eq(lbl, 0))])
        if learned_t is None:
            return base
        tagged = And.of([learned_t.formula(),
                         Lit(lit_eq(lbl, learned_t.provenance.id))])
        return Or.of([base, tagged])

    def _accelerate(self, suffix: Tuple[Transition, ...]) -> Optional[Transition]:
        if suffix in self.cycle_cache:
            return self.cycle_cache[suffix]
        res = accelerate_seq(suffix, self.actx)
        t = None
        if isinstance(res, Success):
            t, minted = self.interner.learned(res.literals, self.next_id,
                                              suffix, res.info)
            if minted:
                self.next_id += 1
                self.minted += 1
        self.cycle_cache[suffix] = t
        return t


def run(problem: SafetyProblem, engine: Engine,
        config: Optional[EngineConfig] = None,
        session: Optional[Session] = None) -> EngineResult:
    """Check a problem with the chosen engine.  An injected session is used
    as-is (it must be freshly reset) and left open; otherwise one is created
    from config.solver and closed before returning."""
    cfg = config or EngineConfig()
    t0 = time.monotonic()
    own = session is None
    if own:
        try:
            scfg = cfg.solver or SolverConfig(command=default_solver_command())
            session = Session(scfg)
        except SolverError as e:
            return EngineResult(engine=engine, verdict=Verdict.UNKNOWN,
                                reason=UnknownReason.SOLVER_UNKNOWN,
                                detail=str(e),
                                wall_ms=(time.monotonic() - t0) * 1000.0)
    try:
        res = _Driver(problem, engine, cfg, session).run()
    finally:
        if own:
            session.close()
    res.wall_ms = (time.monotonic() - t0) * 1000.0
    return res


def run_bmc(problem: SafetyProblem, config: Optional[EngineConfig] = None,
            session: Optional[Session] = None) -> EngineResult:
    return run(problem, Engine.BMC, config, session)


def run_abmc(problem: SafetyProblem, config: Optional[EngineConfig] = None,
             session: Optional[Session] = None) -> EngineResult:
    return run(problem, Engine.ABMC, config, session)


def run_abmc_blocking(problem: SafetyProblem,
                      config: Optional[EngineConfig] = None,
                      session: Optional[Session] = None) -> EngineResult:
    return run(problem, Engine.ABMC_B, config, session)
