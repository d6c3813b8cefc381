from __future__ import annotations

from accelmc.formulas import And, Lit, Or, conj
from accelmc.terms import (IntTerm, Var, VarKind, aux_var, lit_eq, lit_lt,
                           pre_var)
from accelmc.traces import (DepGraph, Step, build_trace, is_square_free,
                            pullback_assignment, shortest_cyclic_suffix,
                            should_accel)
from accelmc.transitions import Interner

from helpers import X, XP, Y, YP, step_lits, wrap_lits

P2P = {XP: X, YP: Y}


def _chain(it: Interner, k: int):
    return it.original([lit_eq(XP, IntTerm.var(X) + k)])


def test_pullback_reads_posts_one_step_ahead():
    n = aux_var("n")
    sigma = {X.at(2): 5, Y.at(2): 1, X.at(3): 6, n.at(2): 9}
    local = pullback_assignment((X, Y, XP, n), sigma, 2, P2P)
    assert local == {X: 5, Y: 1, XP: 6, n: 9}


def test_trace_elements_are_the_taken_disjuncts():
    it = Interner()
    trans = Or.of([conj(step_lits(2)), conj(wrap_lits(2))])
    steps = [Step(0, trans), Step(1, trans)]
    # x: 1 -> 2 -> 0 with y bumping on the wrap
    sigma = {X.at(0): 1, Y.at(0): 0, X.at(1): 2, Y.at(1): 0,
             X.at(2): 0, Y.at(2): 1}
    trace = build_trace(steps, sigma, it, P2P)
    assert trace == (it.original(step_lits(2)), it.original(wrap_lits(2)))


def test_trace_prefers_a_satisfied_learned_disjunct():
    it = Interner()
    n = aux_var("n")
    base = it.original(step_lits(100))
    learned, _ = it.learned(
        (lit_lt(0, n), lit_eq(XP, IntTerm.var(X) + n), lit_eq(YP, Y)),
        1, (base,), None)
    f = Or.of([base.formula(), learned.formula()])
    steps = [Step(0, f, learned)]
    jump = {X.at(0): 0, Y.at(0): 0, n.at(0): 5, X.at(1): 5, Y.at(1): 0}
    assert build_trace(steps, jump, it, P2P) == (learned,)
    # a one-step model (learned disjunct false) projects back to the base
    walk = {X.at(0): 0, Y.at(0): 0, n.at(0): 0, X.at(1): 1, Y.at(1): 0}
    assert build_trace(steps, walk, it, P2P) == (base,)


def test_trace_label_mode_decodes_by_label_value():
    it = Interner()
    n = aux_var("n")
    ell = Var("ell", VarKind.LABEL)
    base = it.original(step_lits(100))
    learned, _ = it.learned(
        (lit_lt(0, n), lit_eq(XP, IntTerm.var(X) + n), lit_eq(YP, Y)),
        1, (base,), None)
    f = Or.of([
        And.of([base.formula(), Lit(lit_eq(ell, 0))]),
        And.of([learned.formula(), Lit(lit_eq(ell, 1))]),
    ])
    steps = [Step(0, f, learned)]
    jump = {X.at(0): 0, Y.at(0): 0, n.at(0): 5, ell.at(0): 1,
            X.at(1): 5, Y.at(1): 0}
    assert build_trace(steps, jump, it, P2P, label=ell) == (learned,)
    walk = {X.at(0): 0, Y.at(0): 0, n.at(0): 0, ell.at(0): 0,
            X.at(1): 1, Y.at(1): 0}
    assert build_trace(steps, walk, it, P2P, label=ell) == (base,)


def test_graph_grows_monotonically_in_insertion_order():
    it = Interner()
    p, q, r = _chain(it, 1), _chain(it, 2), _chain(it, 3)
    g = DepGraph()
    g.extend([p, q])
    g.extend([q, r, p, q])
    assert g.vertices == (p, q, r)
    assert g.edges == ((p, q), (q, r), (r, p))
    assert g.has_edge(p, q) and not g.has_edge(q, p)


def test_cycle_check_includes_the_wraparound():
    it = Interner()
    p, q, r = _chain(it, 1), _chain(it, 2), _chain(it, 3)
    g = DepGraph()
    g.extend([p, q, p])
    assert g.is_cycle([p, q]) and g.is_cycle([q, p])
    assert not g.is_cycle([p])
    assert not g.is_cycle([])
    g.extend([q, r])
    assert not g.is_cycle([p, q, r])  # r -> p missing


def test_dot_output_names_learned_vertices():
    it = Interner()
    n = aux_var("n")
    p = _chain(it, 1)
    learned, _ = it.learned((lit_lt(0, n), lit_eq(XP, IntTerm.var(X) + n)),
                            4, (p,), None)
    g = DepGraph()
    g.extend([p, learned, p])
    dot = g.to_dot()
    assert dot.startswith("digraph")
    assert 'a4: ' in dot
    assert dot.count("->") == 2


def test_square_freeness():
    it = Interner()
    a, b, c = _chain(it, 1), _chain(it, 2), _chain(it, 3)
    assert is_square_free([])
    assert is_square_free([a])
    assert not is_square_free([a, a])
    assert is_square_free([a, b, a])
    assert not is_square_free([a, b, a, b])
    assert not is_square_free([a, b, b, c])
    assert is_square_free([a, b, c, a])


def test_should_accel_filters_learned_material():
    it = Interner()
    p, q = _chain(it, 1), _chain(it, 2)
    n = aux_var("n")
    learned, _ = it.learned((lit_lt(0, n), lit_eq(XP, IntTerm.var(X) + n)),
                            3, (p, q), None)
    assert should_accel([p])
    assert not should_accel([learned])
    assert not should_accel([p, p])
    assert should_accel([p, learned])
    assert should_accel([q, p, learned])
    # the learned cycle followed by its acceleration, in any rotation,
    # restates what is already learned
    assert not should_accel([p, q, learned])
    assert not should_accel([q, learned, p])
    assert not should_accel([learned, p, q])


def test_shortest_cyclic_suffix():
    it = Interner()
    p, q = _chain(it, 1), _chain(it, 2)
    n = aux_var("n")
    g = DepGraph()
    g.extend([p, q, p])
    assert shortest_cyclic_suffix([p, q, p], g) == (q, p)
    assert shortest_cyclic_suffix([p, q], g) == (p, q)
    assert shortest_cyclic_suffix([q], g) is None

    learned, _ = it.learned((lit_lt(0, n), lit_eq(XP, IntTerm.var(X) + n)),
                            1, (p,), None)
    h = DepGraph()
    h.extend([p, learned, learned, p])
    # the learned self-loop is rejected, and its square right behind it
    assert shortest_cyclic_suffix([p, learned, learned], h) is None
