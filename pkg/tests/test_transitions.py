from __future__ import annotations

import random

import pytest

from accelmc.formulas import And, Formula, Lit, Or, conj, eval_formula, literals
from accelmc.terms import (IntTerm, Literal, Var, VarKind, aux_var, lit_eq,
                           lit_le, lit_lt)
from accelmc.transitions import (ImplicantError, Interner, compose,
                                 compose_seq, rename_apart_aux, sip,
                                 sip_literals)

from helpers import (X, XP, Y, YP, assignments, formula_relation, rel_chain,
                     step_lits)

PRE = (X, Y)
P2P = {X: XP, Y: YP}
COLS = (X, Y, XP, YP)


def test_interner_reference_identity():
    it = Interner()
    a = it.original(step_lits(5))
    b = it.original(reversed(step_lits(5)))
    c = it.original(step_lits(5) + (step_lits(5)[0],))
    assert a is b is c
    assert not a.is_learned
    assert len(it) == 1
    d = it.original(step_lits(6))
    assert d is not a and len(it) == 2
    assert a.formula() == conj(a.literals)
    assert a.holds({X: 1, Y: 0, XP: 2, YP: 0})
    assert not a.holds({X: 1, Y: 0, XP: 0, YP: 0})


def test_learned_interning_keeps_first_id():
    it = Interner()
    cyc = (it.original(step_lits(3)),)
    n = aux_var("n")
    lits = (lit_lt(0, n), lit_eq(XP, IntTerm.var(X) + n), lit_eq(YP, Y))
    t1, minted = it.learned(lits, 7, cyc, info=None)
    assert minted and t1.is_learned and t1.provenance.id == 7
    assert t1.provenance.cycle == cyc
    t2, minted2 = it.learned(tuple(reversed(lits)), 8, cyc, None)
    assert t2 is t1 and not minted2 and t2.provenance.id == 7
    # a literal set already interned as original keeps that provenance
    t3, minted3 = it.learned(step_lits(3), 9, cyc, None)
    assert t3 is cyc[0] and not minted3 and not t3.is_learned


def _random_trans_lits(rng: random.Random) -> list:
    lits = []
    if rng.random() < 0.7:
        v = rng.choice([X, Y])
        c = rng.randint(-2, 2)
        lits.append(rng.choice([lit_le(v, c), lit_le(c, v)]))
    for pv, _ in ((XP, X), (YP, Y)):
        r = rng.random()
        if r < 0.6:
            src = rng.choice([X, Y])
            lits.append(lit_eq(pv, IntTerm.var(src) + rng.randint(-1, 1)))
        elif r < 0.8:
            lits.append(lit_eq(pv, rng.randint(-2, 2)))
    return lits


def test_composition_matches_relational_chaining():
    rng = random.Random(5)
    it = Interner()
    for _ in range(8):
        l1, l2 = _random_trans_lits(rng), _random_trans_lits(rng)
        r1 = formula_relation(conj(l1), COLS, -2, 2)
        r2 = formula_relation(conj(l2), COLS, -2, 2)
        comp = compose(it.original(l1), l2, PRE, P2P)
        got = formula_relation(conj(comp.literals), COLS, -2, 2)
        assert got == rel_chain(r1, r2, 2)


def test_composition_is_associative_as_a_relation():
    rng = random.Random(9)
    for _ in range(3):
        ls = [_random_trans_lits(rng) for _ in range(3)]
        rels = [formula_relation(conj(l), COLS, -2, 2) for l in ls]
        comp = compose_seq(ls, PRE, P2P)
        got = formula_relation(conj(comp.literals), COLS, -2, 2)
        assert got == rel_chain(rel_chain(rels[0], rels[1], 2), rels[2], 2)
        assert got == rel_chain(rels[0], rel_chain(rels[1], rels[2], 2), 2)


def test_empty_composition_is_identity():
    comp = compose_seq([], PRE, P2P)
    assert comp.boundaries == ({X: X, Y: Y},)
    assert set(comp.literals) == {lit_eq(XP, X), lit_eq(YP, Y)}


def test_threefold_step_composition():
    it = Interner()
    t = it.original(step_lits(2))
    comp = compose_seq([t, t, t], PRE, P2P)
    assert len(comp.boundaries) == 3
    assert comp.boundaries[0] == {X: X, Y: Y}
    mids = {v for b in comp.boundaries[1:] for v in b.values()}
    assert len(mids) == 4 and all(v.kind is VarKind.AUX for v in mids)
    rel = formula_relation(conj(comp.literals), COLS, -1, 3)
    assert (-1, 0, 2, 0) in rel
    assert (0, 0, 3, 0) not in rel  # guard x < 2 blocks the third step


def _random_nnf(rng: random.Random, depth: int) -> Formula:
    if depth == 0 or rng.random() < 0.35:
        v = IntTerm.var(rng.choice([X, Y]))
        k = rng.randint(-2, 2)
        t = v - k if rng.random() < 0.5 else k - v
        return Lit(Literal.make(t, rng.choice(["<", "<=", "=", "!=", ">="])))
    kids = [_random_nnf(rng, depth - 1) for _ in range(rng.randint(2, 3))]
    return And.of(kids) if rng.random() < 0.5 else Or.of(kids)


def test_sip_projects_a_true_implicant():
    rng = random.Random(41)
    it = Interner()
    box = list(assignments([X, Y], -3, 3))
    for _ in range(60):
        f = _random_nnf(rng, 3)
        sats = [s for s in box if eval_formula(f, s)]
        for sigma in sats[:5]:
            t = sip(f, sigma, it)
            assert set(t.literals) <= set(literals(f))
            assert t.holds(sigma)
            for tau in box:
                if t.holds(tau):
                    assert eval_formula(f, tau)
        if len(sats) < len(box):
            bad = next(s for s in box if not eval_formula(f, s))
            with pytest.raises(ImplicantError):
                sip(f, bad, it)


def test_sip_strips_label_literals():
    it = Interner()
    ell = Var("ell", VarKind.LABEL)
    f = conj([lit_le(X, 0), lit_eq(ell, 3)])
    sigma = {X: 0, ell: 3}
    t = sip(f, sigma, it)
    assert all(v.kind is not VarKind.LABEL for l in t.literals for v in l.vars())
    assert lit_le(X, 0) in t.literals
    assert lit_eq(ell, 3) in sip_literals(f, sigma)


def test_rename_apart_aux():
    n = aux_var("n")
    plain = [lit_le(X, 0)]
    assert rename_apart_aux(plain) == plain
    lits = [lit_lt(0, n), lit_eq(XP, IntTerm.var(X) + n)]
    r1 = rename_apart_aux(lits)
    r2 = rename_apart_aux(lits)
    aux1 = {v for l in r1 for v in l.vars() if v.kind is VarKind.AUX}
    aux2 = {v for l in r2 for v in l.vars() if v.kind is VarKind.AUX}
    assert len(aux1) == 1 and len(aux2) == 1 and aux1 != aux2
    m = next(iter(aux1))
    assert "~" in m.name
    assert r1 == [lit_lt(0, m), lit_eq(XP, IntTerm.var(X) + m)]
