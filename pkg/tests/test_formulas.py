from __future__ import annotations

import random

import pytest

from accelmc.formulas import (FALSE, TRUE, And, Formula, Lit, Not, Or,
                              SafetyProblem, conj, eval_formula, formula_vars,
                              literals, map_literals, negate, rename_step,
                              to_nnf)
from accelmc.terms import (IntTerm, Literal, Var, VarKind, lit_eq, lit_le,
                           lit_lt, post_var, pre_var)

x, y = pre_var("x"), pre_var("y")
xp, yp = post_var("x"), post_var("y")
a, b, c = Lit(lit_le(x, 0)), Lit(lit_eq(y, 1)), Lit(lit_lt(x, y))


def test_connective_smart_constructors():
    assert And.of([And((a, b)), c]) == And((a, b, c))
    assert Or.of([a, Or((b, c))]) == Or((a, b, c))
    assert And.of([a]) is a
    assert Or.of([c]) is c
    assert (a & b) == And((a, b))
    assert (a | b) | c == Or((a, b, c))
    assert conj([lit_le(x, 0), lit_eq(y, 1)]) == And((a, b))


def test_empty_connectives_are_constants():
    assert eval_formula(TRUE, {})
    assert not eval_formula(FALSE, {})
    assert to_nnf(Not(TRUE)) == FALSE
    assert to_nnf(Not(FALSE)) == TRUE


def _random_formula(rng: random.Random, depth: int) -> Formula:
    if depth == 0 or rng.random() < 0.3:
        lhs = IntTerm.var(rng.choice([x, y]))
        k = rng.randint(-3, 3)
        rel = rng.choice(["<", "<=", "=", "!=", ">="])
        return Lit(Literal.make(lhs - k if rng.random() < 0.5 else k - lhs, rel))
    kind = rng.randrange(3)
    if kind == 2:
        return Not(_random_formula(rng, depth - 1))
    kids = [_random_formula(rng, depth - 1) for _ in range(rng.randint(2, 3))]
    return And.of(kids) if kind == 0 else Or.of(kids)


def _has_not(f: Formula) -> bool:
    if isinstance(f, Not):
        return True
    if isinstance(f, (And, Or)):
        return any(_has_not(c) for c in f.children)
    return False


def test_nnf_preserves_meaning_and_removes_negation():
    rng = random.Random(23)
    for _ in range(200):
        f = _random_formula(rng, 3)
        g = to_nnf(f)
        h = negate(f)
        assert not _has_not(g) and not _has_not(h)
        for _ in range(10):
            sigma = {x: rng.randint(-5, 5), y: rng.randint(-5, 5)}
            assert eval_formula(g, sigma) == eval_formula(f, sigma)
            assert eval_formula(h, sigma) != eval_formula(f, sigma)


def test_literal_traversal_keeps_duplicates_in_order():
    f = And((a, Or((b, a)), a))
    assert list(literals(f)) == [a.lit, b.lit, a.lit, a.lit]
    assert formula_vars(f) == (x, y)


def test_map_literals_preserves_shape():
    f = Or((And((a, b)), Not(c)))
    g = map_literals(f, lambda l: l.negate())
    assert isinstance(g, Or) and isinstance(g.children[0], And)
    assert isinstance(g.children[1], Not)
    assert list(literals(g)) == [l.negate() for l in literals(f)]


def test_step_renaming_indexes_post_one_ahead():
    post_to_pre = {xp: x, yp: y}
    f = And((Lit(lit_lt(x, 100)), Lit(lit_eq(xp, IntTerm.var(x) + 1)), Lit(lit_eq(yp, y))))
    g = rename_step(f, 4, post_to_pre)
    vs = formula_vars(g)
    assert set(vs) == {x.at(4), y.at(4), x.at(5), y.at(5)}
    # step copies line up with an explicit path evaluation
    sigma = {x.at(4): 7, y.at(4): 2, x.at(5): 8, y.at(5): 2}
    assert eval_formula(g, sigma)
    sigma[x.at(5)] = 9
    assert not eval_formula(g, sigma)
    with pytest.raises(ValueError):
        rename_step(Lit(lit_le(x.at(1), 0)), 0, post_to_pre)


def test_problem_validation():
    ok = SafetyProblem((x, y), Lit(lit_le(x, 0)), Lit(lit_eq(xp, IntTerm.var(x) + 1)), Lit(lit_le(100, x)))
    assert ok.dim == 2
    assert ok.post_vars == (xp, yp)
    assert ok.post_to_pre == {xp: x, yp: y}
    assert ok.pre_to_post == {x: xp, y: yp}

    with pytest.raises(ValueError, match="post variable"):
        SafetyProblem((x,), Lit(lit_eq(xp, 0)), TRUE, FALSE)
    with pytest.raises(ValueError, match="undeclared"):
        SafetyProblem((x,), Lit(lit_le(y, 0)), TRUE, FALSE)
    with pytest.raises(ValueError, match="no declared pre twin"):
        SafetyProblem((x,), TRUE, Lit(lit_eq(yp, 0)), FALSE)
    with pytest.raises(ValueError, match="bad program variable"):
        SafetyProblem((x.at(0),), TRUE, TRUE, FALSE)


def test_fresh_aux_name_avoids_every_section():
    p = SafetyProblem((x, y), TRUE, Lit(lit_eq(xp, IntTerm.var(Var("n", VarKind.AUX)) + x)), FALSE)
    assert p.all_names() == {"x", "y", "n"}
    assert p.fresh_aux_name("n") == "n1"
    assert p.fresh_aux_name("m") == "m"
