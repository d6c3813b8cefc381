"""Serialization of terms, literals, and formulas to SMT-LIB 2 text.

Only fully indexed variables can be serialized: x at step i becomes the
symbol x_i (same scheme for aux and label variables).  Negative integers
print as (- k) per the SMT-LIB grammar.  Inequality literals print as
(<= p 0), equalities as (= p 0), disequalities as (distinct p 0).
"""

from __future__ import annotations

from typing import Iterable

from .formulas import And, Formula, Lit, Not, Or
from .sexp import Atom, Node, SList
from .terms import IntTerm, Literal, Rel, Var


def var_symbol(v: Var) -> str:
    if not v.indexed:
        raise ValueError(f"cannot serialize unindexed variable {v}")
    return f"{v.name}_{v.index}"


def int_sexpr(k: int) -> str:
    return str(k) if k >= 0 else f"(- {-k})"


def _monomial_sexpr(coeff: int, pp: tuple[Var, ...]) -> str:
    if not pp:
        return int_sexpr(coeff)
    factors = [var_symbol(v) for v in pp]
    if coeff == 1 and len(factors) == 1:
        return factors[0]
    parts = [int_sexpr(coeff)] if coeff != 1 else []
    return "(* " + " ".join(parts + factors) + ")"


def term_sexpr(t: IntTerm) -> str:
    if not t.monomials:
        return "0"
    parts = [_monomial_sexpr(c, pp) for c, pp in t.monomials]
    if len(parts) == 1:
        return parts[0]
    return "(+ " + " ".join(parts) + ")"


def literal_sexpr(l: Literal) -> str:
    p = term_sexpr(l.poly)
    if l.rel is Rel.LE:
        return f"(<= {p} 0)"
    if l.rel is Rel.EQ:
        return f"(= {p} 0)"
    return f"(distinct {p} 0)"


def formula_sexpr(f: Formula) -> str:
    if isinstance(f, Lit):
        return literal_sexpr(f.lit)
    if isinstance(f, And):
        if not f.children:
            return "true"
        return "(and " + " ".join(formula_sexpr(c) for c in f.children) + ")"
    if isinstance(f, Or):
        if not f.children:
            return "false"
        return "(or " + " ".join(formula_sexpr(c) for c in f.children) + ")"
    if isinstance(f, Not):
        return "(not " + formula_sexpr(f.child) + ")"
    raise TypeError(f"not a formula: {f!r}")


def parse_value(node: Node) -> int:
    """An integer value from a get-value response: 7, (- 7)."""
    if isinstance(node, Atom):
        try:
            return int(node.text)
        except ValueError:
            raise ValueError(f"unexpected model value {node.text!r}") from None
    if isinstance(node, SList) and len(node) == 2 and \
            isinstance(node[0], Atom) and node[0].text == "-":
        return -parse_value(node[1])
    raise ValueError(f"unexpected model value {node}")


def parse_get_value(nodes: Iterable[Node], expected: int) -> list[int]:
    """Values from a ((sym val) (sym val) ...) response, in request order."""
    (resp,) = list(nodes)
    if not isinstance(resp, SList):
        raise ValueError(f"malformed get-value response {resp}")
    vals = []
    for pair in resp.items:
        if not isinstance(pair, SList) or len(pair) != 2:
            raise ValueError(f"malformed get-value pair {pair}")
        vals.append(parse_value(pair[1]))
    if len(vals) != expected:
        raise ValueError(f"expected {expected} values, got {len(vals)}")
    return vals
