"""Variables, integer polynomial terms, and atomic constraints.

Everything downstream (transitions, SMT encoding, acceleration) works over a
single canonical shape: a literal is "polynomial <rel> 0" where the polynomial
is a sorted, merged monomial list and <rel> is one of <=, =, !=.  Strict
inequalities are normalized away at construction time (p < 0 becomes
p + 1 <= 0, which is equivalent over the integers), and >= / > are flipped by
negating the polynomial.  Equalities get their leading coefficient sign
normalized so that structurally equal constraints compare equal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Tuple


class VarKind(enum.Enum):
    PRE = "pre"        # program variable, pre-state
    POST = "post"      # program variable, post-state (the primed copy)
    AUX = "aux"        # existential extras: acceleration counters, CHC clause vars
    LABEL = "label"    # the transition-label variable used by the blocking engine

    def __repr__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Var:
    """A named integer variable, optionally pinned to an unrolling step.

    Unindexed variables live in transition formulas; indexed copies (index i
    meaning "value at step i") are what actually reaches the solver.  POST
    variables never carry an index: step renaming turns x' into x at index
    i + 1.
    """

    name: str
    kind: VarKind = VarKind.PRE
    index: Optional[int] = field(default=None)

    def sort_key(self) -> tuple:
        return (self.name, self.kind.value, self.index is not None, self.index or 0)

    def __lt__(self, other: "Var") -> bool:
        return self.sort_key() < other.sort_key()

    def __post_init__(self) -> None:
        if self.kind is VarKind.POST and self.index is not None:
            raise ValueError(f"post variable {self.name} cannot be indexed")

    @property
    def indexed(self) -> bool:
        return self.index is not None

    def at(self, i: int) -> "Var":
        """The step-i copy of this variable (POST handled by the caller)."""
        if self.indexed:
            raise ValueError(f"variable {self} is already indexed")
        if self.kind is VarKind.POST:
            raise ValueError("rename post variables via rename_step, not Var.at")
        return Var(self.name, self.kind, i)

    def __str__(self) -> str:
        base = self.name + ("'" if self.kind is VarKind.POST else "")
        return base if self.index is None else f"{base}^({self.index})"

    def __repr__(self) -> str:
        return str(self)


def pre_var(name: str) -> Var:
    return Var(name, VarKind.PRE)


def post_var(name: str) -> Var:
    return Var(name, VarKind.POST)


def aux_var(name: str) -> Var:
    return Var(name, VarKind.AUX)


# A monomial is a coefficient times a product of variables; the power product
# is kept as a sorted tuple (x*x*y is (x, x, y)).  The empty product is the
# constant monomial.
Monomial = Tuple[int, Tuple[Var, ...]]

Valuation = Mapping[Var, int]


@dataclass(frozen=True)
class IntTerm:
    """A polynomial over integer variables in canonical form.

    monomials are sorted by power product, merged, and zero coefficients are
    dropped, so structural equality coincides with syntactic equality of the
    normal form.  Supports +, -, * with IntTerm / Var / int operands.
    """

    monomials: Tuple[Monomial, ...] = ()

    @staticmethod
    def _normalize(raw: Iterable[Monomial]) -> Tuple[Monomial, ...]:
        acc: Dict[Tuple[Var, ...], int] = {}
        for coeff, pp in raw:
            pp = tuple(sorted(pp, key=Var.sort_key))
            acc[pp] = acc.get(pp, 0) + coeff
        items = [(c, pp) for pp, c in acc.items() if c != 0]
        items.sort(key=lambda m: tuple(v.sort_key() for v in m[1]))
        return tuple(items)

    def sort_key(self) -> tuple:
        return tuple(
            (tuple(v.sort_key() for v in pp), c) for c, pp in self.monomials
        )

    @classmethod
    def of(cls, raw: Iterable[Monomial]) -> "IntTerm":
        return cls(cls._normalize(raw))

    @classmethod
    def const(cls, k: int) -> "IntTerm":
        return cls(((k, ()),) if k != 0 else ())

    @classmethod
    def var(cls, v: Var, coeff: int = 1) -> "IntTerm":
        return cls(((coeff, (v,)),) if coeff != 0 else ())

    @staticmethod
    def _coerce(x: "IntTerm | Var | int") -> "IntTerm":
        if isinstance(x, IntTerm):
            return x
        if isinstance(x, Var):
            return IntTerm.var(x)
        return IntTerm.const(x)

    def __add__(self, other: "IntTerm | Var | int") -> "IntTerm":
        o = self._coerce(other)
        return IntTerm.of(self.monomials + o.monomials)

    __radd__ = __add__

    def __neg__(self) -> "IntTerm":
        return IntTerm(tuple((-c, pp) for c, pp in self.monomials))

    def __sub__(self, other: "IntTerm | Var | int") -> "IntTerm":
        return self + (-self._coerce(other))

    def __rsub__(self, other: "IntTerm | Var | int") -> "IntTerm":
        return self._coerce(other) + (-self)

    def __mul__(self, other: "IntTerm | Var | int") -> "IntTerm":
        o = self._coerce(other)
        raw = [
            (c1 * c2, pp1 + pp2)
            for c1, pp1 in self.monomials
            for c2, pp2 in o.monomials
        ]
        return IntTerm.of(raw)

    __rmul__ = __mul__

    def is_const(self) -> bool:
        return all(pp == () for _, pp in self.monomials)

    def const_value(self) -> int:
        if not self.is_const():
            raise ValueError(f"not a constant term: {self}")
        return self.monomials[0][0] if self.monomials else 0

    def is_linear(self) -> bool:
        return all(len(pp) <= 1 for _, pp in self.monomials)

    def degree(self) -> int:
        return max((len(pp) for _, pp in self.monomials), default=0)

    def vars(self) -> Tuple[Var, ...]:
        seen = []
        for _, pp in self.monomials:
            for v in pp:
                if v not in seen:
                    seen.append(v)
        return tuple(sorted(seen))

    def coeff_of(self, v: Var) -> int:
        """Coefficient of v as a lone linear monomial (0 if absent)."""
        for c, pp in self.monomials:
            if pp == (v,):
                return c
        return 0

    def drop_var_monomials(self, v: Var) -> "IntTerm":
        """The polynomial minus every monomial mentioning v."""
        return IntTerm(tuple((c, pp) for c, pp in self.monomials if v not in pp))

    def mentions(self, v: Var) -> bool:
        return any(v in pp for _, pp in self.monomials)

    def subst(self, mapping: Mapping[Var, "IntTerm | Var | int"]) -> "IntTerm":
        """Simultaneous substitution of variables by terms."""
        out = IntTerm.const(0)
        for c, pp in self.monomials:
            m = IntTerm.const(c)
            for v in pp:
                rep = mapping.get(v)
                m = m * (IntTerm.var(v) if rep is None else self._coerce(rep))
            out = out + m
        return out

    def rename(self, mapping: Mapping[Var, Var]) -> "IntTerm":
        return IntTerm.of(
            (c, tuple(mapping.get(v, v) for v in pp)) for c, pp in self.monomials
        )

    def eval(self, sigma: Valuation) -> int:
        total = 0
        for c, pp in self.monomials:
            val = c
            for v in pp:
                val *= sigma[v]
            total += val
        return total

    def __str__(self) -> str:
        if not self.monomials:
            return "0"
        parts = []
        for c, pp in self.monomials:
            body = "*".join(str(v) for v in pp)
            if not pp:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return str(self)


ZERO = IntTerm.const(0)


class Rel(enum.Enum):
    LE = "<="
    EQ = "="
    NE = "!="

    def __repr__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Literal:
    """A canonical atomic constraint: poly <rel> 0 with rel in {<=, =, !=}."""

    poly: IntTerm
    rel: Rel

    def sort_key(self) -> tuple:
        return (self.poly.sort_key(), self.rel.value)

    def __lt__(self, other: "Literal") -> bool:
        return self.sort_key() < other.sort_key()

    @staticmethod
    def make(poly: IntTerm, rel_sym: str) -> "Literal":
        """Build and canonicalize from any of < <= = != >= >.

        The polynomial is interpreted as "poly <rel> 0".
        """
        if rel_sym == ">":
            poly, rel_sym = -poly, "<"
        elif rel_sym == ">=":
            poly, rel_sym = -poly, "<="
        if rel_sym == "<":
            poly, rel_sym = poly + 1, "<="
        if rel_sym == "<=":
            return Literal(poly, Rel.LE)
        if rel_sym in ("=", "!="):
            # sign-normalize so p = 0 and -p = 0 intern identically
            if poly.monomials and poly.monomials[0][0] < 0:
                poly = -poly
            return Literal(poly, Rel.EQ if rel_sym == "=" else Rel.NE)
        raise ValueError(f"unknown relation {rel_sym!r}")

    def negate(self) -> "Literal":
        if self.rel is Rel.LE:
            # not (p <= 0)  <=>  p >= 1  <=>  -p + 1 <= 0
            return Literal.make(-self.poly + 1, "<=")
        if self.rel is Rel.EQ:
            return Literal(self.poly, Rel.NE)
        return Literal(self.poly, Rel.EQ)

    def holds(self, sigma: Valuation) -> bool:
        v = self.poly.eval(sigma)
        if self.rel is Rel.LE:
            return v <= 0
        if self.rel is Rel.EQ:
            return v == 0
        return v != 0

    def vars(self) -> Tuple[Var, ...]:
        return self.poly.vars()

    def subst(self, mapping: Mapping[Var, "IntTerm | Var | int"]) -> "Literal":
        return Literal.make(self.poly.subst(mapping), self.rel.value)

    def rename(self, mapping: Mapping[Var, Var]) -> "Literal":
        # pure renaming keeps the canonical form intact
        return Literal(self.poly.rename(mapping), self.rel)

    def __str__(self) -> str:
        return f"{self.poly} {self.rel.value} 0"

    def __repr__(self) -> str:
        return str(self)


def lit_le(a: "IntTerm | Var | int", b: "IntTerm | Var | int") -> Literal:
    return Literal.make(IntTerm._coerce(a) - IntTerm._coerce(b), "<=")


def lit_lt(a: "IntTerm | Var | int", b: "IntTerm | Var | int") -> Literal:
    return Literal.make(IntTerm._coerce(a) - IntTerm._coerce(b), "<")


def lit_eq(a: "IntTerm | Var | int", b: "IntTerm | Var | int") -> Literal:
    return Literal.make(IntTerm._coerce(a) - IntTerm._coerce(b), "=")


def lit_ne(a: "IntTerm | Var | int", b: "IntTerm | Var | int") -> Literal:
    return Literal.make(IntTerm._coerce(a) - IntTerm._coerce(b), "!=")
