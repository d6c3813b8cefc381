"""Problem frontends: a native s-expression format and a linear-CHC reader.

Native files (extension .sp) hold four sections::

    (vars (x Int) (y Int))
    (init (and (<= x 0) (<= y 0)))
    (trans (or (and (< x 100) (= x' (+ x 1)) (= y' y)) ...))
    (err (>= y 100))

Post-state variables are written with a trailing apostrophe.  Symbols used in
(trans ...) without being declared become auxiliary (existential) variables;
in (init ...) and (err ...) they are errors.  dump_native prints a problem
back in this format, canonically, so dump-then-parse is stable.

CHC input is an SMT-LIB 2 HORN subset: declare-fun predicates over Int,
asserted (forall ... (=> body head)) clauses with at most one predicate per
body, and simple let bindings.  encode_chc compiles the predicates away with
a location variable plus a shared max-arity argument vector.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .formulas import (
    FALSE,
    TRUE,
    And,
    Formula,
    Lit,
    Not,
    Or,
    SafetyProblem,
    formula_vars,
    map_literals,
    to_nnf,
)
from .sexp import Atom, Node, SexpError, SList, parse_all
from .terms import IntTerm, Literal, Rel, Var, VarKind, aux_var, lit_eq, post_var, pre_var


class FormatError(SexpError):
    """Input rejected by a frontend, with the offending source position."""


def _err(node: Node, msg: str) -> FormatError:
    return FormatError(msg, node.line, node.col)


_NUMERAL = re.compile(r"-?\d+\Z")
# SMT-LIB simple-symbol characters, minus '~' (reserved for internal renaming)
# and the apostrophe (the native post-state marker).
_SYMBOL = re.compile(r"[A-Za-z_!$%&*+./<>?@^=][\w!$%&*+./<>?@^=-]*\Z")
_RELS = ("<", "<=", "=", "!=", ">=", ">")
_KEYWORDS = frozenset(
    ("and", "or", "not", "true", "false", "+", "-", "*", "Int", "vars", "init", "trans", "err")
    + _RELS
)


def _symbol_text(atom: Atom) -> str:
    text = atom.text
    if len(text) >= 2 and text.startswith("|") and text.endswith("|"):
        text = text[1:-1]
    return text


# ---------------------------------------------------------------------------
# native format


@dataclass
class _NativeScope:
    pre: Dict[str, Var]
    section: str                   # "init" | "trans" | "err"
    aux: Dict[str, Var]

    @property
    def in_trans(self) -> bool:
        return self.section == "trans"


def _native_var(atom: Atom, scope: _NativeScope) -> Var:
    text = _symbol_text(atom)
    if "~" in text:
        raise _err(atom, f"reserved character '~' in symbol {text!r}")
    is_post = text.endswith("'")
    base = text[:-1] if is_post else text
    if "'" in base or not base:
        raise _err(atom, f"misplaced apostrophe in symbol {text!r}")
    if _NUMERAL.match(base) or not _SYMBOL.match(base) or base in _KEYWORDS:
        raise _err(atom, f"invalid variable symbol {text!r}")
    if base in scope.pre:
        if not is_post:
            return scope.pre[base]
        if not scope.in_trans:
            raise _err(atom, f"post variable {text} not allowed in {scope.section}")
        return post_var(base)
    if is_post:
        raise _err(atom, f"unknown post variable {text} (no declared variable {base!r})")
    if not scope.in_trans:
        raise _err(atom, f"unknown symbol {base!r} in {scope.section}")
    return scope.aux.setdefault(base, aux_var(base))


def _native_term(node: Node, scope: _NativeScope) -> IntTerm:
    if isinstance(node, Atom):
        if _NUMERAL.match(node.text):
            return IntTerm.const(int(node.text))
        return IntTerm.var(_native_var(node, scope))
    if not node.items or not isinstance(node[0], Atom):
        raise _err(node, "expected a term")
    op = node[0].text
    args = node.items[1:]
    if op not in ("+", "-", "*") or not args:
        raise _err(node[0], f"unknown arithmetic operator {op!r}")
    terms = [_native_term(a, scope) for a in args]
    if op == "-":
        if len(terms) == 1:
            return -terms[0]
        out = terms[0]
        for t in terms[1:]:
            out = out - t
        return out
    out = terms[0]
    for t in terms[1:]:
        out = out * t if op == "*" else out + t
    return out


def _native_formula(node: Node, scope: _NativeScope) -> Formula:
    if isinstance(node, Atom):
        if node.text == "true":
            return TRUE
        if node.text == "false":
            return FALSE
        raise _err(node, f"expected a formula, got {node.text!r}")
    if not node.items or not isinstance(node[0], Atom):
        raise _err(node, "expected a formula")
    op = node[0].text
    args = node.items[1:]
    if op == "and":
        return And.of(_native_formula(a, scope) for a in args)
    if op == "or":
        return Or.of(_native_formula(a, scope) for a in args)
    if op == "not":
        if len(args) != 1:
            raise _err(node, "not takes one argument")
        return Not(_native_formula(args[0], scope))
    if op in _RELS:
        if len(args) != 2:
            raise _err(node, f"{op} takes two arguments")
        lhs, rhs = (_native_term(a, scope) for a in args)
        return Lit(Literal.make(lhs - rhs, op))
    raise _err(node[0], f"unknown operator {op!r}")


def _parse_var_decls(section: SList) -> Dict[str, Var]:
    pre: Dict[str, Var] = {}
    for item in section.items[1:]:
        if isinstance(item, Atom):
            name_atom, sort = item, None
        elif len(item) == 2 and isinstance(item[0], Atom) and isinstance(item[1], Atom):
            name_atom, sort = item[0], item[1]
        else:
            raise _err(item, "expected a variable name or (name Int)")
        name = _symbol_text(name_atom)
        if sort is not None and sort.text != "Int":
            raise _err(sort, f"non-integer sort {sort.text!r}")
        if (
            _NUMERAL.match(name)
            or not _SYMBOL.match(name)
            or name in _KEYWORDS
            or "'" in name
        ):
            raise _err(name_atom, f"invalid variable symbol {name!r}")
        if name in pre:
            raise _err(name_atom, f"duplicate variable {name!r}")
        pre[name] = pre_var(name)
    return pre


def parse_native(text: str, name: str = "problem") -> SafetyProblem:
    """Parse the native (vars/init/trans/err) format into a SafetyProblem."""
    sections: Dict[str, SList] = {}
    for node in parse_all(text):
        if not isinstance(node, SList) or not node.items or not isinstance(node[0], Atom):
            raise _err(node, "expected a (vars|init|trans|err ...) section")
        key = node[0].text
        if key not in ("vars", "init", "trans", "err"):
            raise _err(node[0], f"unknown section {key!r}")
        if key in sections:
            raise _err(node[0], f"duplicate section {key!r}")
        sections[key] = node
    for key in ("vars", "init", "trans", "err"):
        if key not in sections:
            raise FormatError(f"missing ({key} ...) section", 1, 1)

    pre = _parse_var_decls(sections["vars"])
    parts: Dict[str, Formula] = {}
    for key in ("init", "trans", "err"):
        section = sections[key]
        if len(section) != 2:
            raise _err(section, f"({key} ...) takes exactly one formula")
        scope = _NativeScope(pre=pre, section=key, aux={})
        parts[key] = to_nnf(_native_formula(section[1], scope))
    return SafetyProblem(
        pre_vars=tuple(pre.values()),
        init=parts["init"],
        trans=parts["trans"],
        err=parts["err"],
        name=name,
    )


# dump: canonical printing, chosen so that parse(dump(parse(text))) is a
# fixpoint (parse canonicalizes literals and flattens and/or, dump emits
# exactly that shape back).


def _fmt_var(v: Var) -> str:
    if v.indexed:
        raise ValueError(f"cannot print indexed variable {v}")
    if "~" in v.name:
        raise ValueError(f"cannot print reserved name {v.name!r}")
    return v.name + ("'" if v.kind is VarKind.POST else "")


def _fmt_monomial(coeff: int, pp: Tuple[Var, ...]) -> str:
    factors = [] if coeff == 1 and pp else [str(coeff)]
    factors += [_fmt_var(v) for v in pp]
    if len(factors) == 1:
        return factors[0]
    return "(* " + " ".join(factors) + ")"


def _fmt_term(t: IntTerm) -> str:
    parts = [_fmt_monomial(c, pp) for c, pp in t.monomials]
    if not parts:
        return "0"
    if len(parts) == 1:
        return parts[0]
    return "(+ " + " ".join(parts) + ")"


def _fmt_literal(l: Literal) -> str:
    pos = tuple((c, pp) for c, pp in l.poly.monomials if c > 0)
    neg = tuple((-c, pp) for c, pp in l.poly.monomials if c < 0)
    op = {Rel.LE: "<=", Rel.EQ: "=", Rel.NE: "!="}[l.rel]
    return f"({op} {_fmt_term(IntTerm(pos))} {_fmt_term(IntTerm(neg))})"


def _fmt_formula(f: Formula) -> str:
    if isinstance(f, Lit):
        return _fmt_literal(f.lit)
    if isinstance(f, And):
        if not f.children:
            return "true"
        return "(and " + " ".join(_fmt_formula(c) for c in f.children) + ")"
    if isinstance(f, Or):
        if not f.children:
            return "false"
        return "(or " + " ".join(_fmt_formula(c) for c in f.children) + ")"
    if isinstance(f, Not):
        return f"(not {_fmt_formula(f.child)})"
    raise TypeError(f"not a formula: {f!r}")


def dump_native(problem: SafetyProblem) -> str:
    """Print a problem in the native format (deterministic, reparseable)."""
    lines = [
        "(vars" + "".join(f" ({v.name} Int)" for v in problem.pre_vars) + ")",
        f"(init {_fmt_formula(problem.init)})",
        f"(trans {_fmt_formula(problem.trans)})",
        f"(err {_fmt_formula(problem.err)})",
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# CHC reader


@dataclass(frozen=True)
class Predicate:
    name: str
    arity: int


@dataclass(frozen=True)
class Fact:
    """head(args) <= constraint, no predicate in the body."""

    head: str
    head_args: Tuple[IntTerm, ...]
    constraint: Formula
    line: int = 0
    col: int = 0


@dataclass(frozen=True)
class Rule:
    """head(head_args) <= body(body_args) and constraint."""

    body: str
    body_args: Tuple[IntTerm, ...]
    head: str
    head_args: Tuple[IntTerm, ...]
    constraint: Formula
    line: int = 0
    col: int = 0


@dataclass(frozen=True)
class Query:
    """false <= body(body_args) and constraint."""

    body: str
    body_args: Tuple[IntTerm, ...]
    constraint: Formula
    line: int = 0
    col: int = 0


@dataclass(frozen=True)
class ChcSystem:
    """A linear CHC system over Int, split into facts, rules and queries."""

    predicates: Tuple[Predicate, ...]
    facts: Tuple[Fact, ...]
    rules: Tuple[Rule, ...]
    queries: Tuple[Query, ...]

    def location(self, pred: str) -> int:
        """Location id of a predicate: declaration order, starting at 1."""
        for i, p in enumerate(self.predicates):
            if p.name == pred:
                return i + 1
        raise KeyError(pred)


def _expand_lets(node: Node, env: Mapping[str, Node]) -> Node:
    """Inline simple let bindings; bindings are resolved in the outer scope."""
    if isinstance(node, Atom):
        return env.get(node.text, node)
    if node.items and isinstance(node[0], Atom) and node[0].text == "let":
        if len(node) != 3 or not isinstance(node[1], SList):
            raise _err(node, "malformed let")
        inner = dict(env)
        for b in node[1].items:
            if not isinstance(b, SList) or len(b) != 2 or not isinstance(b[0], Atom):
                raise _err(b, "malformed let binding")
            inner[b[0].text] = _expand_lets(b[1], env)
        return _expand_lets(node[2], inner)
    if node.items and isinstance(node[0], Atom) and node[0].text == "forall":
        if len(node) != 3 or not isinstance(node[1], SList):
            raise _err(node, "malformed forall")
        shadowed = {
            b[0].text
            for b in node[1].items
            if isinstance(b, SList) and len(b) == 2 and isinstance(b[0], Atom)
        }
        inner = {k: v for k, v in env.items() if k not in shadowed}
        return SList((node[0], node[1], _expand_lets(node[2], inner)), node.line, node.col)
    return SList(tuple(_expand_lets(i, env) for i in node.items), node.line, node.col)


def _chc_symbol(atom: Atom) -> str:
    text = _symbol_text(atom)
    if not _SYMBOL.match(text) or _NUMERAL.match(text):
        raise _err(atom, f"invalid symbol {text!r}")
    return text


def _chc_term(node: Node, env: Mapping[str, Var], preds: Mapping[str, Predicate]) -> IntTerm:
    if isinstance(node, Atom):
        if _NUMERAL.match(node.text):
            return IntTerm.const(int(node.text))
        name = _chc_symbol(node)
        if name in env:
            return IntTerm.var(env[name])
        if name in preds:
            raise _err(node, f"predicate {name!r} used inside a constraint")
        raise _err(node, f"unknown symbol {name!r} (not bound by the clause)")
    if not node.items or not isinstance(node[0], Atom):
        raise _err(node, "expected a term")
    op = node[0].text
    if op in preds:
        raise _err(node[0], f"predicate {op!r} used inside a constraint")
    if op not in ("+", "-", "*") or len(node) < 2:
        raise _err(node[0], f"unknown arithmetic operator {op!r}")
    args = [_chc_term(a, env, preds) for a in node.items[1:]]
    if op == "-" and len(args) == 1:
        return -args[0]
    out = args[0]
    for t in args[1:]:
        out = out * t if op == "*" else (out - t if op == "-" else out + t)
    return out


def _chc_formula(node: Node, env: Mapping[str, Var], preds: Mapping[str, Predicate]) -> Formula:
    if isinstance(node, Atom):
        if node.text == "true":
            return TRUE
        if node.text == "false":
            return FALSE
        if _symbol_text(node) in preds:
            raise _err(node, f"predicate {_symbol_text(node)!r} used inside a constraint")
        raise _err(node, f"expected a formula, got {node.text!r}")
    if not node.items or not isinstance(node[0], Atom):
        raise _err(node, "expected a formula")
    op = node[0].text
    args = node.items[1:]
    if op == "and":
        return And.of(_chc_formula(a, env, preds) for a in args)
    if op == "or":
        return Or.of(_chc_formula(a, env, preds) for a in args)
    if op == "not":
        if len(args) != 1:
            raise _err(node, "not takes one argument")
        return Not(_chc_formula(args[0], env, preds))
    if op in _RELS or op == "distinct":
        if len(args) != 2:
            raise _err(node, f"{op} takes two arguments")
        lhs, rhs = (_chc_term(a, env, preds) for a in args)
        return Lit(Literal.make(lhs - rhs, "!=" if op == "distinct" else op))
    if op in preds:
        raise _err(node[0], f"predicate {op!r} used inside a constraint")
    raise _err(node[0], f"unknown operator {op!r}")


def _pred_app(node: Node, preds: Mapping[str, Predicate]) -> Optional[Tuple[str, Tuple[Node, ...]]]:
    """(P t1 .. tk) or a bare 0-ary P; None if node is not an application."""
    if isinstance(node, Atom):
        name = _symbol_text(node)
        return (name, ()) if name in preds else None
    if node.items and isinstance(node[0], Atom):
        name = _symbol_text(node[0])
        if name in preds:
            return (name, tuple(node.items[1:]))
    return None


def _flatten_and(node: Node) -> List[Node]:
    if isinstance(node, SList) and node.items and isinstance(node[0], Atom) and node[0].text == "and":
        out: List[Node] = []
        for c in node.items[1:]:
            out.extend(_flatten_and(c))
        return out
    return [node]


def _chc_clause(node: Node, preds: Mapping[str, Predicate]):
    """Classify one asserted clause into a Fact, Rule or Query."""
    clause = _expand_lets(node, {})
    env: Dict[str, Var] = {}
    if isinstance(clause, SList) and clause.items and isinstance(clause[0], Atom) \
            and clause[0].text == "forall":
        if len(clause) != 3 or not isinstance(clause[1], SList):
            raise _err(clause, "malformed forall")
        for b in clause[1].items:
            if not isinstance(b, SList) or len(b) != 2 or not isinstance(b[0], Atom) \
                    or not isinstance(b[1], Atom):
                raise _err(b, "malformed bound variable")
            if b[1].text != "Int":
                raise _err(b[1], f"unsupported sort {b[1].text!r}")
            name = _chc_symbol(b[0])
            if name in env:
                raise _err(b[0], f"duplicate bound variable {name!r}")
            env[name] = aux_var(name)
        body = clause[2]
    else:
        body = clause

    if isinstance(body, SList) and body.items and isinstance(body[0], Atom) \
            and body[0].text == "=>":
        if len(body) != 3:
            raise _err(body, "=> takes two arguments")
        ante_parts = _flatten_and(body[1])
        consequent = body[2]
    else:
        ante_parts = []
        consequent = body

    apps: List[Tuple[str, Tuple[Node, ...], Node]] = []
    constraints: List[Formula] = []
    for part in ante_parts:
        app = _pred_app(part, preds)
        if app is not None:
            apps.append((app[0], app[1], part))
        else:
            constraints.append(_chc_formula(part, env, preds))
    if len(apps) > 1:
        raise _err(apps[1][2], "non-linear CHC unsupported (two predicates in one body)")

    def translate_app(name: str, arg_nodes: Tuple[Node, ...], at: Node) -> Tuple[IntTerm, ...]:
        if len(arg_nodes) != preds[name].arity:
            raise _err(at, f"predicate {name!r} expects {preds[name].arity} arguments")
        return tuple(_chc_term(a, env, preds) for a in arg_nodes)

    constraint = to_nnf(And.of(constraints))
    head_app = _pred_app(consequent, preds)
    if head_app is not None:
        head_name, head_nodes = head_app
        head_args = translate_app(head_name, head_nodes, consequent)
        if not apps:
            return Fact(head_name, head_args, constraint, node.line, node.col)
        bname, bnodes, bat = apps[0]
        return Rule(bname, translate_app(bname, bnodes, bat), head_name, head_args,
                    constraint, node.line, node.col)
    if isinstance(consequent, Atom) and consequent.text == "false":
        if not apps:
            raise _err(node, "query without a body predicate is not supported")
        bname, bnodes, bat = apps[0]
        return Query(bname, translate_app(bname, bnodes, bat), constraint,
                     node.line, node.col)
    raise _err(consequent, "clause head must be a predicate application or false")


def parse_chc(text: str) -> ChcSystem:
    """Parse the restricted SMT-LIB 2 HORN fragment into a ChcSystem."""
    preds: Dict[str, Predicate] = {}
    facts: List[Fact] = []
    rules: List[Rule] = []
    queries: List[Query] = []
    for node in parse_all(text):
        if not isinstance(node, SList) or not node.items or not isinstance(node[0], Atom):
            raise _err(node, "expected an SMT-LIB command")
        cmd = node[0].text
        if cmd == "set-logic":
            if len(node) != 2 or not isinstance(node[1], Atom) or node[1].text != "HORN":
                raise _err(node, "expected (set-logic HORN)")
        elif cmd in ("set-info", "set-option", "check-sat", "get-model", "exit"):
            continue
        elif cmd == "declare-fun":
            if len(node) != 4 or not isinstance(node[1], Atom) or not isinstance(node[2], SList) \
                    or not isinstance(node[3], Atom):
                raise _err(node, "malformed declare-fun")
            name = _chc_symbol(node[1])
            if node[3].text != "Bool":
                raise _err(node[3], f"predicate {name!r} must return Bool")
            for s in node[2].items:
                if not isinstance(s, Atom) or s.text != "Int":
                    raise _err(s, f"unsupported sort {s!s}")
            if name in preds:
                raise _err(node[1], f"duplicate predicate {name!r}")
            preds[name] = Predicate(name, len(node[2]))
        elif cmd == "assert":
            if len(node) != 2:
                raise _err(node, "assert takes one argument")
            clause = _chc_clause(node[1], preds)
            if isinstance(clause, Fact):
                facts.append(clause)
            elif isinstance(clause, Rule):
                rules.append(clause)
            else:
                queries.append(clause)
        else:
            raise _err(node[0], f"unsupported command {cmd!r}")
    return ChcSystem(tuple(preds.values()), tuple(facts), tuple(rules), tuple(queries))


# ---------------------------------------------------------------------------
# CHC -> transition system


def _bare_aux(t: IntTerm) -> Optional[Var]:
    if len(t.monomials) == 1:
        coeff, pp = t.monomials[0]
        if coeff == 1 and len(pp) == 1 and pp[0].kind is VarKind.AUX:
            return pp[0]
    return None


def _bind_pre(slots: Sequence[Var], args: Sequence[IntTerm], constraint: Formula,
              loc: Var, locno: int, what: str, line: int, col: int) -> Formula:
    """One init/err disjunct: loc = id plus head/body args bound to the
    pre-state slots.  Clause variables must be eliminable by substitution
    (each one has to occur bare in some argument position), because init and
    err cannot carry existentials."""
    sub: Dict[Var, Var] = {}
    eqs: List[Tuple[Var, IntTerm]] = []
    for slot, t in zip(slots, args):
        v = _bare_aux(t)
        if v is not None and v not in sub:
            sub[v] = slot
        else:
            eqs.append((slot, t))
    parts: List[Formula] = [Lit(lit_eq(loc, locno))]
    parts += [Lit(lit_eq(slot, t.subst(sub))) for slot, t in eqs]
    parts.append(
        constraint if not sub
        else map_literals(constraint, lambda l: l.subst(sub))
    )
    out = And.of(parts)
    for v in formula_vars(out):
        if v.kind is VarKind.AUX:
            raise FormatError(
                f"existential variable {v.name!r} in a {what} (not a bare argument)",
                line, col)
    return out


def _clause_vars(parts: Sequence[IntTerm], constraint: Formula) -> List[Var]:
    seen: List[Var] = []
    for t in parts:
        for v in t.vars():
            if v not in seen:
                seen.append(v)
    for v in formula_vars(constraint):
        if v not in seen:
            seen.append(v)
    return [v for v in seen if v.kind is VarKind.AUX]


def encode_chc(sys: ChcSystem, name: str = "chc") -> SafetyProblem:
    """Compile a linear CHC system into a transition system.

    One location variable loc holds the current predicate id (declaration
    order, from 1); a shared argument vector arg1..argK (K = max arity)
    holds the predicate arguments.  Slots beyond a predicate's arity are
    left unconstrained.  Facts become init disjuncts, rules trans
    disjuncts, queries err disjuncts.
    """
    arity = max((p.arity for p in sys.predicates), default=0)
    loc = pre_var("loc")
    slots = tuple(pre_var(f"arg{i + 1}") for i in range(arity))
    slot_names = {v.name for v in slots} | {loc.name}
    locno = {p.name: i + 1 for i, p in enumerate(sys.predicates)}

    init = Or.of(
        _bind_pre(slots, f.head_args, f.constraint, loc, locno[f.head],
                  "fact", f.line, f.col)
        for f in sys.facts
    )
    err = Or.of(
        _bind_pre(slots, q.body_args, q.constraint, loc, locno[q.body],
                  "query", q.line, q.col)
        for q in sys.queries
    )

    disjuncts: List[Formula] = []
    for r in sys.rules:
        # clause variables stay as auxiliaries in trans; rename the ones that
        # would shadow a slot so dumps reparse to the same problem
        rmap: Dict[Var, Var] = {}
        taken = {v.name for v in _clause_vars(r.body_args + r.head_args, r.constraint)}
        for v in _clause_vars(r.body_args + r.head_args, r.constraint):
            if v.name in slot_names:
                fresh = v.name + "_"
                while fresh in slot_names or fresh in taken:
                    fresh += "_"
                taken.add(fresh)
                rmap[v] = aux_var(fresh)
        parts: List[Formula] = [
            Lit(lit_eq(loc, locno[r.body])),
            Lit(lit_eq(post_var(loc.name), locno[r.head])),
        ]
        parts += [
            Lit(lit_eq(slot, t.rename(rmap)))
            for slot, t in zip(slots, r.body_args)
        ]
        parts += [
            Lit(lit_eq(post_var(slot.name), t.rename(rmap)))
            for slot, t in zip(slots, r.head_args)
        ]
        parts.append(map_literals(r.constraint, lambda l: l.rename(rmap)))
        disjuncts.append(And.of(parts))
    trans = Or.of(disjuncts)

    return SafetyProblem(
        pre_vars=(loc,) + slots,
        init=to_nnf(init),
        trans=to_nnf(trans),
        err=to_nnf(err),
        name=name,
    )


def load_problem(path: str) -> SafetyProblem:
    """Read a problem file, dispatching on extension (.smt2 = CHC)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stem = path.rsplit("/", 1)[-1]
    stem = stem.rsplit(".", 1)[0] if "." in stem else stem
    if path.endswith(".smt2"):
        return encode_chc(parse_chc(text), name=stem)
    return parse_native(text, name=stem)
