"""Terms over {&, |, ->, <-, ~, G, H, P, F, 0, 1} and their evaluation.

An algebra is anything with ``n`` (carrier size) and ``table(symbol)``:
binary symbols give an ``n x n`` int array, unary ones a length-``n`` array,
``"0"``/``"1"`` an element index.  Missing symbols raise
:class:`UninterpretedSymbol`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Mapping

import numpy as np

BINARY = ("and", "or", "to", "from")
UNARY = ("not", "G", "H", "P", "F")
CONSTS = ("0", "1")

# Languages a symbol belongs to.  P and F are abbreviations inside L_t.
LANGUAGES = {
    "var": {"L", "L'", "Lt"},
    "0": {"L", "L'", "Lt"},
    "1": {"L", "L'", "Lt"},
    "and": {"L", "L'", "Lt"},
    "or": {"L", "L'", "Lt"},
    "to": {"L", "L'"},
    "from": {"L", "L'"},
    "not": {"L'", "Lt"},
    "G": {"Lt"},
    "H": {"Lt"},
    "P": {"Lt"},
    "F": {"Lt"},
}

_INFIX = {"and": "&", "or": "|", "to": "->", "from": "<-"}


class UnboundVariable(KeyError):
    pass


class UninterpretedSymbol(KeyError):
    pass


class SignatureMismatch(ValueError):
    pass


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class Term:
    op: str
    args: tuple["Term", ...] = ()
    label: str = ""

    # builder sugar: & | ~ for lattice/negation, >> for ->, << for <-
    def __and__(self, other: "Term") -> "Term":
        return Term("and", (self, other))

    def __or__(self, other: "Term") -> "Term":
        return Term("or", (self, other))

    def __invert__(self) -> "Term":
        return Term("not", (self,))

    def __rshift__(self, other: "Term") -> "Term":
        return Term("to", (self, other))

    def __lshift__(self, other: "Term") -> "Term":
        return Term("from", (self, other))

    @property
    def origin(self) -> frozenset[str]:
        """Languages (``L``, ``L'``, ``Lt``) whose signature covers this node."""
        return frozenset(LANGUAGES[self.op])

    def languages(self) -> frozenset[str]:
        out = set(LANGUAGES[self.op])
        for a in self.args:
            out &= a.languages()
        return frozenset(out)

    def variables(self) -> list[str]:
        seen: set[str] = set()
        stack = [self]
        while stack:
            t = stack.pop()
            if t.op == "var":
                seen.add(t.label)
            stack.extend(t.args)
        return sorted(seen, key=_var_key)

    def symbols(self) -> set[str]:
        out = {self.op}
        for a in self.args:
            out |= a.symbols()
        return out

    def __str__(self) -> str:
        if self.op == "var":
            return self.label
        if self.op in CONSTS:
            return self.op
        if self.op == "not":
            return "~" + _wrap(self.args[0])
        if self.op in UNARY:
            return f"{self.op}({self.args[0]})"
        return f"{_wrap(self.args[0])} {_INFIX[self.op]} {_wrap(self.args[1])}"


def _wrap(t: Term) -> str:
    s = str(t)
    return f"({s})" if t.op in BINARY else s


def _var_key(name: str):
    m = re.fullmatch(r"([a-z_]+)(\d*)", name)
    if m:
        return (m.group(1), int(m.group(2) or -1), name)
    return (name, -1, name)


def var(name: str) -> Term:
    return Term("var", (), name)


ZERO = Term("0")
ONE = Term("1")


def G(t: Term) -> Term:
    return Term("G", (t,))


def H(t: Term) -> Term:
    return Term("H", (t,))


def P(t: Term) -> Term:
    return Term("P", (t,))


def F(t: Term) -> Term:
    return Term("F", (t,))


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(<=|->|<-|[()&|~=]|[GHPF](?![a-z0-9_])|[01](?![0-9])|[a-z_][a-z0-9_]*)")


def _tokenize(s: str) -> list[str]:
    pos, out = 0, []
    s = s.rstrip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise ParseError(f"unexpected input at column {pos}: {s[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens: list[str]):
        self.toks = tokens
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'a token'}, got {tok!r}")
        self.i += 1
        return tok

    def arrow(self) -> Term:
        # -> is right associative, <- left associative; mixing needs parentheses
        parts = [self.disj()]
        arrow = None
        while self.peek() in ("->", "<-"):
            tok = self.take()
            if arrow is not None and tok != arrow:
                raise ParseError("mixing -> and <- needs parentheses")
            arrow = tok
            parts.append(self.disj())
        if arrow == "->":
            out = parts[-1]
            for p in reversed(parts[:-1]):
                out = p >> out
            return out
        out = parts[0]
        for p in parts[1:]:
            out = out << p
        return out

    def disj(self) -> Term:
        out = self.conj()
        while self.peek() == "|":
            self.take()
            out = out | self.conj()
        return out

    def conj(self) -> Term:
        out = self.unary()
        while self.peek() == "&":
            self.take()
            out = out & self.unary()
        return out

    def unary(self) -> Term:
        tok = self.peek()
        if tok == "~":
            self.take()
            return ~self.unary()
        if tok in ("G", "H", "P", "F"):
            self.take()
            return Term(tok, (self.unary(),))
        return self.atom()

    def atom(self) -> Term:
        tok = self.take()
        if tok == "(":
            t = self.arrow()
            self.take(")")
            return t
        if tok in CONSTS:
            return Term(tok)
        if re.fullmatch(r"[a-z_][a-z0-9_]*", tok):
            return var(tok)
        raise ParseError(f"unexpected token {tok!r}")


def parse_term(s: str) -> Term:
    p = _Parser(_tokenize(s))
    t = p.arrow()
    if p.peek() is not None:
        raise ParseError(f"trailing input starting at {p.peek()!r}")
    return t


def parse_equation(s: str) -> tuple[Term, Term]:
    """Parse ``lhs = rhs`` or ``lhs <= rhs``; inequalities become ``lhs & rhs = lhs``."""
    toks = _tokenize(s)
    for rel in ("<=", "="):
        if rel in toks:
            k = toks.index(rel)
            lhs = _Parser(toks[:k])
            rhs = _Parser(toks[k + 1 :])
            a, b = lhs.arrow(), rhs.arrow()
            if lhs.peek() is not None or rhs.peek() is not None:
                raise ParseError("malformed equation")
            return (a & b, a) if rel == "<=" else (a, b)
    raise ParseError("an equation needs '=' or '<='")


def leq(a: Term, b: Term) -> tuple[Term, Term]:
    """Inequality ``a <= b`` as the meet-absorption equation ``a & b = a``."""
    return (a & b, a)


# -- evaluation ----------------------------------------------------------------


def eval_term(t: Term, alg, env: Mapping[str, int]) -> int:
    """Value of ``t`` under ``env`` by structural recursion."""
    if t.op == "var":
        if t.label not in env:
            raise UnboundVariable(t.label)
        return int(env[t.label])
    if t.op in CONSTS:
        return int(alg.table(t.op))
    vals = [eval_term(a, alg, env) for a in t.args]
    tab = alg.table(t.op)
    if len(vals) == 1:
        return int(tab[vals[0]])
    return int(tab[vals[0], vals[1]])


def _eval_arrays(t: Term, alg, arrays: Mapping[str, np.ndarray]):
    if t.op == "var":
        return arrays[t.label]
    if t.op in CONSTS:
        return np.int64(alg.table(t.op))
    vals = [_eval_arrays(a, alg, arrays) for a in t.args]
    tab = alg.table(t.op)
    if len(vals) == 1:
        return tab[vals[0]]
    return tab[vals[0], vals[1]]


def _check_symbols(terms, alg) -> None:
    for t in terms:
        for s in t.symbols():
            if s != "var":
                alg.table(s)


# cap on the number of assignments evaluated in one numpy batch
BATCH = 1 << 21


def failing_mask(lhs: Term, rhs: Term, alg, variables: list[str] | None = None):
    """Yield ``(prefix, mask)`` chunks; ``mask`` marks assignments where lhs != rhs.

    Assignments are visited in lexicographic order with the first variable
    most significant; ``prefix`` fixes the leading variables that were
    looped over instead of broadcast.
    """
    if variables is None:
        variables = sorted(set(lhs.variables()) | set(rhs.variables()), key=_var_key)
    _check_symbols((lhs, rhs), alg)
    n = alg.n
    k = len(variables)
    lead = 0
    while lead < k and n ** (k - lead) > BATCH:
        lead += 1
    tail = variables[lead:]
    shape = (n,) * len(tail)
    for prefix in product(range(n), repeat=lead):
        arrays: dict[str, np.ndarray] = {v: np.int64(x) for v, x in zip(variables[:lead], prefix)}
        for i, v in enumerate(tail):
            sh = [1] * len(tail)
            sh[i] = n
            arrays[v] = np.arange(n).reshape(sh)
        a = np.broadcast_to(_eval_arrays(lhs, alg, arrays), shape)
        b = np.broadcast_to(_eval_arrays(rhs, alg, arrays), shape)
        yield prefix, a != b


@dataclass(frozen=True)
class EquationReport:
    id: str
    holds: bool
    witness: dict[str, int] | None = None
    lhs_value: int | None = None
    rhs_value: int | None = None

    def describe(self, names=None) -> str:
        if self.holds:
            return f"{self.id}: holds"
        nm = (lambda i: names[i]) if names is not None else str
        w = ", ".join(f"{v}:={nm(x)}" for v, x in self.witness.items())
        return f"{self.id}: fails at {w} (lhs={nm(self.lhs_value)}, rhs={nm(self.rhs_value)})"


def check_equation(lhs: Term, rhs: Term, alg, eq_id: str = "eq") -> EquationReport:
    """Exhaustive scan; the witness is the lexicographically least failing assignment."""
    variables = sorted(set(lhs.variables()) | set(rhs.variables()), key=_var_key)
    for prefix, bad in failing_mask(lhs, rhs, alg, variables):
        if bad.any():
            rest = np.unravel_index(int(np.flatnonzero(bad.ravel())[0]), bad.shape) if bad.ndim else ()
            values = list(prefix) + [int(x) for x in rest]
            env = dict(zip(variables, values))
            return EquationReport(eq_id, False, env, eval_term(lhs, alg, env), eval_term(rhs, alg, env))
    return EquationReport(eq_id, True)


def holds_at(lhs: Term, rhs: Term, alg, env: Mapping[str, int]) -> bool:
    return eval_term(lhs, alg, env) == eval_term(rhs, alg, env)


def batch_holds(lhs: Term, rhs: Term, balg) -> np.ndarray:
    """Validity of ``lhs = rhs`` in each algebra of a batch sharing one carrier.

    ``balg`` has ``n``, ``size`` and ``table(symbol) -> (array, batched)``;
    batched tables carry the algebra index as their leading axis.
    """
    variables = sorted(set(lhs.variables()) | set(rhs.variables()), key=_var_key)
    k, n = len(variables), balg.n
    per = max(1, BATCH // max(1, n**k))
    out = np.ones(balg.size, dtype=bool)
    for start in range(0, balg.size, per):
        stop = min(balg.size, start + per)
        bidx = np.arange(start, stop).reshape((-1,) + (1,) * k)
        arrays = {}
        for i, v in enumerate(variables):
            sh = [1] * (k + 1)
            sh[i + 1] = n
            arrays[v] = np.arange(n).reshape(sh)

        def ev(t: Term):
            if t.op == "var":
                return arrays[t.label]
            tab, batched = balg.table(t.op)
            if t.op in CONSTS:
                return np.int64(tab)
            vals = [ev(a) for a in t.args]
            if batched:
                return tab[(bidx, *vals)]
            return tab[tuple(vals)]

        shape = (stop - start,) + (n,) * k
        a = np.broadcast_to(ev(lhs), shape)
        b = np.broadcast_to(ev(rhs), shape)
        out[start:stop] = (a == b).reshape(stop - start, -1).all(axis=1)
    return out


# -- translation between L' and L_t ---------------------------------------------


def translate_term(t: Term, direction: str) -> Term:
    """Rewrite ``t`` between the arrow language and the tense language.

    ``"L'->Lt"``: ``x->y`` becomes ``G(~x | y)`` and ``x<-y`` becomes ``P(x & ~y)``.
    ``"Lt->L'"``: ``G(x)`` becomes ``1 -> x``, ``H(x)`` becomes ``~(~x <- 0)``,
    ``P(x)`` becomes ``x <- 0`` and ``F(x)`` becomes ``~(1 -> ~x)`` (double
    negations from the definitions ``P = ~H~``, ``F = ~G~`` are cancelled).
    """
    if direction == "L'->Lt":
        if "L'" not in t.languages():
            raise SignatureMismatch(f"{t} is not an L' term")
        return _to_tense(t)
    if direction == "Lt->L'":
        if "Lt" not in t.languages():
            raise SignatureMismatch(f"{t} is not an L_t term")
        return _to_arrow(t)
    raise ValueError(f"unknown direction {direction!r}")


def _to_tense(t: Term) -> Term:
    if not t.args:
        return t
    a = [_to_tense(x) for x in t.args]
    if t.op == "to":
        return G(~a[0] | a[1])
    if t.op == "from":
        return P(a[0] & ~a[1])
    return Term(t.op, tuple(a), t.label)


def _to_arrow(t: Term) -> Term:
    if not t.args:
        return t
    a = [_to_arrow(x) for x in t.args]
    if t.op == "G":
        return ONE >> a[0]
    if t.op == "H":
        return ~(~a[0] << ZERO)
    if t.op == "P":
        return a[0] << ZERO
    if t.op == "F":
        return ~(ONE >> ~a[0])
    return Term(t.op, tuple(a), t.label)
