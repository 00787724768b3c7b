"""Formulas: AST, parser, printer, and generators.

Core connectives are negation, conjunction and the four unary temporal/modal
operators G (at all later points along the class's histories), H (mirror for
the past), L (at all classes of the current moment) and F (on every history
of the class there is a later point).  Everything else is surface syntax that
desugars during parsing:

    P x  ->  ~H ~x        f x  ->  ~G ~x        M x  ->  ~L ~x
    g x  ->  ~F ~x        x | y  ->  ~(~x & ~y)   x -> y  ->  ~(x & ~y)

``F`` and its dual ``g`` belong only to the extended language (mode "LF");
mode "L" rejects them.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, fields
from functools import lru_cache

from .errors import LanguageError, ParseError

MODES = ("L", "LF")


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


class Formula:
    def __str__(self) -> str:
        return format_formula(self)

    def __post_init__(self):
        # Hash once at construction; memoized evaluation keys dicts on
        # formulas, and the recursive dataclass hash is linear per lookup.
        vals = tuple(self.__dict__[f.name] for f in fields(self))
        object.__setattr__(self, "_hc", hash((type(self).__name__,) + vals))


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class G(Formula):
    sub: Formula


@dataclass(frozen=True)
class H(Formula):
    sub: Formula


@dataclass(frozen=True)
class L(Formula):
    sub: Formula


@dataclass(frozen=True)
class F(Formula):
    sub: Formula


def _cached_hash(self) -> int:
    return self._hc


for _cls in (Atom, Not, And, G, H, L, F):
    _cls.__hash__ = _cached_hash


def atoms_of(formula: Formula) -> frozenset[str]:
    out: set[str] = set()
    stack = [formula]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            out.add(node.name)
        elif isinstance(node, And):
            stack.append(node.left)
            stack.append(node.right)
        else:
            stack.append(node.sub)
    return frozenset(out)


def contains_f(formula: Formula) -> bool:
    stack = [formula]
    while stack:
        node = stack.pop()
        if isinstance(node, F):
            return True
        if isinstance(node, And):
            stack.append(node.left)
            stack.append(node.right)
        elif not isinstance(node, Atom):
            stack.append(node.sub)
    return False


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_ATOM_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")
_RESERVED = {"f", "g"}
_UPPER_OPS = {"G", "H", "L", "F", "P", "M"}
_LF_ONLY = {"F", "g"}


@dataclass(frozen=True)
class _Token:
    kind: str  # "op", "atom", "(", ")", "&", "|", "->", "end"
    text: str
    pos: int


def _tokenize(text: str, mode: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "()&|~":
            kind = "op" if c == "~" else c
            tokens.append(_Token(kind, c, i))
            i += 1
        elif c == "-":
            if text[i:i + 2] != "->":
                raise ParseError("expected '->'", i)
            tokens.append(_Token("->", "->", i))
            i += 2
        elif c in _UPPER_OPS:
            if c in _LF_ONLY and mode == "L":
                raise LanguageError(f"'{c}' is not in language L", i)
            tokens.append(_Token("op", c, i))
            i += 1
        else:
            m = _ATOM_RE.match(text, i)
            if not m:
                raise ParseError(f"unexpected character {c!r}", i)
            word = m.group()
            if word in _RESERVED:
                if word in _LF_ONLY and mode == "L":
                    raise LanguageError(f"'{word}' is not in language L", i)
                tokens.append(_Token("op", word, i))
            else:
                tokens.append(_Token("atom", word, i))
            i = m.end()
    tokens.append(_Token("end", "", n))
    return tokens


def _or(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def _implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


_UNARY_BUILD = {
    "~": Not,
    "G": G,
    "H": H,
    "L": L,
    "F": F,
    "P": lambda x: Not(H(Not(x))),
    "f": lambda x: Not(G(Not(x))),
    "M": lambda x: Not(L(Not(x))),
    "g": lambda x: Not(F(Not(x))),
}


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse_formula(self) -> Formula:
        left = self.parse_disjunct()
        if self.peek().kind == "->":
            self.take()
            right = self.parse_formula()  # right-associative
            return _implies(left, right)
        return left

    def parse_disjunct(self) -> Formula:
        out = self.parse_conjunct()
        while self.peek().kind == "|":
            self.take()
            out = _or(out, self.parse_conjunct())
        return out

    def parse_conjunct(self) -> Formula:
        out = self.parse_unary()
        while self.peek().kind == "&":
            self.take()
            out = And(out, self.parse_unary())
        return out

    def parse_unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "op":
            self.take()
            return _UNARY_BUILD[tok.text](self.parse_unary())
        if tok.kind == "atom":
            self.take()
            return Atom(tok.text)
        if tok.kind == "(":
            self.take()
            inner = self.parse_formula()
            closing = self.peek()
            if closing.kind != ")":
                raise ParseError("expected ')'", closing.pos)
            self.take()
            return inner
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.pos)


def parse(text: str, mode: str = "LF") -> Formula:
    """Parse surface syntax into a desugared formula.

    Atoms match [a-z][a-zA-Z0-9_]* except the reserved operator words f, g.
    Unary operators bind tightest, then &, then |, then right-associative ->.
    """
    check_mode(mode)
    parser = _Parser(_tokenize(text, mode))
    out = parser.parse_formula()
    trailing = parser.peek()
    if trailing.kind != "end":
        raise ParseError(f"unexpected {trailing.text!r}", trailing.pos)
    return out


def read_formulas(text: str, mode: str = "LF") -> list[Formula]:
    """Parse a formula corpus: one formula per line, '#' starts a comment."""
    out = []
    for line in text.splitlines():
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            out.append(parse(stripped, mode))
    return out


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def format_formula(formula: Formula) -> str:
    """Render a desugared formula; binary output is fully parenthesized."""
    if isinstance(formula, Atom):
        return formula.name
    if isinstance(formula, Not):
        return "~" + format_formula(formula.sub)
    if isinstance(formula, And):
        return f"({format_formula(formula.left)} & {format_formula(formula.right)})"
    for cls, letter in ((G, "G"), (H, "H"), (L, "L"), (F, "F")):
        if isinstance(formula, cls):
            return f"{letter} {format_formula(formula.sub)}"
    raise TypeError(f"not a formula: {formula!r}")


# ---------------------------------------------------------------------------
# generation
# ---------------------------------------------------------------------------

def random_formula(seed: int, max_depth: int, atoms, mode: str = "LF") -> Formula:
    """A seed-deterministic random formula of depth at most max_depth."""
    check_mode(mode)
    atoms = list(atoms)
    if not atoms:
        raise ValueError("atoms must be nonempty")
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    rng = random.Random(seed)
    unary = [Not, G, H, L] + ([F] if mode == "LF" else [])

    def build(budget: int) -> Formula:
        if budget == 0 or rng.random() < 0.25:
            return Atom(rng.choice(atoms))
        if rng.random() < 0.35:
            return And(build(budget - 1), build(budget - 1))
        return rng.choice(unary)(build(budget - 1))

    return build(max_depth)


def enumerate_formulas(atoms, max_depth: int, mode: str = "LF") -> tuple[Formula, ...]:
    """Every formula over the given atoms up to the given depth.

    Ordered by depth, then operator, then operand order; subformulas are
    shared objects, so the result is a DAG suitable for memoized evaluation.
    """
    return _enumerate_cached(tuple(atoms), max_depth, check_mode(mode))


@lru_cache(maxsize=32)
def _enumerate_cached(atoms: tuple[str, ...], max_depth: int, mode: str):
    unary = [Not, G, H, L] + ([F] if mode == "LF" else [])
    by_depth: list[list[Formula]] = [[Atom(a) for a in atoms]]
    for d in range(1, max_depth + 1):
        last = by_depth[d - 1]
        shallower = [phi for level in by_depth[:d - 1] for phi in level]
        level: list[Formula] = []
        for op in unary:
            level.extend(op(phi) for phi in last)
        for a in last:
            for b in last:
                level.append(And(a, b))
        for a in last:
            for b in shallower:
                level.append(And(a, b))
                level.append(And(b, a))
        by_depth.append(level)
    return tuple(phi for level in by_depth for phi in level)
