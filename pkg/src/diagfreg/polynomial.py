"""Sparse multivariate polynomials over a prime field.

A polynomial is a dict mapping exponent tuples to nonzero coefficients in
``[0, p)``.  Exponent tuples are indexed by the variables of the owning
:class:`PolyRing`.  Every variable carries a :class:`VarId` so Segre and
tensor-power computations can read off per-block and per-factor degrees
without index arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from operator import add
from typing import Iterable, Iterator, Mapping

from diagfreg.fields import check_characteristic, inv_mod

Exp = tuple  # tuple[int, ...]


@dataclass(frozen=True, order=True)
class VarId:
    """Position of a variable: block ``X``/``Y`` (``V`` for plain named
    variables), index within the block, and tensor factor (1-based)."""

    block: str
    index: int
    factor: int = 1


class ParseError(ValueError):
    def __init__(self, message: str, offset: int = 0):
        super().__init__(message)
        self.offset = offset


@dataclass(frozen=True)
class PolyRing:
    """The polynomial ring F_p[names].  Value semantics: two rings with the
    same characteristic and variables are the same ring."""

    p: int
    names: tuple
    varids: tuple = field(default=None, compare=True)

    def __post_init__(self):
        check_characteristic(self.p)
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        if self.varids is None:
            object.__setattr__(
                self, "varids", tuple(VarId("V", i) for i in range(len(names)))
            )
        elif len(self.varids) != len(names):
            raise ValueError("one VarId per variable required")
        else:
            object.__setattr__(self, "varids", tuple(self.varids))

    # -- constructors ----------------------------------------------------

    @classmethod
    def segre_ambient(cls, p: int, r: int, s: int) -> "PolyRing":
        """F_p[x0..xr, y0..ys], the ambient ring of the Segre product."""
        names = [f"x{i}" for i in range(r + 1)] + [f"y{j}" for j in range(s + 1)]
        ids = [VarId("X", i) for i in range(r + 1)] + [VarId("Y", j) for j in range(s + 1)]
        return cls(p, tuple(names), tuple(ids))

    def tensor_power(self, n: int) -> "PolyRing":
        """The n-fold tensor product over F_p; copy k of variable ``v`` is
        named ``v_k`` and gets ``factor=k``.  Variables are factor-major."""
        if n < 1:
            raise ValueError("tensor power needs n >= 1")
        if any(v.factor != 1 for v in self.varids):
            raise ValueError("ring is already a tensor power")
        names, ids = [], []
        for k in range(1, n + 1):
            for name, v in zip(self.names, self.varids):
                names.append(f"{name}_{k}")
                ids.append(VarId(v.block, v.index, k))
        return PolyRing(self.p, tuple(names), tuple(ids))

    def extend(self, new_names: Iterable[str], front: bool = True) -> "PolyRing":
        new_names = tuple(new_names)
        extra = tuple(VarId("V", -1 - i) for i in range(len(new_names)))
        if front:
            return PolyRing(self.p, new_names + self.names, extra + self.varids)
        return PolyRing(self.p, self.names + new_names, self.varids + extra)

    # -- basic facts -----------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def n_factors(self) -> int:
        return max((v.factor for v in self.varids), default=1)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: int) -> "Polynomial":
        c %= self.p
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def monomial(self, exp: Iterable[int], coeff: int = 1) -> "Polynomial":
        exp = tuple(exp)
        if len(exp) != self.nvars or min(exp, default=0) < 0:
            raise ValueError(f"bad exponent vector {exp}")
        coeff %= self.p
        return Polynomial(self, {exp: coeff} if coeff else {})

    def var(self, name: str) -> "Polynomial":
        i = self.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list:
        return [self.var(n) for n in self.names]

    def from_dict(self, terms: Mapping[Exp, int]) -> "Polynomial":
        p = self.p
        out = {}
        for e, c in terms.items():
            e = tuple(e)
            if len(e) != self.nvars:
                raise ValueError(f"exponent {e} has wrong length for {self.names}")
            c %= p
            if c:
                out[e] = (out.get(e, 0) + c) % p
                if not out[e]:
                    del out[e]
        return Polynomial(self, out)

    def exponents_box(self, bound: int) -> Iterator[Exp]:
        """All exponent vectors with every entry in [0, bound]."""
        return product(range(bound + 1), repeat=self.nvars)

    # -- parsing ---------------------------------------------------------

    _TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")

    def parse(self, text: str) -> "Polynomial":
        """Parse ASCII polynomial text such as ``3*x0^2*y1 - x1*y0 + 1``.
        Integer coefficients are reduced mod p."""
        tokens = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = self._TOKEN.match(stripped, pos)
            if not m or m.end() == pos:
                bad = len(stripped) - len(stripped[pos:].lstrip())
                raise ParseError(f"unexpected character {stripped[bad]!r}", bad)
            start = m.start(m.lastindex)
            kind = ("int", "name", "op")[m.lastindex - 1]
            tokens.append((kind, m.group(m.lastindex), start))
            pos = m.end()
        tokens.append(("end", "", len(stripped)))
        parser = _Parser(self, tokens)
        result = parser.expr()
        kind, val, at = parser.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {val!r}", at)
        return result


class _Parser:
    def __init__(self, ring: PolyRing, tokens):
        self.ring = ring
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expr(self) -> "Polynomial":
        kind, val, _ = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term() * sign
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in ("+", "-"):
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> "Polynomial":
        acc = self.power()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.power()
            else:
                return acc

    def power(self) -> "Polynomial":
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val in ("^", "**"):
            self.take()
            kind, val, at = self.take()
            if kind != "int":
                raise ParseError("exponent must be a nonnegative integer", at)
            return base ** int(val)
        return base

    def atom(self) -> "Polynomial":
        kind, val, at = self.take()
        if kind == "int":
            return self.ring.const(int(val))
        if kind == "name":
            try:
                return self.ring.var(val)
            except KeyError:
                raise ParseError(f"unknown variable {val!r}", at) from None
        if kind == "op" and val == "(":
            inner = self.expr()
            kind, val, at = self.take()
            if val != ")":
                raise ParseError("expected ')'", at)
            return inner
        if kind == "op" and val == "-":
            return -self.atom()
        raise ParseError(f"unexpected token {val!r}" if val else "unexpected end of input", at)


def _grevlex_key(e: Exp):
    return (sum(e), tuple(-x for x in reversed(e)))


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to
    coefficients in ``[0, p)`` with zero coefficients never stored."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials live in different rings")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = (out.get(e, 0) + c) % p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {e: p - c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            c = other % self.ring.p
            if not c:
                return self.ring.zero()
            p = self.ring.p
            return Polynomial(self.ring, {e: v * c % p for e, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out: dict = {}
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(add, e1, e2))
                out[e] = (get(e, 0) + c1 * c2) % p
        return Polynomial(self.ring, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, m: int):
        if m < 0:
            raise ValueError("negative powers are not polynomials")
        if len(self.terms) == 1:
            (e, c), = self.terms.items()
            return self.ring.monomial([x * m for x in e], pow(c, m, self.ring.p))
        result = self.ring.one()
        base = self
        while m:
            if m & 1:
                result = result * base
            m >>= 1
            if m:
                base = base * base
        return result

    # -- comparison ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def exponents(self) -> list:
        return list(self.terms)

    def map_exponents(self, ring: PolyRing, fn) -> "Polynomial":
        """Image under the monomial map ``x^e -> x^fn(e)`` into ``ring``."""
        p = ring.p
        out: dict = {}
        for e, c in self.terms.items():
            f = fn(e)
            out[f] = (out.get(f, 0) + c) % p
        return Polynomial(ring, {e: c for e, c in out.items() if c})

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        lead = max(self.terms, key=_grevlex_key)
        return self * inv_mod(self.terms[lead], self.ring.p)

    def sorted_terms(self) -> list:
        """Terms in canonical order: grevlex descending, ties impossible."""
        return sorted(self.terms.items(), key=lambda t: _grevlex_key(t[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = _format_monomial(self.ring.names, e)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Polynomial({self}, p={self.ring.p})"


def _format_monomial(names, e) -> str:
    out = []
    for name, k in zip(names, e):
        if k == 1:
            out.append(name)
        elif k > 1:
            out.append(f"{name}^{k}")
    return "*".join(out)


def frobenius_power(f: Polynomial, e: int) -> Polynomial:
    """f^(p^e).  Prime field coefficients are Frobenius-fixed, so this only
    scales exponents."""
    if e < 0:
        raise ValueError("e must be nonnegative")
    q = f.ring.p**e
    return Polynomial(f.ring, {tuple(x * q for x in k): c for k, c in f.terms.items()})


def block_degrees(ring: PolyRing, exp: Exp) -> dict:
    """Map (block, factor) -> total exponent in that block of that factor."""
    out: dict = {}
    for v, k in zip(ring.varids, exp):
        key = (v.block, v.factor)
        out[key] = out.get(key, 0) + k
    return out


def format_tensor(f: Polynomial) -> str:
    """Render a polynomial of a tensor-power ring factor by factor, e.g.
    ``y0 ⊗ x1*y1``.  Base names are the variable names with the ``_k``
    suffix removed."""
    ring = f.ring
    n = ring.n_factors
    if not f.terms:
        return "0"
    base = [name.rsplit("_", 1)[0] for name in ring.names]
    parts = []
    for e, c in f.sorted_terms():
        chunks = []
        for k in range(1, n + 1):
            idx = [i for i, v in enumerate(ring.varids) if v.factor == k]
            mono = _format_monomial([base[i] for i in idx], [e[i] for i in idx])
            chunks.append(mono or "1")
        body = " ⊗ ".join(chunks)
        parts.append(body if c == 1 else f"{c}*({body})")
    return " + ".join(parts)
