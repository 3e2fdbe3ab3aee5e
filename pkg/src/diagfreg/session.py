"""The session text format read by the command-line tool.

A session is a sequence of ``;``-terminated statements::

    char 5;
    segre r=1 s=1;                 # or: vars a, b, c, d;  vars x0..x2, y0..y1;
    quotient { a*d - b*c };
    ideal P { a, b };
    map phi { e=1, g = x1*y1 };
    param n = 2;

``#`` starts a comment.  Integer coefficients are reduced mod p.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from diagfreg.cartier import CartierMap
from diagfreg.fields import is_prime
from diagfreg.groebner import IdealHandle
from diagfreg.polynomial import ParseError, PolyRing, Polynomial


class SessionError(ValueError):
    """A malformed session, located by 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}" if line else message)
        self.message = message
        self.line = line
        self.column = column


def _locate(text: str, offset: int) -> tuple:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


@dataclass
class SessionSpec:
    p: int
    var_names: tuple = ()
    segre: Optional[tuple] = None  # (r, s)
    quotient: tuple = ()
    ideals: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)  # name -> (e, g)
    params: dict = field(default_factory=dict)

    @property
    def ring(self) -> PolyRing:
        if self.segre is not None:
            return PolyRing.segre_ambient(self.p, *self.segre)
        return PolyRing(self.p, self.var_names)

    def ideal(self, name: Optional[str] = None) -> IdealHandle:
        if name is None:
            if not self.ideals:
                raise SessionError("no ideal declared")
            name = next(iter(self.ideals))
        if name not in self.ideals:
            raise SessionError(f"unknown ideal {name!r}")
        return IdealHandle(self.ring, list(self.ideals[name]))

    def cartier_map(self, name: Optional[str] = None) -> CartierMap:
        if name is None:
            if not self.maps:
                raise SessionError("no map declared")
            name = next(iter(self.maps))
        if name not in self.maps:
            raise SessionError(f"unknown map {name!r}")
        e, g = self.maps[name]
        return CartierMap(e, g)

    def param(self, key: str, default=None):
        return self.params.get(key, default)

    def int_param(self, key: str, default=None):
        v = self.params.get(key)
        if v is None:
            return default
        try:
            return int(v)
        except ValueError:
            raise SessionError(f"param {key} must be an integer, got {v!r}") from None

    def poly_param(self, key: str, default=None) -> Optional[Polynomial]:
        v = self.params.get(key)
        if v is None:
            return default
        try:
            return self.ring.parse(v)
        except ParseError as exc:
            raise SessionError(f"param {key}: {exc}") from None

    def serialize(self) -> str:
        lines = [f"char {self.p};"]
        if self.segre is not None:
            lines.append(f"segre r={self.segre[0]} s={self.segre[1]};")
        else:
            lines.append(f"vars {', '.join(self.var_names)};")
        if self.quotient:
            lines.append(f"quotient {{ {', '.join(map(str, self.quotient))} }};")
        for name, gens in self.ideals.items():
            lines.append(f"ideal {name} {{ {', '.join(map(str, gens))} }};")
        for name, (e, g) in self.maps.items():
            lines.append(f"map {name} {{ e={e}, g = {g} }};")
        for key, v in self.params.items():
            lines.append(f"param {key} = {v};")
        return "\n".join(lines) + "\n"


_NAME = r"[A-Za-z_][A-Za-z_0-9]*"
_RANGE = re.compile(rf"^([A-Za-z_]+)(\d+)\.\.([A-Za-z_]+)(\d+)$")


def _expand_vars(items: list) -> list:
    out = []
    for item in items:
        m = _RANGE.match(item)
        if m:
            if m.group(1) != m.group(3):
                raise ValueError(f"range {item!r} mixes prefixes")
            lo, hi = int(m.group(2)), int(m.group(4))
            if hi < lo:
                raise ValueError(f"empty range {item!r}")
            out.extend(f"{m.group(1)}{i}" for i in range(lo, hi + 1))
        elif re.fullmatch(_NAME, item):
            out.append(item)
        else:
            raise ValueError(f"bad variable name {item!r}")
    return out


def _statements(text: str):
    """Yield (statement text, absolute start offset), comments blanked."""
    clean = re.sub(r"#[^\n]*", lambda m: " " * len(m.group()), text)
    depth, start = 0, 0
    for i, ch in enumerate(clean):
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth < 0:
                raise SessionError("unbalanced '}'", *_locate(text, i))
        elif ch == ";" and depth == 0:
            yield clean[start:i], start
            start = i + 1
    if depth:
        raise SessionError("unclosed '{'", *_locate(text, len(text)))
    if clean[start:].strip():
        raise SessionError("missing ';' after final statement", *_locate(text, start + len(clean[start:]) - len(clean[start:].lstrip())))


def _block_items(body: str, base: int):
    """Split a brace body at commas, yielding (item, absolute offset)."""
    pos = 0
    for piece in body.split(","):
        lead = len(piece) - len(piece.lstrip())
        if piece.strip():
            yield piece.strip(), base + pos + lead
        pos += len(piece) + 1


def parse_session(text: str) -> SessionSpec:
    p = None
    var_names = None
    segre = None
    raw_quot, raw_ideals, raw_maps, params = [], {}, {}, {}
    for stmt, off in _statements(text):
        lead = len(stmt) - len(stmt.lstrip())
        body = stmt.strip()
        at = off + lead
        if not body:
            continue
        loc = _locate(text, at)
        head = body.split(None, 1)[0]
        if head == "char":
            m = re.fullmatch(r"char\s+(\d+)", body)
            if not m:
                raise SessionError("expected 'char <prime>'", *loc)
            p = int(m.group(1))
            if not is_prime(p) or p > 2**31:
                raise SessionError(f"characteristic {p} is not a prime <= 2^31", *loc)
        elif head == "vars":
            items = [s.strip() for s in body[4:].split(",") if s.strip()]
            try:
                var_names = _expand_vars(items)
            except ValueError as exc:
                raise SessionError(str(exc), *loc) from None
            if len(set(var_names)) != len(var_names):
                raise SessionError("duplicate variable names", *loc)
        elif head == "segre":
            m = re.fullmatch(r"segre\s+r\s*=\s*(\d+)\s+s\s*=\s*(\d+)", body)
            if not m:
                raise SessionError("expected 'segre r=<int> s=<int>'", *loc)
            segre = (int(m.group(1)), int(m.group(2)))
            if min(segre) < 1:
                raise SessionError("segre blocks need r, s >= 1", *loc)
        elif head in ("quotient", "ideal", "map"):
            m = re.fullmatch(rf"(quotient|ideal\s+({_NAME})|map\s+({_NAME}))\s*\{{(.*)\}}", body, re.S)
            if not m:
                raise SessionError(f"malformed {head} block", *loc)
            inner_off = at + body.index("{") + 1
            items = list(_block_items(m.group(4), inner_off))
            if head == "quotient":
                raw_quot.extend(items)
            elif head == "ideal":
                raw_ideals[m.group(2)] = items
            else:
                raw_maps[m.group(3)] = (items, loc)
        elif head == "param":
            m = re.fullmatch(rf"param\s+({_NAME})\s*=\s*(.+)", body, re.S)
            if not m:
                raise SessionError("expected 'param <name> = <value>'", *loc)
            params[m.group(1)] = " ".join(m.group(2).split())
        else:
            raise SessionError(f"unknown statement {head!r}", *loc)
    if p is None:
        raise SessionError("missing 'char' statement")
    if segre is not None:
        ring = PolyRing.segre_ambient(p, *segre)
        if var_names is not None and tuple(var_names) != ring.names:
            raise SessionError(f"vars must be {', '.join(ring.names)} for this segre declaration")
        var_names = ring.names
    elif var_names is None:
        raise SessionError("missing 'vars' or 'segre' statement")
    else:
        ring = PolyRing(p, tuple(var_names))

    def poly(src: str, offset: int) -> Polynomial:
        try:
            return ring.parse(src)
        except ParseError as exc:
            raise SessionError(exc.args[0] if exc.args else str(exc), *_locate(text, offset + exc.offset)) from None

    quotient = tuple(poly(s, o) for s, o in raw_quot)
    ideals = {name: tuple(poly(s, o) for s, o in items) for name, items in raw_ideals.items()}
    maps = {}
    for name, (items, loc) in raw_maps.items():
        e, g = None, None
        for item, o in items:
            key, _, val = item.partition("=")
            key = key.strip()
            if key == "e":
                try:
                    e = int(val)
                except ValueError:
                    raise SessionError("e must be an integer", *_locate(text, o)) from None
            elif key == "g":
                g = poly(val, o + item.index("=") + 1)
            else:
                raise SessionError(f"unknown map field {key!r}", *_locate(text, o))
        if e is None or e < 1:
            raise SessionError("e >= 1 required", *loc)
        if g is None or not g:
            raise SessionError("nonzero multiplier g required", *loc)
        maps[name] = (e, g)
    return SessionSpec(p, tuple(var_names), segre, quotient, ideals, maps, params)
