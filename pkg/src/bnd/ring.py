"""Exact arithmetic in truncated graded-commutative rings of cycle classes.

Elements are sparse polynomials over Q in a fixed set of graded symbols.
Two normalization rules make the ring model a Chow ring:

  * terms of total codimension above the ring truncation vanish,
  * the factor of a monomial built from pullback-flagged symbols vanishes
    when its codimension exceeds the pullback bound (classes pulled back
    from a base of that dimension are zero beyond it).

Coefficients are `fractions.Fraction` throughout; nothing here ever touches
floating point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

Exponents = tuple[int, ...]


@dataclass(frozen=True)
class SymbolSpec:
    """A graded ring generator.

    codim is the grading weight; pullback marks classes pulled back from the
    base of a projective bundle, which makes them subject to the ring's
    pullback bound.
    """

    name: str
    codim: int
    pullback: bool = False

    def __post_init__(self) -> None:
        if self.codim < 1:
            raise ValueError(f"symbol {self.name!r}: codim must be >= 1, got {self.codim}")
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", self.name):
            raise ValueError(f"symbol name {self.name!r} is not an identifier")


class RingContext:
    """Symbol table plus truncation/pullback rules; defines what zero means."""

    __slots__ = ("symbols", "truncation", "pullback_bound", "_index")

    def __init__(self, symbols: tuple[SymbolSpec, ...], truncation: int, pullback_bound: int | None):
        self.symbols = symbols
        self.truncation = truncation
        self.pullback_bound = pullback_bound
        self._index = {s.name: i for i, s in enumerate(symbols)}

    def __eq__(self, other: object) -> bool:
        # Structural equality: rings declared the same way are the same ring,
        # so classes computed in independently built contexts can be compared.
        if not isinstance(other, RingContext):
            return NotImplemented
        return (
            self.symbols == other.symbols
            and self.truncation == other.truncation
            and self.pullback_bound == other.pullback_bound
        )

    def __hash__(self) -> int:
        return hash((self.symbols, self.truncation, self.pullback_bound))

    def __repr__(self) -> str:
        syms = ", ".join(
            f"{s.name}:{s.codim}" + ("*" if s.pullback else "") for s in self.symbols
        )
        bound = "" if self.pullback_bound is None else f", pullback_bound={self.pullback_bound}"
        return f"RingContext({syms}; truncation={self.truncation}{bound})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"no symbol {name!r} in {self!r}") from None

    def codim_of(self, expts: Exponents) -> int:
        return sum(e * s.codim for e, s in zip(expts, self.symbols))

    def pullback_codim_of(self, expts: Exponents) -> int:
        return sum(e * s.codim for e, s in zip(expts, self.symbols) if s.pullback)

    def _dies(self, expts: Exponents) -> bool:
        if self.codim_of(expts) > self.truncation:
            return True
        if self.pullback_bound is not None and self.pullback_codim_of(expts) > self.pullback_bound:
            return True
        return False

    # -- constructors -------------------------------------------------------

    def zero(self) -> "ClassPoly":
        return ClassPoly(self, {})

    def one(self) -> "ClassPoly":
        return self.constant(1)

    def constant(self, c) -> "ClassPoly":
        c = Fraction(c)
        if c == 0:
            return self.zero()
        return ClassPoly(self, {(0,) * len(self.symbols): c})

    def sym(self, name: str) -> "ClassPoly":
        expts = [0] * len(self.symbols)
        expts[self.index(name)] = 1
        return self.poly({tuple(expts): Fraction(1)})

    def monomial(self, coeff, **powers: int) -> "ClassPoly":
        expts = [0] * len(self.symbols)
        for name, e in powers.items():
            expts[self.index(name)] = e
        return self.poly({tuple(expts): Fraction(coeff)})

    def poly(self, raw: Mapping[Exponents, Fraction]) -> "ClassPoly":
        terms = {}
        for expts, c in raw.items():
            if c == 0 or self._dies(expts):
                continue
            terms[expts] = c
        return ClassPoly(self, terms)


def declare_ring(
    symbols: Iterable[SymbolSpec], truncation: int, pullback_bound: int | None = None
) -> RingContext:
    symbols = tuple(symbols)
    if not symbols:
        raise ValueError("a ring needs at least one symbol")
    names = [s.name for s in symbols]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate symbol names in {names}")
    if truncation < 0:
        raise ValueError("truncation must be >= 0")
    return RingContext(symbols, truncation, pullback_bound)


class ClassPoly:
    """Immutable sparse polynomial of cycle classes over a RingContext.

    Example::

        ctx = declare_ring([SymbolSpec("h", 1)], truncation=2)
        h = ctx.sym("h")
        (1 + h) * (1 + h)        # 1 + 2*h + h^2
        graded_piece(_, 1)       # 2*h
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: RingContext, terms: dict[Exponents, Fraction]):
        # terms must already be normalized; use ctx.poly() to build from raw data
        self.ctx = ctx
        self.terms = terms

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.ctx.symbols), Fraction(0))

    def codims(self) -> set[int]:
        return {self.ctx.codim_of(e) for e in self.terms}

    def is_homogeneous(self, k: int | None = None) -> bool:
        cds = self.codims()
        if k is None:
            return len(cds) <= 1
        return cds <= {k}

    def degree_in(self, name: str) -> int:
        """Highest power of a symbol; -1 for the zero polynomial."""
        i = self.ctx.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def coefficient_of(self, name: str, power: int) -> "ClassPoly":
        """The (still polynomial) coefficient of name**power."""
        i = self.ctx.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i] == power:
                out[e[:i] + (0,) + e[i + 1 :]] = c
        return self.ctx.poly(out)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "ClassPoly | None":
        if isinstance(other, ClassPoly):
            if other.ctx != self.ctx:
                raise ValueError(f"context mismatch: {self.ctx!r} vs {other.ctx!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.constant(other)
        return None

    def __add__(self, other) -> "ClassPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return ClassPoly(self.ctx, out)

    __radd__ = __add__

    def __neg__(self) -> "ClassPoly":
        return ClassPoly(self.ctx, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "ClassPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "ClassPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "ClassPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        ctx = self.ctx
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if ctx._dies(e):
                    continue
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return ClassPoly(ctx, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ClassPoly":
        if k < 0:
            raise ValueError("negative powers are not ring elements; use invert_unit")
        result = self.ctx.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ctx.constant(other)
        if not isinstance(other, ClassPoly):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ctx, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"<ClassPoly {render(self)}>"

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        # canonical order: by total codim, then exponent vector (descending
        # lexicographically), so h^2 comes before h*p1 before p1^2 before p2
        ctx = self.ctx
        return sorted(
            self.terms.items(),
            key=lambda ec: (ctx.codim_of(ec[0]), tuple(-x for x in ec[0])),
        )


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def add(a: ClassPoly, b: ClassPoly) -> ClassPoly:
    return a + b


def mul(a: ClassPoly, b: ClassPoly) -> ClassPoly:
    return a * b


def invert_unit(a: ClassPoly) -> ClassPoly:
    """Inverse of a unit 1 + (higher codim), by the finite geometric series."""
    if a.constant_term() != 1:
        raise ValueError(f"not a unit with constant term 1: {render(a)}")
    delta = a - 1
    acc = a.ctx.one()
    power = a.ctx.one()
    for _ in range(a.ctx.truncation):
        power = power * (-delta)
        if power.is_zero():
            break
        acc = acc + power
    return acc


def graded_piece(a: ClassPoly, k: int) -> ClassPoly:
    """Sum of the terms of total codimension exactly k (0 outside the range)."""
    ctx = a.ctx
    return ClassPoly(ctx, {e: c for e, c in a.terms.items() if ctx.codim_of(e) == k})


def substitute(
    a: ClassPoly, images: Mapping[str, ClassPoly], target: RingContext
) -> ClassPoly:
    """Ring-homomorphism extension of a symbol map into the target context.

    Every symbol actually appearing in `a` needs an image, and each image must
    be homogeneous of the symbol's codimension (so the map is graded).
    """
    src = a.ctx
    used = [i for i in range(len(src.symbols)) if any(e[i] for e in a.terms)]
    for i in used:
        name = src.symbols[i].name
        if name not in images:
            raise ValueError(f"no image given for symbol {name!r}")
        img = images[name]
        if img.ctx != target:
            raise ValueError(f"image of {name!r} lives in the wrong context")
        if not img.is_homogeneous(src.symbols[i].codim):
            raise ValueError(
                f"image of {name!r} is not homogeneous of codim {src.symbols[i].codim}"
            )

    power_cache: dict[tuple[int, int], ClassPoly] = {}

    def img_power(i: int, k: int) -> ClassPoly:
        key = (i, k)
        if key not in power_cache:
            power_cache[key] = images[src.symbols[i].name] ** k
        return power_cache[key]

    acc = target.zero()
    for e, c in a.terms.items():
        term = target.constant(c)
        for i, k in enumerate(e):
            if k:
                term = term * img_power(i, k)
                if term.is_zero():
                    break
        acc = acc + term
    return acc


def divide_monic(
    a: ClassPoly, r: ClassPoly, pivot: str
) -> tuple[ClassPoly, ClassPoly]:
    """Univariate division a = q*r + rem by a divisor monic in the pivot symbol.

    The divisor's leading coefficient in the pivot must be the constant 1 and
    its pivot degree positive; the remainder has smaller pivot degree.  All
    arithmetic happens inside the context, so the reconstruction identity
    holds as ring elements.
    """
    if a.ctx != r.ctx:
        raise ValueError("context mismatch in divide_monic")
    ctx = a.ctx
    d_r = r.degree_in(pivot)
    if d_r < 1:
        raise ValueError("divisor must have positive degree in the pivot")
    if r.coefficient_of(pivot, d_r) != 1:
        raise ValueError(f"divisor is not monic in {pivot!r}: {render(r)}")
    xi = ctx.sym(pivot)
    quotient = ctx.zero()
    rem = a
    while True:
        d = rem.degree_in(pivot)
        if d < d_r:
            return quotient, rem
        t = rem.coefficient_of(pivot, d) * xi ** (d - d_r)
        quotient = quotient + t
        rem = rem - t * r


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------


def _render_monomial(ctx: RingContext, expts: Exponents) -> str:
    parts = []
    for e, s in zip(expts, ctx.symbols):
        if e == 1:
            parts.append(s.name)
        elif e > 1:
            parts.append(f"{s.name}^{e}")
    return "*".join(parts)


def render(a: ClassPoly) -> str:
    """Canonical text form, e.g. ``2*h + 5*p1``."""
    if a.is_zero():
        return "0"
    chunks = []
    for expts, coeff in a.sorted_terms():
        mono = _render_monomial(a.ctx, expts)
        mag = abs(coeff)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not chunks:
            chunks.append(body if coeff > 0 else f"-{body}")
        else:
            chunks.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(chunks)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[*^+/-]))")


def parse(ctx: RingContext, text: str) -> ClassPoly:
    """Parse the grammar produced by render(): signed terms of coefficient
    and symbol-power factors joined by ``*``.
    """
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(f"unexpected character {text[pos]!r} at column {pos + 1}")
            break
        pos = m.end()
        for kind in ("num", "name", "op"):
            if m.group(kind) is not None:
                tokens.append((kind, m.group(kind), m.start()))
                break

    i = 0

    def peek() -> tuple[str, str, int] | None:
        return tokens[i] if i < len(tokens) else None

    def take() -> tuple[str, str, int]:
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def parse_factor() -> ClassPoly:
        nonlocal i
        tok = peek()
        if tok is None:
            raise ValueError("unexpected end of input")
        kind, val, at = take()
        if kind == "num":
            num = int(val)
            nxt = peek()
            if nxt and nxt[1] == "/":
                take()
                dk, dv, dat = take() if peek() else ("", "", at)
                if dk != "num":
                    raise ValueError(f"expected integer denominator at column {dat + 1}")
                return ctx.constant(Fraction(num, int(dv)))
            return ctx.constant(num)
        if kind == "name":
            try:
                base = ctx.sym(val)
            except KeyError:
                raise ValueError(f"unknown symbol {val!r} at column {at + 1}") from None
            nxt = peek()
            if nxt and nxt[1] == "^":
                take()
                ek, ev, eat = take() if peek() else ("", "", at)
                if ek != "num":
                    raise ValueError(f"expected integer exponent at column {eat + 1}")
                return base ** int(ev)
            return base
        raise ValueError(f"unexpected {val!r} at column {at + 1}")

    def parse_term() -> ClassPoly:
        acc = parse_factor()
        while True:
            nxt = peek()
            if nxt and nxt[1] == "*":
                take()
                acc = acc * parse_factor()
            else:
                return acc

    result = ctx.zero()
    first = True
    while peek() is not None:
        sign = 1
        tok = peek()
        if tok[1] in "+-":
            take()
            sign = -1 if tok[1] == "-" else 1
        elif not first:
            raise ValueError(f"expected + or - at column {tok[2] + 1}")
        result = result + sign * parse_term()
        first = False
    return result
