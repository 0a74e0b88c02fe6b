"""Bottleneck polynomial systems for an explicitly given variety.

Given defining equations f_1..f_k of X in C^n, a bottleneck pair (x, y) is
an off-diagonal solution of either of two systems:

  * minor formulation: f_i(x) = f_i(y) = 0 plus all (n-m+1)x(n-m+1)
    minors of the augmented Jacobians J(x,y) and J(y,x), where J(x,y)
    stacks the row y-x on top of the gradients at x — the rank condition
    saying the segment is normal to X at both ends;
  * Lagrange formulation: a square system with multipliers,
    x - y = sum_i lam_i grad f_i(x),  x - y = sum_i mu_i grad f_i(y).

Everything is exact: coefficients are Fractions, decimal literals in input
files convert by digit shift, and minors are expanded determinants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Sequence

# ===========================================================================
# exact multivariate polynomials
# ===========================================================================


class Poly:
    """Sparse polynomial over Q in positional variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[tuple[int, ...], Fraction]):
        self.nvars = nvars
        self.terms = {e: c for e, c in terms.items() if c != 0}

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable-count mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.nvars, other)
        return None

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        names = [f"v{i}" for i in range(self.nvars)]
        return f"<Poly {render_poly(self, names)}>"

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """-1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def diff(self, i: int) -> "Poly":
        out: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = e[:i] + (e[i] - 1,) + e[i + 1 :]
                out[e2] = out.get(e2, Fraction(0)) + c * e[i]
        return Poly(self.nvars, out)

    def embed(self, total: int, offset: int) -> "Poly":
        """Same polynomial with variable i renamed to offset+i in a larger
        variable list."""
        if offset + self.nvars > total:
            raise ValueError("embedding does not fit")
        out = {}
        for e, c in self.terms.items():
            out[(0,) * offset + e + (0,) * (total - offset - self.nvars)] = c
        return Poly(total, out)

    def eval_exact(self, point: Sequence) -> Fraction:
        vals = [Fraction(v) for v in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, k in zip(vals, e):
                if k:
                    term *= v ** k
            total += term
        return total


def det(rows: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant by Laplace expansion along the first row; the matrices
    here are small (at most a handful of rows)."""
    size = len(rows)
    if any(len(r) != size for r in rows):
        raise ValueError("matrix is not square")
    if size == 1:
        return rows[0][0]
    nvars = rows[0][0].nvars
    acc = Poly(nvars, {})
    for j in range(size):
        minor = [[r[jj] for jj in range(size) if jj != j] for r in rows[1:]]
        acc = acc + (-1) ** j * rows[0][j] * det(minor)
    return acc


# ===========================================================================
# systems
# ===========================================================================


@dataclass(frozen=True)
class SystemMeta:
    n: int
    k: int
    m: int
    formulation: str


@dataclass(frozen=True)
class PolySystem:
    variables: tuple[str, ...]
    polynomials: tuple[Poly, ...]
    metadata: SystemMeta | None = None

    def __post_init__(self) -> None:
        nv = len(self.variables)
        for p in self.polynomials:
            if p.nvars != nv:
                raise ValueError("polynomial does not live in the declared variables")


def _xy_names(n: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, n + 1)) + tuple(
        f"y{i}" for i in range(1, n + 1)
    )


def _check_input(fs: Sequence[Poly], m: int) -> tuple[int, int]:
    fs = list(fs)
    if not fs:
        raise ValueError("need at least one defining polynomial")
    n = fs[0].nvars
    if any(f.nvars != n for f in fs):
        raise ValueError("defining polynomials disagree on variable count")
    k = len(fs)
    if m >= n:
        raise ValueError(f"need m < n, got m={m}, n={n}")
    if k < n - m:
        raise ValueError(f"need at least n-m={n - m} equations to cut X, got {k}")
    return n, k


def build_minor_system(fs: Sequence[Poly], m: int) -> PolySystem:
    """Minor formulation in the 2n variables x1..xn, y1..yn.

    Equation order: f_i(x), f_i(y), then the minors of J(x,y), then the
    minors of J(y,x); minors are enumerated with row and column index sets
    in lexicographic order and fully expanded.
    """
    n, k = _check_input(fs, m)
    total = 2 * n
    fx = [f.embed(total, 0) for f in fs]
    fy = [f.embed(total, n) for f in fs]
    x = [Poly.var(total, i) for i in range(n)]
    y = [Poly.var(total, n + i) for i in range(n)]

    # gradient rows: partials of each embedded f in the point's own coordinates
    grad_x = [[p.diff(j) for j in range(n)] for p in fx]
    grad_y = [[p.diff(n + j) for j in range(n)] for p in fy]

    def minors(rows: list[list[Poly]]) -> list[Poly]:
        size = n - m + 1
        out = []
        for ri in combinations(range(len(rows)), size):
            for ci in combinations(range(n), size):
                out.append(det([[rows[r][c] for c in ci] for r in ri]))
        return out

    j_xy = [[y[j] - x[j] for j in range(n)]] + grad_x
    j_yx = [[x[j] - y[j] for j in range(n)]] + grad_y

    polys = fx + fy + minors(j_xy) + minors(j_yx)
    return PolySystem(_xy_names(n), tuple(polys), SystemMeta(n, k, m, "minors"))


def build_lagrange_system(
    fs: Sequence[Poly],
    start_system: Sequence[Poly] | None = None,
    gamma: Fraction | int | None = None,
) -> PolySystem:
    """Square multiplier formulation: 2(n+k) equations in
    x1..xn, y1..yn, lam1..lamk, mu1..muk.

    Equation order: f_i(x), f_i(y), then componentwise
    x - y - sum_i lam_i grad f_i(x), then the same with mu at y.

    With a start system g (same length, matching degrees) and a blend
    constant gamma, the equations use h_i = (1-t) f_i + gamma t g_i with a
    trailing parameter variable t: t=1 is the start system, t=0 the target.
    The blend is for export to external path trackers; nothing here tracks
    paths.
    """
    if not fs:
        raise ValueError("need at least one defining polynomial")
    n, k = _check_input(fs, fs[0].nvars - len(fs))
    blend = start_system is not None
    if blend:
        gs = list(start_system)
        if len(gs) != k:
            raise ValueError(f"start system has {len(gs)} equations, expected {k}")
        for i, (f, g) in enumerate(zip(fs, gs)):
            if f.total_degree() != g.total_degree():
                raise ValueError(
                    f"start-system degree mismatch at equation {i + 1}: "
                    f"{g.total_degree()} vs {f.total_degree()}"
                )
        if gamma is None:
            gamma = Fraction(1)

    total = 2 * n + 2 * k + (1 if blend else 0)
    names = _xy_names(n)
    names += tuple(f"lam{i}" for i in range(1, k + 1))
    names += tuple(f"mu{i}" for i in range(1, k + 1))
    if blend:
        names += ("t",)

    def lift(f: Poly, g: Poly | None, offset: int) -> Poly:
        fe = f.embed(total, offset)
        if not blend:
            return fe
        t = Poly.var(total, total - 1)
        return (1 - t) * fe + Fraction(gamma) * t * g.embed(total, offset)

    hx = [lift(f, gs[i] if blend else None, 0) for i, f in enumerate(fs)]
    hy = [lift(f, gs[i] if blend else None, n) for i, f in enumerate(fs)]
    x = [Poly.var(total, i) for i in range(n)]
    y = [Poly.var(total, n + i) for i in range(n)]
    lam = [Poly.var(total, 2 * n + i) for i in range(k)]
    mu = [Poly.var(total, 2 * n + k + i) for i in range(k)]

    lam_block = [
        x[j] - y[j] - sum((lam[i] * hx[i].diff(j) for i in range(k)), Poly(total, {}))
        for j in range(n)
    ]
    mu_block = [
        x[j] - y[j] - sum((mu[i] * hy[i].diff(n + j) for i in range(k)), Poly(total, {}))
        for j in range(n)
    ]
    polys = hx + hy + lam_block + mu_block
    return PolySystem(
        names, tuple(polys), SystemMeta(n, k, n - k, "homotopy" if blend else "lagrange")
    )


# ===========================================================================
# text form
# ===========================================================================


def render_poly(p: Poly, names: Sequence[str]) -> str:
    if p.is_zero():
        return "0"
    items = sorted(
        p.terms.items(), key=lambda ec: (-sum(ec[0]), tuple(-x for x in ec[0]))
    )
    chunks = []
    for e, c in items:
        factors = []
        for name, k in zip(names, e):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        mono = "*".join(factors)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not chunks:
            chunks.append(body if c > 0 else f"-{body}")
        else:
            chunks.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(chunks)


class SystemParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


_NUM = re.compile(r"\d+\.\d+|\d+|\.\d+")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


class _PolyParser:
    """Recursive descent over + - * / ^ with parentheses.

    Accepts a superset of what render_poly produces: parentheses and
    products of parenthesized groups, so hand-written input files can say
    (0.3*x1^2 + ...)^2 without pre-expansion.  '/' only by a constant.
    """

    def __init__(self, text: str, names: Sequence[str], line: int):
        self.text = text
        self.names = {name: i for i, name in enumerate(names)}
        self.nvars = len(names)
        self.line = line
        self.pos = 0

    def error(self, message: str):
        raise SystemParseError(message, self.line, self.pos + 1)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Poly:
        p = self.expr()
        if self.peek():
            self.error(f"unexpected {self.text[self.pos]!r}")
        return p

    def expr(self) -> Poly:
        sign = 1
        ch = self.peek()
        if ch == "+" or ch == "-":
            sign = -1 if ch == "-" else 1
            self.pos += 1
        acc = sign * self.term()
        while True:
            ch = self.peek()
            if ch != "+" and ch != "-":
                return acc
            self.pos += 1
            rhs = self.term()
            acc = acc + rhs if ch == "+" else acc - rhs

    def term(self) -> Poly:
        acc = self.power()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                acc = acc * self.power()
            elif ch == "/":
                self.pos += 1
                divisor = self.power()
                if divisor.total_degree() > 0:
                    self.error("can only divide by a constant")
                value = divisor.eval_exact([0] * self.nvars)
                if value == 0:
                    self.error("division by zero")
                acc = acc * Poly.const(self.nvars, 1 / value)
            else:
                return acc

    def power(self) -> Poly:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            self.skip_ws()
            m = _NUM.match(self.text, self.pos)
            if not m or "." in m.group():
                self.error("expected integer exponent")
            self.pos = m.end()
            return base ** int(m.group())
        return base

    def atom(self) -> Poly:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            p = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return p
        if ch == "-":
            self.pos += 1
            return -self.atom()
        m = _NUM.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            tok = m.group()
            if tok.startswith("."):
                tok = "0" + tok
            return Poly.const(self.nvars, Fraction(tok))
        m = _IDENT.match(self.text, self.pos)
        if m:
            name = m.group()
            if name not in self.names:
                self.error(f"undeclared variable {name!r}")
            self.pos = m.end()
            return Poly.var(self.nvars, self.names[name])
        self.error("expected a number, variable, or '('")


def parse_poly(text: str, names: Sequence[str], line: int = 1) -> Poly:
    return _PolyParser(text, names, line).parse()


def format_system(system: PolySystem) -> str:
    lines = ["vars: " + " ".join(system.variables)]
    if system.metadata is not None:
        md = system.metadata
        lines += [f"# n: {md.n}", f"# k: {md.k}", f"# m: {md.m}", f"# formulation: {md.formulation}"]
    for p in system.polynomials:
        lines.append(render_poly(p, system.variables))
    return "\n".join(lines) + "\n"


_META_LINE = re.compile(r"#\s*(n|k|m|formulation)\s*:\s*(\S+)\s*$")


def parse_system_text(text: str) -> PolySystem:
    variables: tuple[str, ...] | None = None
    meta: dict[str, str] = {}
    polys: list[Poly] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        mm = _META_LINE.match(raw.strip())
        if mm:
            meta[mm.group(1)] = mm.group(2)
            continue
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if variables is None:
            if not line.startswith("vars:"):
                raise SystemParseError("expected a 'vars:' declaration", lineno, 1)
            names = line[len("vars:") :].split()
            if not names:
                raise SystemParseError("empty variable list", lineno, 6)
            if len(set(names)) != len(names):
                raise SystemParseError("duplicate variable name", lineno, 6)
            for name in names:
                if not _IDENT.fullmatch(name):
                    raise SystemParseError(f"bad variable name {name!r}", lineno, 6)
            variables = tuple(names)
            continue
        polys.append(parse_poly(line, variables, lineno))
    if variables is None:
        raise SystemParseError("no 'vars:' declaration found", 1, 1)
    metadata = None
    if {"n", "k", "m", "formulation"} <= meta.keys():
        metadata = SystemMeta(int(meta["n"]), int(meta["k"]), int(meta["m"]), meta["formulation"])
    return PolySystem(variables, tuple(polys), metadata)


def emit(system: PolySystem, path) -> None:
    Path(path).write_text(format_system(system), encoding="utf-8")


def parse(path) -> PolySystem:
    return parse_system_text(Path(path).read_text(encoding="utf-8"))
