"""Chern classes on the Grassmannian of lines and their conormal pullbacks.

G = Gr(2, n+1) carries the tautological rank-2 subbundle S and rank-(n-1)
quotient Q.  Everything here is written in the Chern classes of the dual
subbundle,

    e1 = c1(S^) = sigma_1,      e2 = c2(S^) = sigma_{1,1},

inside a ring truncated at dim G = 2(n-1).  The map f sends a point of the
conormal model to the line it spans, and on these generators

    f* e1 = xi,     f* e2 = h*xi - h^2,

which is all we need to pull back arbitrary classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .ring import ClassPoly, RingContext, SymbolSpec, declare_ring, substitute


@dataclass(frozen=True)
class SchubertIndex:
    """Index (a, b) with a >= b >= 0 of a Schubert class on Gr(2, n+1)."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if not (self.a >= self.b >= 0):
            raise ValueError(f"need a >= b >= 0, got ({self.a}, {self.b})")

    @property
    def codim(self) -> int:
        return self.a + self.b

    def check_ambient(self, n: int) -> None:
        if self.a > n - 1:
            raise ValueError(
                f"sigma_({self.a},{self.b}) is not a class on Gr(2,{n + 1}): need a <= {n - 1}"
            )


def grassmannian_context(n: int) -> RingContext:
    if n < 2:
        raise ValueError("need ambient dimension n >= 2")
    return declare_ring(
        [SymbolSpec("e1", 1), SymbolSpec("e2", 2)], truncation=2 * (n - 1)
    )


# ---------------------------------------------------------------------------
# symmetric-function plumbing
# ---------------------------------------------------------------------------


def _segre(ctx: RingContext, l: int) -> ClassPoly:
    # s_l = e1*s_{l-1} - e2*s_{l-2}: the degree-l piece of 1/(1 - e1 + e2),
    # equal to the complete homogeneous polynomial in the two Chern roots.
    e1, e2 = ctx.sym("e1"), ctx.sym("e2")
    prev, cur = ctx.one(), e1
    if l == 0:
        return prev
    for _ in range(l - 1):
        prev, cur = cur, e1 * cur - e2 * prev
    return cur


def _symmetrize(poly_x: ClassPoly, ctx_e: RingContext) -> ClassPoly:
    """Rewrite a symmetric polynomial in x1, x2 in terms of e1, e2.

    Classical leading-term elimination: the lex-leading monomial c*x1^a*x2^b
    of a symmetric polynomial has a >= b and is the leading monomial of
    c*e1^(a-b)*e2^b; subtract and repeat.  A nonzero residual means the input
    was not symmetric, which is a bug, not an input condition.
    """
    ctx_x = poly_x.ctx
    images = {"e1": ctx_x.sym("x1") + ctx_x.sym("x2"), "e2": ctx_x.sym("x1") * ctx_x.sym("x2")}
    out = ctx_e.zero()
    rem = poly_x
    while not rem.is_zero():
        (a, b), c = max(rem.terms.items(), key=lambda t: t[0])
        assert a >= b, f"not symmetric: leading x1^{a}*x2^{b}"
        mono = ctx_e.monomial(c, e1=a - b, e2=b)
        out = out + mono
        rem = rem - substitute(mono, images, ctx_x)
    return out


# ---------------------------------------------------------------------------
# public surface
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def chern_tangent_grassmannian(n: int) -> ClassPoly:
    """Total Chern class of T(Gr(2, n+1)) as a polynomial in e1, e2.

    T_G = Hom(S, Q) = S^ (x) Q, so with x1, x2 the Chern roots of S^ the
    total class is a product of two rank-(n-1) twists,

        prod_i  sum_{l=0}^{n-1}  c_l(Q) * (1 + x_i)^(n-1-l),

    with c_l(Q) the degree-l piece of 1/c(S).  The product is symmetric in
    x1, x2 and is returned rewritten in e1, e2.
    """
    ctx_e = grassmannian_context(n)
    ctx_x = declare_ring(
        [SymbolSpec("x1", 1), SymbolSpec("x2", 1)], truncation=2 * (n - 1)
    )
    images = {"e1": ctx_x.sym("x1") + ctx_x.sym("x2"), "e2": ctx_x.sym("x1") * ctx_x.sym("x2")}
    total = ctx_x.one()
    for var in ("x1", "x2"):
        xi = ctx_x.sym(var)
        factor = ctx_x.zero()
        for l in range(n):
            factor = factor + substitute(_segre(ctx_e, l), images, ctx_x) * (1 + xi) ** (n - 1 - l)
        total = total * factor
    return _symmetrize(total, ctx_e)


def schubert_representative(index: SchubertIndex, n: int) -> ClassPoly:
    """sigma_{a,b} on Gr(2, n+1) as a polynomial in e1, e2.

    Two-row Giambelli collapses to sigma_{a,b} = e2^b * s_{a-b}.
    """
    index.check_ambient(n)
    ctx = grassmannian_context(n)
    return ctx.sym("e2") ** index.b * _segre(ctx, index.a - index.b)


def pullback_f(a: ClassPoly, target: RingContext) -> ClassPoly:
    """Pull a class on G, written in e1 and e2, back along f.

    The target must declare symbols xi and h; f* e1 = xi and
    f* e2 = h*xi - h^2.
    """
    xi, h = target.sym("xi"), target.sym("h")
    return substitute(a, {"e1": xi, "e2": h * xi - h * h}, target)


def schubert_pullback_direct(index: SchubertIndex, target: RingContext) -> ClassPoly:
    """f*(sigma_{a,b}) written directly in xi and h:

        sum_{i=0}^{a-b}  h^(b+i) * (xi - h)^(a-i)

    Independent of the representative route, which makes the two a check on
    each other.
    """
    xi, h = target.sym("xi"), target.sym("h")
    acc = target.zero()
    for i in range(index.a - index.b + 1):
        acc = acc + h ** (index.b + i) * (xi - h) ** (index.a - i)
    return acc
