"""Variety descriptions and their polar-class profiles.

A smooth complete intersection X in P^n cut by generic hypersurfaces of
degrees d_1..d_k has Chern classes that are scalar multiples of powers of
the hyperplane class h:

    c_i(T_X) = gamma_i * h^i.

A PolarProfile records those scalars together with the matching polar-class
scalars q_j (p_j = q_j * h^j) and the degree d = d_1*...*d_k of X, which is
all the data needed to evaluate any class formula in h, p_1, ..., p_m on X.

The two scalar systems determine each other through the same alternating
binomial transform in both directions:

    q_j     = sum_{i=0}^{j} (-1)^i C(m-i+1, j-i) gamma_i,
    gamma_j = sum_{i=0}^{j} (-1)^i C(m-i+1, j-i) q_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod

from .ring import ClassPoly, SymbolSpec, declare_ring, invert_unit


@dataclass(frozen=True)
class VarietySpec:
    """A complete intersection of hypersurfaces, projective or affine.

    ambient_dim is n; degrees are the hypersurface degrees.  The classes
    computed from this description are those of a generic such intersection
    (smooth, and with nondegenerate bottleneck geometry); assume_general
    records that the caller accepts this reading and is echoed by the CLI.
    """

    ambient_dim: int
    degrees: tuple[int, ...]
    affine: bool = False
    assume_general: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "degrees", tuple(self.degrees))
        if self.ambient_dim < 1:
            raise ValueError("ambient dimension must be >= 1")
        if not self.degrees:
            raise ValueError("need at least one hypersurface degree")
        if len(self.degrees) > self.ambient_dim:
            raise ValueError("more equations than ambient dimensions")
        if any(d < 1 for d in self.degrees):
            raise ValueError(f"degrees must be positive, got {self.degrees}")

    @property
    def dim(self) -> int:
        return self.ambient_dim - len(self.degrees)

    @property
    def codim(self) -> int:
        return len(self.degrees)

    @property
    def fundamental_degree(self) -> int:
        return prod(self.degrees)


def hyperplane_section_spec(spec: VarietySpec) -> VarietySpec:
    """The generic hyperplane section: same degrees, one ambient dimension
    down.  Always projective (used for the part of a variety at infinity)."""
    if spec.dim < 1:
        raise ValueError("cannot section a 0-dimensional variety")
    return VarietySpec(
        spec.ambient_dim - 1,
        spec.degrees,
        affine=False,
        assume_general=spec.assume_general,
    )


# ---------------------------------------------------------------------------
# scalar transforms
# ---------------------------------------------------------------------------


def _binomial_transform(m: int, coeffs: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(
        sum((-1) ** i * comb(m - i + 1, j - i) * coeffs[i] for i in range(j + 1))
        for j in range(m + 1)
    )


def chern_to_polar(m: int, gammas: tuple[int, ...]) -> tuple[int, ...]:
    return _binomial_transform(m, gammas)


def polar_to_chern(m: int, qs: tuple[int, ...]) -> tuple[int, ...]:
    return _binomial_transform(m, qs)


def _as_int_tuple(coeffs, what: str) -> tuple[int, ...]:
    out = []
    for c in coeffs:
        f = Fraction(c)
        if f.denominator != 1:
            raise ValueError(f"{what} must be integers, got {c}")
        out.append(int(f))
    return tuple(out)


@dataclass(frozen=True)
class PolarProfile:
    """Scalar Chern and polar data of an m-dimensional variety.

    chern_coeffs = (gamma_0, ..., gamma_m), polar_coeffs = (q_0, ..., q_m),
    both starting at 1.  ambient/degrees are carried along when the profile
    came from a VarietySpec, purely for reporting.
    """

    m: int
    fundamental_degree: int
    chern_coeffs: tuple[int, ...]
    polar_coeffs: tuple[int, ...]
    ambient: int | None = None
    degrees: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.m < 0:
            raise ValueError("dimension must be >= 0")
        if self.fundamental_degree < 1:
            raise ValueError("fundamental degree must be >= 1")
        for name, coeffs in (("chern_coeffs", self.chern_coeffs), ("polar_coeffs", self.polar_coeffs)):
            if len(coeffs) != self.m + 1:
                raise ValueError(f"{name} must have length m+1 = {self.m + 1}")
            if coeffs[0] != 1:
                raise ValueError(f"{name}[0] must be 1 (the class of X itself)")
        if chern_to_polar(self.m, self.chern_coeffs) != self.polar_coeffs:
            raise ValueError("chern_coeffs and polar_coeffs are inconsistent")

    @classmethod
    def from_chern(cls, m, fundamental_degree, gammas, ambient=None, degrees=None):
        gammas = _as_int_tuple(gammas, "Chern coefficients")
        return cls(m, fundamental_degree, gammas, chern_to_polar(m, gammas), ambient, degrees)

    @classmethod
    def from_polar(cls, m, fundamental_degree, qs, ambient=None, degrees=None):
        qs = _as_int_tuple(qs, "polar coefficients")
        return cls(m, fundamental_degree, polar_to_chern(m, qs), qs, ambient, degrees)


def ci_profile(spec: VarietySpec) -> PolarProfile:
    """Profile of the (projective closure of the) complete intersection.

    c(T_X) = (1+h)^(n+1) / prod_i (1 + d_i h), truncated at dim X.
    """
    m = spec.dim
    ctx = declare_ring([SymbolSpec("h", 1)], truncation=m)
    h = ctx.sym("h")
    total = (1 + h) ** (spec.ambient_dim + 1)
    for d in spec.degrees:
        total = total * invert_unit(1 + d * h)
    gammas = tuple(total.terms.get((i,), Fraction(0)) for i in range(m + 1))
    return PolarProfile.from_chern(
        m, spec.fundamental_degree, gammas, ambient=spec.ambient_dim, degrees=spec.degrees
    )


def polar_degrees(profile: PolarProfile) -> tuple[int, ...]:
    """(deg p_0, ..., deg p_m); deg p_j = q_j * deg X."""
    return tuple(q * profile.fundamental_degree for q in profile.polar_coeffs)


def hyperplane_section(profile: PolarProfile) -> PolarProfile:
    """Profile of the generic hyperplane section of X.

    Adjunction divides the total Chern class by 1 + h, so the new scalars
    are the alternating partial sums of the old ones.  The degree is
    unchanged; the ambient dimension drops by one.
    """
    if profile.m < 1:
        raise ValueError("cannot section a 0-dimensional variety")
    g = profile.chern_coeffs
    new = tuple(
        sum((-1) ** (i - j) * g[j] for j in range(i + 1)) for i in range(profile.m)
    )
    return PolarProfile.from_chern(
        profile.m - 1,
        profile.fundamental_degree,
        new,
        ambient=None if profile.ambient is None else profile.ambient - 1,
        degrees=profile.degrees,
    )


def evaluate_class(a: ClassPoly, profile: PolarProfile) -> int:
    """Degree of a codimension-m class given as a polynomial in h, p_1..p_m.

    Each monomial turns into its product of polar scalars times deg X; the
    input must be homogeneous of codimension exactly m, so the degree pairing
    against X makes sense.
    """
    m = profile.m
    names = [s.name for s in a.ctx.symbols]
    if names != ["h"] + [f"p{i}" for i in range(1, m + 1)]:
        raise ValueError(
            f"class ring {names} does not match an {m}-dimensional profile"
        )
    if not a.is_homogeneous(m):
        raise ValueError(f"class is not homogeneous of codimension {m}")
    total = Fraction(0)
    for expts, coeff in a.terms.items():
        scalar = Fraction(1)
        for j, e in enumerate(expts[1:], start=1):
            scalar *= Fraction(profile.polar_coeffs[j]) ** e
        total += coeff * scalar
    total *= profile.fundamental_degree
    if total.denominator != 1:
        raise ValueError(f"class does not evaluate to an integer: {total}")
    return int(total)


def profile_json(profile: PolarProfile) -> dict:
    return {
        "ambient": profile.ambient,
        "degrees": None if profile.degrees is None else list(profile.degrees),
        "m": profile.m,
        "fundamental_degree": profile.fundamental_degree,
        "polar_degrees": list(polar_degrees(profile)),
    }
