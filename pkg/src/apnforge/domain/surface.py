"""The surface attached to ``x^(q-2) + g(x)`` and its rational points.

For ``g`` with ``N = g(x0) + g(x1) + g(x2) + g(x0 + x1 + x2)`` the quotient
``phi = N / ((x0 + x1)(x1 + x2)(x0 + x2))`` is a polynomial, and the affine
surface is ``1 + phi * x0 x1 x2 (x0 + x1 + x2) = 0``. Polynomials here are
sparse maps from exponent tuples to field elements. Building them never
multiplies two field elements, so construction needs no field context.
"""

import logging
from collections.abc import Callable, Iterator, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import ClassVar

import numpy as np
from pydantic import model_validator

from apnforge.domain import gf2m
from apnforge.domain.base import ForgeBaseModel
from apnforge.domain.gf2m import ElemArray, FieldCtx
from apnforge.domain.polyfun import SparsePoly, evaluate, normalize_p2
from apnforge.exceptions import ApnForgeDomainError, PreconditionError

logger = logging.getLogger(__name__)

Exponents = tuple[int, ...]

COUNT_MAX_M = 10
SINGULAR_MAX_M = 8


class NonExactDivisionError(ApnForgeDomainError):
    """Raised when a synthetic division leaves a nonzero remainder."""


class ResultantError(ApnForgeDomainError):
    """Raised when an appendix resultant is requested outside its hypotheses."""


def _xor_into(acc: dict[Exponents, int], exps: Exponents, coeff: int) -> None:
    merged = acc.get(exps, 0) ^ coeff
    if merged:
        acc[exps] = merged
    else:
        acc.pop(exps, None)


@dataclass(frozen=True, eq=False)
class _SparseMulti:
    """Sparse polynomial in ``NVARS`` variables with GF(2^m) coefficients."""

    NVARS: ClassVar[int]
    monos: Mapping[Exponents, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Validate exponent arity and drop zero coefficients."""
        clean: dict[Exponents, int] = {}
        for exps, coeff in self.monos.items():
            if len(exps) != self.NVARS or min(exps) < 0:
                msg = f"{type(self).__name__} needs {self.NVARS} exponents, got {exps}"
                raise PreconditionError(msg)
            if coeff:
                clean[tuple(exps)] = coeff
        object.__setattr__(self, "monos", clean)

    def __eq__(self, other: object) -> bool:
        """Coefficient-level equality."""
        if not isinstance(other, _SparseMulti) or type(other) is not type(self):
            return NotImplemented
        return dict(self.monos) == dict(other.monos)

    def __hash__(self) -> int:
        """Hash on the monomial set."""
        return hash(frozenset(self.monos.items()))

    def __add__(self, other: "_SparseMulti") -> "_SparseMulti":
        """Coefficient-wise sum (XOR)."""
        acc = dict(self.monos)
        for exps, coeff in other.monos.items():
            _xor_into(acc, exps, coeff)
        return type(self)(acc)

    @property
    def is_zero(self) -> bool:
        """Whether no monomial survives."""
        return not self.monos

    @property
    def total_degree(self) -> int:
        """Largest monomial degree, or -1 for the zero polynomial."""
        return max((sum(exps) for exps in self.monos), default=-1)

    def times_monomial(self, exps: Exponents) -> "_SparseMulti":
        """Product with the unit monomial ``prod x_i^exps[i]``."""
        return type(self)(
            {
                tuple(a + b for a, b in zip(mono, exps, strict=True)): coeff
                for mono, coeff in self.monos.items()
            }
        )

    def derivative(self, var: int) -> "_SparseMulti":
        """Formal partial derivative; only odd exponents survive in char 2."""
        acc: dict[Exponents, int] = {}
        for exps, coeff in self.monos.items():
            if exps[var] % 2:
                lowered = exps[:var] + (exps[var] - 1,) + exps[var + 1 :]
                _xor_into(acc, lowered, coeff)
        return type(self)(acc)

    def permute(self, perm: Exponents) -> "_SparseMulti":
        """Rename variables: variable ``i`` becomes variable ``perm[i]``."""
        acc: dict[Exponents, int] = {}
        for exps, coeff in self.monos.items():
            moved = [0] * self.NVARS
            for i, e in enumerate(exps):
                moved[perm[i]] = e
            _xor_into(acc, tuple(moved), coeff)
        return type(self)(acc)

    def divide_by_linear_sum(self, var: int, other: int) -> "_SparseMulti":
        """Exact quotient by ``x_var + x_other`` via synthetic division in ``x_var``.

        Raises:
            NonExactDivisionError: If the remainder is not zero.
        """
        rows: dict[int, dict[Exponents, int]] = {}
        for exps, coeff in self.monos.items():
            rest = exps[:var] + (0,) + exps[var + 1 :]
            rows.setdefault(exps[var], {})[rest] = coeff

        def times_root(poly: dict[Exponents, int]) -> dict[Exponents, int]:
            return {
                exps[:other] + (exps[other] + 1,) + exps[other + 1 :]: coeff
                for exps, coeff in poly.items()
            }

        top = max(rows, default=0)
        quotient: dict[Exponents, int] = {}
        carry: dict[Exponents, int] = {}
        for i in range(top, 0, -1):
            current = dict(rows.get(i, {}))
            for exps, coeff in times_root(carry).items():
                _xor_into(current, exps, coeff)
            for exps, coeff in current.items():
                quotient[exps[:var] + (i - 1,) + exps[var + 1 :]] = coeff
            carry = current
        remainder = dict(rows.get(0, {}))
        for exps, coeff in times_root(carry).items():
            _xor_into(remainder, exps, coeff)
        if remainder:
            msg = (
                f"division by x{var}+x{other} left {len(remainder)} "
                "remainder monomials"
            )
            raise NonExactDivisionError(msg)
        return type(self)(quotient)

    def evaluate(self, ctx: FieldCtx, *coords: ElemArray | int) -> ElemArray:
        """Evaluate at broadcast coordinate arrays."""
        arrays = [np.asarray(c, dtype=np.int64) for c in coords]
        if len(arrays) != self.NVARS:
            msg = f"expected {self.NVARS} coordinates, got {len(arrays)}"
            raise PreconditionError(msg)
        shape = np.broadcast_shapes(*(a.shape for a in arrays))
        powers: dict[tuple[int, int], ElemArray] = {}
        total = np.zeros(shape, dtype=np.int64)
        for exps, coeff in self.monos.items():
            term = np.full(shape, coeff, dtype=np.int64)
            for var, e in enumerate(exps):
                if not e:
                    continue
                if (var, e) not in powers:
                    powers[var, e] = gf2m.power_array(ctx, arrays[var], e)
                term = gf2m.mul_array(ctx, term, powers[var, e])
            total ^= term
        return total

    def __str__(self) -> str:
        """Monomials in decreasing exponent order, hex coefficients."""
        if not self.monos:
            return "0"
        names = ("x0", "x1", "x2", "z")
        parts = []
        for exps in sorted(self.monos, reverse=True):
            factors = [
                names[v] if e == 1 else f"{names[v]}^{e}"
                for v, e in enumerate(exps)
                if e
            ]
            coeff = self.monos[exps]
            if coeff != 1 or not factors:
                factors.insert(0, f"{coeff:x}")
            parts.append("*".join(factors))
        return "+".join(parts)


@dataclass(frozen=True, eq=False)
class TriPoly(_SparseMulti):
    """Polynomial in ``x0, x1, x2``."""

    NVARS: ClassVar[int] = 3


@dataclass(frozen=True, eq=False)
class TriPolyHom(_SparseMulti):
    """Homogeneous polynomial in ``x0, x1, x2, z``."""

    NVARS: ClassVar[int] = 4

    def __post_init__(self) -> None:
        """Reject mixed-degree input."""
        super().__post_init__()
        degrees = {sum(exps) for exps in self.monos}
        if len(degrees) > 1:
            msg = f"polynomial is not homogeneous, degrees {sorted(degrees)}"
            raise PreconditionError(msg)

    def at_z_one(self) -> TriPoly:
        """Dehomogenize on the affine chart ``z = 1``."""
        acc: dict[Exponents, int] = {}
        for exps, coeff in self.monos.items():
            _xor_into(acc, exps[:3], coeff)
        return TriPoly(acc)

    def at_infinity(self) -> TriPoly:
        """Restriction to the plane ``z = 0``."""
        return TriPoly(
            {exps[:3]: coeff for exps, coeff in self.monos.items() if exps[3] == 0}
        )


# ---------- construction


def _submasks(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def assemble_numerator(g: SparsePoly) -> TriPoly:
    """``N = g(x0) + g(x1) + g(x2) + g(x0 + x1 + x2)``.

    ``(x0 + x1 + x2)^e`` contains ``x0^i x1^j x2^k`` with coefficient 1
    exactly when ``i, j, k`` split the binary digits of ``e`` without carries.
    """
    acc: dict[Exponents, int] = {}
    for e, coeff in g.terms:
        for mono in ((e, 0, 0), (0, e, 0), (0, 0, e)):
            _xor_into(acc, mono, coeff)
        for i in _submasks(e):
            for j in _submasks(e ^ i):
                _xor_into(acc, (i, j, e ^ i ^ j), coeff)
    return TriPoly(acc)


def _check_not_affine(g: SparsePoly) -> None:
    if normalize_p2(g).is_zero:
        msg = f"g = {g} is affine plus squares; the surface is undefined"
        raise PreconditionError(msg)


def surface_degree(g: SparsePoly) -> int:
    """``d = deg normalize_p2(g)``, the degree the bounds are stated in."""
    return normalize_p2(g).degree


def phi_poly(g: SparsePoly) -> TriPoly:
    """``N / ((x0 + x1)(x1 + x2)(x0 + x2))`` by three exact divisions.

    Raises:
        PreconditionError: If ``g`` is affine plus squares.
        NonExactDivisionError: If any division leaves a remainder.

    Examples:
        >>> str(phi_poly(SparsePoly.monomial(3)))
        '1'
    """
    _check_not_affine(g)
    quotient: _SparseMulti = assemble_numerator(g)
    for var, other in ((0, 1), (0, 2), (1, 2)):
        quotient = quotient.divide_by_linear_sum(var, other)
    return TriPoly(quotient.monos)


_SIGMA_MONOMIALS: tuple[Exponents, ...] = ((2, 1, 1), (1, 2, 1), (1, 1, 2))


def surface_affine_poly(g: SparsePoly) -> TriPoly:
    """``1 + phi * x0 x1 x2 (x0 + x1 + x2)``."""
    phi = phi_poly(g)
    acc: dict[Exponents, int] = {(0, 0, 0): 1}
    for shift in _SIGMA_MONOMIALS:
        for exps, coeff in phi.times_monomial(shift).monos.items():
            _xor_into(acc, exps, coeff)
    return TriPoly(acc)


def homogenize(g: SparsePoly) -> TriPolyHom:
    """Projective closure of :func:`surface_affine_poly` in ``x0, x1, x2, z``.

    Examples:
        >>> str(homogenize(SparsePoly.monomial(3)))
        'x0^2*x1*x2+x0*x1^2*x2+x0*x1*x2^2+z^4'
    """
    affine = surface_affine_poly(g)
    top = affine.total_degree
    return TriPolyHom(
        {exps + (top - sum(exps),): coeff for exps, coeff in affine.monos.items()}
    )


# ---------- point counting


def _count_zeros(ctx: FieldCtx, poly: TriPoly, workers: int = 1) -> int:
    """``#{(x0, x1, x2) in GF(q)^3 : poly = 0}``.

    Each ``x0`` slice collapses ``poly`` to a polynomial in ``x2`` whose
    coefficients are arrays over ``x1``, evaluated on one ``q x q`` grid.
    """
    q = ctx.q
    xs = gf2m.elements(ctx)
    x1_pows = {j: gf2m.power_array(ctx, xs, j) for j in {e[1] for e in poly.monos}}
    x2_pows = {k: gf2m.power_array(ctx, xs, k) for k in {e[2] for e in poly.monos}}

    def count_slice(x0: int) -> int:
        columns: dict[int, ElemArray] = {}
        for (i, j, k), coeff in poly.monos.items():
            scalar = gf2m.mul(ctx, coeff, gf2m.power(ctx, x0, i))
            if scalar:
                column = gf2m.scale_array(ctx, scalar, x1_pows[j])
                columns[k] = columns[k] ^ column if k in columns else column
        grid = np.zeros((q, q), dtype=np.int64)
        for k, column in columns.items():
            grid ^= gf2m.mul_array(ctx, column[:, None], x2_pows[k][None, :])
        return int(np.count_nonzero(grid == 0))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return sum(pool.map(count_slice, range(q)))
    return sum(count_slice(x0) for x0 in range(q))


def check_scan_size(
    ctx: FieldCtx, max_m: int, what: str, *, allow_large: bool = False
) -> None:
    """Refuse an exhaustive surface scan over a field larger than ``max_m``.

    Args:
        ctx: Field the scan would run over.
        max_m: Largest extension degree scanned without ``allow_large``.
        what: Name of the scan, for the error message.
        allow_large: Skip the check.

    Raises:
        PreconditionError: If ``ctx.m > max_m`` and ``allow_large`` is false.
    """
    if ctx.m > max_m and not allow_large:
        msg = (
            f"{what} over GF(2^{ctx.m}) is limited to m <= {max_m}; "
            "pass allow_large to override"
        )
        raise PreconditionError(msg)


def count_affine_points(
    ctx: FieldCtx, g: SparsePoly, workers: int = 1, *, allow_large: bool = False
) -> int:
    """Rational points of the affine surface in ``GF(q)^3``.

    Raises:
        PreconditionError: If ``m > COUNT_MAX_M`` without ``allow_large``.
    """
    check_scan_size(ctx, COUNT_MAX_M, "point counting", allow_large=allow_large)
    g.check_field(ctx)
    return _count_zeros(ctx, surface_affine_poly(g), workers)


def count_points_at_infinity(
    ctx: FieldCtx, g: SparsePoly, workers: int = 1, *, allow_large: bool = False
) -> int:
    """Rational points of the closure on the plane ``z = 0``.

    The restriction is homogeneous in three variables, so its zeros in
    ``GF(q)^3`` other than the origin come in lines of ``q - 1`` points.
    """
    check_scan_size(ctx, COUNT_MAX_M, "point counting", allow_large=allow_large)
    g.check_field(ctx)
    cone = _count_zeros(ctx, homogenize(g).at_infinity(), workers)
    return (cone - 1) // (ctx.q - 1)


def count_projective_points(
    ctx: FieldCtx, g: SparsePoly, workers: int = 1, *, allow_large: bool = False
) -> int:
    """Rational points of the projective closure in ``P^3``."""
    affine = count_affine_points(ctx, g, workers, allow_large=allow_large)
    return affine + count_points_at_infinity(
        ctx, g, workers, allow_large=allow_large
    )


def _projective_blocks(q: int) -> Iterator[tuple[ElemArray, ...]]:
    """Normalized points of ``P^3(GF(q))`` in chunks of at most ``q^2``."""
    xs = np.arange(q, dtype=np.int64)
    grid_a = np.repeat(xs, q)
    grid_b = np.tile(xs, q)
    ones = np.ones(q * q, dtype=np.int64)
    zeros = np.zeros(q * q, dtype=np.int64)
    for x1 in range(q):
        yield ones, np.full(q * q, x1, dtype=np.int64), grid_a, grid_b
    yield zeros, ones, grid_a, grid_b
    yield zeros[:q], zeros[:q], ones[:q], xs
    yield zeros[:1], zeros[:1], zeros[:1], ones[:1]


def count_projective_points_direct(ctx: FieldCtx, g: SparsePoly) -> int:
    """Projective count by evaluating the closure on every normalized point."""
    g.check_field(ctx)
    closure = homogenize(g)
    return sum(
        int(np.count_nonzero(closure.evaluate(ctx, *block) == 0))
        for block in _projective_blocks(ctx.q)
    )


def count_at_infinity_decomposed(ctx: FieldCtx, g: SparsePoly) -> int:
    """Points at infinity as four lines plus the top part of ``phi``.

    At ``z = 0`` the closure is ``phi_top * x0 x1 x2 (x0 + x1 + x2)``. The
    four lines meet pairwise in six distinct points, giving ``4q - 2``;
    the rest are points of ``phi_top = 0`` off the lines, with ``x0 = 1``.
    """
    g.check_field(ctx)
    phi = phi_poly(g)
    top = phi.total_degree
    phi_top = TriPoly({e: c for e, c in phi.monos.items() if sum(e) == top})
    lines = 4 * ctx.q - 2
    xs = gf2m.elements(ctx)[1:]
    x1 = xs[:, None]
    x2 = xs[None, :]
    off_lines = (1 ^ x1 ^ x2) != 0
    on_curve = phi_top.evaluate(ctx, 1, x1, x2) == 0
    return lines + int(np.count_nonzero(off_lines & on_curve))


# ---------- singular points


class ProjPoint(ForgeBaseModel):
    """Point of ``P^3`` whose first nonzero coordinate is 1."""

    coords: tuple[int, int, int, int]

    @model_validator(mode="after")
    def _check_normalized(self) -> "ProjPoint":
        nonzero = [c for c in self.coords if c]
        if not nonzero:
            msg = "(0,0,0,0) is not a projective point"
            raise ValueError(msg)
        if nonzero[0] != 1:
            msg = f"first nonzero coordinate must be 1, got {self.coords}"
            raise ValueError(msg)
        return self

    @classmethod
    def normalized(
        cls, ctx: FieldCtx, coords: tuple[int, int, int, int]
    ) -> "ProjPoint":
        """Scale ``coords`` so the first nonzero entry is 1.

        Raises:
            PreconditionError: If every coordinate is zero.
        """
        lead = next((c for c in coords if c), 0)
        if not lead:
            msg = "(0,0,0,0) is not a projective point"
            raise PreconditionError(msg)
        scale = gf2m.inv(ctx, lead)
        x0, x1, x2, z = (gf2m.mul(ctx, scale, c) for c in coords)
        return cls(coords=(x0, x1, x2, z))

    def __str__(self) -> str:
        """Render as ``(x0,x1,x2,z)``."""
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def partials(F: TriPolyHom) -> tuple[TriPolyHom, TriPolyHom, TriPolyHom, TriPolyHom]:
    """Partial derivatives in ``x0, x1, x2, z``."""
    d0, d1, d2, dz = (TriPolyHom(F.derivative(v).monos) for v in range(4))
    return d0, d1, d2, dz


def enumerate_singular(
    ctx: FieldCtx, F: TriPolyHom, *, allow_large: bool = False
) -> list[ProjPoint]:
    """Normalized points where ``F`` and its four partials vanish, sorted.

    Every point of ``P^3(GF(q))`` is tested, about ``q^3`` of them.

    Args:
        ctx: Field to search.
        F: Homogeneous surface equation.
        allow_large: Search even when ``m > SINGULAR_MAX_M``.

    Returns:
        The singular points in lexicographic order of normalized coordinates.

    Raises:
        PreconditionError: If the field is too large and ``allow_large`` is
            false.
    """
    check_scan_size(
        ctx, SINGULAR_MAX_M, "singular point search", allow_large=allow_large
    )
    derivs = partials(F)
    found: list[tuple[int, int, int, int]] = []
    for block in _projective_blocks(ctx.q):
        mask = F.evaluate(ctx, *block) == 0
        if not mask.any():
            continue
        candidates = tuple(c[mask] for c in block)
        for derivative in derivs:
            mask = derivative.evaluate(ctx, *candidates) == 0
            candidates = tuple(c[mask] for c in candidates)
        found.extend(
            (int(a), int(b), int(c), int(d))
            for a, b, c, d in zip(*candidates, strict=True)
        )
    logger.debug("%d singular points over %s", len(found), ctx)
    return [ProjPoint(coords=coords) for coords in sorted(found)]


# ---------- appendix case analysis


class AppendixCase(str, Enum):
    """Which appendix surface a coefficient triple belongs to."""

    DEGREE_5 = "degree-5"
    DEGREE_6 = "degree-6"


class SingularCase(str, Enum):
    """Case predicates of the singular point analysis, in priority order."""

    COORD_ZERO = "COORD_ZERO"
    ALL_EQUAL = "ALL_EQUAL"
    PAIR_EQUAL = "PAIR_EQUAL"
    SUM_ZERO = "SUM_ZERO"
    Q_ROOT = "Q_ROOT"
    NO_CASE = "NO_CASE"


class AppendixCoeffs(ForgeBaseModel):
    """Coefficients of ``g = a6 x^6 + a5 x^5 + a3 x^3``."""

    a3: int = 0
    a5: int = 0
    a6: int = 0

    @property
    def case(self) -> AppendixCase:
        """Degree 6 when ``a6 != 0``, else degree 5."""
        return AppendixCase.DEGREE_6 if self.a6 else AppendixCase.DEGREE_5

    def to_poly(self) -> SparsePoly:
        """The polynomial ``g`` these coefficients describe."""
        return SparsePoly.from_coefficients({3: self.a3, 5: self.a5, 6: self.a6})


class SingularClass(ForgeBaseModel):
    """Classification of one singular point.

    Attributes:
        primary: First matching case in :class:`SingularCase` order.
        tags: Every matching case (empty only when ``primary`` is NO_CASE).
    """

    primary: SingularCase
    tags: frozenset[SingularCase]


def coefficients_for_appendix(g: SparsePoly) -> AppendixCoeffs | None:
    """``(a3, a5, a6)`` when normalized ``g`` is supported on ``{3, 5, 6}``."""
    normal = normalize_p2(g)
    if normal.is_zero or any(e not in {3, 5, 6} for e, _ in normal.terms):
        return None
    return AppendixCoeffs(
        a3=normal.coefficient(3), a5=normal.coefficient(5), a6=normal.coefficient(6)
    )


# exponent of x -> list of (e3, e5, e6) with coefficient sum of a3^e3 a5^e5 a6^e6
_RESULTANT_TERMS: dict[AppendixCase, dict[int, tuple[tuple[int, int, int], ...]]] = {
    AppendixCase.DEGREE_5: {
        12: ((0, 3, 0),),
        10: ((1, 2, 0),),
        8: ((2, 1, 0),),
        6: ((3, 0, 0),),
        4: ((1, 1, 0),),
        0: ((0, 1, 0),),
    },
    AppendixCase.DEGREE_6: {
        12: ((1, 3, 2), (0, 6, 0)),
        10: ((2, 2, 2), (1, 5, 0)),
        8: ((3, 1, 2), (2, 4, 0), (1, 0, 4)),
        6: ((4, 0, 2), (3, 3, 0)),
        4: ((1, 4, 0), (0, 0, 4)),
        0: ((0, 4, 0),),
    },
}


def resultant_q(
    ctx: FieldCtx, case: AppendixCase, coeffs: AppendixCoeffs
) -> SparsePoly:
    """The univariate ``Q`` (``z = 1``) of the appendix case analysis.

    Args:
        ctx: Field the coefficients live in.
        case: Which closed form to use.
        coeffs: ``(a3, a5, a6)`` of ``g``.

    Returns:
        ``Q`` with its coefficients evaluated in ``ctx``.

    Raises:
        ResultantError: If ``a5 = 0`` in the degree-5 case, ``a5 = a6 = 0`` in
            the degree-6 case, or ``Q`` vanishes identically.

    Examples:
        >>> ctx = gf2m.new_field(4)
        >>> str(resultant_q(ctx, AppendixCase.DEGREE_5, AppendixCoeffs(a5=1)))
        'x^12+1'
    """
    if case is AppendixCase.DEGREE_5 and not coeffs.a5:
        msg = "degree-5 resultant needs a5 != 0"
        raise ResultantError(msg)
    if case is AppendixCase.DEGREE_6 and not (coeffs.a5 or coeffs.a6):
        msg = "degree-6 resultant needs (a5, a6) != (0, 0)"
        raise ResultantError(msg)
    coeffs.to_poly().check_field(ctx)
    terms: dict[int, int] = {}
    for exponent, products in _RESULTANT_TERMS[case].items():
        total = 0
        for e3, e5, e6 in products:
            value = gf2m.power(ctx, coeffs.a3, e3)
            value = gf2m.mul(ctx, value, gf2m.power(ctx, coeffs.a5, e5))
            total ^= gf2m.mul(ctx, value, gf2m.power(ctx, coeffs.a6, e6))
        terms[exponent] = total
    q_poly = SparsePoly.from_coefficients(terms)
    if q_poly.is_zero:
        msg = f"resultant vanishes identically for {coeffs}"
        raise ResultantError(msg)
    return q_poly


def _is_q_root(ctx: FieldCtx, p: ProjPoint, coeffs: AppendixCoeffs) -> bool:
    x0, x1, x2, z = p.coords
    if not z:
        return False
    try:
        q_poly = resultant_q(ctx, coeffs.case, coeffs)
    except ResultantError:
        return False
    z_inv = gf2m.inv(ctx, z)
    return all(
        evaluate(ctx, q_poly, gf2m.mul(ctx, x, z_inv)) == 0 for x in (x0, x1, x2)
    )


def classify_singular(
    ctx: FieldCtx, p: ProjPoint, coeffs: AppendixCoeffs
) -> SingularClass:
    """Match ``p`` against the appendix case predicates.

    Args:
        ctx: Field of the point.
        p: A normalized singular point.
        coeffs: Coefficients of ``g``, needed for the ``Q``-root test.

    Returns:
        Every predicate that holds, and the first of them in priority order
        (``NO_CASE`` when none does).

    Examples:
        >>> ctx = gf2m.new_field(3)
        >>> point = ProjPoint(coords=(1, 1, 1, 1))
        >>> found = classify_singular(ctx, point, AppendixCoeffs(a3=1, a5=1))
        >>> found.primary.value, SingularCase.PAIR_EQUAL in found.tags
        ('ALL_EQUAL', True)
    """
    x0, x1, x2, _ = p.coords
    checks: dict[SingularCase, Callable[[], bool]] = {
        SingularCase.COORD_ZERO: lambda: 0 in (x0, x1, x2),
        SingularCase.ALL_EQUAL: lambda: x0 == x1 == x2,
        SingularCase.PAIR_EQUAL: lambda: x0 in (x1, x2) or x1 == x2,
        SingularCase.SUM_ZERO: lambda: x0 ^ x1 ^ x2 == 0,
        SingularCase.Q_ROOT: lambda: _is_q_root(ctx, p, coeffs),
    }
    tags = frozenset(case for case, check in checks.items() if check())
    primary = next((case for case in checks if case in tags), SingularCase.NO_CASE)
    return SingularClass(primary=primary, tags=tags)


class SingularRecord(ForgeBaseModel):
    """A singular point with its case tags (``None`` when not classified)."""

    point: tuple[int, int, int, int]
    primary: SingularCase | None = None
    tags: tuple[SingularCase, ...] = ()

    @classmethod
    def of(cls, point: ProjPoint, found: SingularClass | None) -> "SingularRecord":
        """Flatten a point and its classification, tags in priority order."""
        if found is None:
            return cls(point=point.coords)
        return cls(
            point=point.coords,
            primary=found.primary,
            tags=tuple(case for case in SingularCase if case in found.tags),
        )


# ---------- report


class SurfaceReport(ForgeBaseModel):
    """Point counts (and optionally singular points) of one surface."""

    m: int
    field_poly: str
    g: str
    d: int
    affine_count: int
    infinity_count: int
    projective_count: int
    singular_points: tuple[ProjPoint, ...] | None = None
    elapsed_ms: float | None = None


def build_surface_report(
    ctx: FieldCtx,
    g: SparsePoly,
    *,
    singular: bool = False,
    workers: int = 1,
    allow_large: bool = False,
) -> SurfaceReport:
    """Count points of the surface of ``g`` over ``ctx``.

    Args:
        ctx: Field to count over.
        g: The polynomial defining the surface.
        singular: Also list the singular points.
        workers: Threads for the ``x0`` slices of the counts.
        allow_large: Lift the field size limits of the scans.

    Returns:
        Affine, infinite and projective counts, plus singular points when
        asked for.
    """
    if singular:
        check_scan_size(
            ctx, SINGULAR_MAX_M, "singular point search", allow_large=allow_large
        )
    affine = count_affine_points(ctx, g, workers, allow_large=allow_large)
    infinity = count_points_at_infinity(ctx, g, workers, allow_large=allow_large)
    points = None
    if singular:
        closure = homogenize(g)
        points = tuple(enumerate_singular(ctx, closure, allow_large=allow_large))
    return SurfaceReport(
        m=ctx.m,
        field_poly=f"0x{ctx.red_poly:x}",
        g=str(g),
        d=surface_degree(g),
        affine_count=affine,
        infinity_count=infinity,
        projective_count=affine + infinity,
        singular_points=points,
    )
