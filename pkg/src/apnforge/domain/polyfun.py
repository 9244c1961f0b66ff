"""Univariate polynomial functions over GF(2^m) and their equivalences.

A :class:`SparsePoly` is field-agnostic: coefficients are bit vectors that are
interpreted in whichever :class:`~apnforge.domain.gf2m.FieldCtx` the caller
supplies, and exponents are never reduced modulo ``q - 1``. Reduction only
happens when a polynomial is turned into a :class:`FuncTable`.
"""

import re
from dataclasses import dataclass
from math import gcd

import numpy as np
from pydantic import field_validator

from apnforge.domain import gf2m
from apnforge.domain.base import ForgeBaseModel
from apnforge.domain.gf2m import ElemArray, FieldCtx
from apnforge.exceptions import ApnForgeDomainError, PreconditionError


class PolynomialSyntaxError(ApnForgeDomainError):
    """Raised when polynomial text does not follow the term grammar."""

    def __init__(self, text: str, reason: str) -> None:
        """Initialize the error.

        Args:
            text: The offending polynomial text.
            reason: What is wrong with it.
        """
        super().__init__(f"Cannot parse polynomial {text!r}: {reason}")
        self.text = text


class PolynomialFieldMismatchError(ApnForgeDomainError):
    """Raised when a coefficient is not an element of the chosen field."""


class TransformError(ApnForgeDomainError):
    """Raised for a degenerate or out-of-field affine transform."""


def is_power_of_two(n: int) -> bool:
    """Whether ``n`` is 1, 2, 4, 8, ...

    Examples:
        >>> [n for n in range(10) if is_power_of_two(n)]
        [1, 2, 4, 8]
    """
    return n > 0 and n & (n - 1) == 0


class SparsePoly(ForgeBaseModel):
    """Univariate polynomial as canonical ``(exponent, coefficient)`` pairs.

    Input terms may be unsorted, repeated or carry zero coefficients; they are
    combined (coefficients add by XOR), zero terms dropped and the result
    sorted by exponent.
    """

    terms: tuple[tuple[int, int], ...] = ()

    @field_validator("terms", mode="before")
    @classmethod
    def _canonicalize(cls, raw: object) -> tuple[tuple[int, int], ...]:
        if isinstance(raw, dict):
            pairs = list(raw.items())
        else:
            pairs = [tuple(term) for term in raw]  # type: ignore[attr-defined]
        combined: dict[int, int] = {}
        for exponent, coeff in pairs:
            if exponent < 0 or coeff < 0:
                msg = f"negative exponent or coefficient in term {(exponent, coeff)}"
                raise ValueError(msg)
            combined[exponent] = combined.get(exponent, 0) ^ coeff
        return tuple(sorted((e, c) for e, c in combined.items() if c))

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "SparsePoly":
        """Build ``coeff * x^exponent``."""
        return cls(terms=((exponent, coeff),))

    @classmethod
    def from_coefficients(cls, coeffs: dict[int, int]) -> "SparsePoly":
        """Build from an ``{exponent: coefficient}`` mapping."""
        return cls(terms=tuple(coeffs.items()))

    @property
    def degree(self) -> int:
        """Largest exponent, or -1 for the zero polynomial."""
        return self.terms[-1][0] if self.terms else -1

    @property
    def is_zero(self) -> bool:
        """Whether the polynomial has no terms."""
        return not self.terms

    def coefficient(self, exponent: int) -> int:
        """Coefficient of ``x^exponent`` (0 when absent)."""
        return dict(self.terms).get(exponent, 0)

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        """Coefficient-wise sum (XOR)."""
        return SparsePoly(terms=self.terms + other.terms)

    def check_field(self, ctx: FieldCtx) -> None:
        """Ensure every coefficient is an element of ``ctx``.

        Raises:
            PolynomialFieldMismatchError: If a coefficient is ``>= q``.
        """
        for exponent, coeff in self.terms:
            if coeff >= ctx.q:
                msg = f"coefficient 0x{coeff:x} of x^{exponent} is not in {ctx}"
                raise PolynomialFieldMismatchError(msg)

    def __str__(self) -> str:
        """Render in the CLI grammar, highest degree first.

        Examples:
            >>> str(SparsePoly(terms=((3, 1), (5, 3), (6, 1))))
            'x^6+3*x^5+x^3'
        """
        if not self.terms:
            return "0"
        parts = []
        for exponent, coeff in reversed(self.terms):
            if exponent == 0:
                parts.append(f"{coeff:x}")
                continue
            monomial = "x" if exponent == 1 else f"x^{exponent}"
            parts.append(monomial if coeff == 1 else f"{coeff:x}*{monomial}")
        return "+".join(parts)


_TERM_RE = re.compile(
    r"^(?:(?P<coeff>[0-9a-fA-F]+)\*)?x(?:\^(?P<exp>\d+))?$|^(?P<const>[0-9a-fA-F]+)$"
)


def parse_sparse_poly(text: str) -> SparsePoly:
    """Parse ``"x^6+3*x^5+x^3"``-style text; coefficients are hexadecimal.

    Grammar: a ``+``-separated sum of terms, each ``[coeff*]x[^exp]`` or a
    bare hexadecimal constant. Whitespace is ignored.

    Raises:
        PolynomialSyntaxError: If a term does not match the grammar.

    Examples:
        >>> parse_sparse_poly("x^6+3*x^5+x^3").terms
        ((3, 1), (5, 3), (6, 1))
    """
    compact = "".join(text.split())
    if not compact:
        raise PolynomialSyntaxError(text, "empty input")
    if compact == "0":
        return SparsePoly()
    terms: list[tuple[int, int]] = []
    for chunk in compact.split("+"):
        match = _TERM_RE.match(chunk)
        if match is None:
            raise PolynomialSyntaxError(text, f"bad term {chunk!r}")
        if match.group("const") is not None:
            terms.append((0, int(match.group("const"), 16)))
            continue
        coeff = int(match.group("coeff"), 16) if match.group("coeff") else 1
        exponent = int(match.group("exp")) if match.group("exp") else 1
        terms.append((exponent, coeff))
    return SparsePoly(terms=tuple(terms))


@dataclass(frozen=True)
class FuncTable:
    """Value table of a function ``f: GF(q) -> GF(q)``; ``values[x] = f(x)``."""

    ctx: FieldCtx
    values: ElemArray

    def __post_init__(self) -> None:
        """Validate the length and freeze the array."""
        if self.values.shape != (self.ctx.q,):
            msg = f"table must have length {self.ctx.q}, got {self.values.shape}"
            raise PreconditionError(msg)
        self.values.flags.writeable = False

    def __eq__(self, other: object) -> bool:
        """Tables are equal when they share field and values."""
        if not isinstance(other, FuncTable):
            return NotImplemented
        return self.ctx == other.ctx and bool(
            np.array_equal(self.values, other.values)
        )

    def __hash__(self) -> int:
        """Hash on the field and the raw values."""
        return hash((self.ctx, self.values.tobytes()))


def evaluate(ctx: FieldCtx, p: SparsePoly, x: int) -> int:
    """Evaluate ``p`` at a single point; the zero polynomial gives 0."""
    total = 0
    for exponent, coeff in p.terms:
        total ^= gf2m.mul(ctx, coeff, gf2m.power(ctx, x, exponent))
    return total


def evaluate_array(ctx: FieldCtx, p: SparsePoly, xs: ElemArray) -> ElemArray:
    """Evaluate ``p`` at every element of ``xs``."""
    total = np.zeros(np.shape(xs), dtype=np.int64)
    for exponent, coeff in p.terms:
        total ^= gf2m.scale_array(ctx, coeff, gf2m.power_array(ctx, xs, exponent))
    return total


def table_from_poly(ctx: FieldCtx, p: SparsePoly) -> FuncTable:
    """Value table of the polynomial function ``p`` over ``ctx``."""
    p.check_field(ctx)
    return FuncTable(ctx=ctx, values=evaluate_array(ctx, p, gf2m.elements(ctx)))


def inverse_plus_g(ctx: FieldCtx, g: SparsePoly) -> FuncTable:
    """Value table of ``x^(q-2) + g(x)`` (so ``values[0] = g(0)``)."""
    g.check_field(ctx)
    xs = gf2m.elements(ctx)
    values = gf2m.power_array(ctx, xs, ctx.q - 2) ^ evaluate_array(ctx, g, xs)
    return FuncTable(ctx=ctx, values=values)


def inverse_plus_g_poly(ctx: FieldCtx, g: SparsePoly) -> SparsePoly:
    """``x^(q-2) + g`` as a polynomial over ``ctx``."""
    return SparsePoly.monomial(ctx.q - 2) + g


def normalize_p2(p: SparsePoly) -> SparsePoly:
    """Drop the constant term and every term whose degree is a power of 2.

    Examples:
        >>> str(normalize_p2(parse_sparse_poly("x^3+x^2+x+1")))
        'x^3'
    """
    return SparsePoly(
        terms=tuple(
            (e, c) for e, c in p.terms if e != 0 and not is_power_of_two(e)
        )
    )


def is_affine_plus_squares(p: SparsePoly) -> bool:
    """Whether ``p`` is empty after :func:`normalize_p2` (the "affine g" case)."""
    return normalize_p2(p).is_zero


def affine_transform(
    ctx: FieldCtx, f: FuncTable, a: int, b: int, c: int
) -> FuncTable:
    """Table of ``x -> c * f(a*x + b)``.

    Args:
        ctx: Field the table lives in.
        f: Function to transform.
        a: Nonzero inner scale.
        b: Inner shift.
        c: Nonzero outer scale.

    Returns:
        The transformed table; APN-ness and the spectrum are preserved.

    Raises:
        TransformError: If ``a`` or ``c`` is zero, or a parameter is not in
            the field.
    """
    if a == 0 or c == 0:
        msg = f"affine transform needs a != 0 and c != 0, got a={a}, c={c}"
        raise TransformError(msg)
    params = {"a": a, "b": b, "c": c}
    out_of_field = [name for name, v in params.items() if not 0 <= v < ctx.q]
    if out_of_field:
        msg = f"affine transform parameters {out_of_field} are not in {ctx}"
        raise TransformError(msg)
    xs = gf2m.elements(ctx)
    points = gf2m.scale_array(ctx, a, xs) ^ b
    return FuncTable(ctx=ctx, values=gf2m.scale_array(ctx, c, f.values[points]))


def scale_reduction(ctx: FieldCtx, a3: int) -> tuple[int, int]:
    """The ``(a, c)`` taking ``x^(q-2) + a3*x^3`` to ``x^(q-2) + x^3``.

    With ``a = a3^(-1/4)`` the substituted function is
    ``a3^(1/4) * (x^(q-2) + x^3)``, so the outer factor is ``c = a3^(-1/4)``.

    Raises:
        TransformError: If ``a3`` is zero.
    """
    if a3 == 0:
        msg = "a3 must be nonzero"
        raise TransformError(msg)
    root = gf2m.inv(ctx, gf2m.root_pow2(ctx, a3, 2))
    return root, root


def reduced_exponent(d: int, q: int) -> int:
    """Exponent in ``[1, q-1]`` giving the same function as ``x^d`` on GF(q).

    Examples:
        >>> reduced_exponent(17, 16)
        2
        >>> reduced_exponent(15, 16)
        15
    """
    if d <= 0:
        msg = f"exponent must be positive, got {d}"
        raise PreconditionError(msg)
    return (d - 1) % (q - 1) + 1


def binomial_orbits(ctx: FieldCtx, d: int) -> list[int]:
    """Smallest representative of each orbit of ``a -> a * u^(d+1)`` on GF(q)*.

    ``c * f(u x)`` with ``c = u`` keeps the inverse term of
    ``x^(q-2) + a x^d`` and multiplies ``a`` by ``u^(d+1)``.

    Args:
        ctx: Field of the coefficients.
        d: Exponent of the binomial term.

    Returns:
        ``gcd(d + 1, q - 1)`` representatives in increasing order, starting
        with 1.

    Raises:
        PreconditionError: If ``d < 1``.
    """
    if d < 1:
        msg = f"d must be at least 1, got {d}"
        raise PreconditionError(msg)
    nonzero = gf2m.elements(ctx)[1:]
    subgroup = np.unique(gf2m.power_array(ctx, nonzero, d + 1))
    visited = np.zeros(ctx.q, dtype=bool)
    representatives: list[int] = []
    for a in range(1, ctx.q):
        if visited[a]:
            continue
        representatives.append(a)
        visited[gf2m.scale_array(ctx, a, subgroup)] = True
    return representatives


def orbit_count_by_action(d: int, q: int) -> int:
    """``gcd(d + 1, q - 1)``: orbit count of the scaling action."""
    return gcd(d + 1, q - 1)


def quoted_orbit_count(d: int, q: int) -> int:
    """``gcd(d, q - 1)``: the count quoted for non-equivalent binomials."""
    return gcd(d, q - 1)
