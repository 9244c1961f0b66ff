"""Arithmetic in GF(2^m) for 2 <= m <= 25.

Elements are plain integers in ``[0, q)``: bit ``i`` is the coefficient of
``x^i`` in the polynomial basis defined by the reduction polynomial. Scalar
operations use carry-less multiplication followed by reduction. The array
operations used by the bulk loops switch to log/antilog tables for
``m <= 16`` and fall back to a vectorised carry-less product above that.

Examples:
    >>> ctx = new_field(3)
    >>> bin(ctx.red_poly)
    '0b1011'
    >>> mul(ctx, 0b010, 0b100)
    3
"""

import logging
from dataclasses import dataclass
from functools import cache

import numpy as np
import numpy.typing as npt
from pydantic import model_validator

from apnforge.domain.base import ForgeBaseModel
from apnforge.exceptions import ApnForgeDomainError, PreconditionError

logger = logging.getLogger(__name__)

MIN_M = 2
MAX_M = 25
LOG_TABLE_MAX_M = 16

ElemArray = npt.NDArray[np.int64]


class FieldConstructionError(ApnForgeDomainError):
    """Raised when a field context cannot be built."""

    def __init__(self, message: str) -> None:
        """Initialize the error.

        Args:
            message: Why the field could not be built.
        """
        super().__init__(f"Cannot build field: {message}")


class FieldDomainError(ApnForgeDomainError, ZeroDivisionError):
    """Raised when inverting zero at the field layer."""


# ---------- GF(2)[x] on integer bit vectors


def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2)[x] bit vectors."""
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        b >>= 1
    return result


def poly_mod(a: int, modulus: int) -> int:
    """Remainder of ``a`` divided by ``modulus`` in GF(2)[x]."""
    deg_m = modulus.bit_length() - 1
    while a and a.bit_length() - 1 >= deg_m:
        a ^= modulus << (a.bit_length() - 1 - deg_m)
    return a


def poly_mulmod(a: int, b: int, modulus: int) -> int:
    """Product ``a*b`` reduced modulo ``modulus`` in GF(2)[x]."""
    return poly_mod(clmul(a, b), modulus)


def poly_gcd(a: int, b: int) -> int:
    """Greatest common divisor in GF(2)[x]."""
    while b:
        a, b = b, poly_mod(a, b)
    return a


def is_irreducible(poly: int) -> bool:
    """Ben-Or irreducibility test over GF(2).

    ``poly`` of degree ``m`` is irreducible iff
    ``gcd(x^(2^i) - x, poly) = 1`` for every ``1 <= i <= m/2``.

    Examples:
        >>> is_irreducible(0b1011)
        True
        >>> is_irreducible(0b1111)
        False
    """
    degree = poly.bit_length() - 1
    if degree < 1:
        return False
    if not poly & 1:
        return poly == 0b10
    x = 0b10
    power_of_x = x
    for _ in range(degree // 2):
        power_of_x = poly_mulmod(power_of_x, power_of_x, poly)
        if poly_gcd(power_of_x ^ x, poly) != 1:
            return False
    return True


def _check_degree_range(m: int) -> None:
    if not MIN_M <= m <= MAX_M:
        msg = f"extension degree m={m} outside supported range {MIN_M}..{MAX_M}"
        raise FieldConstructionError(msg)


@cache
def default_red_poly(m: int) -> int:
    """Lexicographically smallest irreducible polynomial of degree ``m``.

    Examples:
        >>> [default_red_poly(m) for m in (2, 3, 4, 5)]
        [7, 11, 19, 37]
    """
    _check_degree_range(m)
    for candidate in range((1 << m) | 1, 1 << (m + 1), 2):
        if is_irreducible(candidate):
            return candidate
    msg = f"no irreducible polynomial of degree {m}"  # pragma: no cover
    raise FieldConstructionError(msg)  # pragma: no cover


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in increasing order."""
    factors: list[int] = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            factors.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        factors.append(n)
    return factors


# ---------- field context


class FieldCtx(ForgeBaseModel):
    """Immutable description of GF(2^m).

    Attributes:
        m: Extension degree.
        red_poly: Irreducible reduction polynomial; bit ``i`` is the
            coefficient of ``x^i`` and bit ``m`` is set.
    """

    m: int
    red_poly: int

    @model_validator(mode="after")
    def _check_modulus(self) -> "FieldCtx":
        _check_degree_range(self.m)
        if self.red_poly.bit_length() - 1 != self.m:
            msg = f"polynomial 0x{self.red_poly:x} does not have degree {self.m}"
            raise FieldConstructionError(msg)
        if not is_irreducible(self.red_poly):
            msg = f"polynomial 0x{self.red_poly:x} is reducible over GF(2)"
            raise FieldConstructionError(msg)
        return self

    @property
    def q(self) -> int:
        """Number of field elements."""
        return 1 << self.m

    @property
    def order(self) -> int:
        """Order of the multiplicative group."""
        return (1 << self.m) - 1

    def __str__(self) -> str:
        """Render as ``GF(2^m)/0x..``."""
        return f"GF(2^{self.m})/0x{self.red_poly:x}"


def new_field(m: int, red_poly: int | None = None) -> FieldCtx:
    """Build a field context, defaulting to the smallest irreducible.

    Args:
        m: Extension degree, ``2 <= m <= 25``.
        red_poly: Optional reduction polynomial of degree ``m``.

    Returns:
        The validated field context.

    Raises:
        FieldConstructionError: If ``m`` is out of range or the polynomial
            has the wrong degree or is reducible.
    """
    _check_degree_range(m)
    if red_poly is None:
        red_poly = default_red_poly(m)
    return FieldCtx(m=m, red_poly=red_poly)


# ---------- scalar arithmetic


def add(a: int, b: int) -> int:
    """Field addition (XOR)."""
    return a ^ b


def mul(ctx: FieldCtx, a: int, b: int) -> int:
    """Field product: carry-less product reduced by ``ctx.red_poly``."""
    return poly_mod(clmul(a, b), ctx.red_poly)


def power(ctx: FieldCtx, a: int, e: int) -> int:
    """Square-and-multiply exponentiation, with ``0^0 = 1``.

    Raises:
        PreconditionError: If ``e`` is negative.
    """
    if e < 0:
        msg = f"exponent must be non-negative, got {e}"
        raise PreconditionError(msg)
    result = 1
    base = a
    while e:
        if e & 1:
            result = mul(ctx, result, base)
        base = mul(ctx, base, base)
        e >>= 1
    return result


def inv(ctx: FieldCtx, a: int) -> int:
    """Multiplicative inverse of a nonzero element.

    Raises:
        FieldDomainError: If ``a`` is zero.
    """
    if a == 0:
        msg = "zero has no inverse"
        raise FieldDomainError(msg)
    return power(ctx, a, ctx.q - 2)


def root_pow2(ctx: FieldCtx, a: int, k: int) -> int:
    """The unique ``r`` with ``r^(2^k) = a`` (Frobenius is bijective)."""
    return power(ctx, a, 1 << ((ctx.m - k) % ctx.m))


def multiplicative_order(ctx: FieldCtx, a: int) -> int:
    """Order of a nonzero element in the multiplicative group.

    Raises:
        FieldDomainError: If ``a`` is zero.
    """
    if a == 0:
        msg = "zero has no multiplicative order"
        raise FieldDomainError(msg)
    order = ctx.order
    for p in prime_factors(ctx.order):
        while order % p == 0 and power(ctx, a, order // p) == 1:
            order //= p
    return order


def primitive_element(ctx: FieldCtx) -> int:
    """Smallest element (as an integer) generating the multiplicative group."""
    factors = prime_factors(ctx.order)
    for candidate in range(2, ctx.q):
        if all(power(ctx, candidate, ctx.order // p) != 1 for p in factors):
            return candidate
    msg = f"{ctx} has no primitive element"  # pragma: no cover
    raise FieldConstructionError(msg)  # pragma: no cover


# ---------- array arithmetic


@dataclass(frozen=True)
class FieldTables:
    """Precomputed per-field data for the array operations.

    ``exp`` has length ``2(q-1)`` so that a sum of two logarithms can index it
    without reduction; ``log[0]`` is a placeholder and must be masked.
    """

    generator: int
    exp: ElemArray | None
    log: ElemArray | None

    @property
    def has_logs(self) -> bool:
        """Whether the log/antilog fast path is available."""
        return self.exp is not None


def clmul_array(ctx: FieldCtx, a: npt.ArrayLike, b: npt.ArrayLike) -> ElemArray:
    """Vectorised carry-less field product (broadcasting)."""
    left, right = np.broadcast_arrays(
        np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
    )
    acc = np.zeros(left.shape, dtype=np.int64)
    for i in range(ctx.m):
        acc ^= np.where((right >> i) & 1, left << i, 0)
    for i in range(2 * ctx.m - 2, ctx.m - 1, -1):
        acc ^= np.where((acc >> i) & 1, ctx.red_poly << (i - ctx.m), 0)
    return acc


@cache
def field_tables(ctx: FieldCtx) -> FieldTables:
    """Build (once per field) the generator and, for small m, log tables."""
    generator = primitive_element(ctx)
    if ctx.m > LOG_TABLE_MAX_M:
        return FieldTables(generator=generator, exp=None, log=None)
    logger.debug("building log/antilog tables for %s", ctx)
    order = ctx.order
    exp = np.empty(order, dtype=np.int64)
    exp[0] = 1
    filled = 1
    while filled < order:
        step = min(filled, order - filled)
        exp[filled : filled + step] = clmul_array(
            ctx, exp[:step], power(ctx, generator, filled)
        )
        filled += step
    log = np.zeros(ctx.q, dtype=np.int64)
    log[exp] = np.arange(order, dtype=np.int64)
    return FieldTables(
        generator=generator, exp=np.concatenate((exp, exp)), log=log
    )


def elements(ctx: FieldCtx) -> ElemArray:
    """All field elements ``0..q-1`` as an array."""
    return np.arange(ctx.q, dtype=np.int64)


def mul_array(ctx: FieldCtx, a: npt.ArrayLike, b: npt.ArrayLike) -> ElemArray:
    """Vectorised field product; bit-identical to :func:`clmul_array`."""
    tables = field_tables(ctx)
    if tables.exp is None or tables.log is None:
        return clmul_array(ctx, a, b)
    left = np.asarray(a, dtype=np.int64)
    right = np.asarray(b, dtype=np.int64)
    product = tables.exp[tables.log[left] + tables.log[right]]
    return np.where((left == 0) | (right == 0), 0, product)


def scale_array(ctx: FieldCtx, c: int, values: npt.ArrayLike) -> ElemArray:
    """Multiply every element of ``values`` by the constant ``c``."""
    return mul_array(ctx, np.int64(c), values)


def power_array(ctx: FieldCtx, values: npt.ArrayLike, e: int) -> ElemArray:
    """Vectorised ``x^e`` with the convention ``0^0 = 1``, ``0^e = 0``."""
    if e < 0:
        msg = f"exponent must be non-negative, got {e}"
        raise PreconditionError(msg)
    xs = np.asarray(values, dtype=np.int64)
    if e == 0:
        return np.ones(xs.shape, dtype=np.int64)
    tables = field_tables(ctx)
    if tables.exp is not None and tables.log is not None:
        reduced = (tables.log[xs] * (e % ctx.order)) % ctx.order
        return np.where(xs == 0, 0, tables.exp[reduced])
    reduced_e = e % ctx.order or ctx.order
    result = np.ones(xs.shape, dtype=np.int64)
    base = xs
    while reduced_e:
        if reduced_e & 1:
            result = clmul_array(ctx, result, base)
        base = clmul_array(ctx, base, base)
        reduced_e >>= 1
    return result
