"""Point-count bounds and non-APN thresholds in exact integer arithmetic.

Every quantity involving ``q^(3/2)`` is handled as ``a + b * sqrt(q)`` with
integer ``a`` and ``b``. Its sign is decided without floating point: equal
signs decide directly, mixed signs are settled by comparing ``a^2`` with
``b^2 * q``.
"""

from fractions import Fraction
from math import isqrt

from apnforge.domain.base import ForgeBaseModel
from apnforge.exceptions import ApnForgeDomainError

MAX_SCAN_M = 256
MONOTONE_WINDOW = 16


class BoundsError(ApnForgeDomainError):
    """Raised for bound queries outside their hypotheses."""


def _check(d: int, m: int, min_d: int = 3) -> None:
    if d < min_d or m < 1:
        msg = f"bounds need d >= {min_d} and m >= 1, got d={d}, m={m}"
        raise BoundsError(msg)


def sign_with_root(a: int, b: int, q: int) -> int:
    """Sign of ``a + b * sqrt(q)`` for integers ``a, b`` and ``q >= 0``.

    Examples:
        >>> [sign_with_root(-3, 1, q) for q in (8, 9, 10)]
        [-1, 0, 1]
    """
    if a >= 0 and b >= 0:
        return 0 if a == 0 and (b == 0 or q == 0) else 1
    if a <= 0 and b <= 0:
        return 0 if a == 0 and (b == 0 or q == 0) else -1
    # mixed signs: the larger magnitude wins
    diff = a * a - b * b * q
    if diff == 0:
        return 0
    return (1 if a > 0 else -1) if diff > 0 else (1 if b > 0 else -1)


def ceil_sqrt(n: int) -> int:
    """Smallest integer ``r`` with ``r * r >= n``."""
    return 0 if n <= 0 else isqrt(n - 1) + 1


def _ceil_times_q32(c: int, q: int) -> int:
    """``ceil(c * q^(3/2))`` for ``c >= 0``."""
    return ceil_sqrt(c * c * q * q * q)


def _interval(q: int, radical_coeff: int, linear_coeff: int) -> tuple[int, int]:
    center = q * q + q + 1
    width = _ceil_times_q32(radical_coeff, q) + linear_coeff * q
    return max(0, center - width), center + width


def upper_bound_apn(d: int, m: int) -> int:
    """Most rational points the surface can have when the function is APN.

    Examples:
        >>> upper_bound_apn(5, 3)
        200
    """
    _check(d, m)
    q = 1 << m
    return 4 * d * q + 4 * q + 8


def lw_interval(d: int, m: int) -> tuple[int, int]:
    """``q^2 + q + 1 -/+ (d(d-1) q^(3/2) + 18(d+4)^4 q)``, widened to integers.

    Examples:
        >>> lw_interval(3, 2)
        (0, 172941)
    """
    _check(d, m)
    return _interval(1 << m, d * (d - 1), 18 * (d + 4) ** 4)


def betti_interval(d: int, m: int) -> tuple[int, int]:
    """Point interval for surfaces with isolated singularities.

    Width ``d(d-1) q^(3/2) + (2 + d - d^2 + d^3) q``; the caller vouches for
    the isolated-singularity hypothesis.
    """
    _check(d, m)
    return _interval(1 << m, d * (d - 1), 2 + d - d * d + d**3)


def not_apn_guaranteed(d: int, m: int, *, isolated: bool = False) -> bool:
    """Whether the point bounds force ``x^(q-2) + g`` to be non-APN.

    Without ``isolated`` this is
    ``q^2 - d(d-1) q^(3/2) - (18(d+4)^4 + 4d + 3) q + 1 > 0`` and ``d >= 5``.
    With ``isolated`` the lower end of :func:`betti_interval` must exceed
    :func:`upper_bound_apn`.
    """
    _check(d, m)
    q = 1 << m
    b = -d * (d - 1) * q
    if isolated:
        linear = 2 + d - d * d + d**3
        a = q * q + q + 1 - linear * q - (4 * d * q + 4 * q + 8)
        return sign_with_root(a, b, q) > 0
    if d < 5:  # noqa: PLR2004
        return False
    a = q * q - (18 * (d + 4) ** 4 + 4 * d + 3) * q + 1
    return sign_with_root(a, b, q) > 0


def crossover_exponent(d: int, *, isolated: bool = False) -> int:
    """Smallest ``m`` from which :func:`not_apn_guaranteed` holds for good.

    The first ``True`` must be followed by a run of ``MONOTONE_WINDOW`` more.

    Raises:
        BoundsError: If ``d`` is too small or no crossover is found.

    Examples:
        >>> crossover_exponent(5), crossover_exponent(29)
        (17, 25)
    """
    _check(d, 1, min_d=3 if isolated else 5)
    candidate: int | None = None
    for m in range(1, MAX_SCAN_M + 1):
        holds = not_apn_guaranteed(d, m, isolated=isolated)
        if not holds:
            candidate = None
            continue
        if candidate is None:
            candidate = m
        if m - candidate >= MONOTONE_WINDOW:
            return candidate
    msg = f"no crossover below m={MAX_SCAN_M} for d={d}"
    raise BoundsError(msg)


def not_apn_reference(d: int, m: int) -> bool:
    """Decimal-constant sufficient condition, evaluated exactly.

    ``sqrt(q) > 70 + 33.15 d + 4.773 d^2`` and ``d < 0.45 q^(1/4) - 3.5``.
    Never authoritative; :func:`not_apn_guaranteed` is.
    """
    _check(d, m)
    q = 1 << m
    threshold = 70 + Fraction(3315, 100) * d + Fraction(4773, 1000) * d * d
    root_ok = q > threshold * threshold
    quarter = (d + Fraction(7, 2)) / Fraction(45, 100)
    return root_ok and q > quarter**4


def sharp_threshold_holds(d: int, m: int) -> bool:
    """``q > d^4``, the simple sufficient condition for isolated singularities."""
    _check(d, m)
    return (1 << m) > d**4


class BoundProfile(ForgeBaseModel):
    """All bounds for one ``(d, m)`` pair."""

    d: int
    m: int
    q: int
    apn_upper: int
    lw_lo: int
    lw_hi: int
    betti_lo: int
    betti_hi: int
    not_apn_general: bool
    not_apn_isolated: bool


def profile(d: int, m: int) -> BoundProfile:
    """Evaluate every bound for ``(d, m)``.

    Args:
        d: Degree of ``g`` after dropping power-of-two terms, at least 3.
        m: Extension degree.

    Returns:
        Intervals, the APN upper bound and both non-APN verdicts.
    """
    lw_lo, lw_hi = lw_interval(d, m)
    betti_lo, betti_hi = betti_interval(d, m)
    return BoundProfile(
        d=d,
        m=m,
        q=1 << m,
        apn_upper=upper_bound_apn(d, m),
        lw_lo=lw_lo,
        lw_hi=lw_hi,
        betti_lo=betti_lo,
        betti_hi=betti_hi,
        not_apn_general=not_apn_guaranteed(d, m),
        not_apn_isolated=not_apn_guaranteed(d, m, isolated=True),
    )
