"""Differential spectrum and APN predicates.

``f`` is APN when ``f(x) + f(x + a) = b`` has at most two solutions for
every ``a != 0`` and every ``b``. Rows of the difference distribution table
are counted with :func:`numpy.bincount` over blocks of ``a`` values, scanned
in increasing integer order so witnesses are deterministic.
"""

import logging
from collections.abc import Iterator

import numpy as np

from apnforge.domain import gf2m
from apnforge.domain.base import ForgeBaseModel
from apnforge.domain.gf2m import ElemArray, FieldCtx
from apnforge.domain.polyfun import (
    FuncTable,
    SparsePoly,
    is_power_of_two,
    table_from_poly,
)
from apnforge.exceptions import PreconditionError

logger = logging.getLogger(__name__)

APN_DELTA = 2
_BLOCK_CELLS = 1 << 22


class DeltaReport(ForgeBaseModel):
    """Differential uniformity of a function with a witnessing ``(a, b)``.

    Attributes:
        delta: Largest solution count over ``a != 0`` and all ``b``.
        witness_a: Smallest ``a`` attaining ``delta``.
        witness_b: Smallest ``b`` attaining ``delta`` for ``witness_a``.
        is_apn: ``delta <= 2``.
    """

    delta: int
    witness_a: int
    witness_b: int
    is_apn: bool


def _check_direction(ctx: FieldCtx, a: int) -> None:
    if not 0 < a < ctx.q:
        msg = f"direction a must be a nonzero element of {ctx}, got {a}"
        raise PreconditionError(msg)


def ddt_row(ctx: FieldCtx, f: FuncTable, a: int) -> ElemArray:
    """Counts ``#{x : f(x) + f(x + a) = b}`` for every ``b``.

    Args:
        ctx: Field of the table.
        f: The function.
        a: Nonzero input difference.

    Returns:
        Array of length ``q`` indexed by the output difference ``b``.

    Raises:
        PreconditionError: If ``a`` is zero or not a field element.
    """
    _check_direction(ctx, a)
    xs = gf2m.elements(ctx)
    return np.bincount(f.values ^ f.values[xs ^ a], minlength=ctx.q)


def ddt_row_max(ctx: FieldCtx, f: FuncTable, a: int) -> int:
    """Largest entry of :func:`ddt_row`.

    Examples:
        >>> from apnforge.domain.polyfun import SparsePoly, table_from_poly
        >>> ctx = gf2m.new_field(3)
        >>> ddt_row_max(ctx, table_from_poly(ctx, SparsePoly.monomial(3)), 1)
        2
    """
    return int(ddt_row(ctx, f, a).max())


def _row_blocks(ctx: FieldCtx, f: FuncTable) -> Iterator[tuple[int, ElemArray]]:
    """Yield ``(first_a, counts)`` with ``counts[i, b]`` for ``a = first_a + i``."""
    q = ctx.q
    xs = gf2m.elements(ctx)
    rows_per_block = max(1, _BLOCK_CELLS // q)
    for start in range(1, q, rows_per_block):
        directions = np.arange(start, min(q, start + rows_per_block), dtype=np.int64)
        derivs = f.values[None, :] ^ f.values[directions[:, None] ^ xs[None, :]]
        offsets = np.arange(len(directions), dtype=np.int64)[:, None] * q
        counts = np.bincount(
            (derivs + offsets).ravel(), minlength=len(directions) * q
        ).reshape(len(directions), q)
        yield start, counts


def differential_uniformity(ctx: FieldCtx, f: FuncTable) -> DeltaReport:
    """Full scan of the difference distribution table.

    Examples:
        >>> from apnforge.domain.polyfun import SparsePoly, table_from_poly
        >>> ctx = gf2m.new_field(3)
        >>> differential_uniformity(ctx, table_from_poly(ctx, SparsePoly.monomial(3)))
        DeltaReport(delta=2, witness_a=1, witness_b=1, is_apn=True)
    """
    best = (-1, 0, 0)
    for start, counts in _row_blocks(ctx, f):
        row_max = counts.max(axis=1)
        i = int(np.argmax(row_max))
        if row_max[i] > best[0]:
            best = (int(row_max[i]), start + i, int(np.argmax(counts[i])))
    delta, witness_a, witness_b = best
    return DeltaReport(
        delta=delta,
        witness_a=witness_a,
        witness_b=witness_b,
        is_apn=delta <= APN_DELTA,
    )


def differential_spectrum(ctx: FieldCtx, f: FuncTable) -> dict[int, int]:
    """Multiplicity of each count in the table over all ``a != 0`` and ``b``.

    Examples:
        >>> from apnforge.domain.polyfun import SparsePoly, table_from_poly
        >>> ctx = gf2m.new_field(3)
        >>> differential_spectrum(ctx, table_from_poly(ctx, SparsePoly.monomial(3)))
        {0: 28, 2: 28}
    """
    totals = np.zeros(ctx.q + 1, dtype=np.int64)
    for _, counts in _row_blocks(ctx, f):
        totals += np.bincount(counts.ravel(), minlength=ctx.q + 1)
    return {int(v): int(n) for v, n in enumerate(totals) if n}


def is_apn(ctx: FieldCtx, f: FuncTable) -> bool:
    """APN verdict, aborting at the first block with a count above 2."""
    for start, counts in _row_blocks(ctx, f):
        if counts.max() > APN_DELTA:
            logger.debug("not APN: count above 2 in block starting at a=%d", start)
            return False
    return True


def is_apn_via_surface(ctx: FieldCtx, f_poly: SparsePoly) -> bool:
    """APN verdict from rational points of ``f(x0)+f(x1)+f(x2)+f(x0+x1+x2) = 0``.

    The function is APN iff every rational point lies on
    ``(x0 + x1)(x1 + x2)(x0 + x2) = 0``. The equation is symmetric in the
    three variables, so only ``x0 < x1 < x2`` is scanned.

    Args:
        ctx: Field to scan.
        f_poly: The function as a polynomial without constant or
            power-of-two degree terms.

    Returns:
        Whether no rational point lies off the three planes.

    Raises:
        PreconditionError: If ``f_poly`` has a constant term or a term whose
            degree is a power of 2.
    """
    bad = [e for e, _ in f_poly.terms if e == 0 or is_power_of_two(e)]
    if bad:
        msg = f"polynomial has constant or power-of-two degree terms: {bad}"
        raise PreconditionError(msg)
    values = table_from_poly(ctx, f_poly).values
    xs = gf2m.elements(ctx)
    for x0 in range(ctx.q - 2):
        x1 = xs[x0 + 1 :, None]
        x2 = xs[None, :]
        total = values[x0] ^ values[x1] ^ values[x2] ^ values[x0 ^ x1 ^ x2]
        if np.any((total == 0) & (x2 > x1)):
            return False
    return True
