"""Test suite for differential uniformity."""

import random

import numpy as np
import pytest

from apnforge.domain import apn, gf2m
from apnforge.domain.apn import DeltaReport
from apnforge.domain.polyfun import (
    FuncTable,
    SparsePoly,
    binomial_orbits,
    inverse_plus_g,
    inverse_plus_g_poly,
    is_power_of_two,
    parse_sparse_poly,
    table_from_poly,
)
from apnforge.exceptions import PreconditionError


def test_ddt_row_counts_every_x_once() -> None:
    """Test that a row of the table sums to q and has even entries."""
    ctx = gf2m.new_field(5)
    f = inverse_plus_g(ctx, parse_sparse_poly("x^6+x^3"))

    row = apn.ddt_row(ctx, f, 9)

    assert row.sum() == ctx.q
    assert np.all(row % 2 == 0)


def test_ddt_row_rejects_zero_direction() -> None:
    """Test that a = 0 is refused."""
    ctx = gf2m.new_field(3)
    f = table_from_poly(ctx, SparsePoly.monomial(3))

    with pytest.raises(PreconditionError):
        apn.ddt_row(ctx, f, 0)
    with pytest.raises(PreconditionError):
        apn.ddt_row(ctx, f, ctx.q)


def test_cube_is_apn_over_gf8() -> None:
    """Test the cube function over GF(8) with its deterministic witness."""
    ctx = gf2m.new_field(3)
    f = table_from_poly(ctx, SparsePoly.monomial(3))

    assert apn.differential_uniformity(ctx, f) == DeltaReport(
        delta=2, witness_a=1, witness_b=1, is_apn=True
    )
    assert apn.is_apn(ctx, f)


@pytest.mark.parametrize(("m", "expected"), [(3, 2), (4, 4), (5, 2), (6, 4)])
def test_inverse_function_uniformity(m: int, expected: int) -> None:
    """Test that x^(q-2) is APN for odd m and 4-uniform for even m."""
    ctx = gf2m.new_field(m)
    f = inverse_plus_g(ctx, SparsePoly())

    report = apn.differential_uniformity(ctx, f)

    assert report.delta == expected
    assert report.is_apn is (expected == 2)
    assert apn.is_apn(ctx, f) is report.is_apn


def test_witness_attains_delta() -> None:
    """Test that the reported (a, b) actually reaches delta."""
    ctx = gf2m.new_field(4)
    f = inverse_plus_g(ctx, parse_sparse_poly("x^5"))

    report = apn.differential_uniformity(ctx, f)
    row = apn.ddt_row(ctx, f, report.witness_a)

    assert row[report.witness_b] == report.delta
    assert int(np.argmax(row)) == report.witness_b
    for a in range(1, report.witness_a):
        assert apn.ddt_row_max(ctx, f, a) < report.delta


def test_differential_spectrum_of_cube() -> None:
    """Test the spectrum of x^3 over GF(8)."""
    ctx = gf2m.new_field(3)

    spectrum = apn.differential_spectrum(
        ctx, table_from_poly(ctx, SparsePoly.monomial(3))
    )

    assert spectrum == {0: 28, 2: 28}


def test_differential_spectrum_covers_whole_table() -> None:
    """Test that the spectrum counts (q - 1) * q cells and q per row."""
    ctx = gf2m.new_field(6)
    f = inverse_plus_g(ctx, parse_sparse_poly("3*x^7"))

    spectrum = apn.differential_spectrum(ctx, f)

    assert sum(spectrum.values()) == (ctx.q - 1) * ctx.q
    assert sum(v * n for v, n in spectrum.items()) == (ctx.q - 1) * ctx.q
    assert max(spectrum) == apn.differential_uniformity(ctx, f).delta


def test_blocks_agree_with_single_rows(monkeypatch: pytest.MonkeyPatch) -> None:
    """Test that small blocks give the same result as the default size."""
    ctx = gf2m.new_field(5)
    f = inverse_plus_g(ctx, parse_sparse_poly("x^9+x^3"))
    expected = apn.differential_uniformity(ctx, f)

    monkeypatch.setattr(apn, "_BLOCK_CELLS", 3 * ctx.q)

    assert apn.differential_uniformity(ctx, f) == expected
    assert apn.is_apn(ctx, f) is expected.is_apn


@pytest.mark.parametrize(
    ("m", "text"),
    [
        (3, "x^3"),
        (4, "x^3"),
        (4, "x^5"),
        (4, "x^14+x^3"),
        (5, "x^30+x^5"),
        (5, "x^5+x^3"),
    ],
)
def test_surface_criterion_agrees_with_table_scan(m: int, text: str) -> None:
    """Test that the rational point criterion gives the same verdict."""
    ctx = gf2m.new_field(m)
    p = parse_sparse_poly(text)

    assert apn.is_apn_via_surface(ctx, p) is apn.is_apn(ctx, table_from_poly(ctx, p))


def test_surface_criterion_rejects_power_of_two_terms() -> None:
    """Test that constant and power-of-two degree terms are refused."""
    ctx = gf2m.new_field(4)

    with pytest.raises(PreconditionError):
        apn.is_apn_via_surface(ctx, parse_sparse_poly("x^3+x^2"))
    with pytest.raises(PreconditionError):
        apn.is_apn_via_surface(ctx, parse_sparse_poly("x^3+1"))


def _random_normalized_poly(rng: random.Random, q: int) -> SparsePoly:
    exponents = [e for e in range(3, 2 * q) if not is_power_of_two(e)]
    return SparsePoly.from_coefficients(
        {e: rng.randrange(1, q) for e in rng.sample(exponents, rng.randint(1, 4))}
    )


@pytest.mark.parametrize("m", [3, 4])
def test_surface_criterion_agrees_on_random_polynomials(m: int) -> None:
    """Test both verdicts on 100 seeded random normalized polynomials."""
    rng = random.Random(m)
    ctx = gf2m.new_field(m)

    for _ in range(100):
        p = _random_normalized_poly(rng, ctx.q)
        expected = apn.is_apn(ctx, table_from_poly(ctx, p))
        assert apn.is_apn_via_surface(ctx, p) is expected, str(p)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_surface_criterion_agrees_on_binomial_representatives(m: int) -> None:
    """Test both verdicts on x^(q-2) + a x^d for every orbit representative."""
    ctx = gf2m.new_field(m)

    for d in (e for e in range(3, 13) if not is_power_of_two(e)):
        for a in binomial_orbits(ctx, d):
            p = inverse_plus_g_poly(ctx, SparsePoly.monomial(d, a))
            expected = apn.is_apn(ctx, inverse_plus_g(ctx, SparsePoly.monomial(d, a)))
            assert apn.is_apn_via_surface(ctx, p) is expected, (d, a)


def test_early_abort_verdict_matches_full_scan_on_random_tables() -> None:
    """Test is_apn against delta == 2 on 200 seeded random value tables."""
    rng = np.random.default_rng(2024)

    for i in range(200):
        ctx = gf2m.new_field(3 + i % 4)
        f = FuncTable(ctx=ctx, values=rng.integers(0, ctx.q, ctx.q))
        assert apn.is_apn(ctx, f) is (apn.differential_uniformity(ctx, f).delta == 2)


@pytest.mark.parametrize("m", range(3, 8))
def test_cube_is_apn_in_every_small_field(m: int) -> None:
    """Test that x^3 is APN for m = 3..7."""
    ctx = gf2m.new_field(m)
    cube = table_from_poly(ctx, SparsePoly.monomial(3))

    report = apn.differential_uniformity(ctx, cube)

    assert report.delta == 2
    assert report.is_apn
