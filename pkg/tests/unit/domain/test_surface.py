"""Test suite for the surface of x^(q-2) + g and its rational points."""

import itertools
import random

import numpy as np
import pytest

from apnforge.domain import gf2m, surface
from apnforge.domain.gf2m import ElemArray
from apnforge.domain.polyfun import SparsePoly, parse_sparse_poly
from apnforge.domain.surface import (
    AppendixCase,
    AppendixCoeffs,
    NonExactDivisionError,
    ProjPoint,
    ResultantError,
    SingularCase,
    SingularRecord,
    TriPoly,
    TriPolyHom,
)
from apnforge.exceptions import PreconditionError

CUBE_SINGULAR = [
    (0, 0, 1, 0),
    (0, 1, 0, 0),
    (0, 1, 1, 0),
    (1, 0, 0, 0),
    (1, 0, 1, 0),
    (1, 1, 0, 0),
    (1, 1, 1, 1),
]


def _grid(ctx: gf2m.FieldCtx) -> tuple[ElemArray, ElemArray, ElemArray]:
    xs = gf2m.elements(ctx)
    x0, x1, x2 = np.meshgrid(xs, xs, xs, indexing="ij")
    return x0, x1, x2


def test_divide_by_linear_sum_exact() -> None:
    """Test that (x0^2 + x0 x1) / (x0 + x1) = x0."""
    poly = TriPoly({(2, 0, 0): 1, (1, 1, 0): 1})

    assert poly.divide_by_linear_sum(0, 1) == TriPoly({(1, 0, 0): 1})


def test_divide_by_linear_sum_rejects_remainder() -> None:
    """Test that a non-multiple of x0 + x1 raises NonExactDivisionError."""
    with pytest.raises(NonExactDivisionError):
        TriPoly({(1, 0, 0): 1}).divide_by_linear_sum(0, 1)


def test_sparse_multi_rejects_wrong_arity() -> None:
    """Test that exponent tuples must match the variable count."""
    with pytest.raises(PreconditionError):
        TriPoly({(1, 0): 1})


def test_tri_poly_hom_rejects_mixed_degrees() -> None:
    """Test that a non-homogeneous polynomial is refused."""
    with pytest.raises(PreconditionError):
        TriPolyHom({(1, 0, 0, 0): 1, (0, 0, 0, 2): 1})


def test_derivative_drops_even_exponents() -> None:
    """Test the characteristic-2 formal derivative."""
    poly = TriPoly({(3, 1, 0): 5, (2, 0, 1): 1, (1, 0, 0): 7})

    assert poly.derivative(0) == TriPoly({(2, 1, 0): 5, (0, 0, 0): 7})


def test_phi_of_cube_is_one() -> None:
    """Test that the cube gives phi = 1 and the known closure."""
    g = SparsePoly.monomial(3)

    assert surface.phi_poly(g) == TriPoly({(0, 0, 0): 1})
    assert str(surface.homogenize(g)) == "x0^2*x1*x2+x0*x1^2*x2+x0*x1*x2^2+z^4"


@pytest.mark.parametrize("text", ["x^5", "x^6+x^5+x^3", "3*x^7+x^4+x", "x^9+2*x^6"])
def test_phi_times_linear_factors_gives_numerator(text: str) -> None:
    """Test N = phi (x0 + x1)(x1 + x2)(x0 + x2) pointwise over GF(16)."""
    ctx = gf2m.new_field(4)
    g = parse_sparse_poly(text)
    x0, x1, x2 = _grid(ctx)

    numerator = surface.assemble_numerator(g).evaluate(ctx, x0, x1, x2)
    phi = surface.phi_poly(g).evaluate(ctx, x0, x1, x2)
    factors = gf2m.mul_array(
        ctx, gf2m.mul_array(ctx, x0 ^ x1, x1 ^ x2), x0 ^ x2
    )

    assert np.array_equal(numerator, gf2m.mul_array(ctx, phi, factors))


def test_phi_is_symmetric() -> None:
    """Test that phi is invariant under every permutation of x0, x1, x2."""
    phi = surface.phi_poly(parse_sparse_poly("x^11+5*x^7+x^6+x^3"))

    for perm in itertools.permutations(range(3)):
        assert phi.permute(perm) == phi


def test_phi_degree_is_d_minus_three() -> None:
    """Test that phi has total degree d - 3."""
    for d in (3, 5, 6, 7, 9, 12):
        assert surface.phi_poly(SparsePoly.monomial(d)).total_degree == d - 3


def test_phi_rejects_affine_g() -> None:
    """Test that affine-plus-squares g has no surface."""
    with pytest.raises(PreconditionError):
        surface.phi_poly(parse_sparse_poly("x^4+x^2+x+1"))


def _random_g(rng: random.Random) -> tuple[SparsePoly, int]:
    d = rng.choice([e for e in range(3, 13) if e & (e - 1)])
    q = 1 << rng.randint(2, 8)
    coeffs = {e: rng.randrange(q) for e in range(d)}
    coeffs[d] = rng.randrange(1, q)
    return SparsePoly.from_coefficients(coeffs), d


def test_phi_division_is_exact_for_random_g() -> None:
    """Test exact division, degrees and symmetry for 200 seeded random g."""
    rng = random.Random(200)

    for _ in range(200):
        g, d = _random_g(rng)
        phi = surface.phi_poly(g)
        assert surface.assemble_numerator(g).total_degree == d, str(g)
        assert phi.total_degree == d - 3, str(g)
        for perm in itertools.permutations(range(3)):
            assert phi.permute(perm) == phi, str(g)


def test_surface_degree_ignores_power_of_two_terms() -> None:
    """Test that d comes from the normalized polynomial."""
    assert surface.surface_degree(parse_sparse_poly("x^8+x^5+x^3")) == 5


@pytest.mark.parametrize(("m", "text"), [(2, "x^3"), (3, "x^5+x^3"), (4, "x^6+x^5")])
def test_count_affine_points_matches_brute_force(m: int, text: str) -> None:
    """Test the sliced count against evaluation on the whole cube."""
    ctx = gf2m.new_field(m)
    g = parse_sparse_poly(text)
    values = surface.surface_affine_poly(g).evaluate(ctx, *_grid(ctx))

    assert surface.count_affine_points(ctx, g) == int(np.count_nonzero(values == 0))


def test_count_affine_points_with_workers() -> None:
    """Test that threading the slices does not change the count."""
    ctx = gf2m.new_field(5)
    g = parse_sparse_poly("x^6+x^5+x^3")

    threaded = surface.count_affine_points(ctx, g, workers=3)

    assert threaded == surface.count_affine_points(ctx, g)


@pytest.mark.parametrize(
    ("m", "text"), [(2, "x^3"), (3, "x^5"), (3, "x^6+x^5+x^3"), (4, "x^7+x^3")]
)
def test_projective_count_matches_direct_enumeration(m: int, text: str) -> None:
    """Test affine plus infinity against evaluation on every point of P^3."""
    ctx = gf2m.new_field(m)
    g = parse_sparse_poly(text)

    assert surface.count_projective_points(
        ctx, g
    ) == surface.count_projective_points_direct(ctx, g)


@pytest.mark.parametrize(
    ("m", "text"), [(3, "x^3"), (3, "x^5+x^3"), (4, "x^6+x^5+x^3"), (5, "x^7")]
)
def test_infinity_decomposition_agrees(m: int, text: str) -> None:
    """Test the four-lines decomposition of the points at infinity."""
    ctx = gf2m.new_field(m)
    g = parse_sparse_poly(text)

    assert surface.count_at_infinity_decomposed(
        ctx, g
    ) == surface.count_points_at_infinity(ctx, g)


def test_cube_has_only_the_four_lines_at_infinity() -> None:
    """Test that phi = 1 leaves exactly 4q - 2 points at infinity."""
    for m in (2, 3, 4):
        ctx = gf2m.new_field(m)
        assert surface.count_points_at_infinity(ctx, SparsePoly.monomial(3)) == (
            4 * ctx.q - 2
        )


def test_proj_point_normalization() -> None:
    """Test scaling to a leading 1 and rejecting the zero vector."""
    ctx = gf2m.new_field(3)

    point = ProjPoint.normalized(ctx, (0, 3, 6, 1))

    assert point.coords[:2] == (0, 1)
    assert str(point).startswith("(0,1,")
    with pytest.raises(PreconditionError):
        ProjPoint.normalized(ctx, (0, 0, 0, 0))
    with pytest.raises(ValueError, match="first nonzero"):
        ProjPoint(coords=(0, 2, 1, 1))


@pytest.mark.parametrize(("a3", "a5"), [(0, 1), (1, 1), (7, 3), (0xA, 0xF)])
def test_partials_of_degree_five_surface(a3: int, a5: int) -> None:
    """Test the closed forms of the partials for g = a5 x^5 + a3 x^3."""
    hom = surface.homogenize(AppendixCoeffs(a3=a3, a5=a5).to_poly())
    quadric = TriPolyHom(
        {(0, 2, 0, 0): a5, (0, 1, 1, 0): a5, (0, 0, 2, 0): a5, (0, 0, 0, 2): a3}
    )
    # x1 x2 (x1 + x2) * quadric
    expected = quadric.times_monomial((0, 2, 1, 0)) + quadric.times_monomial(
        (0, 1, 2, 0)
    )

    d0, d1, _, dz = surface.partials(hom)

    assert dz.is_zero
    assert d0 == expected
    assert d1 == expected.permute((1, 0, 2, 3))


@pytest.mark.parametrize("text", ["x^5+x^3", "x^6+3*x^5+x^3", "x^9+x^6+5*x^3"])
def test_partials_match_linear_coefficient_of_shift(text: str) -> None:
    """Test dF/dxi against the t^1 coefficient of F(.., xi + t, ..) over GF(16).

    With deg F < q - 1 the t^1 coefficient of h(t) is sum_t h(t) t^(q-2).
    """
    ctx = gf2m.new_field(4)
    hom = surface.homogenize(parse_sparse_poly(text))
    points = np.random.default_rng(16).integers(0, ctx.q, (4, 1000))
    ts = gf2m.elements(ctx)
    weights = gf2m.power_array(ctx, ts, ctx.q - 2)

    for var, partial in enumerate(surface.partials(hom)):
        shifted = [p[:, None] for p in points]
        shifted[var] = shifted[var] ^ ts[None, :]
        values = gf2m.mul_array(ctx, hom.evaluate(ctx, *shifted), weights[None, :])
        linear = np.bitwise_xor.reduce(values, axis=1)
        assert np.array_equal(linear, partial.evaluate(ctx, *points)), var


@pytest.mark.parametrize("m", [2, 3, 4])
def test_cube_surface_singular_points(m: int) -> None:
    """Test the seven singular points of the cube surface."""
    ctx = gf2m.new_field(m)

    points = surface.enumerate_singular(ctx, surface.homogenize(SparsePoly.monomial(3)))

    assert [p.coords for p in points] == CUBE_SINGULAR


def test_resultant_of_pure_quintic() -> None:
    """Test Q = x^12 + 1 for a3 = 0, a5 = 1."""
    ctx = gf2m.new_field(4)

    q_poly = surface.resultant_q(ctx, AppendixCase.DEGREE_5, AppendixCoeffs(a5=1))

    assert q_poly == parse_sparse_poly("x^12+1")


def test_resultant_of_unit_sextic() -> None:
    """Test Q = x^8 + 1 for a3 = a5 = a6 = 1."""
    ctx = gf2m.new_field(4)
    coeffs = AppendixCoeffs(a3=1, a5=1, a6=1)

    q_poly = surface.resultant_q(ctx, coeffs.case, coeffs)

    assert coeffs.case is AppendixCase.DEGREE_6
    assert q_poly == parse_sparse_poly("x^8+1")


def test_resultant_preconditions() -> None:
    """Test that missing a5 (and a6) is refused."""
    ctx = gf2m.new_field(3)

    with pytest.raises(ResultantError):
        surface.resultant_q(ctx, AppendixCase.DEGREE_5, AppendixCoeffs(a3=1))
    with pytest.raises(ResultantError):
        surface.resultant_q(ctx, AppendixCase.DEGREE_6, AppendixCoeffs(a3=1))


def test_coefficients_for_appendix() -> None:
    """Test extraction of (a3, a5, a6) and refusal of other supports."""
    coeffs = surface.coefficients_for_appendix(parse_sparse_poly("x^6+3*x^5+x^2"))

    assert coeffs == AppendixCoeffs(a3=0, a5=3, a6=1)
    assert surface.coefficients_for_appendix(parse_sparse_poly("x^7+x^3")) is None
    assert surface.coefficients_for_appendix(parse_sparse_poly("x^2+x")) is None


def test_classify_all_equal_point() -> None:
    """Test that (1,1,1,1) is primarily ALL_EQUAL and also PAIR_EQUAL."""
    ctx = gf2m.new_field(3)
    coeffs = AppendixCoeffs(a3=1, a5=1)

    found = surface.classify_singular(ctx, ProjPoint(coords=(1, 1, 1, 1)), coeffs)

    assert found.primary is SingularCase.ALL_EQUAL
    assert SingularCase.PAIR_EQUAL in found.tags
    assert SingularCase.COORD_ZERO not in found.tags


def test_omega_point_is_singular_over_gf4() -> None:
    """Test that (0,1,w,0) is singular for g = x^5 over GF(4)."""
    ctx = gf2m.new_field(2)
    g = AppendixCoeffs(a5=1).to_poly()

    points = surface.enumerate_singular(ctx, surface.homogenize(g))

    assert (0, 1, 2, 0) in [p.coords for p in points]


@pytest.mark.parametrize("m", [2, 3])
def test_degree_five_and_six_singular_points_always_match_a_case(m: int) -> None:
    """Test that no singular point of these surfaces escapes the case analysis."""
    ctx = gf2m.new_field(m)
    for a3, a5, a6 in itertools.product(range(ctx.q), repeat=3):
        coeffs = AppendixCoeffs(a3=a3, a5=a5, a6=a6)
        if not (a5 or a6):
            continue
        for point in surface.enumerate_singular(
            ctx, surface.homogenize(coeffs.to_poly())
        ):
            found = surface.classify_singular(ctx, point, coeffs)
            assert found.primary is not SingularCase.NO_CASE, (coeffs, point)


def test_singular_record_orders_tags() -> None:
    """Test that records list tags in priority order."""
    ctx = gf2m.new_field(3)
    point = ProjPoint(coords=(1, 1, 1, 1))
    found = surface.classify_singular(ctx, point, AppendixCoeffs(a3=1, a5=1))

    record = SingularRecord.of(point, found)

    assert record.point == (1, 1, 1, 1)
    assert record.tags[0] is SingularCase.ALL_EQUAL
    assert list(record.tags) == [c for c in SingularCase if c in found.tags]
    assert SingularRecord.of(point, None).primary is None


def test_build_surface_report() -> None:
    """Test that the report adds up and carries singular points on request."""
    ctx = gf2m.new_field(3)
    g = SparsePoly.monomial(3)

    report = surface.build_surface_report(ctx, g, singular=True)

    assert report.d == 3
    assert report.field_poly == "0xb"
    assert report.g == "x^3"
    assert report.infinity_count == 4 * ctx.q - 2
    assert report.projective_count == report.affine_count + report.infinity_count
    assert report.singular_points is not None
    assert len(report.singular_points) == len(CUBE_SINGULAR)


def test_exhaustive_scans_respect_field_size_limits() -> None:
    """Test the m limits of point counting and the singular point search."""
    g = SparsePoly.monomial(3)
    counting = gf2m.new_field(surface.COUNT_MAX_M + 1)
    searching = gf2m.new_field(surface.SINGULAR_MAX_M + 1)

    with pytest.raises(PreconditionError):
        surface.count_affine_points(counting, g)
    with pytest.raises(PreconditionError):
        surface.count_points_at_infinity(counting, g)
    with pytest.raises(PreconditionError):
        surface.enumerate_singular(searching, surface.homogenize(g))
    with pytest.raises(PreconditionError):
        surface.build_surface_report(searching, g, singular=True)
    surface.check_scan_size(counting, surface.COUNT_MAX_M, "count", allow_large=True)
