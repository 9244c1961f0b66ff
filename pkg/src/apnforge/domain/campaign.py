"""Campaign configuration, work units and their pure evaluation.

A campaign is a deterministic, ordered list of work units. Each unit is
evaluated independently by :func:`evaluate_unit`, so units can be shipped to
worker processes and the results re-assembled in canonical order.
"""

import hashlib
import json
from collections.abc import Callable, Iterable, Iterator
from enum import Enum
from pathlib import Path
from typing import Protocol

import numpy as np
from pydantic import (
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from apnforge.domain import apn, bounds, surface
from apnforge.domain.base import ForgeBaseModel
from apnforge.domain.bounds import BoundProfile
from apnforge.domain.gf2m import MAX_M, MIN_M, FieldCtx, new_field
from apnforge.domain.polyfun import (
    PolynomialFieldMismatchError,
    SparsePoly,
    binomial_orbits,
    inverse_plus_g,
    is_power_of_two,
    normalize_p2,
    orbit_count_by_action,
    parse_sparse_poly,
    quoted_orbit_count,
    reduced_exponent,
)
from apnforge.domain.surface import (
    AppendixCoeffs,
    SingularCase,
    SingularRecord,
    SurfaceReport,
)
from apnforge.exceptions import ApnForgeDomainError

REPORT_SCHEMA = "apn-forge/1"
APN_ASSERTED_FROM_M = 4
INFINITY_CROSSCHECK_MAX_M = 5
BETTI_MAX_DEGREE = 6

DESK_LIMITS = {
    "binomial": 12,
    "deg6": 8,
    "surface-census": 8,
    "singular-scan": 6,
}

DEFAULT_CATALOG = ("x^3", "x^5", "x^5+x^3", "x^6+x^5+x^3", "x^7")
RANDOM_CATALOG_SIZE = 3
RANDOM_CATALOG_EXPONENTS = (3, 5, 6, 7, 9)


class CampaignConfigError(ApnForgeDomainError):
    """Raised when a campaign configuration is invalid."""

    def __init__(self, message: str) -> None:
        """Initialize the error.

        Args:
            message: What is wrong with the configuration.
        """
        super().__init__(f"Invalid campaign configuration: {message}")


class CampaignKind(str, Enum):
    """The four campaign kinds."""

    BINOMIAL = "binomial"
    DEG6 = "deg6"
    SURFACE_CENSUS = "surface-census"
    SINGULAR_SCAN = "singular-scan"


class OutputFormat(str, Enum):
    """Report serialization formats."""

    JSON = "json"
    CSV = "csv"


class Verdict(str, Enum):
    """Outcome of one work unit."""

    APN = "apn"
    NOT_APN = "not-apn"
    OK = "ok"
    FINDING = "finding"


class CampaignConfig(ForgeBaseModel):
    """Validated campaign configuration.

    Field names match the keys of the ``[campaign]`` TOML table.
    """

    kind: CampaignKind
    m_min: int
    m_max: int
    d_min: int = 3
    d_max: int = 29
    a3: tuple[int, ...] = (0, 1)
    samples: int = Field(default=8, ge=1)
    full_grid_max_m: int = 4
    catalog: tuple[str, ...] | None = None
    seed: int = 0
    threads: int = Field(default=1, ge=1)
    checkpoint: Path | None = None
    output: Path | None = None
    format: OutputFormat = OutputFormat.JSON
    allow_large: bool = False
    orbit_pruning: bool = True
    timings: bool = False
    singular_max_m: int = 4
    field_polys: dict[int, int] = Field(default_factory=dict)

    @field_validator("a3")
    @classmethod
    def _check_a3(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if not value or not set(value) <= {0, 1}:
            msg = f"a3 must be a non-empty subset of {{0, 1}}, got {list(value)}"
            raise ValueError(msg)
        return tuple(sorted(set(value)))

    @model_validator(mode="after")
    def _check_ranges(self) -> "CampaignConfig":
        if not MIN_M <= self.m_min <= self.m_max <= MAX_M:
            msg = f"need {MIN_M} <= m_min <= m_max <= {MAX_M}"
            raise ValueError(msg)
        if not 3 <= self.d_min <= self.d_max:  # noqa: PLR2004
            msg = "need 3 <= d_min <= d_max"
            raise ValueError(msg)
        limit = DESK_LIMITS[self.kind.value]
        if self.m_max > limit and not self.allow_large:
            msg = (
                f"m_max={self.m_max} exceeds the {self.kind.value} limit {limit}; "
                "pass allow_large to override"
            )
            raise ValueError(msg)
        return self

    @classmethod
    def from_mapping(cls, data: dict[str, object]) -> "CampaignConfig":
        """Validate raw configuration data.

        Raises:
            CampaignConfigError: If validation fails.
        """
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise CampaignConfigError(str(e)) from e

    @property
    def m_values(self) -> range:
        """Extension degrees in ascending order."""
        return range(self.m_min, self.m_max + 1)

    @property
    def d_values(self) -> range:
        """Binomial exponents in ascending order."""
        return range(self.d_min, self.d_max + 1)

    def field_ctx(self, m: int) -> FieldCtx:
        """Field context for ``m``, honoring ``field_polys`` overrides."""
        return new_field(m, self.field_polys.get(m))

    def essentials(self) -> dict[str, object]:
        """Settings that determine the report contents."""
        return self.model_dump(
            mode="json",
            exclude={"threads", "checkpoint", "output", "format", "allow_large"},
        )

    @property
    def campaign_id(self) -> str:
        """Stable hash of :meth:`essentials`."""
        payload = canonical_json(self.essentials())
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def canonical_json(data: object) -> str:
    """Serialize with sorted keys and no whitespace."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


class WorkUnit(ForgeBaseModel):
    """One independent piece of a campaign.

    Attributes:
        kind: Campaign kind the unit belongs to.
        m: Extension degree.
        red_poly: Reduction polynomial of the field.
        g: The polynomial ``g`` in CLI syntax.
        d: Binomial exponent (binomial campaigns only).
        a: Binomial coefficient (binomial campaigns only).
        coeffs: ``(a3, a5, a6)`` for deg6 and singular-scan units.
        reduced_d: Exponent actually seen by the field when ``d`` wraps.
        singular: Whether census units also enumerate singular points.
        workers: Threads for point counting inside the unit.
    """

    kind: CampaignKind
    m: int
    red_poly: int
    g: str
    d: int | None = None
    a: int | None = None
    coeffs: AppendixCoeffs | None = None
    reduced_d: int | None = None
    singular: bool = False
    workers: int = 1

    @property
    def key(self) -> str:
        """Canonical identifier, unique within a campaign."""
        if self.kind is CampaignKind.BINOMIAL:
            return f"{self.kind.value}/m={self.m}/d={self.d}/a={self.a}"
        if self.coeffs is not None:
            c = self.coeffs
            return f"{self.kind.value}/m={self.m}/a3={c.a3}/a5={c.a5}/a6={c.a6}"
        return f"{self.kind.value}/m={self.m}/g={self.g}"


class SkipRecord(ForgeBaseModel):
    """A grid point that was deliberately not evaluated."""

    m: int
    reason: str
    detail: str


class OrbitCount(ForgeBaseModel):
    """Representatives scanned for one ``(m, d)`` of a binomial campaign.

    ``action_gcd`` is the orbit count of ``a -> a u^(d+1)``; ``quoted_gcd``
    is ``gcd(d, q - 1)``, the count quoted for non-equivalent binomials.
    """

    m: int
    d: int
    scanned: int
    action_gcd: int
    quoted_gcd: int


class UnitRecord(ForgeBaseModel):
    """Result of evaluating one work unit."""

    key: str
    kind: CampaignKind
    m: int
    g: str
    verdict: Verdict
    delta: int | None = None
    findings: tuple[str, ...] = ()
    reduced_d: int | None = None
    surface: SurfaceReport | None = None
    bounds: BoundProfile | None = None
    singular: tuple[SingularRecord, ...] | None = None
    elapsed_ms: float | None = None


class CampaignPlan(ForgeBaseModel):
    """Units to evaluate plus the bookkeeping gathered while planning."""

    units: tuple[WorkUnit, ...]
    skips: tuple[SkipRecord, ...] = ()
    orbits: tuple[OrbitCount, ...] = ()


class CampaignSummary(ForgeBaseModel):
    """Aggregate view of a finished campaign."""

    units: int
    apn_found: tuple[str, ...]
    findings: tuple[str, ...]
    skipped: tuple[SkipRecord, ...]
    orbit_counts: tuple[OrbitCount, ...]


class CampaignReport(ForgeBaseModel):
    """Full campaign output in canonical unit order."""

    schema_: str = Field(default=REPORT_SCHEMA, alias="schema")
    campaign_id: str
    kind: CampaignKind
    config: dict[str, object]
    records: tuple[UnitRecord, ...]
    summary: CampaignSummary

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    @property
    def has_findings(self) -> bool:
        """Whether any unit reported a finding."""
        return bool(self.summary.findings)


class CheckpointStore(Protocol):
    """Protocol for persisting finished units of a campaign."""

    def load(self, campaign_id: str) -> list[UnitRecord]:
        """Return records already completed for ``campaign_id``."""

    def append(self, record: UnitRecord) -> None:
        """Persist one finished unit."""

    def seal(self, summary: CampaignSummary) -> None:
        """Mark the campaign complete."""


class UnitExecutor(Protocol):
    """Protocol for mapping unit evaluation over a batch in input order."""

    def map(
        self, fn: Callable[[WorkUnit], UnitRecord], units: Iterable[WorkUnit]
    ) -> Iterator[UnitRecord]:
        """Evaluate ``fn`` on every unit, yielding results in input order."""


# ---------- planning


def default_catalog(seed: int) -> tuple[str, ...]:
    """Fixed catalog plus three seeded random degree-9 polynomials."""
    rng = np.random.default_rng(seed)
    extra = []
    for _ in range(RANDOM_CATALOG_SIZE):
        coeffs = {e: int(rng.integers(0, 4)) for e in RANDOM_CATALOG_EXPONENTS}
        coeffs[9] = int(rng.integers(1, 4))
        extra.append(str(SparsePoly.from_coefficients(coeffs)))
    return DEFAULT_CATALOG + tuple(extra)


def _plan_binomial(cfg: CampaignConfig) -> CampaignPlan:
    units: list[WorkUnit] = []
    skips: list[SkipRecord] = []
    orbits: list[OrbitCount] = []
    for m in cfg.m_values:
        ctx = cfg.field_ctx(m)
        for d in cfg.d_values:
            if is_power_of_two(d):
                skips.append(
                    SkipRecord(m=m, reason="power-of-two-d", detail=f"d={d}")
                )
                continue
            reduced = reduced_exponent(d, ctx.q)
            if cfg.orbit_pruning:
                coefficients = binomial_orbits(ctx, d)
            else:
                coefficients = list(range(1, ctx.q))
            orbits.append(
                OrbitCount(
                    m=m,
                    d=d,
                    scanned=len(coefficients),
                    action_gcd=orbit_count_by_action(d, ctx.q),
                    quoted_gcd=quoted_orbit_count(d, ctx.q),
                )
            )
            units.extend(
                WorkUnit(
                    kind=CampaignKind.BINOMIAL,
                    m=m,
                    red_poly=ctx.red_poly,
                    g=str(SparsePoly.monomial(d, a)),
                    d=d,
                    a=a,
                    reduced_d=reduced if reduced != d else None,
                )
                for a in coefficients
            )
    return CampaignPlan(units=tuple(units), skips=tuple(skips), orbits=tuple(orbits))


def _coefficient_unit(
    kind: CampaignKind, ctx: FieldCtx, coeffs: AppendixCoeffs
) -> WorkUnit:
    return WorkUnit(
        kind=kind,
        m=ctx.m,
        red_poly=ctx.red_poly,
        g=str(coeffs.to_poly()),
        coeffs=coeffs,
    )


def _plan_deg6(cfg: CampaignConfig) -> CampaignPlan:
    units: list[WorkUnit] = []
    skips: list[SkipRecord] = []
    for m in cfg.m_values:
        ctx = cfg.field_ctx(m)
        for a3 in cfg.a3:
            for a5 in range(ctx.q):
                for a6 in range(ctx.q):
                    coeffs = AppendixCoeffs(a3=a3, a5=a5, a6=a6)
                    if not (a3 or a5 or a6):
                        skips.append(
                            SkipRecord(m=m, reason="affine-g", detail="a3=a5=a6=0")
                        )
                        continue
                    units.append(_coefficient_unit(CampaignKind.DEG6, ctx, coeffs))
    return CampaignPlan(units=tuple(units), skips=tuple(skips))


def _plan_census(cfg: CampaignConfig) -> CampaignPlan:
    catalog = cfg.catalog if cfg.catalog is not None else default_catalog(cfg.seed)
    polys = [parse_sparse_poly(text) for text in catalog]
    units: list[WorkUnit] = []
    skips: list[SkipRecord] = []
    for m in cfg.m_values:
        ctx = cfg.field_ctx(m)
        for g in polys:
            if normalize_p2(g).is_zero:
                skips.append(SkipRecord(m=m, reason="affine-g", detail=str(g)))
                continue
            try:
                g.check_field(ctx)
            except PolynomialFieldMismatchError as e:
                skips.append(SkipRecord(m=m, reason="coefficient", detail=str(e)))
                continue
            units.append(
                WorkUnit(
                    kind=CampaignKind.SURFACE_CENSUS,
                    m=m,
                    red_poly=ctx.red_poly,
                    g=str(g),
                    singular=m <= cfg.singular_max_m,
                    workers=cfg.threads,
                )
            )
    return CampaignPlan(units=tuple(units), skips=tuple(skips))


def _singular_grid(cfg: CampaignConfig, q: int) -> list[AppendixCoeffs]:
    degree5 = [AppendixCoeffs(a3=a3, a5=a5) for a3 in cfg.a3 for a5 in range(1, q)]
    degree6 = [
        AppendixCoeffs(a3=a3, a5=a5, a6=a6)
        for a3 in cfg.a3
        for a5 in range(q)
        for a6 in range(1, q)
    ]
    return degree5 + degree6


def _plan_singular(cfg: CampaignConfig) -> CampaignPlan:
    units: list[WorkUnit] = []
    for m in cfg.m_values:
        ctx = cfg.field_ctx(m)
        grid = _singular_grid(cfg, ctx.q)
        if m > cfg.full_grid_max_m:
            rng = np.random.default_rng([cfg.seed, m])
            split = sum(1 for c in grid if not c.a6)
            picked: list[int] = []
            for lo, hi in ((0, split), (split, len(grid))):
                size = min(cfg.samples, hi - lo)
                chosen = rng.choice(np.arange(lo, hi), size, replace=False)
                picked.extend(int(i) for i in chosen)
            grid = [grid[i] for i in sorted(picked)]
        units.extend(
            _coefficient_unit(CampaignKind.SINGULAR_SCAN, ctx, coeffs)
            for coeffs in grid
        )
    return CampaignPlan(units=tuple(units))


_PLANNERS: dict[CampaignKind, Callable[[CampaignConfig], CampaignPlan]] = {
    CampaignKind.BINOMIAL: _plan_binomial,
    CampaignKind.DEG6: _plan_deg6,
    CampaignKind.SURFACE_CENSUS: _plan_census,
    CampaignKind.SINGULAR_SCAN: _plan_singular,
}


def plan_campaign(cfg: CampaignConfig) -> CampaignPlan:
    """Enumerate the units of ``cfg`` in canonical order."""
    return _PLANNERS[cfg.kind](cfg)


# ---------- evaluation


def _evaluate_apn_unit(unit: WorkUnit, ctx: FieldCtx) -> UnitRecord:
    """Verdict from the early-abort scan, ``delta`` from the full table.

    The full scan always runs, so non-APN records carry their exact
    differential uniformity and the two scans cross-check each other.
    """
    g = parse_sparse_poly(unit.g)
    table = inverse_plus_g(ctx, g)
    report = apn.differential_uniformity(ctx, table)
    findings: list[str] = []
    verdict = Verdict.NOT_APN
    if apn.is_apn(ctx, table):
        verdict = Verdict.APN
        if unit.m >= APN_ASSERTED_FROM_M:
            findings.append("apn-hit")
    if report.is_apn is not (verdict is Verdict.APN):
        findings.insert(0, "apn-oracle-disagreement")
    return UnitRecord(
        key=unit.key,
        kind=unit.kind,
        m=unit.m,
        g=unit.g,
        verdict=verdict,
        delta=report.delta,
        findings=tuple(findings),
        reduced_d=unit.reduced_d,
    )


def _evaluate_census_unit(unit: WorkUnit, ctx: FieldCtx) -> UnitRecord:
    g = parse_sparse_poly(unit.g)
    # the campaign size limit was already checked on the configuration
    report = surface.build_surface_report(
        ctx, g, singular=unit.singular, workers=unit.workers, allow_large=True
    )
    profile = bounds.profile(report.d, ctx.m)
    count = report.projective_count
    findings: list[str] = []
    if not profile.lw_lo <= count <= profile.lw_hi:
        findings.append("lang-weil-interval")
    in_betti = profile.betti_lo <= count <= profile.betti_hi
    if report.d <= BETTI_MAX_DEGREE and not in_betti:
        findings.append("betti-interval")
    if count > profile.apn_upper and apn.is_apn(ctx, inverse_plus_g(ctx, g)):
        findings.append("apn-upper-bound")
    if ctx.m <= INFINITY_CROSSCHECK_MAX_M and report.infinity_count != (
        surface.count_at_infinity_decomposed(ctx, g)
    ):
        findings.append("infinity-decomposition")
    return UnitRecord(
        key=unit.key,
        kind=unit.kind,
        m=unit.m,
        g=unit.g,
        verdict=Verdict.FINDING if findings else Verdict.OK,
        findings=tuple(findings),
        surface=report,
        bounds=profile,
    )


def _evaluate_singular_unit(unit: WorkUnit, ctx: FieldCtx) -> UnitRecord:
    if unit.coeffs is None:
        msg = f"singular unit {unit.key} has no coefficients"
        raise CampaignConfigError(msg)
    closure = surface.homogenize(unit.coeffs.to_poly())
    records = []
    for point in surface.enumerate_singular(ctx, closure, allow_large=True):
        found = surface.classify_singular(ctx, point, unit.coeffs)
        records.append(SingularRecord.of(point, found))
    findings = tuple(
        f"no-case{record.point}"
        for record in records
        if record.primary is SingularCase.NO_CASE
    )
    return UnitRecord(
        key=unit.key,
        kind=unit.kind,
        m=unit.m,
        g=unit.g,
        verdict=Verdict.FINDING if findings else Verdict.OK,
        findings=findings,
        singular=tuple(records),
    )


def evaluate_unit(unit: WorkUnit) -> UnitRecord:
    """Evaluate one unit; pure and safe to run in a worker process.

    Args:
        unit: The work unit, carrying its own field parameters.

    Returns:
        The unit record. Binomial and deg6 units carry a verdict and
        ``delta``; census units their surface report and bounds; singular-scan
        units their classified points.
    """
    ctx = FieldCtx(m=unit.m, red_poly=unit.red_poly)
    if unit.kind is CampaignKind.SURFACE_CENSUS:
        return _evaluate_census_unit(unit, ctx)
    if unit.kind is CampaignKind.SINGULAR_SCAN:
        return _evaluate_singular_unit(unit, ctx)
    return _evaluate_apn_unit(unit, ctx)


def summarize(plan: CampaignPlan, records: Iterable[UnitRecord]) -> CampaignSummary:
    """Aggregate records that are already in canonical order.

    Returns:
        Unit count, APN and finding keys, and the plan's skips and orbit
        counts.
    """
    ordered = list(records)
    return CampaignSummary(
        units=len(ordered),
        apn_found=tuple(r.key for r in ordered if r.verdict is Verdict.APN),
        findings=tuple(r.key for r in ordered if r.findings),
        skipped=plan.skips,
        orbit_counts=plan.orbits,
    )


def build_report(
    cfg: CampaignConfig, plan: CampaignPlan, records: Iterable[UnitRecord]
) -> CampaignReport:
    """Assemble the canonical report."""
    ordered = tuple(records)
    return CampaignReport(
        campaign_id=cfg.campaign_id,
        kind=cfg.kind,
        config=cfg.essentials(),
        records=ordered,
        summary=summarize(plan, ordered),
    )
