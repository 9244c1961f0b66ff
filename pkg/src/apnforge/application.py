"""Application layer for apn-forge.

Single-shot queries (field, APN, surface and bounds commands) and the
campaign runner that drives work units through an executor and a checkpoint.
"""

import logging
import time
from collections.abc import Mapping
from pathlib import Path

from apnforge.domain import apn, bounds, gf2m, surface
from apnforge.domain.apn import DeltaReport
from apnforge.domain.base import ForgeBaseModel
from apnforge.domain.bounds import BoundProfile
from apnforge.domain.campaign import (
    CampaignConfig,
    CampaignConfigError,
    CampaignKind,
    CampaignReport,
    CheckpointStore,
    UnitExecutor,
    UnitRecord,
    WorkUnit,
    build_report,
    evaluate_unit,
    plan_campaign,
)
from apnforge.domain.polyfun import (
    FuncTable,
    inverse_plus_g,
    parse_sparse_poly,
    table_from_poly,
)
from apnforge.domain.surface import SingularRecord, SurfaceReport
from apnforge.exceptions import PreconditionError
from apnforge.infrastructure.checkpoint import JsonlCheckpointStore
from apnforge.infrastructure.config_parsers import TOMLCampaignConfigParser
from apnforge.infrastructure.field_polys import FieldPolyParser
from apnforge.infrastructure.fileio import FileReader, FileWriter
from apnforge.infrastructure.report_writers import writer_for
from apnforge.infrastructure.workers import create_executor

logger = logging.getLogger(__name__)

ENCODING = "utf-8"
PROGRESS_EVERY = 500


# ---------- single-shot queries


class FieldInfo(ForgeBaseModel):
    """Summary of one field context."""

    m: int
    q: int
    red_poly: str
    generator: int
    log_tables: bool


class ApnCheckResult(ForgeBaseModel):
    """Differential uniformity of one function."""

    m: int
    field_poly: str
    function: str
    report: DeltaReport


class SpectrumResult(ForgeBaseModel):
    """Differential spectrum of one function."""

    m: int
    function: str
    spectrum: dict[int, int]


class SingularResult(ForgeBaseModel):
    """Singular points of one surface, classified when ``g`` allows it."""

    m: int
    g: str
    points: tuple[SingularRecord, ...]


def read_field_polys(path: Path) -> dict[int, int]:
    """Parse an ``m:hex`` field polynomial file into ``{m: red_poly}``."""
    return FieldPolyParser().parse(FileReader(path).read_str(encoding=ENCODING))


def red_poly_for(
    m: int, red_poly: int | None = None, field_poly_path: Path | None = None
) -> int | None:
    """Reduction polynomial for a single-shot query over GF(2^m).

    Args:
        m: Extension degree of the query.
        red_poly: Explicit modulus, if any.
        field_poly_path: Field polynomial file, as used by campaigns.

    Returns:
        ``red_poly``, else the file entry for ``m``, else ``None`` for the
        default modulus.

    Raises:
        PreconditionError: If both ``red_poly`` and a file are given.
    """
    if field_poly_path is None:
        return red_poly
    if red_poly is not None:
        msg = "give either a reduction polynomial or a field polynomial file"
        raise PreconditionError(msg)
    return read_field_polys(field_poly_path).get(m)


def field_info(m: int, red_poly: int | None = None) -> FieldInfo:
    """Describe GF(2^m) with the given or default modulus."""
    ctx = gf2m.new_field(m, red_poly)
    tables = gf2m.field_tables(ctx)
    return FieldInfo(
        m=m,
        q=ctx.q,
        red_poly=f"0x{ctx.red_poly:x}",
        generator=tables.generator,
        log_tables=tables.has_logs,
    )


def _function_of(
    g_text: str, m: int, red_poly: int | None, *, plain: bool
) -> tuple[gf2m.FieldCtx, str, FuncTable]:
    ctx = gf2m.new_field(m, red_poly)
    g = parse_sparse_poly(g_text)
    if plain:
        return ctx, str(g), table_from_poly(ctx, g)
    return ctx, f"x^{ctx.q - 2}+{g}", inverse_plus_g(ctx, g)


def check_apn(
    g_text: str, m: int, red_poly: int | None = None, *, plain: bool = False
) -> ApnCheckResult:
    """Differential uniformity of ``x^(q-2) + g`` (or of ``g`` when ``plain``)."""
    ctx, function, table = _function_of(g_text, m, red_poly, plain=plain)
    return ApnCheckResult(
        m=m,
        field_poly=f"0x{ctx.red_poly:x}",
        function=function,
        report=apn.differential_uniformity(ctx, table),
    )


def spectrum(
    g_text: str, m: int, red_poly: int | None = None, *, plain: bool = False
) -> SpectrumResult:
    """Differential spectrum of ``x^(q-2) + g`` (or of ``g`` when ``plain``)."""
    ctx, function, table = _function_of(g_text, m, red_poly, plain=plain)
    return SpectrumResult(
        m=m, function=function, spectrum=apn.differential_spectrum(ctx, table)
    )


def count_surface(
    g_text: str,
    m: int,
    red_poly: int | None = None,
    *,
    workers: int = 1,
    allow_large: bool = False,
) -> SurfaceReport:
    """Affine, infinite and projective point counts of the surface of ``g``.

    Raises:
        PreconditionError: If ``m`` exceeds ``surface.COUNT_MAX_M`` and
            ``allow_large`` is false.
    """
    ctx = gf2m.new_field(m, red_poly)
    started = time.perf_counter()
    report = surface.build_surface_report(
        ctx, parse_sparse_poly(g_text), workers=workers, allow_large=allow_large
    )
    elapsed = round((time.perf_counter() - started) * 1000, 3)
    return report.model_copy(update={"elapsed_ms": elapsed})


def singular_points(
    g_text: str, m: int, red_poly: int | None = None, *, allow_large: bool = False
) -> SingularResult:
    """Singular points of the surface of ``g``, with appendix case tags.

    Raises:
        PreconditionError: If ``m`` exceeds ``surface.SINGULAR_MAX_M`` and
            ``allow_large`` is false.
    """
    ctx = gf2m.new_field(m, red_poly)
    g = parse_sparse_poly(g_text)
    g.check_field(ctx)
    coeffs = surface.coefficients_for_appendix(g)
    views = []
    closure = surface.homogenize(g)
    for point in surface.enumerate_singular(ctx, closure, allow_large=allow_large):
        found = surface.classify_singular(ctx, point, coeffs) if coeffs else None
        views.append(SingularRecord.of(point, found))
    return SingularResult(m=m, g=str(g), points=tuple(views))


def bound_profile(d: int, m: int) -> BoundProfile:
    """Every bound for ``(d, m)``."""
    return bounds.profile(d, m)


def crossover(d: int, *, isolated: bool = False) -> int:
    """Smallest ``m`` from which non-APN-ness is guaranteed."""
    return bounds.crossover_exponent(d, isolated=isolated)


# ---------- campaigns


def load_campaign_config(
    kind: CampaignKind,
    config_path: Path | None = None,
    overrides: Mapping[str, object] | None = None,
    field_poly_path: Path | None = None,
) -> CampaignConfig:
    """Merge the TOML file, the field polynomial file and CLI overrides.

    Raises:
        CampaignConfigError: If the merged settings are invalid or the file
            names a different campaign kind.
    """
    data: dict[str, object] = {}
    if config_path is not None:
        content = FileReader(config_path).read_str(encoding=ENCODING)
        data.update(TOMLCampaignConfigParser().parse(content))
    file_kind = data.get("kind")
    if file_kind is not None and file_kind != kind.value:
        msg = f"config file is for '{file_kind}', not '{kind.value}'"
        raise CampaignConfigError(msg)
    data["kind"] = kind.value
    if field_poly_path is not None:
        data["field_polys"] = read_field_polys(field_poly_path)
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return CampaignConfig.from_mapping(data)


def evaluate_unit_timed(unit: WorkUnit) -> UnitRecord:
    """:func:`evaluate_unit` with the wall-clock time attached."""
    started = time.perf_counter()
    record = evaluate_unit(unit)
    elapsed = round((time.perf_counter() - started) * 1000, 3)
    return record.model_copy(update={"elapsed_ms": elapsed})


class CampaignRunner:
    """Runs a campaign plan through an executor with optional checkpointing."""

    def __init__(
        self, executor: UnitExecutor, checkpoint: CheckpointStore | None = None
    ) -> None:
        """Initialize the runner.

        Args:
            executor: Evaluates units, yielding results in input order.
            checkpoint: Store for finished units, if resumability is wanted.
        """
        self.executor = executor
        self.checkpoint = checkpoint

    def run(self, cfg: CampaignConfig) -> CampaignReport:
        """Evaluate every pending unit and build the canonical report.

        Args:
            cfg: The campaign configuration.

        Returns:
            The report, with records in plan order regardless of how many
            units came from the checkpoint.
        """
        plan = plan_campaign(cfg)
        logger.info(
            "campaign %s (%s): %d units planned, %d skipped",
            cfg.campaign_id,
            cfg.kind.value,
            len(plan.units),
            len(plan.skips),
        )
        planned = {unit.key for unit in plan.units}
        done: dict[str, UnitRecord] = {}
        if self.checkpoint is not None:
            for record in self.checkpoint.load(cfg.campaign_id):
                if record.key in planned:
                    done.setdefault(record.key, record)
        pending = [unit for unit in plan.units if unit.key not in done]
        logger.info("%d units restored, %d pending", len(done), len(pending))
        evaluate = evaluate_unit_timed if cfg.timings else evaluate_unit
        for count, record in enumerate(self.executor.map(evaluate, pending), start=1):
            done[record.key] = record
            if self.checkpoint is not None:
                self.checkpoint.append(record)
            if count % PROGRESS_EVERY == 0:
                logger.info("%d/%d units evaluated", count, len(pending))
        report = build_report(cfg, plan, (done[unit.key] for unit in plan.units))
        if self.checkpoint is not None:
            self.checkpoint.seal(report.summary)
        logger.info(
            "campaign done: %d APN hits, %d findings",
            len(report.summary.apn_found),
            len(report.summary.findings),
        )
        return report

    @classmethod
    def create(cls, cfg: CampaignConfig) -> "CampaignRunner":
        """Factory method wiring the executor and checkpoint for ``cfg``.

        Args:
            cfg: The campaign configuration.

        Returns:
            An instance of CampaignRunner.
        """
        checkpoint = (
            JsonlCheckpointStore(cfg.checkpoint) if cfg.checkpoint is not None else None
        )
        return cls(create_executor(cfg.threads), checkpoint)


def _run(cfg: CampaignConfig, kind: CampaignKind) -> CampaignReport:
    if cfg.kind is not kind:
        msg = f"expected a {kind.value} campaign, got {cfg.kind.value}"
        raise CampaignConfigError(msg)
    return CampaignRunner.create(cfg).run(cfg)


def run_binomial_campaign(cfg: CampaignConfig) -> CampaignReport:
    """Scan ``x^(q-2) + a x^d`` over the configured ``(m, d)`` grid."""
    return _run(cfg, CampaignKind.BINOMIAL)


def run_deg6_campaign(cfg: CampaignConfig) -> CampaignReport:
    """Scan ``x^(q-2) + a6 x^6 + a5 x^5 + a3 x^3``."""
    return _run(cfg, CampaignKind.DEG6)


def run_surface_census(cfg: CampaignConfig) -> CampaignReport:
    """Count surface points for a catalog and check them against the bounds."""
    return _run(cfg, CampaignKind.SURFACE_CENSUS)


def run_singular_scan(cfg: CampaignConfig) -> CampaignReport:
    """Enumerate and classify singular points of the degree 5 and 6 surfaces."""
    return _run(cfg, CampaignKind.SINGULAR_SCAN)


RUNNERS = {
    CampaignKind.BINOMIAL: run_binomial_campaign,
    CampaignKind.DEG6: run_deg6_campaign,
    CampaignKind.SURFACE_CENSUS: run_surface_census,
    CampaignKind.SINGULAR_SCAN: run_singular_scan,
}


def render_report(report: CampaignReport, cfg: CampaignConfig) -> str | None:
    """Write the report to ``cfg.output``, or return it for stdout."""
    text = writer_for(cfg.format).render(report)
    if cfg.output is None:
        return text
    FileWriter(cfg.output).write_str(text, ENCODING)
    logger.info("report written to %s", cfg.output)
    return None
