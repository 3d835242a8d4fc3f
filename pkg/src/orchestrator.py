"""Runs one parsed invocation: RunConfig in, rendered result and exit code out."""
import math
from contextlib import contextmanager
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from loguru import logger
from pydantic import BaseModel

from src.config import settings
from src.algebra.ffield import field_make
from src.algebra.polyring import Poly, divisor_count, factor, is_irreducible, is_squarefree, mobius, von_mangoldt
from src.analysis.bounds import bound_rows, classify_point, genus_cap, region_grid, right_threshold_report
from src.analysis.moments import (
    approx_funceq_eval,
    c_alpha_euler_product,
    charsum_bound_check,
    second_moment_exhaustive,
    square_average_check,
)
from src.analysis.northcott import central_zero_search, compute_S
from src.cli.output import emit, to_csv, to_json
from src.cli.parser import Command, OutputFormat, RunConfig
from src.errors import FFZetaError, ParseError, UsageError
from src.models import (
    BoundReport,
    EnumerationScope,
    FactorRecord,
    FieldSummary,
    GenusCap,
    NorthcottRow,
    PolyReport,
    RegionGridRow,
    Witness,
    ZetaReport,
)
from src.zeta.analytic import is_pole, xi_eval, zeta_eval, zeta_special_value
from src.zeta.curve import make_curve
from src.zeta.lpoly import curve_record, lpoly_from_charsum

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# (payload, csv rows, csv row model)
Result = Tuple[BaseModel, Optional[List[BaseModel]], Optional[type]]


@contextmanager
def _overrides(config: RunConfig) -> Iterator[None]:
    """Apply the per-run budget, thread count and seed to the global settings."""
    saved = (settings.enumeration_budget, settings.threads, settings.factor_seed)
    settings.enumeration_budget = config.budget
    settings.threads = config.threads
    settings.factor_seed = config.seed
    try:
        yield
    finally:
        settings.enumeration_budget, settings.threads, settings.factor_seed = saved


def exit_code_for(error: Exception) -> int:
    return EXIT_USAGE if isinstance(error, (UsageError, ParseError)) else EXIT_FAILURE


class Orchestrator:
    """Dispatches a RunConfig to the library and collects the result models."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.spec = config.field
        self._handlers: Dict[Command, Callable[[], Result]] = {
            Command.FIELD: self.field,
            Command.POLY: self.poly,
            Command.LPOLY: self.lpoly,
            Command.ZETA: self.zeta,
            Command.CLASSIFY: self.classify,
            Command.BOUNDS: self.bounds,
            Command.NORTHCOTT: self.northcott,
            Command.CENTRAL_ZEROS: self.central_zeros,
            Command.MOMENTS: self.moments,
        }

    def execute(self) -> Result:
        logger.info(f"=== {self.config.command.value} over {self.spec} ===")
        return self._handlers[self.config.command]()

    # ----- algebra -----

    def field(self) -> Result:
        spec = self.spec
        modulus = Poly(field_make(spec.p), spec.modulus)
        squares = spec.q - 1 if spec.p == 2 else (spec.q - 1) // 2
        generator = str(spec.element(spec._exp[1])) if spec._exp is not None else None
        summary = FieldSummary(q=spec.q, p=spec.p, e=spec.e, modulus=str(modulus), squares=squares, generator=generator)
        return summary, None, None

    def poly(self) -> Result:
        f = self.config.D
        fact = factor(f)
        monic = f.is_monic()
        report = PolyReport(
            poly=str(f),
            degree=int(f.degree),
            unit=str(fact.unit),
            factors=[FactorRecord(prime=str(P), degree=int(P.degree), exponent=m) for P, m in fact.factors],
            squarefree=is_squarefree(f),
            irreducible=is_irreducible(f),
            mobius=mobius(f) if monic else None,
            von_mangoldt=von_mangoldt(f) if monic else None,
            divisor_count=divisor_count(f) if monic else None,
        )
        return report, report.factors, FactorRecord

    # ----- zeta functions -----

    def lpoly(self) -> Result:
        record = curve_record(make_curve(self.config.D))
        logger.info(f"L = {record.L}, h = {record.h}")
        return record, [record], None

    def zeta(self) -> Result:
        curve = make_curve(self.config.D)
        L = lpoly_from_charsum(curve)
        s = self.config.s
        pole = is_pole(self.spec.q, s)
        report = ZetaReport(
            D=str(curve.D),
            genus=curve.genus,
            s=s,
            value=None if pole else zeta_eval(L, s),
            xi=None if pole else xi_eval(L, s),
            special=zeta_special_value(L, s),
        )
        return report, [report], None

    # ----- bounds -----

    def classify(self) -> Result:
        q = self.spec.q
        if self.config.emit_plot_data:
            steps = self.config.grid_steps
            sigmas = [-1.0 + 3.0 * i / (steps - 1) for i in range(steps)]
            period = 2 * math.pi / math.log(q)
            taus = [period * j / (steps - 1) - period / 2 for j in range(steps)]
            # the special points must lie on the grid exactly
            sigmas = sorted(set(sigmas) | {0.0, 0.5, 1.0})
            taus = sorted(set(taus) | {0.0})
            rows = region_grid(q, sigmas, taus, self.config.trunc)
            return rows[0], rows, RegionGridRow
        verdict = classify_point(q, self.config.s, self.config.trunc)
        return verdict, [verdict], None

    def bounds(self) -> Result:
        q = self.spec.q
        action = self.config.action
        if action == "right-threshold":
            report = right_threshold_report(q, self.config.sigma)
            return report, [report], None
        if action == "genus-cap":
            s, B = self.config.s, self.config.B
            report = GenusCap(q=q, s=s, B=B, genus_cap=genus_cap(q, s, B), provenance=classify_point(q, s).provenance)
            return report, [report], None
        rows = bound_rows(q, float(self.config.sigma), self.config.B, self.config.g)
        return rows[0], rows, BoundReport

    # ----- Northcott sets -----

    def northcott(self) -> Result:
        config = self.config
        scope = EnumerationScope(
            q=self.spec.q,
            genus_min=config.genus_min,
            genus_max=config.genus_max,
            dedupe=config.dedupe,
            budget=config.budget,
        )
        report = compute_S(self.spec.q, config.s, config.B, scope, config.plain_central_value, config.threads)
        logger.info(f"{len(report.members)} members among {report.curves_evaluated} curves")
        return report, report.rows, NorthcottRow

    def central_zeros(self) -> Result:
        report = central_zero_search(self.spec.q, self.config.n, self.config.budget, self.config.threads)
        return report, report.witnesses, Witness

    # ----- moments -----

    def moments(self) -> Result:
        config = self.config
        q = self.spec.q
        action = config.action or "second-moment"
        if action == "second-moment":
            report = second_moment_exhaustive(q, config.g, config.alpha, config.trunc, config.threads)
        elif action == "verify-afe":
            report = approx_funceq_eval(make_curve(config.D), config.alpha)
        elif action == "c-alpha":
            report = c_alpha_euler_product(q, config.alpha, config.trunc)
        elif action == "charsum":
            report = charsum_bound_check(config.D, config.n)
        else:
            report = square_average_check(q, config.g, config.D)
        return report, [report], None


def render(config: RunConfig, result: Result) -> str:
    payload, rows, model = result
    if config.format is OutputFormat.CSV or (config.command is Command.CLASSIFY and config.emit_plot_data):
        return to_csv(rows if rows is not None else [payload], model=model)
    return to_json(payload)


def run(config: RunConfig) -> int:
    """
    Execute one invocation and write its output.

    Returns the exit code: 0 on success, 1 when the computation failed
    (the machine-readable error object goes to standard output), 2 for
    usage errors.
    """
    try:
        with _overrides(config):
            result = Orchestrator(config).execute()
        emit(render(config, result), config.out)
    except FFZetaError as e:
        logger.error(f"{e.code}: {e}")
        emit(to_json(e.to_dict()))
        return exit_code_for(e)
    except ValueError as e:
        logger.error(f"INVALID_ARGUMENT: {e}")
        emit(to_json({"error": "INVALID_ARGUMENT", "message": str(e)}))
        return EXIT_FAILURE
    logger.info("Done")
    return EXIT_OK
