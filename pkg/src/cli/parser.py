"""Command-line grammar and the validated RunConfig it produces."""
import argparse
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, PlainValidator

from src.config import settings
from src.algebra.ffield import FieldSpec
from src.algebra.literals import parse_complex, parse_field, parse_poly, parse_real
from src.algebra.polyring import Poly
from src.errors import InvalidPrimePower, ParseError, UsageError
from src.models import ComplexValue, DedupeMode


class Command(str, Enum):
    FIELD = "field"
    POLY = "poly"
    LPOLY = "lpoly"
    ZETA = "zeta"
    CLASSIFY = "classify"
    BOUNDS = "bounds"
    NORTHCOTT = "northcott"
    CENTRAL_ZEROS = "central-zeros"
    MOMENTS = "moments"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


BOUNDS_ACTIONS = ("right-threshold", "genus-cap", "list")
MOMENTS_ACTIONS = ("second-moment", "verify-afe", "c-alpha", "charsum", "square-average")


def _to_real(value: Any) -> Union[Fraction, float]:
    if isinstance(value, (Fraction, float)):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return parse_real(str(value))


RealValue = Annotated[Union[Fraction, float], PlainValidator(_to_real)]


class RunConfig(BaseModel):
    """One fully parsed invocation; unknown keys are rejected."""
    model_config = ConfigDict(extra='forbid', arbitrary_types_allowed=True, frozen=True)

    command: Command
    action: Optional[str] = None
    field: FieldSpec
    D: Optional[Poly] = None
    s: Optional[ComplexValue] = None
    sigma: Optional[RealValue] = None
    alpha: Optional[ComplexValue] = None
    B: Optional[float] = None
    g: Optional[int] = Field(default=None, ge=0)
    n: Optional[int] = Field(default=None, ge=1)
    genus_min: int = Field(default=0, ge=0)
    genus_max: int = Field(default=1, ge=0)
    dedupe: DedupeMode = DedupeMode.RAW
    trunc: Optional[int] = Field(default=None, ge=1)
    budget: int = Field(default_factory=lambda: settings.enumeration_budget, ge=1)
    threads: int = Field(default_factory=lambda: settings.threads, ge=1)
    seed: int = Field(default_factory=lambda: settings.factor_seed)
    format: OutputFormat = OutputFormat.JSON
    out: Optional[Path] = None
    emit_plot_data: bool = False
    plain_central_value: bool = False
    grid_steps: int = Field(default=41, ge=2)


# flags each (command, action) cannot run without
_REQUIRED: Dict[Tuple[Command, Optional[str]], Tuple[str, ...]] = {
    (Command.POLY, None): ("D",),
    (Command.LPOLY, None): ("D",),
    (Command.ZETA, None): ("D", "s"),
    (Command.CLASSIFY, None): ("s",),
    (Command.BOUNDS, "right-threshold"): ("sigma",),
    (Command.BOUNDS, "genus-cap"): ("s", "B"),
    (Command.BOUNDS, "list"): ("sigma", "B", "g"),
    (Command.NORTHCOTT, None): ("s", "B"),
    (Command.CENTRAL_ZEROS, None): ("n",),
    (Command.MOMENTS, "second-moment"): ("g", "alpha"),
    (Command.MOMENTS, "verify-afe"): ("D", "alpha"),
    (Command.MOMENTS, "c-alpha"): ("alpha",),
    (Command.MOMENTS, "charsum"): ("D", "n"),
    (Command.MOMENTS, "square-average"): ("D", "g"),
}


class _Parser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting."""

    def error(self, message: str):
        raise UsageError(message)


def _common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--q", required=True, help="field order, e.g. 5, 9 or q=3^2")
    sub.add_argument("--modulus", help="defining polynomial over F_p for extension fields")
    sub.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)
    sub.add_argument("--out", help="write the result to this file instead of standard output")
    sub.add_argument("--budget", type=int)
    sub.add_argument("--threads", type=int)
    sub.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ffzeta", description="Zeta functions of function fields over F_q")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub = subs.add_parser(Command.FIELD.value, help="describe F_q")
    _common(sub)

    sub = subs.add_parser(Command.POLY.value, help="factor a polynomial over F_q")
    _common(sub)
    sub.add_argument("--D", required=True)

    sub = subs.add_parser(Command.LPOLY.value, help="L-polynomial and class number of y^2 = D")
    _common(sub)
    sub.add_argument("--D", required=True)

    sub = subs.add_parser(Command.ZETA.value, help="zeta value and special value at s")
    _common(sub)
    sub.add_argument("--D", required=True)
    sub.add_argument("--s", required=True)

    sub = subs.add_parser(Command.CLASSIFY.value, help="which result governs the point s")
    _common(sub)
    sub.add_argument("--s")
    sub.add_argument("--trunc", type=int)
    sub.add_argument("--emit-plot-data", action="store_true", help="CSV of the classifier over a sigma x tau grid")
    sub.add_argument("--grid-steps", type=int)

    sub = subs.add_parser(Command.BOUNDS.value, help="explicit thresholds and count bounds")
    sub.add_argument("action", choices=BOUNDS_ACTIONS)
    _common(sub)
    sub.add_argument("--sigma")
    sub.add_argument("--s")
    sub.add_argument("--B")
    sub.add_argument("--g", type=int)

    sub = subs.add_parser(Command.NORTHCOTT.value, help="materialize S_{q,s,B}")
    _common(sub)
    sub.add_argument("--s", required=True)
    sub.add_argument("--B", required=True)
    sub.add_argument("--genus-min", type=int)
    sub.add_argument("--genus-max", type=int)
    sub.add_argument("--dedupe", choices=[d.value for d in DedupeMode])
    sub.add_argument("--plain-central-value", action="store_true")

    sub = subs.add_parser(Command.CENTRAL_ZEROS.value, help="search for L(q^-1/2, chi_D) = 0")
    _common(sub)
    sub.add_argument("--max-deg", dest="n", type=int, required=True)

    sub = subs.add_parser(Command.MOMENTS.value, help="shifted second moments and their finite identities")
    sub.add_argument("action", nargs="?", choices=MOMENTS_ACTIONS, default="second-moment")
    _common(sub)
    sub.add_argument("--g", type=int)
    sub.add_argument("--alpha")
    sub.add_argument("--D")
    sub.add_argument("--n", type=int)
    sub.add_argument("--trunc", type=int)
    return parser


def _field(args: argparse.Namespace) -> FieldSpec:
    try:
        spec = parse_field(args.q)
    except (InvalidPrimePower, ParseError) as e:
        raise UsageError(str(e), "--q") from e
    if args.modulus is None:
        return spec
    try:
        return parse_field(args.q, args.modulus)
    except ValueError as e:
        raise UsageError(str(e), "--modulus") from e


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """
    Parse argv into a RunConfig, validating every parameter up front.

    Raises:
        UsageError: unknown or missing flags, out-of-range values
        ParseError: malformed polynomial or number literals
    """
    args = build_parser().parse_args(argv)
    spec = _field(args)
    values: Dict[str, Any] = {"command": Command(args.command), "field": spec, "format": OutputFormat(args.format)}
    action = getattr(args, "action", None)
    if action is not None:
        values["action"] = action

    if getattr(args, "D", None) is not None:
        values["D"] = parse_poly(args.D, spec)
    for name in ("s", "alpha"):
        if getattr(args, name, None) is not None:
            values[name] = parse_complex(getattr(args, name))
    if getattr(args, "sigma", None) is not None:
        values["sigma"] = parse_real(args.sigma)
    if getattr(args, "B", None) is not None:
        B = parse_real(args.B)
        if B <= 0:
            raise UsageError("B must be positive", "--B")
        values["B"] = float(B)
    for name in ("g", "n", "genus_min", "genus_max", "trunc", "budget", "threads", "seed", "grid_steps"):
        if getattr(args, name, None) is not None:
            values[name] = getattr(args, name)
    if getattr(args, "dedupe", None):
        values["dedupe"] = DedupeMode(args.dedupe)
    if args.out:
        values["out"] = Path(args.out)
    values["emit_plot_data"] = bool(getattr(args, "emit_plot_data", False))
    values["plain_central_value"] = bool(getattr(args, "plain_central_value", False))

    missing = [f for f in _REQUIRED.get((values["command"], action), ()) if f not in values]
    if missing and not (values["command"] is Command.CLASSIFY and values["emit_plot_data"]):
        raise UsageError("is required here", "--" + missing[0].replace("_", "-"))

    try:
        config = RunConfig(**values)
    except ValueError as e:
        raise UsageError(_first_error(e)) from e
    if config.genus_min > config.genus_max:
        raise UsageError(f"must not exceed --genus-max ({config.genus_max})", "--genus-min")
    return config


def _first_error(error: ValueError) -> str:
    errors: List[Dict[str, Any]] = getattr(error, "errors", lambda: [])()
    if not errors:
        return str(error)
    first = errors[0]
    flag = "--" + str(first["loc"][0]).replace("_", "-") if first.get("loc") else ""
    return f"{flag}: {first['msg']}".strip(": ")
