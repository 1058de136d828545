"""Batch command-line front end.

Subcommands: ``roots`` (root finding with optional oracle cross-check),
``align`` (both alignment methods plus agreement flag), ``lemma`` (deformation
checkers), and ``continuity`` (modulus-of-continuity curves).  All reports are
versioned ``rootflow/1`` and are byte-deterministic for a fixed seed.

Exit codes: 0 pass/informational, 1 check failed, 2 usage or parse error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Sequence

from .align import (
    AlignConfig,
    AlignmentError,
    align_bottleneck_lists,
    align_by_deflation,
    bottleneck_deviation,
)
from .continuity import BracketError, ModulusConfig, ModulusCurve, modulus_curve
from .deform import (
    DEFAULT_LADDER,
    DeformConfig,
    Deformation,
    HenselLiftError,
    SampleEvaluationError,
    SingularInterpolationError,
    TrajectoryError,
    check_lemma1,
    check_lemma2,
)
from .hyper import OrderExhaustedError, set_zero_tolerance
from .poly import Poly, RootFindConfig, RootFindingError, find_roots, roots_oracle
from .schemas import CSV_COLUMNS, SCHEMA_VERSION

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

_NUMERIC_ERRORS = (
    RootFindingError,
    BracketError,
    OrderExhaustedError,
    SampleEvaluationError,
    HenselLiftError,
    SingularInterpolationError,
    TrajectoryError,
    ZeroDivisionError,
)


class CliInputError(ValueError):
    """Bad user input: reported on stderr with exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = 1e-12
    order: int = 8
    ladder: tuple = DEFAULT_LADDER
    seed: int = 0
    samples: int = 32
    out_format: str = "json"
    verify: bool = False

    def __post_init__(self) -> None:
        if not self.tolerance > 0:
            raise CliInputError("--tolerance must be positive")
        if self.order < 2:
            raise CliInputError("--order must be at least 2")
        if not self.ladder or any(t <= 0 for t in self.ladder) or any(
            self.ladder[i] <= self.ladder[i + 1] for i in range(len(self.ladder) - 1)
        ):
            raise CliInputError("--ladder must be strictly decreasing and positive")
        if self.out_format not in ("json", "csv"):
            raise CliInputError("--format must be json or csv")

    def root_cfg(self) -> RootFindConfig:
        return RootFindConfig(zero_tol=self.tolerance)

    def align_cfg(self) -> AlignConfig:
        return AlignConfig(zero_tol=self.tolerance, root_cfg=self.root_cfg())

    def deform_cfg(self) -> DeformConfig:
        return DeformConfig(ladder=tuple(self.ladder), root_cfg=self.root_cfg())

    def modulus_cfg(self) -> ModulusConfig:
        return ModulusConfig(samples=self.samples, seed=self.seed, root_cfg=self.root_cfg())


# -- parsing -----------------------------------------------------------------


def parse_complex(text: str, where: str = "value") -> complex:
    """Parse ``re+imi`` style complex entries ("3", "-1.5+0.25i", "2i")."""
    s = text.strip().replace(" ", "")
    if not s:
        raise CliInputError(f"{where}: empty complex entry")
    low = s.lower()
    if "inf" in low or "nan" in low:
        raise CliInputError(f"{where}: non-finite entry {text!r}")
    try:
        value = complex(low.replace("i", "j"))
    except ValueError as exc:
        raise CliInputError(f"{where}: cannot parse complex entry {text!r}") from exc
    return value


def parse_inline_poly(text: str, tolerance: float) -> Poly:
    entries = text.split(",")
    coeffs = [
        parse_complex(entry, where=f"coefficient {i}") for i, entry in enumerate(entries)
    ]
    if all(abs(c) <= tolerance for c in coeffs):
        raise CliInputError("zero polynomial")
    if abs(coeffs[-1]) <= tolerance and len(coeffs) > 1:
        raise CliInputError("zero leading coefficient (trim trailing entries)")
    return Poly.from_complex(coeffs, tol=tolerance)


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliInputError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc


def load_poly(path: str | None, inline: str | None, cfg: RunConfig) -> Poly:
    if (path is None) == (inline is None):
        raise CliInputError("provide exactly one of FILE or --inline")
    if inline is not None:
        return parse_inline_poly(inline, cfg.tolerance)
    obj = _load_json(path)
    try:
        p = Poly.from_json(obj, tol=cfg.tolerance)
    except ValueError as exc:
        raise CliInputError(f"{path}: {exc}") from exc
    if p.degree == 0 and abs(complex(p.coeffs[0])) <= cfg.tolerance:
        raise CliInputError("zero polynomial")
    return p


def load_deformation(path: str, cfg: RunConfig) -> Deformation:
    obj = _load_json(path)
    try:
        return Deformation.from_json(obj, order=cfg.order)
    except ValueError as exc:
        raise CliInputError(f"{path}: {exc}") from exc


def parse_ladder(text: str) -> tuple:
    """Either an explicit comma list or ``start:stop:count`` (geometric)."""
    if ":" in text:
        bits = text.split(":")
        if len(bits) != 3:
            raise CliInputError("--ladder expects start:stop:count or a comma list")
        try:
            start, stop, count = float(bits[0]), float(bits[1]), int(bits[2])
        except ValueError as exc:
            raise CliInputError(f"--ladder: {exc}") from exc
        if count < 2 or start <= stop or stop <= 0:
            raise CliInputError("--ladder needs start > stop > 0 and count >= 2")
        ratio = (stop / start) ** (1.0 / (count - 1))
        return tuple(start * ratio**k for k in range(count))
    try:
        values = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise CliInputError(f"--ladder: {exc}") from exc
    return values


def parse_epsilons(text: str) -> tuple:
    try:
        values = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise CliInputError(f"--epsilons: {exc}") from exc
    if not values or any(v <= 0 for v in values):
        raise CliInputError("--epsilons must be positive")
    return tuple(sorted(values))


# -- emission ------------------------------------------------------------------


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _json_text(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _curve_csv(curve: ModulusCurve) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for entry in curve.entries:
        if entry.point is None:
            writer.writerow([repr(entry.epsilon), "", "", "", "", "", "failed"])
            continue
        p = entry.point
        writer.writerow(
            [
                repr(p.epsilon),
                repr(p.delta),
                repr(p.distance_at_delta),
                json.dumps([[w.real, w.imag] for w in p.witness]),
                p.samples,
                p.seed,
                p.status,
            ]
        )
    return buf.getvalue()


# -- subcommands ---------------------------------------------------------------


def _cfg_from_args(args: argparse.Namespace) -> RunConfig:
    ladder = parse_ladder(args.ladder) if args.ladder else DEFAULT_LADDER
    cfg = RunConfig(
        tolerance=args.tolerance,
        order=args.order,
        ladder=ladder,
        seed=args.seed,
        samples=args.samples,
        out_format=args.format,
        verify=args.verify,
    )
    set_zero_tolerance(cfg.tolerance)
    return cfg


def cmd_roots(args: argparse.Namespace) -> int:
    cfg = _cfg_from_args(args)
    if cfg.out_format != "json":
        raise CliInputError("roots reports are JSON only")
    p = load_poly(args.poly, args.inline, cfg)
    if p.degree < 1:
        raise CliInputError("root finding requires degree >= 1")
    rs = find_roots(p, cfg.root_cfg())
    report = {
        "schema": SCHEMA_VERSION,
        "kind": "roots",
        "degree": p.degree,
        **rs.to_json(),
    }
    if cfg.verify:
        oracle = roots_oracle(p, cfg.root_cfg())
        report["verify"] = {
            "oracle_max_deviation": bottleneck_deviation(rs, oracle),
            "oracle_roots": [[z.real, z.imag] for z in oracle.expanded()],
        }
    _emit(_json_text(report), args.out)
    return EXIT_OK


def cmd_align(args: argparse.Namespace) -> int:
    cfg = _cfg_from_args(args)
    if cfg.out_format != "json":
        raise CliInputError("align reports are JSON only")
    f = load_poly(args.f, args.inline_f, cfg)
    g = load_poly(args.g, args.inline_g, cfg)
    if f.degree != g.degree:
        raise CliInputError(f"degree mismatch: {f.degree} vs {g.degree}")
    a_def = align_by_deflation(f, g, cfg.align_cfg())
    a_bot = align_bottleneck_lists(a_def.roots_f, a_def.roots_g)
    report = {
        "schema": SCHEMA_VERSION,
        "kind": "align",
        "deflation": a_def.to_json(),
        "bottleneck": a_bot.to_json(),
        "agreement": set(a_def.pairs) == set(a_bot.pairs),
    }
    _emit(_json_text(report), args.out)
    return EXIT_OK


def _chebyshev_points(count: int) -> list[complex]:
    return [
        complex(math.cos(math.pi * (2 * k + 1) / (2 * count)), 0.0)
        for k in range(count)
    ]


def cmd_lemma(args: argparse.Namespace) -> int:
    cfg = _cfg_from_args(args)
    if cfg.out_format != "json":
        raise CliInputError("lemma reports are JSON only")
    d = load_deformation(args.deformation, cfg)
    dcfg = cfg.deform_cfg()
    if args.which == 1:
        count = args.points if args.points else d.degree + 1
        if count < d.degree + 1:
            raise CliInputError(f"--points must be at least {d.degree + 1}")
        report_obj = check_lemma1(d, _chebyshev_points(count), dcfg)
    else:
        report_obj = check_lemma2(d, dcfg)
    report = {
        "schema": SCHEMA_VERSION,
        "kind": "lemma",
        **report_obj.to_json(),
    }
    _emit(_json_text(report), args.out)
    return EXIT_OK if report_obj.passed else EXIT_CHECK_FAILED


def cmd_continuity(args: argparse.Namespace) -> int:
    cfg = _cfg_from_args(args)
    f = load_poly(args.poly, args.inline, cfg)
    if f.degree < 1:
        raise CliInputError("continuity estimation requires degree >= 1")
    epsilons = parse_epsilons(args.epsilons)
    curve = modulus_curve(f, epsilons, cfg.modulus_cfg())
    if cfg.out_format == "csv":
        _emit(_curve_csv(curve), args.out)
        return EXIT_OK
    points = []
    for entry in curve.entries:
        if entry.point is None:
            points.append(
                {"epsilon": entry.epsilon, "status": "failed", "error": entry.error}
            )
        else:
            pj = entry.point.to_json()
            points.append(pj)
    report = {
        "schema": SCHEMA_VERSION,
        "kind": "continuity",
        "seed": cfg.seed,
        "samples": cfg.samples,
        "slope": None if math.isnan(curve.slope) else curve.slope,
        "points": points,
    }
    _emit(_json_text(report), args.out)
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--tolerance", type=float, default=1e-12, help="zero tolerance τ")
    sub.add_argument("--order", type=int, default=8, help="series truncation order K")
    sub.add_argument(
        "--ladder",
        default=None,
        help="ε ladder: comma list or start:stop:count (default 1e-1..1e-6, 6 points)",
    )
    sub.add_argument("--seed", type=int, default=0, help="seed for all sampling")
    sub.add_argument("--samples", type=int, default=32, help="random directions per search")
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--verify", action="store_true", help="enable oracle cross-checks")
    sub.add_argument("--out", default=None, help="write the report to FILE")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rootflow",
        description="Polynomial root continuity toolkit (reports versioned rootflow/1)",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_roots = subs.add_parser("roots", help="find roots with multiplicities")
    p_roots.add_argument("poly", nargs="?", help="polynomial JSON file")
    p_roots.add_argument("--inline", help="ascending coefficients, e.g. '-1,0,1'")
    _add_common(p_roots)
    p_roots.set_defaults(func=cmd_roots)

    p_align = subs.add_parser("align", help="align the roots of two polynomials")
    p_align.add_argument("f", nargs="?", help="base polynomial JSON file")
    p_align.add_argument("g", nargs="?", help="perturbed polynomial JSON file")
    p_align.add_argument("--inline-f", help="inline coefficients for f")
    p_align.add_argument("--inline-g", help="inline coefficients for g")
    _add_common(p_align)
    p_align.set_defaults(func=cmd_align)

    p_lemma = subs.add_parser("lemma", help="run a deformation checker")
    p_lemma.add_argument("deformation", help="deformation JSON file")
    p_lemma.add_argument("--which", type=int, choices=(1, 2), required=True)
    p_lemma.add_argument(
        "--points", type=int, default=None, help="sample point count for the lemma-1 check"
    )
    _add_common(p_lemma)
    p_lemma.set_defaults(func=cmd_lemma)

    p_cont = subs.add_parser("continuity", help="estimate the modulus of continuity")
    p_cont.add_argument("poly", nargs="?", help="polynomial JSON file")
    p_cont.add_argument("--inline", help="ascending coefficients")
    p_cont.add_argument("--epsilons", required=True, help="comma list of root tolerances")
    _add_common(p_cont)
    p_cont.set_defaults(func=cmd_continuity)

    return parser


def _glue_dashed_values(argv: Sequence[str]) -> list[str]:
    """Join option/value pairs so values like '-1,0,1' survive argparse."""
    opts = {"--inline", "--inline-f", "--inline-g", "--epsilons", "--ladder"}
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in opts:
            val = next(it, None)
            if val is None:
                out.append(tok)
            else:
                out.append(f"{tok}={val}")
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_dashed_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AlignmentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _NUMERIC_ERRORS as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:  # console-script hook
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
