"""Empirical modulus of continuity of the coefficients-to-roots map.

For a base polynomial ``f`` and a tolerance ``ε`` on root movement,
:func:`estimate_delta` searches for the largest coefficient perturbation size
``δ`` (max-norm over coefficients) whose observed worst root displacement
stays below ``ε``.  The inner maximization (:func:`worst_distance`) samples
structured coordinate directions, seeded random directions, and one greedy
sign-refinement round; it is a sampled estimate, never a certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence, Tuple

import numpy as np

from .align import align_bottleneck, alignment_distance
from .poly import Poly, RootFindConfig, RootFindingError, find_roots


class BracketError(ArithmeticError):
    """No δ bracket could be established inside the configured range."""


@dataclass(frozen=True)
class ModulusConfig:
    samples: int = 32
    seed: int = 0
    delta_min: float = 1e-15
    delta_max: float = 1.0
    bracket_ratio: float = 1.1
    root_cfg: RootFindConfig = RootFindConfig()


@dataclass(frozen=True)
class WorstDistanceResult:
    distance: float
    witness: Tuple[complex, ...]
    evaluated: int
    skipped: int


@dataclass(frozen=True)
class ModulusPoint:
    """One point of the modulus curve: the estimated δ for a given ε."""

    epsilon: float
    delta: float
    distance_at_delta: float
    witness: Tuple[complex, ...]
    samples: int
    seed: int
    status: str = "ok"  # "ok" | "saturated"
    clamped: bool = False

    def to_json(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "delta": self.delta,
            "distance_at_delta": self.distance_at_delta,
            "witness": [[w.real, w.imag] for w in self.witness],
            "samples": self.samples,
            "seed": self.seed,
            "status": self.status,
            "clamped": self.clamped,
        }


@dataclass(frozen=True)
class CurveEntry:
    epsilon: float
    point: ModulusPoint | None
    error: str = ""

    @property
    def status(self) -> str:
        return self.point.status if self.point is not None else "failed"


@dataclass(frozen=True)
class ModulusCurve:
    entries: Tuple[CurveEntry, ...]
    slope: float

    def points(self) -> Tuple[ModulusPoint, ...]:
        return tuple(e.point for e in self.entries if e.point is not None)


def perturbed(f: Poly, direction: Sequence[complex], delta: float) -> Poly:
    """``f + delta·direction`` without degree trimming."""
    if len(direction) != f.degree + 1:
        raise ValueError("direction length must match coefficient count")
    return Poly(tuple(complex(c) + delta * complex(d) for c, d in zip(f.coeffs, direction)))


def _cap_leading(f: Poly, direction: Sequence[complex], delta: float) -> Tuple[complex, ...]:
    """Scale the leading entry so the perturbed leading coefficient stays alive."""
    d = list(direction)
    lead = abs(complex(f.coeffs[-1]))
    top = abs(d[-1]) * delta
    if top > lead / 2.0 and top > 0.0:
        d[-1] = d[-1] * (lead / (2.0 * top))
    return tuple(d)


def _coordinate_directions(n: int):
    for k in range(n + 1):
        for u in (1.0 + 0j, -1.0 + 0j, 1j, -1j):
            d = [0j] * (n + 1)
            d[k] = u
            yield tuple(d)


def _random_direction(rng: np.random.Generator, n: int) -> Tuple[complex, ...]:
    v = rng.uniform(-1.0, 1.0, n + 1) + 1j * rng.uniform(-1.0, 1.0, n + 1)
    m = float(np.max(np.abs(v)))
    if m == 0.0:
        v = np.ones(n + 1, dtype=complex)
        m = 1.0
    return tuple(complex(x) for x in v / m)


def worst_distance(
    f: Poly, delta: float, cfg: ModulusConfig | None = None
) -> WorstDistanceResult:
    """Worst observed root displacement over sampled perturbation directions.

    Directions: the ±1 and ±i coordinate directions, ``cfg.samples`` seeded
    random max-norm-1 directions, and one coordinate sign-refinement round
    from the best candidate.  The leading-coefficient entry is capped so the
    perturbed polynomial keeps its degree.
    """
    cfg = cfg or ModulusConfig()
    if not delta > 0.0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    n = f.degree
    rs_f = find_roots(f, cfg.root_cfg)
    rng = np.random.default_rng(cfg.seed)

    best_d = -1.0
    best_w: Tuple[complex, ...] = ()
    evaluated = 0
    skipped = 0

    def consider(direction: Tuple[complex, ...]) -> None:
        nonlocal best_d, best_w, evaluated, skipped
        capped = _cap_leading(f, direction, delta)
        try:
            rs_g = find_roots(perturbed(f, capped, delta), cfg.root_cfg)
            dist = alignment_distance(align_bottleneck(rs_f, rs_g))
        except RootFindingError:
            skipped += 1
            return
        evaluated += 1
        if dist > best_d:
            best_d = dist
            best_w = capped

    for direction in _coordinate_directions(n):
        consider(direction)
    for _ in range(cfg.samples):
        consider(_random_direction(rng, n))
    base = best_w
    for k in range(n + 1):
        for u in (1.0 + 0j, -1.0 + 0j, 1j, -1j):
            if base[k] == u:
                continue
            trial = list(base)
            trial[k] = u
            consider(tuple(trial))

    return WorstDistanceResult(
        distance=best_d, witness=best_w, evaluated=evaluated, skipped=skipped
    )


def estimate_delta(
    f: Poly, epsilon: float, cfg: ModulusConfig | None = None
) -> ModulusPoint:
    """Largest tested δ whose worst sampled displacement stays below ε.

    Log-space bisection inside ``[cfg.delta_min, cfg.delta_max]`` until the
    bracket endpoints are within ``cfg.bracket_ratio`` of each other.  The
    witness is the failing endpoint's worst direction; a passing upper bound
    is reported as ``status="saturated"``.
    """
    cfg = cfg or ModulusConfig()
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    hi = cfg.delta_max
    lo = cfg.delta_min
    w_hi = worst_distance(f, hi, cfg)
    if w_hi.distance < epsilon:
        return ModulusPoint(
            epsilon=epsilon,
            delta=hi,
            distance_at_delta=w_hi.distance,
            witness=w_hi.witness,
            samples=cfg.samples,
            seed=cfg.seed,
            status="saturated",
        )
    w_lo = worst_distance(f, lo, cfg)
    if w_lo.distance >= epsilon:
        raise BracketError(
            f"no bracket in [{lo:g}, {hi:g}]: worst distance {w_lo.distance:g} at the "
            f"lower end and {w_hi.distance:g} at the upper end, epsilon {epsilon:g}"
        )
    while hi / lo >= cfg.bracket_ratio:
        mid = math.sqrt(lo * hi)
        w_mid = worst_distance(f, mid, cfg)
        if w_mid.distance < epsilon:
            lo, w_lo = mid, w_mid
        else:
            hi, w_hi = mid, w_mid
    return ModulusPoint(
        epsilon=epsilon,
        delta=lo,
        distance_at_delta=w_lo.distance,
        witness=w_hi.witness,
        samples=cfg.samples,
        seed=cfg.seed,
        status="ok",
    )


def soundness_check(
    f: Poly,
    point: ModulusPoint,
    n_samples: int = 500,
    cfg: ModulusConfig | None = None,
) -> Tuple[bool, float]:
    """Re-test a modulus point: fresh perturbations at δ/2 must stay below ε."""
    cfg = cfg or ModulusConfig()
    rng = np.random.default_rng([cfg.seed, 0x5EED, int(point.epsilon * 1e12) & 0xFFFFFFFF])
    rs_f = find_roots(f, cfg.root_cfg)
    n = f.degree
    worst = 0.0
    for _ in range(n_samples):
        direction = _cap_leading(f, _random_direction(rng, n), point.delta / 2.0)
        rs_g = find_roots(perturbed(f, direction, point.delta / 2.0), cfg.root_cfg)
        worst = max(worst, alignment_distance(align_bottleneck(rs_f, rs_g)))
    return worst < point.epsilon, worst


def modulus_curve(
    f: Poly, epsilons: Sequence[float], cfg: ModulusConfig | None = None
) -> ModulusCurve:
    """Estimate δ(ε) over a sorted grid and fit the log-log slope.

    Per-point failures become failed entries rather than aborting the curve;
    after estimation, δ is clamped to be non-decreasing in ε (clamped points
    are flagged: sampler noise, not a real violation).
    """
    cfg = cfg or ModulusConfig()
    eps = [float(e) for e in epsilons]
    if not eps or any(e <= 0 for e in eps) or any(
        eps[i] >= eps[i + 1] for i in range(len(eps) - 1)
    ):
        raise ValueError("epsilons must be positive and strictly increasing")
    entries: list[CurveEntry] = []
    for e in eps:
        try:
            entries.append(CurveEntry(epsilon=e, point=estimate_delta(f, e, cfg)))
        except (BracketError, RootFindingError) as exc:
            entries.append(CurveEntry(epsilon=e, point=None, error=str(exc)))
    prev = None
    for i, entry in enumerate(entries):
        if entry.point is None:
            continue
        if prev is not None and entry.point.delta < prev:
            entries[i] = CurveEntry(
                epsilon=entry.epsilon,
                point=replace(entry.point, delta=prev, clamped=True),
            )
        prev = entries[i].point.delta
    ok = [(e.epsilon, e.point.delta) for e in entries if e.point is not None]
    if len(ok) >= 2:
        xs = np.log([p[0] for p in ok])
        ys = np.log([p[1] for p in ok])
        slope = float(np.polyfit(xs, ys, 1)[0])
    else:
        slope = math.nan
    return ModulusCurve(entries=tuple(entries), slope=slope)
