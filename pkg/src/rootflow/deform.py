"""Infinitesimal deformations of a complex polynomial.

A :class:`Deformation` couples a base polynomial ``f`` with coefficient paths
``b_i(ε)`` given as truncated series.  Two engines connect the series world to
numbers:

* :func:`hensel_lift_root` lifts a simple root of ``f`` to a series root of
  the deformed polynomial by Newton iteration in series arithmetic (the
  correct order doubles per step);
* :func:`root_trajectories` substitutes a decreasing ladder of real values
  for ε, tracks the numeric roots across ladder points by optimal pairing,
  and extrapolates each trajectory to its ε→0 limit.

On top of these sit :func:`check_lemma1` (coefficient closeness is equivalent
to evaluation closeness, with the infinite-coefficient escape hatch) and
:func:`check_lemma2` (root limits land on roots of the base; a hypothesis
violation in the leading coefficient instead produces an escaping root).
Both return a :class:`LemmaReport` of independently witnessed items.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

from . import hyper
from .align import bottleneck_pairs
from .hyper import HyperScalar, Magnitude, embed, zero_tolerance
from .poly import Poly, RootFindConfig, RootSet, find_roots


class SampleEvaluationError(ArithmeticError):
    """A coefficient path overflowed when evaluated at a ladder point."""


class NotSimpleRootError(ArithmeticError):
    """Series lifting requires a simple root; use root_trajectories instead."""


class HenselLiftError(ArithmeticError):
    """Newton iteration in series arithmetic failed to reach the target order."""


class SingularInterpolationError(ArithmeticError):
    """Interpolation system is numerically singular (sample points too close)."""


class TrajectoryError(ArithmeticError):
    """Root counts changed along the ladder; trajectories are undefined."""


DEFAULT_LADDER: Tuple[float, ...] = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)


@dataclass(frozen=True)
class DeformConfig:
    ladder: Tuple[float, ...] = DEFAULT_LADDER
    root_cfg: RootFindConfig = RootFindConfig()
    limit_tol_floor: float = 1e-8
    residual_tol: float = 1e-8
    simple_threshold: float = 1e-8
    pairing_tie_tol: float = 1e-10
    growth_threshold: float = 1e-2
    min_point_separation: float = 1e-8


@dataclass(frozen=True)
class Deformation:
    """Base polynomial plus one series path per coefficient (index i ↦ b_i)."""

    base: Poly
    paths: Tuple[HyperScalar, ...]
    kind: str = "series"

    def __post_init__(self) -> None:
        if self.base.is_hyper:
            raise TypeError("deformation base must have complex coefficients")
        if len(self.paths) < self.base.degree + 1:
            raise ValueError(
                f"need {self.base.degree + 1} paths for a degree-{self.base.degree} base, "
                f"got {len(self.paths)}"
            )
        if self.paths[-1].is_zero:
            raise ValueError("leading coefficient path is identically zero")

    @property
    def degree(self) -> int:
        return len(self.paths) - 1

    def base_coefficient(self, i: int) -> complex:
        return complex(self.base.coeffs[i]) if i <= self.base.degree else 0j

    def common_order(self) -> Fraction:
        return min(p.order for p in self.paths)

    def hyper_poly(self) -> Poly:
        return Poly.over_hyper(self.paths)

    @classmethod
    def linear(
        cls, base: Poly, directions: Sequence[complex], order=None
    ) -> "Deformation":
        """Paths ``b_i = a_i + ε·h_i`` for a direction vector ``h``."""
        if len(directions) != base.degree + 1:
            raise ValueError("need one direction per coefficient")
        paths = tuple(
            HyperScalar.from_terms(
                [(0, complex(base.coeffs[i])), (1, complex(h))], order=order
            )
            for i, h in enumerate(directions)
        )
        return cls(base=base, paths=paths, kind="linear")

    @classmethod
    def from_series(cls, base: Poly, paths: Sequence[HyperScalar]) -> "Deformation":
        return cls(base=base, paths=tuple(paths), kind="series")

    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "kind": "series",
            "paths": [p.to_json() for p in self.paths],
        }

    @classmethod
    def from_json(cls, obj: dict, order=None) -> "Deformation":
        try:
            base = Poly.from_json(obj["base"])
            kind = obj.get("kind", "series")
            raw = obj["paths"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed deformation object: {exc}") from exc
        if kind == "linear":
            directions = [complex(float(re), float(im)) for re, im in raw]
            return cls.linear(base, directions, order=order)
        if kind == "series":
            return cls.from_series(base, [HyperScalar.from_json(p) for p in raw])
        raise ValueError(f"unknown deformation kind {kind!r}")


def is_infinitesimal_deformation(d: Deformation) -> bool:
    """True iff every path stays infinitesimally close to its base coefficient."""
    return all(
        hyper.approx_eq(p, embed(d.base_coefficient(i), order=p.order))
        for i, p in enumerate(d.paths)
    )


def theorem1_applicable(d: Deformation) -> bool:
    """Infinitesimal deformation with a non-degenerate leading coefficient."""
    return is_infinitesimal_deformation(d) and abs(d.base_coefficient(d.degree)) > zero_tolerance()


def sample_at(d: Deformation, t: float) -> Poly:
    """Substitute ε = t into every coefficient path (numeric evaluation)."""
    if not 0.0 < t <= 1.0:
        raise ValueError(f"ladder point must satisfy 0 < t <= 1, got {t!r}")
    coeffs = []
    for path in d.paths:
        try:
            val = hyper.evaluate_at(path, t)
        except OverflowError as exc:
            raise SampleEvaluationError(
                f"coefficient path overflowed at t={t!r}: {exc}"
            ) from exc
        if not (math.isfinite(val.real) and math.isfinite(val.imag)):
            raise SampleEvaluationError(f"coefficient path overflowed at t={t!r}")
        coeffs.append(val)
    return Poly.from_complex(coeffs, tol=0.0)


# -- series-root lifting -----------------------------------------------------

_EPS = 2.0 ** -52
_NOISE_SLACK = 64.0


def _magnitude_series(x: HyperScalar) -> HyperScalar:
    """Coefficient-wise absolute values: plus-only arithmetic bounds round-off."""
    return HyperScalar(tuple((e, complex(abs(c), 0.0)) for e, c in x.terms), x.order)


def _evaluation_noise_floor(d: Deformation, s: HyperScalar) -> dict:
    """Per-exponent round-off floor of evaluating the deformation at ``s``.

    Horner over the magnitude series accumulates, per ε-order, the total
    coefficient magnitude that cancellation can smear; dust below
    ``slack·eps`` times that bound is numerically indistinguishable from zero.
    """
    ms = _magnitude_series(s)
    acc = _magnitude_series(d.paths[-1])
    for path in reversed(d.paths[:-1]):
        acc = acc * ms + _magnitude_series(path)
    return {e: c.real for e, c in acc.terms}


def lift_residual_resolved(
    d: Deformation, s: HyperScalar, order=None
) -> bool:
    """True when ``eval(g, s)`` vanishes past ``order`` up to the double floor.

    Two irreducible floors make a coefficient count as zero:

    * evaluation noise: ``slack·eps`` times the per-order magnitude that the
      Horner cancellation smears;
    * representation limit: the coefficients of ``s`` are themselves clipped
      at τ, so the residual inherits up to ``τ·‖g'(s)‖₁`` per order (a root
      series whose true coefficient is below τ cannot be stored at all).

    Residual content above both floors means the lift genuinely failed.
    """
    target = d.common_order() if order is None else Fraction(order)
    residual = d.hyper_poly().eval(s)
    if residual.valuation() > target:
        return True
    bounds = _evaluation_noise_floor(d, s)
    tol = zero_tolerance()
    deriv = d.hyper_poly().derivative().eval(s)
    deriv_norm = sum(abs(c) for _, c in deriv.terms)
    representation_floor = 8.0 * tol * (1.0 + deriv_norm)
    for e, c in residual.terms:
        if e > target:
            continue
        floor = max(representation_floor, _NOISE_SLACK * _EPS * bounds.get(e, 0.0))
        if abs(c) > floor:
            return False
    return True


def hensel_lift_root(
    d: Deformation,
    r: complex,
    order=None,
    cfg: DeformConfig | None = None,
) -> HyperScalar:
    """Lift a simple root ``r`` of the base to a series root of the deformation.

    Returns ``s`` with ``standard_part(s) = r`` whose residual vanishes past
    ``order`` (default: the common truncation order of the paths) in the sense
    of :func:`lift_residual_resolved`: exactly below τ, or within the
    double-precision noise floor of the evaluation for large series.
    """
    cfg = cfg or DeformConfig()
    k = d.common_order()
    target = k if order is None else Fraction(order)
    if target > k:
        raise ValueError(f"requested order {target} exceeds stored path order {k}")
    r = complex(r)
    scale = sum(abs(complex(c)) * max(1.0, abs(r)) ** i for i, c in enumerate(d.base.coeffs))
    if abs(complex(d.base.eval(r))) > cfg.residual_tol * max(scale, 1.0):
        raise ValueError(f"{r!r} is not a root of the base polynomial within tolerance")
    if abs(complex(d.base.derivative().eval(r))) <= cfg.simple_threshold:
        raise NotSimpleRootError(
            f"base derivative vanishes at {r!r}; lift only handles simple roots "
            "(use root_trajectories for multiple roots)"
        )
    gp = d.hyper_poly()
    gpd = gp.derivative()
    s = embed(r, order=k)
    for _ in range(64):
        residual = gp.eval(s)
        if residual.valuation() > target or lift_residual_resolved(d, s, target):
            return s
        step = residual / gpd.eval(s)
        if step.is_zero:
            break  # τ floor reached without resolving the residual: give up loudly
        s = s - step
    raise HenselLiftError(f"lift failed to push the residual past order {target}")


def lift_paths_reconstruction(d: Deformation, lifted: Sequence[HyperScalar]) -> Poly:
    """Expand ``b_n·∏(z − s_i)`` from lifted roots (coefficient cross-check)."""
    out = Poly.over_hyper([d.paths[-1]])
    for s in lifted:
        out = out.mul_linear(s)
    return out


# -- numeric trajectories ----------------------------------------------------


@dataclass(frozen=True)
class Trajectory:
    points: Tuple[complex, ...]
    limit: complex
    extrap_residual: float
    multiplicity: int
    nearest_root: complex
    distance: float


@dataclass(frozen=True)
class AmbiguityFlag:
    """Two pairings at one ladder step were within the tie tolerance."""

    step: int
    swap: Tuple[int, int]
    chosen_max_distance: float
    alternative_max_distance: float


@dataclass(frozen=True)
class TrajectoryBundle:
    ladder: Tuple[float, ...]
    trajectories: Tuple[Trajectory, ...]
    base_roots: RootSet
    ambiguities: Tuple[AmbiguityFlag, ...]


def _extrapolate(ts: Sequence[float], ys: Sequence[complex], m: int) -> Tuple[complex, float]:
    """Fit ``c0 + c1·t**(1/m)`` on the tail points; return (c0, max residual)."""
    if len(ys) == 1:
        return ys[0], 0.0
    u = np.array([t ** (1.0 / m) for t in ts], dtype=float)
    a = np.stack([np.ones_like(u), u], axis=1).astype(complex)
    y = np.array(ys, dtype=complex)
    sol, *_ = np.linalg.lstsq(a, y, rcond=None)
    fit = a @ sol
    return complex(sol[0]), float(np.max(np.abs(fit - y)))


def root_trajectories(
    d: Deformation,
    ladder: Sequence[float] | None = None,
    cfg: DeformConfig | None = None,
) -> TrajectoryBundle:
    """Track the roots of ``sample_at(d, t)`` along a decreasing ladder.

    Consecutive root lists are joined by optimal bottleneck pairing; each
    trajectory is extrapolated to t→0 with the ``t**(1/m)`` model, where m is
    the multiplicity of the nearest cluster of the base polynomial.
    """
    cfg = cfg or DeformConfig()
    ladder = tuple(cfg.ladder if ladder is None else ladder)
    if not ladder:
        raise ValueError("ladder must be non-empty")
    if any(t <= 0 for t in ladder) or any(
        ladder[i] <= ladder[i + 1] for i in range(len(ladder) - 1)
    ):
        raise ValueError("ladder must be strictly decreasing and positive")

    rootsets = [find_roots(sample_at(d, t), cfg.root_cfg) for t in ladder]
    counts = {rs.total_multiplicity for rs in rootsets}
    if len(counts) != 1:
        raise TrajectoryError(f"root count varies along the ladder: {sorted(counts)}")

    points: list[list[complex]] = [
        sorted(rootsets[0].expanded(), key=lambda z: (z.real, z.imag))
    ]
    flags: list[AmbiguityFlag] = []
    for step in range(1, len(ladder)):
        prev = points[-1]
        ys = list(rootsets[step].expanded())
        pairs, dists, worst = bottleneck_pairs(prev, ys)
        perm = [j for _, j in pairs]  # pairs come sorted by left index
        dmat = [[abs(p - y) for y in ys] for p in prev]
        per_pair = list(dists)
        for i in range(len(prev)):
            for k in range(i + 1, len(prev)):
                others = max(
                    (per_pair[q] for q in range(len(prev)) if q not in (i, k)),
                    default=0.0,
                )
                alt = max(others, dmat[i][perm[k]], dmat[k][perm[i]])
                if perm[i] != perm[k] and abs(alt - worst) <= cfg.pairing_tie_tol and (
                    dmat[i][perm[k]] != dmat[i][perm[i]] or dmat[k][perm[i]] != dmat[k][perm[k]]
                ):
                    flags.append(
                        AmbiguityFlag(
                            step=step,
                            swap=(i, k),
                            chosen_max_distance=worst,
                            alternative_max_distance=alt,
                        )
                    )
        points.append([ys[j] for j in perm])

    base_rs = find_roots(d.base, cfg.root_cfg)
    tail = min(3, len(ladder))
    trajectories = []
    for idx in range(len(points[0])):
        path_pts = tuple(points[step][idx] for step in range(len(ladder)))
        naive = path_pts[-1]
        near_i = min(
            range(len(base_rs.centers)), key=lambda j: abs(base_rs.centers[j] - naive)
        )
        m = base_rs.multiplicities[near_i]
        limit, resid = _extrapolate(ladder[-tail:], path_pts[-tail:], m)
        nearest = min(base_rs.centers, key=lambda c: abs(c - limit))
        trajectories.append(
            Trajectory(
                points=path_pts,
                limit=limit,
                extrap_residual=resid,
                multiplicity=m,
                nearest_root=nearest,
                distance=abs(nearest - limit),
            )
        )
    return TrajectoryBundle(
        ladder=ladder,
        trajectories=tuple(trajectories),
        base_roots=base_rs,
        ambiguities=tuple(flags),
    )


# -- lemma reports -----------------------------------------------------------


@dataclass(frozen=True)
class ReportItem:
    name: str
    passed: bool
    informational: bool = False
    tolerance: float | None = None
    witness: dict | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "informational": self.informational,
            "tolerance": self.tolerance,
            "witness": self.witness,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class LemmaReport:
    claim: str
    items: Tuple[ReportItem, ...]

    @property
    def passed(self) -> bool:
        return all(it.passed for it in self.items if not it.informational)

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "passed": self.passed,
            "items": [it.to_json() for it in self.items],
        }


def _c_pair(z: complex) -> list[float]:
    return [z.real, z.imag]


def _solve_hyper_system(
    matrix: list[list[HyperScalar]], rhs: list[HyperScalar]
) -> list[HyperScalar]:
    """Gaussian elimination with magnitude-aware pivoting, in series arithmetic."""
    n = len(matrix)
    aug = [list(matrix[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        best = None
        best_key = None
        for row in range(col, n):
            entry = aug[row][col]
            if entry.is_zero:
                continue
            key = (entry.valuation(), -abs(entry.leading_coefficient()), row)
            if best_key is None or key < best_key:
                best, best_key = row, key
        if best is None:
            raise SingularInterpolationError(
                "interpolation matrix is singular (sample points too close)"
            )
        aug[col], aug[best] = aug[best], aug[col]
        pivot = aug[col][col]
        for row in range(col + 1, n):
            if aug[row][col].is_zero:
                continue
            factor = aug[row][col] / pivot
            for k in range(col, n + 1):
                aug[row][k] = aug[row][k] - factor * aug[col][k]
    xs: list[HyperScalar] = [HyperScalar.zero()] * n
    for i in range(n - 1, -1, -1):
        acc = aug[i][n]
        for j in range(i + 1, n):
            acc = acc - aug[i][j] * xs[j]
        xs[i] = acc / aug[i][i]
    return xs


def check_lemma1(
    d: Deformation,
    sample_points: Sequence[complex],
    cfg: DeformConfig | None = None,
) -> LemmaReport:
    """Check coefficient closeness ⇔ evaluation closeness on sample points.

    Items: evaluation closeness at every point (when the deformation is
    infinitesimal), recovery of the stored paths by interpolation in series
    arithmetic, closeness of the recovered paths to the base coefficients,
    and detection of an infinite evaluation when some path is infinite.
    """
    cfg = cfg or DeformConfig()
    pts = [complex(z) for z in sample_points]
    n = d.degree
    if len(pts) < n + 1:
        raise ValueError(f"need at least {n + 1} sample points, got {len(pts)}")
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(pts[i] - pts[j]) < cfg.min_point_separation:
                raise SingularInterpolationError(
                    f"sample points {i} and {j} closer than {cfg.min_point_separation}"
                )

    k = d.common_order()
    gp = d.hyper_poly()
    values = [gp.eval(embed(z, order=k)) for z in pts]
    infinitesimal = is_infinitesimal_deformation(d)
    items: list[ReportItem] = []

    if infinitesimal:
        bad = None
        for z, v in zip(pts, values):
            if not hyper.approx_eq(v, embed(complex(_pad_eval(d, z)), order=k)):
                bad = z
                break
        items.append(
            ReportItem(
                name="evaluations-approximate-base",
                passed=bad is None,
                witness=None if bad is None else {"point": _c_pair(bad)},
                detail="g(z) ≈ f(z) at every sample point",
            )
        )
    else:
        which = [
            i
            for i, p in enumerate(d.paths)
            if not hyper.approx_eq(p, embed(d.base_coefficient(i), order=p.order))
        ]
        items.append(
            ReportItem(
                name="not-an-infinitesimal-deformation",
                passed=True,
                informational=True,
                witness={"coefficients": which},
                detail="evaluation-closeness items skipped: premise does not hold",
            )
        )

    subset = pts[: n + 1]
    matrix = [[embed(z**i, order=k) for i in range(n + 1)] for z in subset]
    recovered = _solve_hyper_system(matrix, [gp.eval(embed(z, order=k)) for z in subset])
    scale = max(
        [1.0]
        + [abs(c) for p in d.paths for _, c in p.terms]
    )
    interp_tol = max(zero_tolerance(), zero_tolerance() * scale)
    bad_i = None
    for i in range(n + 1):
        if not hyper.terms_close(recovered[i], d.paths[i], tol=interp_tol):
            bad_i = i
            break
    items.append(
        ReportItem(
            name="interpolation-recovers-paths",
            passed=bad_i is None,
            tolerance=interp_tol,
            witness=None if bad_i is None else {"coefficient": bad_i},
            detail="series-arithmetic interpolation reproduces the stored paths term by term",
        )
    )

    if infinitesimal:
        bad_i = None
        for i in range(n + 1):
            if not hyper.approx_eq(recovered[i], embed(d.base_coefficient(i), order=k)):
                bad_i = i
                break
        items.append(
            ReportItem(
                name="recovered-paths-near-base",
                passed=bad_i is None,
                witness=None if bad_i is None else {"coefficient": bad_i},
                detail="each interpolated coefficient is infinitesimally close to the base",
            )
        )

    if any(p.valuation() < 0 for p in d.paths):
        hit = any(v.classify() is Magnitude.INFINITE for v in values)
        items.append(
            ReportItem(
                name="infinite-coefficient-detected",
                passed=hit,
                witness={
                    "classifications": [v.classify().value for v in values],
                },
                detail="an infinite path forces an infinite evaluation among the points",
            )
        )

    return LemmaReport(claim="lemma1", items=tuple(items))


def _pad_eval(d: Deformation, z: complex) -> complex:
    acc = 0j
    for i in range(d.degree, -1, -1):
        acc = acc * z + d.base_coefficient(i)
    return acc


def check_lemma2(d: Deformation, cfg: DeformConfig | None = None) -> LemmaReport:
    """Check that root trajectories stay bounded and land on roots of the base.

    When the leading path is infinitesimal the hypothesis fails; the report
    then carries an informational violation marker plus a positive check that
    some trajectory escapes like 1/t.
    """
    cfg = cfg or DeformConfig()
    bundle = root_trajectories(d, None, cfg)
    items: list[ReportItem] = []

    if theorem1_applicable(d):
        worst_excess = None
        for step, t in enumerate(bundle.ladder):
            sampled = sample_at(d, t)
            cs = [abs(complex(c)) for c in sampled.coeffs]
            bound = (1.0 + max(cs[:-1]) / cs[-1]) * (1.0 + 1e-9) + 1e-12
            for traj in bundle.trajectories:
                excess = abs(traj.points[step]) - bound
                if worst_excess is None or excess > worst_excess[0]:
                    worst_excess = (excess, step, traj.points[step])
        items.append(
            ReportItem(
                name="trajectories-bounded",
                passed=worst_excess[0] <= 0.0,
                witness={
                    "step": worst_excess[1],
                    "point": _c_pair(worst_excess[2]),
                    "excess": worst_excess[0],
                },
                detail="every trajectory stays within the coefficient-ratio bound",
            )
        )
        worst = None
        for traj in bundle.trajectories:
            tol = max(
                cfg.limit_tol_floor,
                10.0 * (traj.extrap_residual + bundle.base_roots.residual_bound),
            )
            margin = traj.distance - tol
            if worst is None or margin > worst[0]:
                worst = (margin, traj, tol)
        items.append(
            ReportItem(
                name="limits-are-roots",
                passed=worst[0] <= 0.0,
                tolerance=worst[2],
                witness={
                    "limit": _c_pair(worst[1].limit),
                    "nearest_root": _c_pair(worst[1].nearest_root),
                    "distance": worst[1].distance,
                },
                detail="every extrapolated trajectory limit lies on a root of the base",
            )
        )
    else:
        leading = d.paths[-1].classify()
        items.append(
            ReportItem(
                name="hypothesis-violation",
                passed=True,
                informational=True,
                witness={"leading_classification": leading.value},
                detail="deformation does not satisfy the nonzero-leading-coefficient hypothesis",
            )
        )
        if leading is Magnitude.INFINITESIMAL:
            growths = [
                min(abs(traj.points[step]) * t for step, t in enumerate(bundle.ladder))
                for traj in bundle.trajectories
            ]
            best = max(growths) if growths else 0.0
            items.append(
                ReportItem(
                    name="escaping-trajectory",
                    passed=best >= cfg.growth_threshold,
                    tolerance=cfg.growth_threshold,
                    witness={"min_scaled_magnitude": best},
                    detail="an infinitesimal leading coefficient produces a ~1/t root",
                )
            )

    return LemmaReport(claim="lemma2", items=tuple(items))
