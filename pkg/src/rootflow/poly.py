"""Dense polynomials over complex numbers or HyperScalars.

One :class:`Poly` type covers both coefficient domains; evaluation, deflation
and reconstruction are generic over any scalar supporting ``+ * /``.  Numeric
root finding (:func:`find_roots`) runs an Aberth–Ehrlich simultaneous
iteration with cluster detection for multiple roots; :func:`roots_oracle`
cross-checks it through the eigenvalues of the companion matrix and is meant
for tests and ``--verify`` paths only.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from .hyper import HyperScalar, Magnitude, embed

Scalar = Union[complex, HyperScalar]

_EPS = 2.0 ** -52
# golden-angle increment: 2π(1 − 1/φ), breaks all rotational symmetry
_GOLDEN_ANGLE = 2.0 * math.pi * (1.0 - 2.0 / (1.0 + math.sqrt(5.0)))


class RootFindingError(ArithmeticError):
    """Simultaneous iteration failed to converge; carries the best iterate."""

    def __init__(self, message: str, best: Tuple[complex, ...] = ()):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class RootFindConfig:
    zero_tol: float = 1e-12
    correction_tol: float = 1e-13
    max_iterations: int = 200
    cluster_radius: float | None = None  # None: max(1e-7, 1e3·eps·|root|)
    residual_floor_factor: float = 8.0


@dataclass(frozen=True)
class Poly:
    """Coefficients in ascending degree order; index i holds the z**i weight."""

    coeffs: Tuple[Scalar, ...]

    @classmethod
    def from_complex(cls, values: Sequence, tol: float = 1e-12) -> "Poly":
        cs = [complex(v) for v in values]
        while len(cs) > 1 and abs(cs[-1]) <= tol:
            cs.pop()
        if not cs:
            cs = [0j]
        return cls(tuple(cs))

    @classmethod
    def over_hyper(cls, values: Sequence) -> "Poly":
        cs = [v if isinstance(v, HyperScalar) else embed(v) for v in values]
        while len(cs) > 1 and cs[-1].is_zero:
            cs.pop()
        if not cs:
            cs = [HyperScalar.zero()]
        return cls(tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_hyper(self) -> bool:
        return isinstance(self.coeffs[-1], HyperScalar)

    def eval(self, z):
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * z + c
        return acc

    def derivative(self) -> "Poly":
        if self.degree == 0:
            zero = HyperScalar.zero() if self.is_hyper else 0j
            return Poly((zero,))
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def deflate(self, root) -> Tuple["Poly", Scalar]:
        """Divide by ``(z − root)``: ``self = (z − root)·quotient + remainder``.

        Synthetic division runs forward for |root| ≤ 1 and backward otherwise
        (the numerically stable direction in each regime); the remainder is
        the Horner evaluation at ``root`` in both cases.
        """
        n = self.degree
        if n < 1:
            raise ValueError("cannot deflate a constant polynomial")
        if isinstance(root, HyperScalar) and not self.is_hyper:
            return Poly.over_hyper(self.coeffs).deflate(root)
        size = _magnitude(root)
        remainder = self.eval(root)
        if size <= 1.0:
            q = [self.coeffs[n]]
            for k in range(n - 1, 0, -1):
                q.append(self.coeffs[k] + root * q[-1])
            q.reverse()
        else:
            q = [(remainder - self.coeffs[0]) / root]
            for k in range(1, n):
                q.append((q[-1] - self.coeffs[k]) / root)
        return Poly(tuple(q)), remainder

    def mul_linear(self, root) -> "Poly":
        """Multiply by ``(z − root)`` (reconstruction helper)."""
        if isinstance(root, HyperScalar) and not self.is_hyper:
            return Poly.over_hyper(self.coeffs).mul_linear(root)
        out = [-(self.coeffs[0] * root)]
        for k in range(1, self.degree + 2):
            prev = self.coeffs[k - 1]
            cur = self.coeffs[k] if k <= self.degree else None
            term = prev if cur is None else prev - cur * root
            out.append(term)
        return Poly(tuple(out))

    def to_json(self) -> dict:
        if self.is_hyper:
            raise TypeError("JSON polynomial schema covers complex coefficients only")
        return {"coeffs": [[complex(c).real, complex(c).imag] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict, tol: float = 1e-12) -> "Poly":
        try:
            values = [complex(float(re), float(im)) for re, im in obj["coeffs"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed polynomial object: {exc}") from exc
        if len(values) > 1 and abs(values[-1]) <= tol:
            raise ValueError("polynomial has a zero leading coefficient")
        return cls.from_complex(values, tol=tol)


def _magnitude(root) -> float:
    if isinstance(root, HyperScalar):
        if root.classify() is Magnitude.INFINITE:
            return math.inf
        return abs(root.standard_part())
    return abs(complex(root))


def standard_part_poly(p: Poly) -> Poly:
    """Coefficient-wise standard part of a polynomial over HyperScalars."""
    if not p.is_hyper:
        return p
    return Poly.from_complex([c.standard_part() for c in p.coeffs], tol=0.0)


# -- root sets ---------------------------------------------------------------


@dataclass(frozen=True)
class RootSet:
    """Clustered roots: centers with multiplicities, radii, and a residual bound.

    ``residual_bound`` is dimensionless: the largest round-off-normalized
    magnitude of p and its first m−1 derivatives over the cluster centers,
    inflated by a safety factor, so "below the bound" is meaningful across
    coefficient scales.
    """

    centers: Tuple[complex, ...]
    multiplicities: Tuple[int, ...]
    radii: Tuple[float, ...]
    residual_bound: float

    @property
    def total_multiplicity(self) -> int:
        return sum(self.multiplicities)

    def expanded(self) -> Tuple[complex, ...]:
        """Roots listed with duplication, in stored (lexicographic) order."""
        out: list[complex] = []
        for c, m in zip(self.centers, self.multiplicities):
            out.extend([c] * m)
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "roots": [
                {"root": [c.real, c.imag], "multiplicity": m, "radius": r}
                for c, m, r in zip(self.centers, self.multiplicities, self.radii)
            ],
            "residual_bound": self.residual_bound,
        }


def _horner(coeffs: np.ndarray, z: complex) -> complex:
    acc = coeffs[-1]
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc


def _abs_horner(coeffs: np.ndarray, x: float) -> float:
    acc = abs(coeffs[-1])
    for c in coeffs[-2::-1]:
        acc = acc * x + abs(c)
    return acc


def _deriv_coeffs(coeffs: np.ndarray) -> np.ndarray:
    n = len(coeffs) - 1
    if n == 0:
        return np.zeros(1, dtype=complex)
    return coeffs[1:] * np.arange(1, n + 1)


def _aberth(coeffs: np.ndarray, cfg: RootFindConfig) -> np.ndarray:
    """All roots of a monic polynomial by Ehrlich–Aberth sweeps."""
    n = len(coeffs) - 1
    dcoef = _deriv_coeffs(coeffs)
    radius = 1.0 + float(np.max(np.abs(coeffs[:-1]))) if n > 0 else 1.0
    z = np.array(
        [radius * cmath.exp(1j * (_GOLDEN_ANGLE * k + 0.5)) for k in range(n)],
        dtype=complex,
    )
    abs_floor = 0.1 * cfg.correction_tol * radius
    for _ in range(cfg.max_iterations):
        done = True
        for i in range(n):
            zi = z[i]
            pv = _horner(coeffs, zi)
            if abs(pv) <= cfg.residual_floor_factor * _EPS * _abs_horner(coeffs, abs(zi)):
                continue
            dv = _horner(dcoef, zi)
            if dv == 0:
                z[i] = zi * (1.0 + 1e-8) + radius * 1e-9
                done = False
                continue
            w = pv / dv
            s = 0j
            collision = False
            for j in range(n):
                if j == i:
                    continue
                diff = zi - z[j]
                if diff == 0:
                    collision = True
                    break
                s += 1.0 / diff
            if collision:
                z[i] = zi + radius * 1e-12 * (i + 1)
                done = False
                continue
            denom = 1.0 - w * s
            if denom == 0:
                z[i] = zi * (1.0 + 1e-8) + radius * 1e-9
                done = False
                continue
            delta = w / denom
            z[i] = zi - delta
            if abs(delta) > cfg.correction_tol * abs(z[i]) + abs_floor:
                done = False
        if done:
            return z
    raise RootFindingError(
        f"root iteration did not converge within {cfg.max_iterations} sweeps",
        best=tuple(z),
    )


def _inclusion_radius(coeffs: np.ndarray, z: complex) -> float:
    """Newton disk scaled by degree: ~distance to the root cluster around z."""
    dv = _horner(_deriv_coeffs(coeffs), z)
    if dv == 0:
        return 0.0
    n = len(coeffs) - 1
    return 2.0 * n * abs(_horner(coeffs, z) / dv)


def _pair_threshold(cfg: RootFindConfig, a: complex, b: complex, incl: float) -> float:
    if cfg.cluster_radius is not None:
        return cfg.cluster_radius
    return max(1e-7, 1e3 * _EPS * max(abs(a), abs(b)), incl)


def _single_linkage(points: Sequence[complex], threshold) -> list[list[int]]:
    n = len(points)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) <= threshold(points[i], points[j]):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _refine_multiple(coeffs: np.ndarray, center: complex, m: int, span: float) -> complex:
    """Polish a multiplicity-m cluster center on the (m−1)-th derivative.

    The m-fold root of p is a simple root of p^(m−1), where Newton reaches
    machine accuracy instead of the ~eps^(1/m) limit of the raw cluster.
    """
    d = coeffs
    for _ in range(m - 1):
        d = _deriv_coeffs(d)
    dd = _deriv_coeffs(d)
    z = center
    for _ in range(50):
        dv = _horner(dd, z)
        if dv == 0:
            break
        step = _horner(d, z) / dv
        z = z - step
        if abs(step) <= 1e-16 * (1.0 + abs(z)):
            break
    if abs(z - center) <= max(10.0 * span, 1e-6):
        return z
    return center


def _normalized_residual(coeffs: np.ndarray, z: complex, k: int) -> float:
    d = coeffs
    for _ in range(k):
        d = _deriv_coeffs(d)
    scale = _abs_horner(d, abs(z))
    if scale == 0.0:
        return 0.0
    return abs(_horner(d, z)) / scale


def _build_rootset(coeffs: np.ndarray, iterates: Sequence[complex], cfg: RootFindConfig) -> RootSet:
    iterates = [complex(z) for z in iterates]
    incl = {z: _inclusion_radius(coeffs, z) for z in iterates}
    groups = _single_linkage(
        iterates, lambda a, b: _pair_threshold(cfg, a, b, max(incl[a], incl[b]))
    )
    clusters = []
    for idx in groups:
        members = [iterates[i] for i in idx]
        center = complex(sum(members) / len(members))
        span = max(abs(p - center) for p in members)
        if len(members) > 1:
            center = complex(_refine_multiple(coeffs, center, len(members), span))
            span = max(abs(p - center) for p in members)
        clusters.append((center, len(members), float(span)))
    clusters.sort(key=lambda t: (t[0].real, t[0].imag))
    worst = 0.0
    for center, m, _ in clusters:
        for k in range(m):
            worst = max(worst, _normalized_residual(coeffs, center, k))
    bound = max(100.0 * worst, 10.0 * _EPS)
    return RootSet(
        centers=tuple(c for c, _, _ in clusters),
        multiplicities=tuple(m for _, m, _ in clusters),
        radii=tuple(r for _, _, r in clusters),
        residual_bound=bound,
    )


def _validated_monic(p: Poly, zero_tol: float) -> np.ndarray:
    if p.is_hyper:
        raise TypeError("numeric root finding requires complex coefficients")
    if p.degree < 1:
        raise ValueError("root finding requires degree >= 1")
    if abs(complex(p.coeffs[-1])) <= zero_tol:
        raise ValueError("leading coefficient is below tolerance")
    c = np.array([complex(v) for v in p.coeffs], dtype=complex)
    return c / c[-1]


def find_roots(p: Poly, cfg: RootFindConfig | None = None) -> RootSet:
    """All roots of ``p`` with multiplicities, by simultaneous iteration.

    Raises :class:`RootFindingError` (carrying the best iterate) when the
    Aberth sweeps fail to converge within the configured budget.
    """
    cfg = cfg or RootFindConfig()
    c = _validated_monic(p, cfg.zero_tol)
    n = len(c) - 1
    if n == 1:
        iterates: Sequence[complex] = [-c[0]]
    else:
        iterates = list(_aberth(c, cfg))
    return _build_rootset(c, iterates, cfg)


def roots_oracle(p: Poly, cfg: RootFindConfig | None = None) -> RootSet:
    """Independent cross-check: eigenvalues of the companion matrix.

    Uses the LAPACK shifted-QR eigenvalue reduction; intended for tests and
    ``--verify`` paths, not as the production finder.
    """
    cfg = cfg or RootFindConfig()
    c = _validated_monic(p, cfg.zero_tol)
    n = len(c) - 1
    if n == 1:
        eig: Sequence[complex] = [complex(-c[0])]
    else:
        companion = np.zeros((n, n), dtype=complex)
        companion[1:, :-1] = np.eye(n - 1)
        companion[:, -1] = -c[:-1]
        try:
            eig = [complex(v) for v in np.linalg.eigvals(companion)]
        except np.linalg.LinAlgError as exc:
            raise RootFindingError(f"eigenvalue iteration failed: {exc}") from exc
    eig = sorted(eig, key=lambda z: (z.real, z.imag))
    worst = 0.0
    for z in eig:
        worst = max(worst, _normalized_residual(c, z, 0))
    return RootSet(
        centers=tuple(eig),
        multiplicities=tuple(1 for _ in eig),
        radii=tuple(0.0 for _ in eig),
        residual_bound=max(100.0 * worst, 10.0 * _EPS),
    )


def cluster_roots(rs: RootSet, radius: float, poly: Poly | None = None) -> RootSet:
    """Merge clusters closer than ``radius`` (single linkage, weighted centers).

    When ``poly`` is given, the residual bound is recomputed at the merged
    centers; otherwise the previous bound is carried over unchanged.
    """
    if radius < 0:
        raise ValueError("cluster radius must be non-negative")
    groups = _single_linkage(rs.centers, lambda a, b: radius)
    clusters = []
    for idx in groups:
        weight = sum(rs.multiplicities[i] for i in idx)
        center = sum(rs.centers[i] * rs.multiplicities[i] for i in idx) / weight
        span = max(abs(rs.centers[i] - center) + rs.radii[i] for i in idx)
        clusters.append((center, weight, span))
    clusters.sort(key=lambda t: (t[0].real, t[0].imag))
    bound = rs.residual_bound
    if poly is not None:
        c = _validated_monic(poly, 1e-300)
        worst = 0.0
        for center, m, _ in clusters:
            for k in range(m):
                worst = max(worst, _normalized_residual(c, center, k))
        bound = max(100.0 * worst, 10.0 * _EPS)
    return RootSet(
        centers=tuple(c for c, _, _ in clusters),
        multiplicities=tuple(m for _, m, _ in clusters),
        radii=tuple(r for _, _, r in clusters),
        residual_bound=bound,
    )
