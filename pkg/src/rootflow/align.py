"""Pairing the roots of two equal-degree polynomials.

Two independent routes produce a bijection between the root multisets:

* :func:`align_by_deflation` peels one root pair per level — pick a root of
  the perturbed polynomial, pair it with the nearest root of the base, divide
  both by their linear factors, recurse on the quotients, and close the
  degree-1 case with the −b0/b1 formula.  Each level is recorded so the
  deflation identity can be audited afterwards.
* :func:`align_bottleneck` is the optimal-matching oracle: the bijection
  minimizing the maximum pair distance, via binary search over candidate
  distances with an augmenting-path perfect-matching feasibility test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Tuple

from .poly import Poly, RootFindConfig, RootSet, find_roots


class AlignmentError(ValueError):
    """Inputs cannot be aligned (size/degree mismatch, degenerate leading coefficient)."""


@dataclass(frozen=True)
class DeflationStep:
    """One level of the deflation recursion: everything needed to audit it."""

    f: Poly
    g: Poly
    r: complex
    s: complex
    f_hat: Poly
    g_hat: Poly


@dataclass(frozen=True)
class Alignment:
    """A bijection between two root lists with per-pair distances.

    ``pairs[k] = (i, j)`` pairs ``roots_f[i]`` with ``roots_g[j]``; every
    index on each side is used exactly once.
    """

    pairs: Tuple[Tuple[int, int], ...]
    distances: Tuple[float, ...]
    max_distance: float
    method: str
    roots_f: Tuple[complex, ...]
    roots_g: Tuple[complex, ...]
    trace: Tuple[DeflationStep, ...] = field(default=(), repr=False)

    def to_json(self) -> dict:
        return {
            "pairs": [[i, j] for i, j in self.pairs],
            "distances": list(self.distances),
            "max_distance": self.max_distance,
            "method": self.method,
        }


def alignment_distance(a: Alignment) -> float:
    """The quantity the continuity statements bound: the worst pair distance."""
    return a.max_distance


# -- bottleneck matching -----------------------------------------------------


def _perfect_matching(adj: Sequence[Sequence[int]], n: int) -> list[int] | None:
    """Kuhn's augmenting paths; scans vertices and neighbors in index order."""
    match_right = [-1] * n

    def try_augment(u: int, seen: list[bool]) -> bool:
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                if match_right[v] < 0 or try_augment(match_right[v], seen):
                    match_right[v] = u
                    return True
        return False

    for u in range(n):
        if not try_augment(u, [False] * n):
            return None
    return match_right


def bottleneck_pairs(
    xs: Sequence[complex], ys: Sequence[complex]
) -> Tuple[Tuple[Tuple[int, int], ...], Tuple[float, ...], float]:
    """Bijection between xs and ys minimizing the maximum pair distance."""
    if len(xs) != len(ys):
        raise AlignmentError(f"cannot match {len(xs)} roots against {len(ys)}")
    n = len(xs)
    if n == 0:
        return (), (), 0.0
    dist = [[abs(x - y) for y in ys] for x in xs]
    candidates = sorted({d for row in dist for d in row})

    def matching_at(threshold: float) -> list[int] | None:
        adj = [[j for j in range(n) if dist[i][j] <= threshold] for i in range(n)]
        return _perfect_matching(adj, n)

    lo, hi = 0, len(candidates) - 1
    best = matching_at(candidates[hi])
    if best is None:
        raise AlignmentError("no perfect matching exists (unreachable for finite points)")
    while lo < hi:
        mid = (lo + hi) // 2
        m = matching_at(candidates[mid])
        if m is not None:
            best = m
            hi = mid
        else:
            lo = mid + 1
    pairs = tuple(sorted((best[j], j) for j in range(n)))
    distances = tuple(dist[i][j] for i, j in pairs)
    return pairs, distances, max(distances)


def align_bottleneck_lists(xs: Sequence[complex], ys: Sequence[complex]) -> Alignment:
    """Optimal-bottleneck alignment of two explicit root lists."""
    pairs, distances, worst = bottleneck_pairs(xs, ys)
    return Alignment(
        pairs=pairs,
        distances=distances,
        max_distance=worst,
        method="bottleneck",
        roots_f=tuple(xs),
        roots_g=tuple(ys),
    )


def align_bottleneck(roots_f: RootSet, roots_g: RootSet) -> Alignment:
    """Optimal-bottleneck alignment of two root sets (with duplication)."""
    if roots_f.total_multiplicity != roots_g.total_multiplicity:
        raise AlignmentError(
            f"total multiplicities differ: {roots_f.total_multiplicity} vs "
            f"{roots_g.total_multiplicity}"
        )
    return align_bottleneck_lists(roots_f.expanded(), roots_g.expanded())


def bottleneck_deviation(a: RootSet, b: RootSet) -> float:
    """Worst pair distance between two root sets under optimal pairing."""
    _, _, worst = bottleneck_pairs(a.expanded(), b.expanded())
    return worst


# -- deflation recursion -----------------------------------------------------


@dataclass(frozen=True)
class AlignConfig:
    zero_tol: float = 1e-12
    root_cfg: RootFindConfig = RootFindConfig()


def _nearest_index(points: Sequence[complex], target: complex, used: list[bool]) -> int:
    best = -1
    best_d = None
    for i, p in enumerate(points):
        if used[i]:
            continue
        d = abs(p - target)
        if best_d is None or d < best_d:
            best, best_d = i, d
    return best


def _select_root_pair(
    roots_g: Sequence[complex], roots_f: Sequence[complex]
) -> Tuple[complex, complex]:
    """Pick the g-root with the smallest nearest-f distance; lexicographic ties."""
    best_s = None
    best_r = None
    best_d = None
    for s in sorted(roots_g, key=lambda z: (z.real, z.imag)):
        r = min(roots_f, key=lambda z: (abs(z - s), z.real, z.imag))
        d = abs(r - s)
        if best_d is None or d < best_d:
            best_s, best_r, best_d = s, r, d
    return best_r, best_s


def align_by_deflation(f: Poly, g: Poly, cfg: AlignConfig | None = None) -> Alignment:
    """Alignment produced by the recursive deflation argument.

    Pairs are reported as indices into the full (duplicated) root lists of the
    original ``f`` and ``g``; the per-level polynomials, chosen root pair and
    quotients are kept on ``Alignment.trace``.
    """
    cfg = cfg or AlignConfig()
    if f.is_hyper or g.is_hyper:
        raise TypeError("deflation alignment operates on complex polynomials")
    if f.degree != g.degree:
        raise AlignmentError(f"degree mismatch: {f.degree} vs {g.degree}")
    if f.degree < 1:
        raise AlignmentError("alignment requires degree >= 1")
    if abs(complex(f.coeffs[-1])) <= cfg.zero_tol or abs(complex(g.coeffs[-1])) <= cfg.zero_tol:
        raise AlignmentError("leading coefficient below tolerance")

    rs_f = find_roots(f, cfg.root_cfg)
    rs_g = find_roots(g, cfg.root_cfg)
    xs, ys = list(rs_f.expanded()), list(rs_g.expanded())

    steps: list[DeflationStep] = []
    value_pairs: list[Tuple[complex, complex]] = []
    fk, gk = f, g
    while fk.degree >= 1:
        if fk.degree == 1:
            r = -complex(fk.coeffs[0]) / complex(fk.coeffs[1])
            s = -complex(gk.coeffs[0]) / complex(gk.coeffs[1])
            value_pairs.append((r, s))
            break
        level_f = find_roots(fk, cfg.root_cfg).expanded()
        level_g = find_roots(gk, cfg.root_cfg).expanded()
        r, s = _select_root_pair(level_g, level_f)
        f_hat, _ = fk.deflate(r)
        g_hat, _ = gk.deflate(s)
        steps.append(DeflationStep(f=fk, g=gk, r=r, s=s, f_hat=f_hat, g_hat=g_hat))
        value_pairs.append((r, s))
        fk, gk = f_hat, g_hat

    used_f = [False] * len(xs)
    used_g = [False] * len(ys)
    pairs = []
    for r, s in value_pairs:
        i = _nearest_index(xs, r, used_f)
        j = _nearest_index(ys, s, used_g)
        used_f[i] = used_g[j] = True
        pairs.append((i, j))
    pairs.sort()
    distances = tuple(abs(xs[i] - ys[j]) for i, j in pairs)
    return Alignment(
        pairs=tuple(pairs),
        distances=distances,
        max_distance=max(distances),
        method="deflation",
        roots_f=tuple(xs),
        roots_g=tuple(ys),
        trace=tuple(steps),
    )


def deflation_identity_residual(step: DeflationStep, zs: Sequence[complex]) -> float:
    """Largest mismatch of the two sides of the deflation identity over ``zs``.

    With f = (z−r)·f̂ and g = (z−s)·ĝ, the identity
    ``(z−r)(f̂(z)−ĝ(z)) = f(z) − g(z) − ĝ(z)(s−r)`` holds exactly; the
    numeric residual reveals deflation round-off.
    """
    worst = 0.0
    for z in zs:
        lhs = (z - step.r) * (complex(step.f_hat.eval(z)) - complex(step.g_hat.eval(z)))
        rhs = (
            complex(step.f.eval(z))
            - complex(step.g.eval(z))
            - complex(step.g_hat.eval(z)) * (step.s - step.r)
        )
        worst = max(worst, abs(lhs - rhs))
    return worst


def coefficient_scale(f: Poly, g: Poly) -> float:
    """Scale reference for identity residuals: the largest coefficient modulus."""
    vals = [abs(complex(c)) for c in f.coeffs] + [abs(complex(c)) for c in g.coeffs]
    return max(1.0, max(vals))
