"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from rootflow import Poly


def coeffs_from_roots(roots, lead=1.0 + 0j):
    """Expand lead·∏(z − r) by convolution; ascending coefficient order."""
    c = np.array([complex(lead)], dtype=complex)
    for r in roots:
        c = np.convolve(c, np.array([1.0, -complex(r)], dtype=complex))
    return [complex(v) for v in c[::-1]]


def poly_from_roots(roots, lead=1.0 + 0j) -> Poly:
    return Poly.from_complex(coeffs_from_roots(roots, lead), tol=0.0)


def random_separated_roots(rng, degree, separation=0.5, box=1.5):
    roots = []
    while len(roots) < degree:
        cand = complex(rng.uniform(-box, box), rng.uniform(-box, box))
        if all(abs(cand - r) >= separation for r in roots):
            roots.append(cand)
    return roots


def random_direction(rng, count):
    """Random complex vector with max-norm exactly 1."""
    v = rng.uniform(-1.0, 1.0, count) + 1j * rng.uniform(-1.0, 1.0, count)
    v = v / np.max(np.abs(v))
    return [complex(x) for x in v]


def brute_force_bottleneck(xs, ys) -> float:
    """Exhaustive minimum over bijections of the maximum pair distance."""
    best = math.inf
    for perm in itertools.permutations(range(len(ys))):
        worst = max(abs(x - ys[j]) for x, j in zip(xs, perm))
        best = min(best, worst)
    return best


def binomial_sqrt_coefficients(count):
    """Exact Taylor coefficients of sqrt(1+x): (1/2 choose k)."""
    c = Fraction(1)
    out = [c]
    for k in range(1, count):
        c = c * (Fraction(1, 2) - (k - 1)) / k
        out.append(c)
    return out


def eval_scale(coeffs, z) -> float:
    """Round-off scale of a Horner evaluation: Σ|a_k| |z|^k."""
    acc = 0.0
    for c in reversed([abs(complex(v)) for v in coeffs]):
        acc = acc * abs(z) + c
    return acc
