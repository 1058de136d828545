"""Deformations: predicates, sampling, series lifting, trajectories, lemma checks."""

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from helpers import (
    binomial_sqrt_coefficients,
    poly_from_roots,
    random_direction,
    random_separated_roots,
)

from rootflow import (
    DEFAULT_LADDER,
    DeformConfig,
    Deformation,
    NotSimpleRootError,
    Poly,
    SampleEvaluationError,
    SingularInterpolationError,
    check_lemma1,
    check_lemma2,
    hensel_lift_root,
    is_infinitesimal_deformation,
    root_trajectories,
    sample_at,
    theorem1_applicable,
)
from rootflow.hyper import HyperScalar, embed, eps, evaluate_at

UNIT_QUADRATIC = Poly.from_complex([-1, 0, 1])  # z^2 - 1


def shifted_quadratic() -> Deformation:
    """g = z^2 - 1 - ε."""
    return Deformation.from_series(
        UNIT_QUADRATIC,
        [HyperScalar.from_terms([(0, -1), (1, -1)]), HyperScalar.zero(), embed(1)],
    )


def chebyshev(count):
    return [complex(math.cos(math.pi * (2 * k + 1) / (2 * count)), 0.0) for k in range(count)]


# -- predicates ------------------------------------------------------------------


def test_linear_paths_are_infinitesimal():
    d = Deformation.linear(UNIT_QUADRATIC, [0.5, -2j, 1 + 1j])
    assert is_infinitesimal_deformation(d)
    assert theorem1_applicable(d)


def test_finite_offset_breaks_the_predicate():
    d = Deformation.from_series(
        UNIT_QUADRATIC, [embed(-1 + 1), HyperScalar.zero(), embed(1)]
    )
    assert not is_infinitesimal_deformation(d)


def test_infinitesimal_leading_coefficient_is_not_applicable():
    base = Poly.from_complex([-1, 1])
    d = Deformation.from_series(base, [embed(-1), embed(1), eps()])
    assert is_infinitesimal_deformation(d)  # ε ≈ 0, the padded coefficient
    assert not theorem1_applicable(d)


def test_degenerate_leading_path_rejected():
    with pytest.raises(ValueError):
        Deformation.from_series(UNIT_QUADRATIC, [embed(-1), embed(0), HyperScalar.zero()])


# -- sampling --------------------------------------------------------------------


def test_sample_substitutes_the_ladder_point():
    d = shifted_quadratic()
    p = sample_at(d, 1e-3)
    assert [complex(c) for c in p.coeffs] == [-1.001, 0j, 1 + 0j]


def test_sample_close_to_base_for_linear_paths():
    rng = np.random.default_rng(3)
    base = poly_from_roots(random_separated_roots(rng, 4))
    h = random_direction(rng, 5)
    d = Deformation.linear(base, h)
    bound = max(abs(u) for u in h)
    for t in (1e-2, 1e-4):
        p = sample_at(d, t)
        for c, a in zip(p.coeffs, base.coeffs):
            assert abs(complex(c) - complex(a)) <= bound * t * (1 + 1e-12)


def test_sample_ladder_steps_differ_by_order_t():
    d = shifted_quadratic()
    p1, p2 = sample_at(d, 1e-2), sample_at(d, 1e-3)
    diff = max(abs(complex(a) - complex(b)) for a, b in zip(p1.coeffs, p2.coeffs))
    assert diff <= 1e-2


def test_sample_rejects_out_of_range_points():
    d = shifted_quadratic()
    with pytest.raises(ValueError):
        sample_at(d, 0.0)
    with pytest.raises(ValueError):
        sample_at(d, 2.0)


def test_sample_overflow_is_explicit():
    d = Deformation.from_series(
        Poly.from_complex([-1, 1]),
        [HyperScalar.from_terms([(-8, 1e200)]), embed(1)],
    )
    with pytest.raises(SampleEvaluationError):
        sample_at(d, 1e-20)


# -- series lifting ---------------------------------------------------------------


def test_lift_matches_binomial_series():
    s = hensel_lift_root(shifted_quadratic(), 1.0)
    oracle = binomial_sqrt_coefficients(9)
    assert [e for e, _ in s.terms] == [Fraction(k) for k in range(9)]
    for (_, coeff), want in zip(s.terms, oracle):
        assert abs(coeff - complex(float(want))) <= 1e-12


def test_lift_residual_valuation_exceeds_order():
    d = shifted_quadratic()
    s = hensel_lift_root(d, -1.0)
    resid = d.hyper_poly().eval(s)
    assert resid.valuation() > 8


def test_lift_degree_one_is_exact():
    base = Poly.from_complex([2.0, 1.0])  # root -2
    b0 = HyperScalar.from_terms([(0, 2.0), (1, -0.75)])
    d = Deformation.from_series(base, [b0, embed(1)])
    s = hensel_lift_root(d, -2.0)
    want = -b0
    assert (s - want).is_zero


def test_lift_zero_perturbation_is_fixed_point():
    d = Deformation.from_series(UNIT_QUADRATIC, [embed(-1), HyperScalar.zero(), embed(1)])
    s = hensel_lift_root(d, 1.0)
    assert s == embed(1, order=8)


def test_lift_rejects_multiple_roots():
    base = Poly.from_complex([0, 0, 1])
    d = Deformation.from_series(base, [eps(1, -1), HyperScalar.zero(), embed(1)])
    with pytest.raises(NotSimpleRootError):
        hensel_lift_root(d, 0.0)


def test_lift_rejects_non_roots():
    with pytest.raises(ValueError):
        hensel_lift_root(shifted_quadratic(), 0.5)


def test_viete_reconstruction_from_lifted_roots():
    d = shifted_quadratic()
    s_plus = hensel_lift_root(d, 1.0)
    s_minus = hensel_lift_root(d, -1.0)
    rebuilt = Poly.over_hyper([d.paths[2]]).mul_linear(s_plus).mul_linear(s_minus)
    for got, want in zip(rebuilt.coeffs, d.paths):
        diff = got - want
        assert diff.is_zero or max(abs(c) for _, c in diff.terms) <= 1e-10


# -- trajectories -----------------------------------------------------------------


def test_trajectories_of_splitting_double_root():
    base = Poly.from_complex([0, 0, 1])
    d = Deformation.from_series(base, [eps(1, -1), HyperScalar.zero(), embed(1)])
    bundle = root_trajectories(d)
    assert len(bundle.trajectories) == 2
    for traj in bundle.trajectories:
        for t, point in zip(bundle.ladder, traj.points):
            assert abs(abs(point) - math.sqrt(t)) <= 1e-10 * math.sqrt(t)
        assert traj.multiplicity == 2
        assert abs(traj.limit) <= 1e-12
        assert traj.distance <= 1e-12


def test_trajectories_of_separated_roots():
    base = poly_from_roots([1.0, 2.0])
    d = Deformation.linear(base, [1.0, 0.0, 0.0])  # g = (z-1)(z-2) + ε
    bundle = root_trajectories(d)
    limits = sorted(t.limit.real for t in bundle.trajectories)
    assert abs(limits[0] - 1.0) <= 1e-8
    assert abs(limits[1] - 2.0) <= 1e-8
    # quadratic-formula oracle at each ladder point
    for step, t in enumerate(bundle.ladder):
        disc = cmath.sqrt(1.0 - 4.0 * t)
        want = sorted([(3 - disc) / 2, (3 + disc) / 2], key=lambda z: z.real)
        got = sorted((traj.points[step] for traj in bundle.trajectories), key=lambda z: z.real)
        for g, w in zip(got, want):
            assert abs(g - w) <= 1e-9


def test_trajectories_constant_for_zero_perturbation():
    base = poly_from_roots([1.0, -0.5])
    d = Deformation.linear(base, [0.0, 0.0, 0.0])
    bundle = root_trajectories(d)
    for traj in bundle.trajectories:
        assert max(abs(p - traj.points[0]) for p in traj.points) <= 1e-10


def test_trajectory_ladder_validation():
    d = shifted_quadratic()
    with pytest.raises(ValueError):
        root_trajectories(d, ladder=[1e-3, 1e-2])


# -- lemma 2 -----------------------------------------------------------------------


def test_lemma2_passes_on_shifted_quadratic():
    report = check_lemma2(shifted_quadratic())
    assert report.passed
    names = [item.name for item in report.items]
    assert names == ["trajectories-bounded", "limits-are-roots"]


def test_lemma2_flags_hypothesis_violation():
    base = Poly.from_complex([-1, 1])
    d = Deformation.from_series(base, [embed(-1), embed(1), eps()])
    report = check_lemma2(d)
    assert report.passed  # violation is informational, escape check passes
    by_name = {item.name: item for item in report.items}
    assert by_name["hypothesis-violation"].informational
    assert by_name["escaping-trajectory"].passed
    # quadratic-formula oracle: the escaping root is (-1-sqrt(1+4t))/(2t) ~ -1/t
    bundle = root_trajectories(d)
    for step, t in enumerate(bundle.ladder):
        big = max(abs(traj.points[step]) for traj in bundle.trajectories)
        want = abs((-1.0 - math.sqrt(1.0 + 4.0 * t)) / (2.0 * t))
        assert abs(big - want) <= 1e-6 * want


def test_lemma2_trivial_for_exact_copy():
    d = Deformation.linear(UNIT_QUADRATIC, [0.0, 0.0, 0.0])
    assert check_lemma2(d).passed


def test_series_and_ladder_engines_agree():
    from rootflow import find_roots

    rng = np.random.default_rng(7)
    base = poly_from_roots(random_separated_roots(rng, 3))
    d = Deformation.linear(base, random_direction(rng, 4))
    bundle = root_trajectories(d)
    for r in find_roots(base).expanded():
        s = hensel_lift_root(d, r)
        # truncation error ~ |c9|·t^9; estimate c9 from the stored tail growth.
        # Below ~1e-12 the float noise of root finding/evaluation dominates.
        mags = [abs(c) for _, c in s.terms]
        growth = max(1.0, mags[-1] / max(mags[-2], 1e-30))
        c_next = mags[-1] * growth
        for t in (1e-1, 1e-3):
            budget = max(10.0 * c_next * t**9 / (1.0 - min(growth * t, 0.5)), 1e-12)
            series_value = evaluate_at(s, t)
            step = bundle.ladder.index(t)
            numeric = min(
                (traj.points[step] for traj in bundle.trajectories),
                key=lambda z: abs(z - series_value),
            )
            assert abs(series_value - numeric) <= budget


# -- lemma 1 -----------------------------------------------------------------------


def test_lemma1_passes_for_linear_deformation():
    d = Deformation.linear(UNIT_QUADRATIC, [0.3 + 0.1j, -0.2, 0.7j])
    report = check_lemma1(d, chebyshev(3))
    assert report.passed
    assert [i.name for i in report.items] == [
        "evaluations-approximate-base",
        "interpolation-recovers-paths",
        "recovered-paths-near-base",
    ]


def test_lemma1_detects_infinite_coefficient_at_origin_pair():
    base = Poly.from_complex([0, 1])
    d = Deformation.from_series(base, [eps(-1), embed(1)])
    report = check_lemma1(d, [0.0, 1.0])
    by_name = {item.name: item for item in report.items}
    assert by_name["infinite-coefficient-detected"].passed
    # g(0) = b0 = 1/ε is itself the infinite evaluation
    assert by_name["infinite-coefficient-detected"].witness["classifications"][0] == "infinite"


def test_lemma1_recovers_random_degree_four_paths():
    rng = np.random.default_rng(11)
    base = poly_from_roots(random_separated_roots(rng, 4))
    paths = []
    for i in range(5):
        terms = [(0, complex(base.coeffs[i]))]
        terms.append((1, complex(rng.uniform(-1, 1), rng.uniform(-1, 1))))
        terms.append((2, complex(rng.uniform(-1, 1), rng.uniform(-1, 1))))
        paths.append(HyperScalar.from_terms(terms))
    d = Deformation.from_series(base, paths)
    report = check_lemma1(d, chebyshev(5))
    assert report.passed


def test_lemma1_rejects_too_few_or_coincident_points():
    d = Deformation.linear(UNIT_QUADRATIC, [0.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        check_lemma1(d, [0.0, 1.0])
    with pytest.raises(SingularInterpolationError):
        check_lemma1(d, [0.0, 1.0, 1.0 + 1e-12])


def test_deformation_json_roundtrip():
    d = shifted_quadratic()
    again = Deformation.from_json(d.to_json())
    assert again.paths == d.paths
    assert [complex(c) for c in again.base.coeffs] == [complex(c) for c in d.base.coeffs]
    lin = Deformation.from_json(
        {"base": UNIT_QUADRATIC.to_json(), "kind": "linear", "paths": [[0.5, 0.0], [0.0, 0.0], [0.0, 1.0]]}
    )
    assert lin.kind == "linear"
    assert lin.paths[0].coefficient(1) == 0.5
