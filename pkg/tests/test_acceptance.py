"""Acceptance suite: one test per criterion, printing one pass/fail line each.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion lines.
Every tolerance is pinned here; the oracles (closed forms, exhaustive search,
companion matrix, binomial series) are independent of the code paths they
check.
"""

import itertools
import json
import math
import random

import numpy as np
from helpers import (
    brute_force_bottleneck,
    poly_from_roots,
    random_direction,
    random_separated_roots,
)

from rootflow import (
    Deformation,
    ModulusConfig,
    Poly,
    align_bottleneck_lists,
    align_by_deflation,
    bottleneck_deviation,
    check_lemma1,
    coefficient_scale,
    deflation_identity_residual,
    estimate_delta,
    find_roots,
    hensel_lift_root,
    lift_residual_resolved,
    modulus_curve,
    root_trajectories,
    roots_oracle,
    soundness_check,
)
from rootflow.cli import main
from rootflow.hyper import (
    HyperScalar,
    Magnitude,
    div,
    embed,
    eps,
    evaluate_at,
    standard_part,
)
from rootflow.schemas import validate_report

SEED = 20260810


def _report(number: int, name: str, failures: list) -> None:
    status = "PASS" if not failures else "FAIL"
    print(f"[acceptance] criterion {number} ({name}): {status}")
    assert not failures, f"criterion {number}: {failures[:5]}"


def _random_finite(rnd: random.Random, with_unit: bool) -> HyperScalar:
    terms = []
    exponents = rnd.sample(range(0 if not with_unit else 1, 7), rnd.randint(0, 3))
    for e in exponents:
        mag, ph = rnd.uniform(0.25, 4.0), rnd.uniform(0.0, 2.0 * math.pi)
        terms.append((e, mag * complex(math.cos(ph), math.sin(ph))))
    if with_unit:
        mag, ph = rnd.uniform(0.25, 4.0), rnd.uniform(0.0, 2.0 * math.pi)
        terms.append((0, mag * complex(math.cos(ph), math.sin(ph))))
    return HyperScalar.from_terms(terms)


def test_criterion_1_standard_part_homomorphism():
    rnd = random.Random(SEED + 1)
    tol = 1e-12
    failures = []
    for k in range(1000):
        a = _random_finite(rnd, with_unit=False)
        b = _random_finite(rnd, with_unit=True)  # usable divisor
        sa, sb = standard_part(a), standard_part(b)
        if abs(standard_part(a + b) - (sa + sb)) > tol * max(1.0, abs(sa) + abs(sb)):
            failures.append(("add", k))
        if abs(standard_part(a * b) - sa * sb) > tol * max(1.0, abs(sa * sb)):
            failures.append(("mul", k))
        want = sa / sb
        if abs(standard_part(div(a, b)) - want) > tol * max(1.0, abs(want)):
            failures.append(("div", k))
    # classify/reciprocal duality, exactly, across magnitude classes
    for k in range(200):
        v = _random_finite(rnd, with_unit=rnd.random() < 0.5)
        if v.is_zero:
            continue
        shift = rnd.choice([-2, -1, 0, 1, 2])
        x = v * eps(shift) if shift else v
        inv = div(embed(1), x)
        if (x.classify() is Magnitude.INFINITE) != (
            inv.classify() is Magnitude.INFINITESIMAL
        ):
            failures.append(("duality", k))
    _report(1, "standard-part homomorphism", failures)


def _random_dense_poly(rng, degree) -> Poly:
    coeffs = [complex(a, b) for a, b in rng.uniform(-2, 2, (degree + 1, 2))]
    if abs(coeffs[-1]) < 0.5:
        coeffs[-1] += 1.0
    return Poly.from_complex(coeffs, tol=0.0)


def _chebyshev(count):
    return [
        complex(math.cos(math.pi * (2 * k + 1) / (2 * count)), 0.0) for k in range(count)
    ]


def test_criterion_2_lemma1_suite():
    rng = np.random.default_rng(SEED + 2)
    failures = []
    for k in range(100):
        degree = int(rng.integers(1, 6))
        base = _random_dense_poly(rng, degree)
        d = Deformation.linear(base, random_direction(rng, degree + 1))
        report = check_lemma1(d, _chebyshev(degree + 1))
        if not all(item.passed for item in report.items):
            failures.append(("linear", k, [i.name for i in report.items if not i.passed]))
    for k in range(20):
        degree = int(rng.integers(1, 6))
        base = _random_dense_poly(rng, degree)
        paths = list(Deformation.linear(base, random_direction(rng, degree + 1)).paths)
        j = int(rng.integers(0, degree + 1))
        mag, ph = rng.uniform(0.5, 2.0), rng.uniform(0.0, 2.0 * math.pi)
        paths[j] = paths[j] + eps(-1, mag * complex(math.cos(ph), math.sin(ph)))
        report = check_lemma1(Deformation.from_series(base, paths), _chebyshev(degree + 1))
        detected = any(
            item.name == "infinite-coefficient-detected" and item.passed
            for item in report.items
        )
        if not detected:
            failures.append(("infinite", k, j))
    _report(2, "lemma-1 suite", failures)


def test_criterion_3_lemma2_suite():
    rng = np.random.default_rng(SEED + 3)
    failures = []
    for k in range(100):
        degree = int(rng.integers(2, 7))
        base = poly_from_roots(random_separated_roots(rng, degree, separation=0.5))
        d = Deformation.linear(base, random_direction(rng, degree + 1))
        bundle = root_trajectories(d)
        for idx, traj in enumerate(bundle.trajectories):
            if traj.distance > 1e-6:
                failures.append(("limit", k, idx, traj.distance))
        for r in find_roots(base).expanded():
            s = hensel_lift_root(d, r, order=8)
            if not lift_residual_resolved(d, s, order=8):
                failures.append(("hensel-order", k, r))
            # series vs ladder at t = 1e-3: C·t^9 is below the double-precision
            # floor here, so the budget is the documented 1e-12 noise floor
            mags = [abs(c) for _, c in s.terms]
            growth = max(1.0, mags[-1] / max(mags[-2], 1e-30))
            t = 1e-3
            budget = max(100.0 * (mags[-1] * growth) * t**9, 1e-12)
            sv = evaluate_at(s, t)
            step = bundle.ladder.index(t)
            numeric = min(
                (traj.points[step] for traj in bundle.trajectories),
                key=lambda z: abs(z - sv),
            )
            if abs(sv - numeric) > budget:
                failures.append(("series-ladder", k, r, abs(sv - numeric)))
    _report(3, "lemma-2 suite", failures)


def test_criterion_4_exact_split_law():
    failures = []
    delta = 1e-8
    for n in range(2, 6):
        f = Poly.from_complex([0] * n + [1])
        g = Poly.from_complex([-delta] + [0] * (n - 1) + [1])
        got = align_by_deflation(f, g).max_distance
        exact = delta ** (1.0 / n)
        if abs(got - exact) > 1e-10 * exact:
            failures.append((n, got, exact))
    _report(4, "exact split law", failures)


def _alignment_corpus(rng, count, max_degree):
    for _ in range(count):
        degree = int(rng.integers(1, max_degree + 1))
        f = poly_from_roots(random_separated_roots(rng, degree, separation=0.5))
        direction = random_direction(rng, degree + 1)
        g = Poly.from_complex(
            [c + 1e-6 * u for c, u in zip(f.coeffs, direction)], tol=0.0
        )
        yield f, g


_CRITERION5_TRACES = []


def test_criterion_5_alignment_agreement():
    rng = np.random.default_rng(SEED + 5)
    failures = []
    _CRITERION5_TRACES.clear()
    for k, (f, g) in enumerate(_alignment_corpus(rng, 200, 8)):
        a_def = align_by_deflation(f, g)
        a_bot = align_bottleneck_lists(a_def.roots_f, a_def.roots_g)
        if set(a_def.pairs) != set(a_bot.pairs):
            failures.append(("pairing", k))
        _CRITERION5_TRACES.append(a_def)
    for k, (f, g) in enumerate(_alignment_corpus(rng, 50, 6)):
        xs = find_roots(f).expanded()
        ys = find_roots(g).expanded()
        got = align_bottleneck_lists(xs, ys).max_distance
        best = brute_force_bottleneck(xs, ys)
        if abs(got - best) > 1e-12:
            failures.append(("exhaustive", k, got, best))
    _report(5, "alignment agreement", failures)


def test_criterion_6_deflation_identity():
    assert _CRITERION5_TRACES, "criterion 5 must run first (pytest file order)"
    rng = np.random.default_rng(SEED + 6)
    failures = []
    for k, alignment in enumerate(_CRITERION5_TRACES):
        for level, step in enumerate(alignment.trace):
            zs = [complex(a, b) for a, b in rng.uniform(-1.5, 1.5, (10, 2))]
            resid = deflation_identity_residual(step, zs)
            if resid > 1e-9 * coefficient_scale(step.f, step.g):
                failures.append((k, level, resid))
    _report(6, "deflation identity", failures)


def test_criterion_7_modulus_slopes():
    failures = []
    cfg = ModulusConfig(samples=24, seed=SEED + 7)
    cases = [
        (Poly.from_complex([0, 0, 1]), np.geomspace(1e-4, 1e-2, 5), 2.0, 0.1),
        (Poly.from_complex([-1, 1]), np.geomspace(1e-4, 1e-2, 5), 1.0, 0.1),
        (Poly.from_complex([0, 0, 0, 1]), np.geomspace(1e-3, 1e-1, 5), 3.0, 0.2),
    ]
    for f, epsilons, want, budget in cases:
        curve = modulus_curve(f, epsilons, cfg)
        if abs(curve.slope - want) > budget:
            failures.append(("slope", f.degree, curve.slope, want))
        for point in curve.points():
            ok, worst = soundness_check(f, point, n_samples=500, cfg=cfg)
            if not ok:
                failures.append(("soundness", f.degree, point.epsilon, worst))
    _report(7, "modulus-of-continuity slopes", failures)


def test_criterion_8_root_finder_oracle_agreement():
    rng = np.random.default_rng(SEED + 8)
    failures = []
    for k in range(200):
        degree = int(rng.integers(1, 11))
        p = poly_from_roots(random_separated_roots(rng, degree, separation=0.1, box=2.0))
        dev = bottleneck_deviation(find_roots(p), roots_oracle(p))
        if dev > 1e-8:
            failures.append(("random", k, dev))
    w5 = Poly.from_complex([-120, 274, -225, 85, -15, 1])
    for center, want in zip(find_roots(w5).centers, [1.0, 2.0, 3.0, 4.0, 5.0]):
        if abs(center - want) > 1e-9:
            failures.append(("wilkinson", want, center))
    _report(8, "root-finder oracle agreement", failures)


def test_criterion_9_cli_determinism_and_schema(tmp_path):
    failures = []
    d = Deformation.from_series(
        Poly.from_complex([-1, 0, 1]),
        [HyperScalar.from_terms([(0, -1), (1, -1)]), HyperScalar.zero(), embed(1)],
    )
    dpath = tmp_path / "d.json"
    dpath.write_text(json.dumps(d.to_json()))
    commands = [
        ["roots", "--inline", "-1,0,1", "--verify"],
        ["align", "--inline-f", "-1,0,1", "--inline-g", "-1.000001,0,1"],
        ["lemma", str(dpath), "--which", "2"],
        ["lemma", str(dpath), "--which", "1"],
        [
            "continuity",
            "--inline",
            "0,0,1",
            "--epsilons",
            "1e-3,1e-2",
            "--samples",
            "8",
            "--seed",
            str(SEED),
        ],
    ]
    for idx, argv in enumerate(commands):
        out1 = tmp_path / f"r{idx}a.json"
        out2 = tmp_path / f"r{idx}b.json"
        c1 = main([*argv, "--out", str(out1)])
        c2 = main([*argv, "--out", str(out2)])
        if c1 != 0 or c2 != 0:
            failures.append(("exit", argv[0], c1, c2))
            continue
        if out1.read_bytes() != out2.read_bytes():
            failures.append(("bytes", argv[0]))
        try:
            validate_report(json.loads(out1.read_text()))
        except Exception as exc:  # noqa: BLE001 - report validation detail
            failures.append(("schema", argv[0], str(exc)))
    _report(9, "CLI determinism and schema", failures)
