"""Arithmetic on truncated infinitesimal series.

A :class:`HyperScalar` is a computable stand-in for a complex number enlarged
by a formal infinitesimal ``ε``: a finite sum ``Σ c_e · ε**e`` with strictly
increasing rational exponents ``e`` and complex coefficients, truncated at a
known order.  Negative exponents model infinite magnitudes, positive ones
infinitesimal magnitudes, and the exponent-0 coefficient is the value's
standard (complex) part.

Every operation records the order up to which its result is provable from the
orders of its inputs.  A computation whose significant content migrates
entirely beyond that horizon raises :class:`OrderExhaustedError` instead of
returning fake precision; results that merely cancel to zero stay zero.

Coefficients use double precision; terms whose magnitude falls below the
zero tolerance ``τ`` (:func:`zero_tolerance`, default ``1e-12``) are dropped
during normalization, so series structure stays exact while coefficient
arithmetic is floating point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

RationalLike = Union[int, Fraction]
NumberLike = Union[int, float, complex]

DEFAULT_ORDER = Fraction(8)
DEFAULT_ZERO_TOL = 1e-12

_zero_tol = DEFAULT_ZERO_TOL

_MAX_DIVISION_STEPS = 100_000


class OrderExhaustedError(ArithmeticError):
    """All significant content of a result lies beyond its provable order."""


class NotFiniteError(ArithmeticError):
    """The standard part was requested for an infinite value."""


class Magnitude(enum.Enum):
    """Magnitude class of a scalar: its valuation sign."""

    INFINITESIMAL = "infinitesimal"
    FINITE = "finite-noninfinitesimal"
    INFINITE = "infinite"


def zero_tolerance() -> float:
    """Current coefficient-dropping tolerance τ."""
    return _zero_tol


def set_zero_tolerance(tol: float) -> None:
    """Set the global tolerance τ below which coefficients are treated as zero.

    Intended for process-level configuration (the CLI flag); not a per-call
    knob.  Values are immutable, so changing τ never mutates existing scalars.
    """
    global _zero_tol
    tol = float(tol)
    if not tol > 0.0:
        raise ValueError(f"zero tolerance must be positive, got {tol!r}")
    _zero_tol = tol


def _as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"exponents must be int or Fraction, got {type(x).__name__}")


@dataclass(frozen=True)
class HyperScalar:
    """A truncated series ``Σ c_e·ε**e``, exponents strictly increasing.

    ``terms`` holds ``(exponent, coefficient)`` pairs with every stored
    coefficient above τ in magnitude and every exponent ≤ ``order``.  The
    zero value is the empty term tuple.  Instances are immutable; build them
    with :func:`embed`, :func:`eps`, :meth:`from_terms`, or arithmetic.
    """

    terms: Tuple[Tuple[Fraction, complex], ...] = ()
    order: Fraction = DEFAULT_ORDER

    def __post_init__(self) -> None:
        prev = None
        for e, _ in self.terms:
            if not isinstance(e, Fraction):
                raise TypeError("term exponents must be Fraction")
            if prev is not None and e <= prev:
                raise ValueError("term exponents must be strictly increasing")
            if e > self.order:
                raise ValueError(f"term exponent {e} exceeds truncation order {self.order}")
            prev = e

    # -- construction -----------------------------------------------------

    @classmethod
    def from_terms(
        cls,
        items: Iterable[Tuple[RationalLike, NumberLike]],
        order: RationalLike | None = None,
    ) -> "HyperScalar":
        """Build a scalar from (exponent, coefficient) pairs.

        Exponents may repeat (coefficients are summed).  An explicit exponent
        above the truncation order is rejected loudly rather than silently
        discarded.
        """
        k = DEFAULT_ORDER if order is None else _as_fraction(order)
        acc: dict[Fraction, complex] = {}
        for e, c in items:
            e = _as_fraction(e)
            if e > k:
                raise ValueError(f"explicit term exponent {e} exceeds truncation order {k}")
            acc[e] = acc.get(e, 0j) + complex(c)
        return _normalize(acc, k)

    @classmethod
    def zero(cls, order: RationalLike | None = None) -> "HyperScalar":
        k = DEFAULT_ORDER if order is None else _as_fraction(order)
        return cls((), k)

    # -- structure --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def valuation(self) -> Fraction | float:
        """Least stored exponent; ``math.inf`` for the zero value."""
        return self.terms[0][0] if self.terms else math.inf

    def leading_coefficient(self) -> complex:
        if not self.terms:
            raise ValueError("zero value has no leading coefficient")
        return self.terms[0][1]

    def coefficient(self, exponent: RationalLike) -> complex:
        e = _as_fraction(exponent)
        for ee, c in self.terms:
            if ee == e:
                return c
            if ee > e:
                break
        return 0j

    def classify(self) -> Magnitude:
        v = self.valuation()
        if v > 0:
            return Magnitude.INFINITESIMAL
        if v == 0:
            return Magnitude.FINITE
        return Magnitude.INFINITE

    def standard_part(self) -> complex:
        if self.classify() is Magnitude.INFINITE:
            raise NotFiniteError(f"standard part undefined for infinite value {self}")
        return self.coefficient(0)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other: NumberLike) -> "HyperScalar":
        # Plain numbers are exact constants: they inherit this value's order.
        if abs(complex(other)) <= _zero_tol:
            return HyperScalar((), self.order)
        return HyperScalar(((Fraction(0), complex(other)),), self.order)

    def __add__(self, other: "HyperScalar | NumberLike") -> "HyperScalar":
        if not isinstance(other, HyperScalar):
            if not isinstance(other, (int, float, complex)):
                return NotImplemented
            other = self._coerce(other)
        k = min(self.order, other.order)
        acc: dict[Fraction, complex] = {}
        for e, c in self.terms:
            acc[e] = acc.get(e, 0j) + c
        for e, c in other.terms:
            acc[e] = acc.get(e, 0j) + c
        return _normalize(acc, k)

    __radd__ = __add__

    def __neg__(self) -> "HyperScalar":
        return HyperScalar(tuple((e, -c) for e, c in self.terms), self.order)

    def __sub__(self, other: "HyperScalar | NumberLike") -> "HyperScalar":
        if isinstance(other, HyperScalar):
            return self + (-other)
        if not isinstance(other, (int, float, complex)):
            return NotImplemented
        return self + (-complex(other))

    def __rsub__(self, other: NumberLike) -> "HyperScalar":
        return (-self) + other

    def __mul__(self, other: "HyperScalar | NumberLike") -> "HyperScalar":
        if not isinstance(other, HyperScalar):
            if not isinstance(other, (int, float, complex)):
                return NotImplemented
            other = self._coerce(other)
        cap = max(self.order, other.order)
        r = min(self.order + other.valuation(), other.order + self.valuation(), cap)
        if isinstance(r, float):  # both operands zero: min(inf, inf, cap) stays Fraction otherwise
            r = cap
        acc: dict[Fraction, complex] = {}
        for ea, ca in self.terms:
            for eb, cb in other.terms:
                e = ea + eb
                acc[e] = acc.get(e, 0j) + ca * cb
        return _normalize(acc, Fraction(r))

    __rmul__ = __mul__

    def __truediv__(self, other: "HyperScalar | NumberLike") -> "HyperScalar":
        if not isinstance(other, HyperScalar):
            if not isinstance(other, (int, float, complex)):
                return NotImplemented
            other = self._coerce(other)
        return _divide(self, other)

    def __rtruediv__(self, other: NumberLike) -> "HyperScalar":
        return _divide(self._coerce(other), self)

    def __pow__(self, n: int) -> "HyperScalar":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return _divide(self._coerce(1), self) ** (-n)
        result = HyperScalar(((Fraction(0), 1 + 0j),), self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- formatting / serialization ---------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return f"0 (order {self.order})"
        bits = []
        for e, c in self.terms:
            if e == 0:
                bits.append(_fmt_coeff(c))
            elif e == 1:
                bits.append(f"{_fmt_coeff(c)}·ε")
            else:
                bits.append(f"{_fmt_coeff(c)}·ε^{e}")
        return " + ".join(bits) + f" (order {self.order})"

    def __repr__(self) -> str:
        return f"HyperScalar({self})"

    def to_json(self) -> dict:
        """Serialize as exponent quadruples plus truncation order."""
        return {
            "terms": [[e.numerator, e.denominator, c.real, c.imag] for e, c in self.terms],
            "order": [self.order.numerator, self.order.denominator],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "HyperScalar":
        try:
            num, den = obj["order"]
            items = [
                (Fraction(int(p), int(q)), complex(float(re), float(im)))
                for p, q, re, im in obj["terms"]
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed hyperscalar object: {exc}") from exc
        return cls.from_terms(items, order=Fraction(int(num), int(den)))


def _fmt_coeff(c: complex) -> str:
    if c.imag == 0:
        return f"{c.real:g}"
    return f"({c.real:g}{c.imag:+g}j)"


def _normalize(acc: dict[Fraction, complex], order: Fraction) -> HyperScalar:
    """Drop sub-τ coefficients, truncate to ``order``, detect exhaustion."""
    kept = []
    beyond = False
    for e in sorted(acc):
        c = acc[e]
        if abs(c) <= _zero_tol:
            continue
        if e > order:
            beyond = True
            continue
        kept.append((e, c))
    if beyond and not kept:
        raise OrderExhaustedError(
            f"result has no representable content below order {order}"
        )
    return HyperScalar(tuple(kept), order)


def _divide(a: HyperScalar, b: HyperScalar) -> HyperScalar:
    if b.is_zero:
        raise ZeroDivisionError("division by the zero hyperscalar")
    vb = b.terms[0][0]
    cb = b.terms[0][1]
    cap = max(a.order, b.order)
    r = min(a.order - vb, a.valuation() + b.order - 2 * vb, cap)
    if isinstance(r, float):  # a is zero: provable order is a.order - vb
        r = min(a.order - vb, cap)
    r = Fraction(r)
    if a.is_zero:
        return HyperScalar((), r)

    rem: dict[Fraction, complex] = {e: c for e, c in a.terms}
    quot: dict[Fraction, complex] = {}
    for _ in range(_MAX_DIVISION_STEPS):
        lead = None
        for e in sorted(rem):
            if abs(rem[e]) > _zero_tol:
                lead = e
                break
            del rem[e]
        if lead is None:
            break
        qe = lead - vb
        if qe > r:
            break
        qc = rem[lead] / cb
        quot[qe] = quot.get(qe, 0j) + qc
        del rem[lead]  # exact cancellation of the leading term
        for e, c in b.terms[1:]:
            t = qe + e
            rem[t] = rem.get(t, 0j) - qc * c
    else:
        raise ArithmeticError("series division failed to terminate")
    return _normalize(quot, r)


# -- functional aliases ----------------------------------------------------


def embed(c: NumberLike, order: RationalLike | None = None) -> HyperScalar:
    """Embed a complex number as a constant series (exponent-0 term)."""
    k = DEFAULT_ORDER if order is None else _as_fraction(order)
    c = complex(c)
    if abs(c) <= _zero_tol:
        return HyperScalar((), k)
    return HyperScalar(((Fraction(0), c),), k)


def eps(
    exponent: RationalLike = 1,
    coeff: NumberLike = 1.0,
    order: RationalLike | None = None,
) -> HyperScalar:
    """The monomial ``coeff·ε**exponent`` (default: ε itself)."""
    return HyperScalar.from_terms([(exponent, coeff)], order=order)


def add(a: HyperScalar, b: HyperScalar) -> HyperScalar:
    return a + b


def sub(a: HyperScalar, b: HyperScalar) -> HyperScalar:
    return a - b


def mul(a: HyperScalar, b: HyperScalar) -> HyperScalar:
    return a * b


def neg(a: HyperScalar) -> HyperScalar:
    return -a


def div(a: HyperScalar, b: HyperScalar) -> HyperScalar:
    return _divide(a, b)


def valuation(a: HyperScalar) -> Fraction | float:
    return a.valuation()


def classify(a: HyperScalar) -> Magnitude:
    return a.classify()


def is_finite(a: HyperScalar) -> bool:
    """True for infinitesimal and finite-noninfinitesimal values alike."""
    return a.classify() is not Magnitude.INFINITE


def standard_part(a: HyperScalar) -> complex:
    return a.standard_part()


def approx_eq(a: HyperScalar, b: HyperScalar) -> bool:
    """True iff ``a − b`` is infinitesimal (zero counts)."""
    return (a - b).classify() is Magnitude.INFINITESIMAL


def evaluate_at(a: HyperScalar, t: float) -> complex:
    """Numeric value of the series at ε = t (t > 0; may overflow for t→0)."""
    if not t > 0.0:
        raise ValueError(f"substitution point must be positive, got {t!r}")
    total = 0j
    for e, c in a.terms:
        total += c * (t ** float(e))
    return total


def terms_close(a: HyperScalar, b: HyperScalar, tol: float | None = None) -> bool:
    """Term-by-term comparison up to the common provable order.

    Exponent structure must match exactly on the common window; coefficients
    must agree within ``tol`` (default τ) absolutely.
    """
    t = _zero_tol if tol is None else tol
    k = min(a.order, b.order)
    ta = [(e, c) for e, c in a.terms if e <= k]
    tb = [(e, c) for e, c in b.terms if e <= k]
    merged: dict[Fraction, complex] = {e: c for e, c in ta}
    for e, c in tb:
        merged[e] = merged.get(e, 0j) - c
    return all(abs(c) <= t for c in merged.values())
