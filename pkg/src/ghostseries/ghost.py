"""Ghost coefficients ``g_i`` in factored form and the valuations of their specializations.

A coefficient is never expanded: it is the list of ``(n, multiplicity)``
pairs for its zeros ``w_{k_n}``.  Ranges of zeros are found by monotone search
on the non-decreasing functions ``d``, ``d + d^new`` and ``d_p``.  All half-integer
thresholds are doubled so the comparisons stay in ``int``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .dimensions import DimensionModel
from .weightspace import (
    INF,
    BoundaryWeight,
    IntegerWeight,
    WeightPoint,
    check_weight,
    exact_weight_coordinate,
    vp,
    weight_valuation_profile,
)

_SEARCH_LIMIT = 1 << 62


class GrowthError(ArithmeticError):
    pass


class SemistableRangeError(ArithmeticError):
    """A Delta-slope was requested where both coefficients vanish."""


@dataclass(frozen=True)
class GhostCoefficient:
    i: int
    zeros: tuple  # ((n, mult), ...) with n increasing
    degree: int
    lz: Optional[int]
    hz: Optional[int]

    def multiplicity(self, n: int) -> int:
        if self.lz is None or not self.lz <= n <= self.hz:
            return 0
        return self.zeros[n - self.lz][1]


@dataclass(frozen=True)
class DeltaData:
    """Zeros of ``Delta_i^+`` and ``Delta_i^-`` as closed ``n``-intervals (``None`` when empty)."""

    i: int
    plus_range: Optional[tuple]
    minus_range: Optional[tuple]

    @property
    def lambda_plus(self) -> int:
        return _range_len(self.plus_range)

    @property
    def lambda_minus(self) -> int:
        return _range_len(self.minus_range)

    @property
    def lambda_(self) -> int:
        return self.lambda_plus - self.lambda_minus


def _range_len(r) -> int:
    return 0 if r is None else r[1] - r[0] + 1


def _make_range(lo: int, hi: int):
    return (lo, hi) if lo <= hi else None


def first_at_least(f: Callable[[int], int], target: int, guess: int = 0, where: int = 0) -> int:
    """Least ``n`` with ``f(n) >= target`` for a non-decreasing unbounded ``f``."""
    step = 1
    if f(guess) >= target:
        hi = guess
        lo = guess - 1
        while f(lo) >= target:
            hi = lo
            lo = guess - step
            step *= 2
            if step > _SEARCH_LIMIT:
                raise GrowthError(f"growth axiom violated near i={where}")
    else:
        lo = guess
        hi = guess + 1
        while f(hi) < target:
            lo = hi
            hi = guess + step
            step *= 2
            if step > _SEARCH_LIMIT:
                raise GrowthError(f"growth axiom violated near i={where}")
    # invariant: f(lo) < target <= f(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if f(mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi


class _ModelCache:
    """Per-model memo tables; writes are idempotent so a plain lock suffices."""

    def __init__(self):
        self.lock = threading.Lock()
        self.coefficients: dict = {}
        self.deltas: dict = {}


def _cache(model: DimensionModel) -> _ModelCache:
    c = model.__dict__.get("_ghost_cache")
    if c is None:
        c = model.__dict__.setdefault("_ghost_cache", _ModelCache())
    return c


def _guess(model: DimensionModel, i: int) -> int:
    # HZ(g_i) is roughly i / A
    A = model.A
    return int(Fraction(i) / A) if A > 0 else 0


def hz(model: DimensionModel, i: int) -> int:
    """``sup{n : d(n) < i}``."""
    return first_at_least(model.d, i, _guess(model, i), i) - 1


def coefficient(model: DimensionModel, i: int) -> GhostCoefficient:
    if i < 0:
        raise ValueError("coefficient index must be >= 0")
    cache = _cache(model)
    hit = cache.coefficients.get(i)
    if hit is not None:
        return hit
    # g_0 follows the same rule; it is 1 as soon as d(n) >= 0 wherever d + d^new > 0
    hi = hz(model, i)
    lo = first_at_least(model.dsum, i + 1, hi, i)
    zeros = []
    for n in range(lo, hi + 1):
        d, dp, ds = model.d(n), model.dp(n), model.dsum(n)
        mult = i - d if 2 * i <= dp else ds - i
        zeros.append((n, mult))
    if zeros:
        coeff = GhostCoefficient(i, tuple(zeros), sum(m for _, m in zeros), lo, hi)
    else:
        coeff = GhostCoefficient(i, (), 0, None, None)
    with cache.lock:
        return cache.coefficients.setdefault(i, coeff)


def delta_data(model: DimensionModel, i: int) -> DeltaData:
    if i < 1:
        raise ValueError("Delta data needs i >= 1")
    cache = _cache(model)
    hit = cache.deltas.get(i)
    if hit is not None:
        return hit
    g = _guess(model, i)
    hz_plus = first_at_least(model.d, i, g, i) - 1
    lz_plus = first_at_least(model.dp, 2 * i, g, i)
    hz_minus = first_at_least(model.dp, 2 * i - 1, g, i) - 1
    lz_minus = first_at_least(model.dsum, i, g, i)
    dd = DeltaData(i, _make_range(lz_plus, hz_plus), _make_range(lz_minus, hz_minus))
    with cache.lock:
        return cache.deltas.setdefault(i, dd)


def degree(model: DimensionModel, i: int) -> int:
    return coefficient(model, i).degree


def eval_valuation(model: DimensionModel, i: int, kappa: WeightPoint):
    """``v_p(g_i(w_kappa))`` as a sum of profile valuations over the zeros of ``g_i``."""
    check_weight(model.params, kappa)
    coeff = coefficient(model, i)
    if isinstance(kappa, BoundaryWeight):
        return kappa.v * coeff.degree
    total = Fraction(0)
    for n, mult in coeff.zeros:
        v = weight_valuation_profile(model.params, kappa, n)
        if v is INF:
            return INF
        total += mult * v
    return total


_DIFF_CACHE: dict = {}


def _exact_diff_valuation(params, k: int, k2: int):
    key = (params.p, params.component, k, k2)
    v = _DIFF_CACHE.get(key)
    if v is None:
        diff = exact_weight_coordinate(params, k) - exact_weight_coordinate(params, k2)
        v = INF if diff == 0 else vp(diff, params.p)
        _DIFF_CACHE[key] = v
    return v


def exact_eval_oracle(model: DimensionModel, i: int, k: int, expand: bool = False):
    """``v_p(g_i(w_k))`` from exact big-integer weight coordinates.

    By default each factor ``w_k - w_{k_n}`` is formed exactly and its
    valuation is weighted by the multiplicity.  ``expand=True`` multiplies the
    whole product out first, which is only practical for small ``i``.
    """
    params = model.params
    params.check_component(k)
    coeff = coefficient(model, i)
    if expand:
        wk = exact_weight_coordinate(params, k)
        prod = Fraction(1)
        for n, mult in coeff.zeros:
            prod *= (wk - exact_weight_coordinate(params, params.k(n))) ** mult
        return INF if prod == 0 else Fraction(vp(prod, params.p))
    total = 0
    for n, mult in coeff.zeros:
        v = _exact_diff_valuation(params, k, params.k(n))
        if v is INF:
            return INF
        total += mult * v
    return Fraction(total)


def delta_slope(model: DimensionModel, i: int, kappa: WeightPoint) -> Fraction:
    if i < 1:
        raise ValueError("Delta-slope needs i >= 1")
    a, b = eval_valuation(model, i, kappa), eval_valuation(model, i - 1, kappa)
    if a is INF or b is INF:
        raise SemistableRangeError(f"inside semistable range at i={i}")
    return a - b


def delta_star(model: DimensionModel, i: int, n: int) -> Fraction:
    """``v_p(Delta_i^*(w_{k_n}))``: ``Delta_i`` with its simple zero or pole at ``w_{k_n}`` removed."""
    dd = delta_data(model, i)
    params = model.params
    kn = params.k(n)
    total = Fraction(0)
    for rng, sign in ((dd.plus_range, 1), (dd.minus_range, -1)):
        if rng is None:
            continue
        for m in range(rng[0], rng[1] + 1):
            if m != n:
                total += sign * weight_valuation_profile(params, IntegerWeight(kn), m)
    return total


class _ProfilePrefix:
    """Prefix sums of ``n -> v_p(w_kappa - w_{k_n})`` over a growing window of ``n``.

    Each value is ``min(alpha, c + v_p(n* - n))``; sums are kept as an integer
    part plus a count of capped terms so no ``Fraction`` arithmetic happens per step.
    The zero ``n*`` of an integer weight contributes nothing here and is handled by the caller.
    """

    def __init__(self, model: DimensionModel, kappa: WeightPoint):
        params = model.params
        self.p = params.p
        if isinstance(kappa, IntegerWeight):
            k_star, self.alpha = kappa.k, None
        else:
            k_star, self.alpha = kappa.k_plus, kappa.alpha
        self.n_star = params.n_of(k_star)
        # v_p(w_k - w_{k_n}) = 1 + v_p(2) + v_p(delta) + v_p(n* - n)
        self.c = 1 + params.vp2 + (1 if params.p == 2 else 0)
        self.lo = self.hi = self.n_star
        self.ints = [0]
        self.caps = [0]

    def _value(self, n: int):
        if n == self.n_star:
            return (0, 0) if self.alpha is None else (0, 1)
        m, v = abs(n - self.n_star), self.c
        while m % self.p == 0:
            m //= self.p
            v += 1
        if self.alpha is not None and v >= self.alpha:
            return 0, 1
        return v, 0

    def _extend(self, lo: int, hi: int) -> None:
        if lo < self.lo:
            vals = [self._value(n) for n in range(lo, self.lo)]
            ints, caps = [0], [0]
            for a, b in vals:
                ints.append(ints[-1] + a)
                caps.append(caps[-1] + b)
            self.ints = ints[:-1] + [x + ints[-1] for x in self.ints]
            self.caps = caps[:-1] + [x + caps[-1] for x in self.caps]
            self.lo = lo
        while self.hi <= hi:
            a, b = self._value(self.hi)
            self.ints.append(self.ints[-1] + a)
            self.caps.append(self.caps[-1] + b)
            self.hi += 1

    def range_sum(self, rng):
        """Sum over ``n`` in the closed range as ``(int_part, capped_count)``."""
        if rng is None:
            return 0, 0
        a, b = rng
        self._extend(a, b)
        i0, i1 = a - self.lo, b + 1 - self.lo
        return self.ints[i1] - self.ints[i0], self.caps[i1] - self.caps[i0]


def valuation_sequence(model: DimensionModel, kappa: WeightPoint, upto: int) -> list:
    """``[v_p(g_i(w_kappa)) for i in 0..upto]``, telescoped through the Delta ranges.

    Equivalent to calling :func:`eval_valuation` for each ``i`` but linear in
    ``upto`` rather than quadratic.
    """
    check_weight(model.params, kappa)
    if isinstance(kappa, BoundaryWeight):
        return [kappa.v * deg for deg in degree_sequence(model, upto)]
    prefix = _ProfilePrefix(model, kappa)
    n_star = prefix.n_star
    alpha = prefix.alpha if prefix.alpha is not None else 0
    int_acc, cap_acc = 0, 0
    for n, mult in coefficient(model, 0).zeros:
        a, c = prefix.range_sum((n, n))
        int_acc += mult * a
        cap_acc += mult * c
    out = []
    for i in range(0, upto + 1):
        if i:
            dd = delta_data(model, i)
            a1, c1 = prefix.range_sum(dd.plus_range)
            a2, c2 = prefix.range_sum(dd.minus_range)
            int_acc += a1 - a2
            cap_acc += c1 - c2
        if isinstance(kappa, IntegerWeight) and _mult_at(model, i, n_star) > 0:
            out.append(INF)
        else:
            out.append(int_acc + alpha * cap_acc if cap_acc else Fraction(int_acc))
    return out


def _mult_at(model: DimensionModel, i: int, n: int) -> int:
    d, ds = model.d(n), model.dsum(n)
    if not d < i < ds:
        return 0
    return i - d if 2 * i <= model.dp(n) else ds - i


def degree_sequence(model: DimensionModel, upto: int) -> list:
    """``[deg g_i for i in 0..upto]`` from the lambda invariants."""
    out = [coefficient(model, 0).degree]
    for i in range(1, upto + 1):
        out.append(out[-1] + delta_data(model, i).lambda_)
    return out


def lambda_sequence(model: DimensionModel, upto: int) -> list:
    """``[lambda_1, ..., lambda_upto]``."""
    return [delta_data(model, i).lambda_ for i in range(1, upto + 1)]


def clear_caches(model: Optional[DimensionModel] = None) -> None:
    if model is not None:
        model.__dict__.pop("_ghost_cache", None)
    _DIFF_CACHE.clear()


def lambda_shift(model: DimensionModel) -> tuple:
    """``(Q, D)`` with ``lambda_{i+Q} = lambda_i + D`` for every ``i >= 1``.

    ``Q = lcm(Q_d, Q_{d_p}, Q_{d+d^new})``, using ``Q_{d_p} / 2`` in place of
    ``Q_{d_p}`` when it is even, and ``D = Q * (P_d/Q_d - 4 P_{d_p}/Q_{d_p} + P_s/Q_s)``.
    """
    Pd, Qd = model.periods["d"]
    Pp, Qp = model.periods["dp"]
    Ps, Qs = model.periods["dsum"]
    Q = math.lcm(Qd, Qp // 2 if Qp % 2 == 0 else Qp, Qs)
    inner = Fraction(Pd, Qd) - 4 * Fraction(Pp, Qp) + Fraction(Ps, Qs)
    return Q, Q * inner


__all__ = [
    "GhostCoefficient", "DeltaData", "GrowthError", "SemistableRangeError",
    "coefficient", "delta_data", "degree", "eval_valuation", "exact_eval_oracle",
    "delta_slope", "delta_star", "valuation_sequence", "degree_sequence",
    "lambda_sequence", "lambda_shift", "first_at_least", "hz", "clear_caches",
]
