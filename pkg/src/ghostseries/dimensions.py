"""Dimension-like functions ``d`` and ``d^new`` feeding a ghost series.

Three sources are supported: the classical ``Gamma_0(N)`` dimension formulas,
user-supplied quasi-linear data, and rhobar-components described by Serre
weight multiplicities.  Every model is stored as a pair of quasi-linear
functions so evaluation at any ``n`` is a single ``divmod``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .weightspace import GhostParams

log = logging.getLogger(__name__)


class AxiomError(ValueError):
    """A dimension model violates one of (G), (ND), (LG), (QL)."""


class RhobarDataError(ValueError):
    pass


def prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    m = 2
    while m * m <= n:
        while n % m == 0:
            out[m] = out.get(m, 0) + 1
            n //= m
        m += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def kronecker(a: int, n: int) -> int:
    """The Kronecker symbol ``(a/n)`` for ``n >= 1``."""
    if n < 1:
        raise ValueError("kronecker symbol needs n >= 1")
    result = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    # Jacobi symbol for odd n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class MuInvariants:
    mu0: int
    mu02: int
    mu03: int
    c0: int


def mu_invariants(N: int) -> MuInvariants:
    """Index, elliptic point counts and cusp count of ``Gamma_0(N)`` via product formulas."""
    if N <= 0:
        raise ValueError("level must be positive")
    fac = prime_factors(N)
    mu0, mu02, mu03, c0 = N, 1, 1, 1
    for ell, e in fac.items():
        mu0 = mu0 * (ell + 1) // ell
        mu02 *= 0 if (ell == 2 and e >= 2) else 1 + kronecker(-4, ell)
        mu03 *= 0 if (ell == 3 and e >= 2) else 1 + kronecker(-3, ell)
        c0 *= sum(_phi_prime_power(ell, min(i, e - i)) for i in range(e + 1))
    return MuInvariants(mu0, mu02, mu03, c0)


def mu_invariants_bruteforce(N: int) -> MuInvariants:
    """Same quantities by direct counting; quadratic in ``N``."""
    if N <= 0:
        raise ValueError("level must be positive")
    # |P^1(Z/N)| = #{(c, d) mod N : gcd(c, d, N) = 1} / phi(N)
    primitive = sum(1 for c in range(N) for d in range(N) if math.gcd(math.gcd(c, d), N) == 1)
    mu0 = primitive // _phi(N)
    mu02 = sum(1 for x in range(N) if (x * x + 1) % N == 0)
    mu03 = sum(1 for x in range(N) if (x * x + x + 1) % N == 0)
    c0 = sum(_phi(math.gcd(d, N // d)) for d in range(1, N + 1) if N % d == 0)
    return MuInvariants(mu0, mu02, mu03, c0)


def _phi(n: int) -> int:
    return sum(1 for x in range(1, n + 1) if math.gcd(x, n) == 1)


def _phi_prime_power(ell: int, e: int) -> int:
    return 1 if e == 0 else (ell - 1) * ell ** (e - 1)


def _elliptic_factor(k: int, m: int) -> Fraction:
    return Fraction(k // m) - Fraction(k - 1, m)


def classical_dim(k: int, N: int) -> int:
    """The ``dim S_k(Gamma_0(N))`` formula, evaluated at any even ``k``."""
    if k % 2:
        raise ValueError("weight must be even")
    mu = mu_invariants(N)
    val = (
        Fraction((k - 1) * mu.mu0, 12)
        + _elliptic_factor(k, 4) * mu.mu02
        + _elliptic_factor(k, 3) * mu.mu03
        - Fraction(mu.c0, 2)
    )
    if val.denominator != 1:
        raise ArithmeticError(f"non-integral dimension {val} at k={k}, N={N}")
    return int(val)


def classical_new_dim(k: int, N: int, p: int) -> int:
    """The ``dim S_k(Gamma_0(Np))^{p-new}`` formula, evaluated at any even ``k``."""
    if k % 2:
        raise ValueError("weight must be even")
    if N % p == 0:
        raise ValueError(f"p={p} divides N={N}")
    mu = mu_invariants(N)
    val = (
        Fraction((k - 1) * (p - 1) * mu.mu0, 12)
        + _elliptic_factor(k, 4) * (kronecker(-4, p) - 1) * mu.mu02
        + _elliptic_factor(k, 3) * (kronecker(-3, p) - 1) * mu.mu03
    )
    if val.denominator != 1:
        raise ArithmeticError(f"non-integral new dimension {val} at k={k}, N={N}, p={p}")
    return int(val)


@dataclass(frozen=True)
class QuasiLinearSpec:
    """A function ``Z -> Z`` with ``f(n + period) = f(n) + defect``.

    ``base`` lists ``f(n_lo), ..., f(n_lo + period - 1)``.
    """

    base: tuple
    period: int
    defect: int
    n_lo: int = 0

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(int(b) for b in self.base))
        if self.period <= 0:
            raise ValueError("period must be positive")
        if len(self.base) != self.period:
            raise ValueError(f"base window has {len(self.base)} values, period is {self.period}")

    def __call__(self, n: int) -> int:
        q, r = divmod(n - self.n_lo, self.period)
        return self.base[r] + q * self.defect

    def to_json(self) -> dict:
        return {"n_lo": self.n_lo, "base": list(self.base), "period": self.period, "defect": self.defect}


@dataclass
class DimensionModel:
    """The pair ``(d, d^new)`` on one weight component with declared periods and defects.

    ``periods`` maps each of ``"d"``, ``"dnew"``, ``"dsum"`` (``d + d^new``) and
    ``"dp"`` (``2d + d^new``) to a ``(P, Q)`` pair.
    """

    params: GhostParams
    d: QuasiLinearSpec
    dnew: QuasiLinearSpec
    periods: dict
    source: dict = field(default_factory=dict)

    def dsum(self, n: int) -> int:
        return self.d(n) + self.dnew(n)

    def dp(self, n: int) -> int:
        return 2 * self.d(n) + self.dnew(n)

    def function(self, name: str):
        return {"d": self.d, "dnew": self.dnew, "dsum": self.dsum, "dp": self.dp}[name]

    @property
    def A(self) -> Fraction:
        P, Q = self.periods["d"]
        return Fraction(Q, P)

    @property
    def B(self) -> Fraction:
        P, Q = self.periods["dnew"]
        return Fraction(Q, P)

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other


def _compose(spec_a: QuasiLinearSpec, ca: int, spec_b: QuasiLinearSpec, cb: int) -> tuple:
    P = math.lcm(spec_a.period, spec_b.period)
    Q = ca * spec_a.defect * (P // spec_a.period) + cb * spec_b.defect * (P // spec_b.period)
    return (P, Q)


def _check_growth(periods: dict) -> None:
    Pd, Qd = periods["d"]
    Ps, Qs = periods["dsum"]
    if Qd <= 0:
        raise AxiomError(f"(G) fails: defect of d is {Qd}, need > 0")
    if Qs <= 0:
        raise AxiomError(f"(G) fails: defect of d + d^new is {Qs}, need > 0")


def build_quasilinear_model(d_spec: QuasiLinearSpec, dnew_spec: QuasiLinearSpec,
                            params: GhostParams, source: Optional[dict] = None) -> DimensionModel:
    periods = {
        "d": (d_spec.period, d_spec.defect),
        "dnew": (dnew_spec.period, dnew_spec.defect),
        "dsum": _compose(d_spec, 1, dnew_spec, 1),
        "dp": _compose(d_spec, 2, dnew_spec, 1),
    }
    _check_growth(periods)
    if source is None:
        source = {
            "type": "quasilinear", "p": params.p, "k_base": params.k_base,
            "d": d_spec.to_json(), "dnew": dnew_spec.to_json(),
        }
    return DimensionModel(params, d_spec, dnew_spec, periods, source)


def gamma0_periods(p: int, N: int) -> dict:
    """Periods and defects of the ``Gamma_0(N)`` model, with the sharper values for ``p = 2, 3``."""
    delta = 2 if p == 2 else p - 1
    mu0 = mu_invariants(N).mu0
    g = math.gcd(12, delta)
    Pd, Qd = 12 // g, delta * mu0 // g
    if p > 3:
        dsum = (Pd, p * Qd)
        dp = (1, (p - 1) * (p + 1) * mu0 // 12)
    else:
        dsum = (2 if p == 3 else 3, mu0)
        dp = (p, (p - 1) * mu0)
    return {"d": (Pd, Qd), "dnew": (Pd, (p - 1) * Qd), "dsum": dsum, "dp": dp}


def build_gamma0_model(p: int, N: int, k0: int = 0) -> DimensionModel:
    if N % p == 0:
        raise ValueError(f"p={p} divides N={N}")
    if p * N <= 3:
        raise AxiomError(f"excluded pair (p, N) = ({p}, {N}): need pN > 3")
    params = GhostParams(p, k0)
    if k0 % 2 or not 0 <= k0 < params.delta:
        raise ValueError(f"k0={k0} must be even with 0 <= k0 < {params.delta}")
    periods = gamma0_periods(p, N)
    P, Qd = periods["d"]
    _, Qn = periods["dnew"]
    d = QuasiLinearSpec(tuple(classical_dim(params.k(n), N) for n in range(P)), P, Qd)
    dnew = QuasiLinearSpec(tuple(classical_new_dim(params.k(n), N, p) for n in range(P)), P, Qn)
    _check_growth(periods)
    return DimensionModel(params, d, dnew, periods,
                          {"type": "gamma0", "p": p, "N": N, "k0": k0})


@dataclass
class AxiomReport:
    window: tuple
    failures: list
    A: Fraction
    B: Fraction
    b_is_p_minus_1_a: bool

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_axioms(model: DimensionModel, window: tuple = (-50, 200)) -> AxiomReport:
    """Check (G), (ND), (LG) and the declared (QL) identities on ``[lo, hi]``.

    Non-decrease on one full period extends to all of ``Z`` by quasi-linearity,
    so a window longer than every declared period decides (ND) globally.
    """
    lo, hi = window
    longest = max(P for P, _ in model.periods.values())
    if hi - lo < longest:
        raise ValueError(f"window [{lo}, {hi}] is shorter than the longest period {longest}")
    failures = []
    try:
        _check_growth(model.periods)
    except AxiomError as exc:
        failures.append(str(exc))
    for name in ("d", "dsum", "dp"):
        f = model.function(name)
        for n in range(lo, hi):
            if f(n + 1) < f(n):
                failures.append(f"(ND) fails for {name} at n={n}: {f(n)} > {f(n + 1)}")
                break
    for name, (P, Q) in model.periods.items():
        f = model.function(name)
        for n in range(lo, hi - P + 1):
            if f(n + P) != f(n) + Q:
                failures.append(f"(QL) fails for {name} at n={n}: period {P}, defect {Q}")
                break
    A, B = growth_constants(model)
    if A <= 0 or B <= 0:
        failures.append(f"(LG) needs A, B > 0, got A={A}, B={B}")
    return AxiomReport((lo, hi), failures, A, B, B == (model.params.p - 1) * A)


def growth_constants(model: DimensionModel) -> tuple:
    return model.A, model.B


# -- rhobar components ---------------------------------------------------------


@dataclass(frozen=True)
class RhobarSpec:
    """A locally reducible rhobar described by its Serre weight data.

    ``m1, m2, m3`` are the dimensions at the distinguished ``(k, t)`` pairs of
    the weight table; ``t`` selects the twist ``rbar (x) omega^t``.
    """

    p: int
    k_rbar: int
    split: bool
    m1: int
    m2: int = 0
    m3: int = 0
    t: int = 0
    base_window: Optional[tuple] = None
    dp_base: Optional[int] = None
    experimental: bool = False

    def __post_init__(self):
        GhostParams(self.p)
        p = self.p
        if p < 5 and not self.experimental:
            raise ValueError(f"rhobar models need p >= 5 (p={p}); pass experimental=True to override")
        if p < 3:
            raise ValueError("rhobar models need an odd prime")
        if not 2 <= self.k_rbar <= p + 1:
            raise ValueError(f"Serre weight {self.k_rbar} outside [2, {p + 1}]")
        if min(self.m1, self.m2, self.m3) < 0:
            raise ValueError("multiplicities must be nonnegative")
        if self.k_rbar == p + 1 and self.m1:
            raise ValueError("k_rbar = p + 1 forces m1 = S(2, 0) = 0")
        if self.split and self.k_rbar >= p and self.m3:
            raise ValueError(f"companion weight {p + 1 - self.k_rbar} < 2 carries no m3")
        object.__setattr__(self, "t", self.t % (p - 1))
        if self.base_window is not None:
            object.__setattr__(self, "base_window", tuple(int(x) for x in self.base_window))
            if len(self.base_window) != p + 1:
                raise ValueError(f"base window must list d_t(0..{p}), got {len(self.base_window)} values")

    @property
    def k0t(self) -> int:
        """Least ``2 <= k <= p`` with ``k = k_rbar + 2t mod p - 1``."""
        return 2 + (self.k_rbar + 2 * self.t - 2) % (self.p - 1)

    @property
    def generic(self) -> bool:
        return not self.split and (self.k_rbar - 2) % (self.p - 1) != 0


def rhobar_base_table(spec: RhobarSpec) -> dict:
    """Nonzero values ``S(k, t)`` for ``2 <= k <= p + 1``; absent keys are zero."""
    p, k, tm = spec.p, spec.k_rbar, spec.p - 1
    table: dict = {}

    def put(weight, twist, m):
        if m:
            table[(weight, twist % tm)] = m

    if k == p + 1:
        put(p + 1, 0, spec.m2)
    elif k == 2:
        put(2, 0, spec.m1)
        put(p + 1, 0, spec.m2)
    else:
        put(k, 0, spec.m1)
    if spec.split:
        if k == 2:
            put(p - 1, p - 2, spec.m3)
        elif k < p:
            put(p + 1 - k, p - k, spec.m3)
            if k == p - 1:
                # a weight 2 companion reappears in weight p + 1
                put(p + 1, p - k, spec.m3)
    return table


def _S(table: dict, p: int, k: int, t: int) -> int:
    return table.get((k, t % (p - 1)), 0)


def _alpha(g: int, p: int) -> int:
    """Representative of ``g mod p - 1`` in ``(2, p + 1]``."""
    return 3 + (g - 3) % (p - 1)


def rhobar_defect(spec: RhobarSpec) -> int:
    """Defect ``Q_{d_t}`` from the Serre weight multiplicities."""
    wt2 = (spec.k_rbar - 2) % (spec.p - 1) == 0
    m1, m2, m3 = spec.m1, spec.m2, spec.m3
    if not spec.split:
        return m1 + m2 if wt2 else 2 * m1
    return m1 + m2 + 2 * m3 if wt2 else 2 * m1 + 2 * m3


def rhobar_defect_oracle(spec: RhobarSpec) -> int:
    """``Q_{d_t}`` as the sum over one full cycle of twists of the weight table."""
    p, k = spec.p, spec.k_rbar
    table = rhobar_base_table(spec)
    total = 0
    for j in range(p - 1):
        a = _alpha(k + 2 * j, p)
        total += _S(table, p, a, j) + _S(table, p, p + 3 - a, 2 - k - j)
    return total


def rhobar_dp_base_generic(spec: RhobarSpec) -> int:
    """``d_{p,t}(0)`` in the generic non-split case: ``2 m1`` if ``t <= k_{0,t} - 2``."""
    if not spec.generic:
        raise RhobarDataError("closed form for d_{p,t}(0) only covers the generic non-split case")
    return 2 * spec.m1 if spec.t <= spec.k0t - 2 else 0


def rhobar_dp_base(spec: RhobarSpec) -> int:
    """``d_{p,t}(0)`` by summing the weight table over the Borel filtration of ``Sym^g``."""
    p, t = spec.p, spec.t
    table = rhobar_base_table(spec)
    g = spec.k0t - 2
    total = 0
    for j in range(g + 1):
        a = _alpha(2 * j - g + 2, p)
        total += _S(table, p, a, t + j - g) + _S(table, p, p + 3 - a, t - j)
    return total


def rhobar_weight_dims(spec: RhobarSpec, k: int, t: int, _memo=None) -> int:
    """``S(k, t)`` for any ``k >= 2`` by peeling off ``p + 1`` at a time.

    Weights ``k <= p + 1`` come from the table; ``k = p + 2`` is not covered by
    either exact sequence and raises :class:`RhobarDataError`.
    """
    p = spec.p
    if _memo is None:
        _memo = {}
    key = (k, t % (p - 1))
    if key in _memo:
        return _memo[key]
    if k < 2:
        raise ValueError(f"weight {k} < 2")
    if k <= p + 1:
        val = _S(rhobar_base_table(spec), p, k, t)
    elif k == p + 2:
        raise RhobarDataError("base window required: weight p + 2 is outside both exact sequences")
    else:
        table = rhobar_base_table(spec)
        a = _alpha(k, p)
        val = (rhobar_weight_dims(spec, k - (p + 1), t - 1, _memo)
               + _S(table, p, a, t) + _S(table, p, p + 3 - a, t - k + 2))
    _memo[key] = val
    return val


def rhobar_window(spec: RhobarSpec) -> tuple:
    """``d_t(0), ..., d_t(p)`` for the generic non-split case."""
    if not spec.generic:
        raise RhobarDataError("base window required: only the generic non-split case is derived")
    memo: dict = {}
    k0 = spec.k0t
    return tuple(rhobar_weight_dims(spec, k0 + n * (spec.p - 1), spec.t, memo)
                 for n in range(spec.p + 1))


def build_rhobar_model(spec: RhobarSpec) -> DimensionModel:
    p = spec.p
    Q = rhobar_defect(spec)
    if Q <= 0:
        raise AxiomError(f"(G) fails: defect Q_d = {Q}")
    window = spec.base_window
    if window is None:
        window = rhobar_window(spec)
        memo: dict = {}
        # one more period as a consistency check on the derived window
        far = rhobar_weight_dims(spec, spec.k0t + (p + 1) * (p - 1), spec.t, memo)
        if far != window[0] + Q:
            raise RhobarDataError(f"inconsistent rhobar data: d_t(p+1) = {far}, expected {window[0] + Q}")
    dp_base = spec.dp_base
    if dp_base is None:
        dp_base = rhobar_dp_base_generic(spec) if spec.generic else rhobar_dp_base(spec)
    d = QuasiLinearSpec(window, p + 1, Q)
    dnew_vals = tuple(dp_base + n * Q - 2 * window[n] for n in range(p + 1))
    if min(dnew_vals) < 0:
        n = dnew_vals.index(min(dnew_vals))
        raise RhobarDataError(f"inconsistent rhobar data: d_t^new({n}) = {dnew_vals[n]} < 0")
    dnew = QuasiLinearSpec(dnew_vals, p + 1, (p - 1) * Q)
    periods = {"d": (p + 1, Q), "dnew": (p + 1, (p - 1) * Q), "dsum": (p + 1, p * Q), "dp": (1, Q)}
    source = {"type": "rhobar", "p": p, "k_rbar": spec.k_rbar, "split": spec.split,
              "m1": spec.m1, "m2": spec.m2, "m3": spec.m3, "t": spec.t,
              "base_window": list(window), "dp_base": dp_base}
    if spec.experimental:
        source["experimental"] = True
    model = DimensionModel(GhostParams(p, spec.k0t), d, dnew, periods, source)
    report = verify_axioms(model, (0, 2 * (p + 1)))
    if not report.ok:
        raise RhobarDataError("inconsistent rhobar data: " + "; ".join(report.failures))
    return model
