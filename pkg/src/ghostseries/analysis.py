"""Checks of the asymptotic and arithmetic structure of ghost slopes.

Everything here is exact: masses, normalized slopes and Kolmogorov-Smirnov
distances are ``Fraction`` values.  Floats appear only when a caller asks for them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .dimensions import DimensionModel, growth_constants
from .ghost import lambda_shift
from .newton import SlopeSequence, ghost_slopes, wadic_slopes
from .weightspace import BoundaryWeight, IntegerWeight, NearIntegerWeight, WeightPoint, check_weight


class UncertifiedError(ValueError):
    pass


def _require_growth(model: DimensionModel) -> tuple:
    A, B = growth_constants(model)
    if A <= 0 or B <= 0:
        raise ValueError(f"distribution statements need A, B > 0 (got A={A}, B={B})")
    return A, B


def normalizer(model: DimensionModel, n: int) -> Fraction:
    """``p/(p-1)^2 * B^2/(A(A+B)) * k_n``; equal to ``k_n`` when ``B = (p-1)A``."""
    A, B = _require_growth(model)
    p = model.params.p
    return Fraction(p, (p - 1) ** 2) * B * B / (A * (A + B)) * model.params.k(n)


def classical_slopes(model: DimensionModel, n: int) -> tuple:
    """The first ``d_p(n)`` slopes at ``Integer(k_n)``."""
    count = model.dp(n)
    if count <= 0:
        return ()
    seq = ghost_slopes(model, IntegerWeight(model.params.k(n)), count)
    if not seq.certified:
        raise UncertifiedError(f"slopes at n={n} could not be certified")
    return seq.slopes


def normalized_slopes(model: DimensionModel, n: int) -> list:
    norm = normalizer(model, n)
    return [s / norm for s in classical_slopes(model, n)]


def ks_uniform(sample: Sequence, a: Fraction, b: Fraction) -> Fraction:
    """Sup distance between the empirical CDF of ``sample`` and the uniform CDF on ``[a, b]``."""
    xs = sorted(Fraction(x) for x in sample)
    m = len(xs)
    if m == 0:
        return Fraction(0)
    width = b - a

    def cdf(x):
        return min(Fraction(1), max(Fraction(0), (x - a) / width))

    best = Fraction(0)
    for j, x in enumerate(xs, start=1):
        F = cdf(x)
        best = max(best, Fraction(j, m) - F, F - Fraction(j - 1, m))
    return best


@dataclass(frozen=True)
class DistributionReport:
    n: int
    normalizer: Fraction
    mass_at_half: Fraction
    mass_low: Fraction
    mass_high: Fraction
    ks_low: Fraction
    ks_high: Fraction
    limit_masses: tuple
    low_interval: tuple
    high_interval: tuple

    def deviations(self) -> dict:
        lo, half, hi = self.limit_masses
        return {
            "mass_at_half": abs(self.mass_at_half - half),
            "mass_low": abs(self.mass_low - lo),
            "mass_high": abs(self.mass_high - hi),
            "ks_low": self.ks_low,
            "ks_high": self.ks_high,
        }


def distribution_report(model: DimensionModel, n: int) -> DistributionReport:
    """Masses of the three slope blocks at ``k_n`` and KS distances of the outer blocks.

    The block of indices ``(d(n), d(n) + d^new(n)]`` is the semistable block; its
    share ``d^new(n)/d_p(n)`` is the mass at ``1/2``.
    """
    A, B = _require_growth(model)
    d, dn, dp = model.d(n), model.dnew(n), model.dp(n)
    if dp <= 0:
        raise ValueError(f"d_p({n}) = {dp}; nothing to distribute")
    norm = normalizer(model, n)
    slopes = [s / norm for s in classical_slopes(model, n)]
    low_iv = (Fraction(0), A / (2 * A + B))
    high_iv = ((A + B) / (2 * A + B), Fraction(1))
    low = slopes[:max(d, 0)]
    high = slopes[d + dn:]
    return DistributionReport(
        n=n,
        normalizer=norm,
        mass_at_half=Fraction(dn, dp),
        mass_low=Fraction(d, dp),
        mass_high=Fraction(dp - d - dn, dp),
        ks_low=ks_uniform(low, *low_iv),
        ks_high=ks_uniform(high, *high_iv),
        limit_masses=(A / (2 * A + B), B / (2 * A + B), A / (2 * A + B)),
        low_interval=low_iv,
        high_interval=high_iv,
    )


@dataclass(frozen=True)
class GouveaReport:
    n: int
    k: int
    highest_old: Fraction
    highest_classical: Fraction
    ratio_old: Fraction
    ratio_classical: Fraction
    limit_old: Fraction
    limit_classical: Fraction
    buzzard_bound: Fraction
    buzzard_ok: bool


def gouvea_check(model: DimensionModel, n: int) -> GouveaReport:
    """``s_{d(n)}(k_n)/k_n`` and ``s_{d_p(n)}(k_n)/k_n`` against their limits."""
    A, B = _require_growth(model)
    d = model.d(n)
    if d < 1:
        raise ValueError(f"d({n}) = {d}; no old slopes")
    p = model.params.p
    k = model.params.k(n)
    slopes = classical_slopes(model, n)
    old, top = slopes[d - 1], slopes[-1]
    c = Fraction(p, (p - 1) ** 2)
    bound = Fraction(k - 1, p + 1)
    return GouveaReport(
        n=n, k=k, highest_old=old, highest_classical=top,
        ratio_old=old / k, ratio_classical=top / k,
        limit_old=c * B * B / ((A + B) * (2 * A + B)),
        limit_classical=c * B * B / (A * (A + B)),
        buzzard_bound=bound, buzzard_ok=old <= bound,
    )


@dataclass(frozen=True)
class SemistableReport:
    n: int
    k: int
    lower_index: int
    upper_index: int
    lower_is_vertex: bool
    upper_is_vertex: bool
    interior_vertices: tuple
    slope: Optional[Fraction]
    predicted: Fraction
    deviation: Optional[Fraction]

    @property
    def ok(self) -> bool:
        return self.lower_is_vertex and self.upper_is_vertex and not self.interior_vertices


def semistable_check(model: DimensionModel, n: int) -> SemistableReport:
    """Whether ``d(n)`` and ``d(n) + d^new(n)`` are consecutive breakpoints at ``k_n``."""
    A, B = _require_growth(model)
    p = model.params.p
    k = model.params.k(n)
    lo, hi = model.d(n), model.dsum(n)
    predicted = Fraction(p, (p - 1) ** 2) * B * B / (2 * A * (A + B)) * k
    if model.dnew(n) <= 0:
        return SemistableReport(n, k, lo, hi, True, True, (), None, predicted, None)
    # one slope past the block decides whether hi is a breakpoint
    seq = ghost_slopes(model, IntegerWeight(k), hi + 1)
    if not seq.certified:
        raise UncertifiedError(f"slopes at n={n} could not be certified")
    s = (None,) + seq.slopes  # 1-based

    def is_vertex(x):
        return x <= 0 or s[x] < s[x + 1]

    interior = tuple(x for x in range(max(lo, 0) + 1, hi) if s[x] < s[x + 1])
    slope = s[hi]
    return SemistableReport(n, k, lo, hi, is_vertex(lo), is_vertex(hi), interior,
                            slope, predicted, abs(slope - predicted))


@dataclass(frozen=True)
class APParameters:
    Q: int
    Q_r: int
    r: int
    common_difference: Fraction
    inner: Fraction
    alpha: Fraction


def ap_parameters(model: DimensionModel, kappa: WeightPoint) -> APParameters:
    """``Q``, ``Q_r``, ``r = floor(alpha)`` and the common difference of the slope progressions."""
    check_weight(model.params, kappa)
    if isinstance(kappa, IntegerWeight):
        raise ValueError("theorem does not apply at w_kappa in Z_p with v >= v0 (integer weight)")
    p = model.params.p
    Q, QD = lambda_shift(model)
    inner = QD / Q
    if isinstance(kappa, BoundaryWeight):
        alpha = kappa.v
        r = int(alpha)
        return APParameters(Q, Q, r, QD * alpha, inner, alpha)
    assert isinstance(kappa, NearIntegerWeight)
    alpha = kappa.alpha
    r = int(alpha)
    v0 = int(model.params.v0)
    tail = alpha + sum((p - 1) * p ** (r - v) * v for v in range(v0, r + 1))
    if p != 2:
        Q_r = p ** r * Q
    elif r < v0:
        Q_r = Q
    else:
        Q_r = 2 ** (r - 2) * Q
    return APParameters(Q, Q_r, r, QD * tail, inner, alpha)


@dataclass(frozen=True)
class APReport:
    Q: Optional[int]
    Q_r: int
    r: Optional[int]
    common_difference: Fraction
    verified_range: tuple
    violations: tuple = field(default_factory=tuple)

    @property
    def verified(self) -> bool:
        return not self.violations


def ap_verify(slopes: SlopeSequence, Q_r: int, D, params: Optional[APParameters] = None) -> APReport:
    """Check ``s_{i+Q_r} = s_i + D`` for ``Q_r < i <= count - Q_r`` (1-based)."""
    if not slopes.certified:
        raise UncertifiedError("arithmetic progression check needs certified slopes")
    D = Fraction(D)
    s = slopes.slopes
    count = len(s)
    if count < 3 * Q_r:
        raise ValueError(f"need at least 3*Q_r = {3 * Q_r} slopes, have {count}")
    violations = []
    for i in range(Q_r + 1, count - Q_r + 1):
        diff = s[i + Q_r - 1] - s[i - 1]
        if diff != D:
            violations.append((i, diff))
    return APReport(
        params.Q if params else None, Q_r, params.r if params else None, D,
        (Q_r + 1, count - Q_r), tuple(violations),
    )


@dataclass(frozen=True)
class CompareReport:
    compared: int
    computed_length: int
    external_length: int
    first_mismatch: Optional[int]  # 1-based

    @property
    def match(self) -> bool:
        return self.first_mismatch is None

    @property
    def note(self) -> str:
        if self.computed_length == self.external_length:
            return ""
        return f"lengths differ ({self.computed_length} computed, {self.external_length} external); compared {self.compared}"


def compare_slopes(computed, external: Sequence) -> CompareReport:
    comp = list(computed.slopes if isinstance(computed, SlopeSequence) else computed)
    ext = sorted(Fraction(x) for x in external)
    m = min(len(comp), len(ext))
    first = next((j + 1 for j in range(m) if comp[j] != ext[j]), None)
    return CompareReport(m, len(comp), len(ext), first)


@dataclass(frozen=True)
class DistinctSlopeReport:
    count: int
    distinct: int
    repeated: tuple  # ((slope, multiplicity), ...) for multiplicity > 1
    gaps: tuple  # consecutive differences of the distinct slopes


def distinct_slope_report(model: DimensionModel, count: int) -> DistinctSlopeReport:
    """How many of the first ``count`` w-adic slopes are distinct.  Purely descriptive."""
    seq = wadic_slopes(model, count)
    mult: dict = {}
    for s in seq.slopes:
        mult[s] = mult.get(s, 0) + 1
    distinct = sorted(mult)
    return DistinctSlopeReport(
        len(seq.slopes), len(distinct),
        tuple((s, m) for s, m in sorted(mult.items()) if m > 1),
        tuple(b - a for a, b in zip(distinct, distinct[1:])),
    )
