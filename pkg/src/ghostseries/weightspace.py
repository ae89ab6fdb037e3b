"""p-adic valuations and coordinates on one component of weight space.

Valuations that can be infinite are carried as ``Fraction`` or the singleton
:data:`INF`.  Integer weights ``k`` live on the component fixed by
``GhostParams.k_base``; the generator of ``1 + 2pZ_p`` is fixed to ``1 + p``
for odd ``p`` and to ``5`` for ``p = 2`` so coordinates are plain big integers.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Union


class _Infinity:
    """Positive infinity for valuations: absorbs addition, exceeds every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())

    def __hash__(self):
        return hash("ghostseries.INF")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __mul__(self, other):
        if other == 0:
            raise ValueError("0 * INF is undefined")
        if other < 0:
            raise ValueError("negative multiple of INF")
        return self

    __rmul__ = __mul__

    def __sub__(self, other):
        if other is self:
            raise ValueError("INF - INF is undefined")
        return self

    def __rsub__(self, other):
        raise ValueError("cannot subtract INF from a finite value")


INF = _Infinity()

ExtRational = Union[Fraction, _Infinity]


def is_inf(x) -> bool:
    return x is INF


def ext_min(a, b):
    if a is INF:
        return b
    if b is INF:
        return a
    return min(a, b)


def vp(x, p: int) -> int:
    """Exponent of ``p`` in the nonzero rational ``x``."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero requested")
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def _vp_int(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_ext(x, p: int) -> ExtRational:
    """Like :func:`vp` but returns INF at zero."""
    if x == 0:
        return INF
    return Fraction(vp(x, p))


def vp_factorial(n: int, p: int) -> int:
    """Legendre's formula for ``v_p(n!)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    total = 0
    power = p
    while power <= n:
        total += n // power
        power *= p
    return total


@dataclass(frozen=True)
class GhostParams:
    """Prime context and the component of weight space.

    ``k_base`` is the weight attached to ``n = 0``; it need not lie in
    ``[0, delta)`` (the rhobar models start at ``k_{0,t} >= 2``).
    """

    p: int
    k_base: int = 0

    def __post_init__(self):
        if self.p < 2 or any(self.p % m == 0 for m in range(2, int(self.p ** 0.5) + 1)):
            raise ValueError(f"p={self.p} is not prime")

    @property
    def q(self) -> int:
        return 4 if self.p == 2 else self.p

    @property
    def delta(self) -> int:
        return 2 if self.p == 2 else self.p - 1

    @property
    def v0(self) -> Fraction:
        return Fraction(3 if self.p == 2 else 1)

    @property
    def gamma(self) -> int:
        return 5 if self.p == 2 else 1 + self.p

    @property
    def component(self) -> int:
        return self.k_base % self.delta

    @property
    def vp2(self) -> int:
        return 1 if self.p == 2 else 0

    def k(self, n: int) -> int:
        """The weight ``k_n = k_base + n * delta``."""
        return self.k_base + n * self.delta

    def n_of(self, k: int) -> int:
        self.check_component(k)
        return (k - self.k_base) // self.delta

    def check_component(self, *ks: int) -> None:
        for k in ks:
            if k % self.delta != self.component:
                raise ValueError(
                    f"weights on different components: {k} is not "
                    f"{self.component} mod {self.delta}"
                )


@dataclass(frozen=True)
class IntegerWeight:
    k: int


@dataclass(frozen=True)
class NearIntegerWeight:
    """A weight off ``Z_p`` whose closest integer weight is ``k_plus`` at distance ``alpha``."""

    k_plus: int
    alpha: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))


@dataclass(frozen=True)
class BoundaryWeight:
    """A weight in the halo region ``0 < v_p(w) < v0``."""

    v: Fraction

    def __post_init__(self):
        object.__setattr__(self, "v", Fraction(self.v))
        if self.v <= 0:
            raise ValueError("boundary valuation must be positive")


WeightPoint = Union[IntegerWeight, NearIntegerWeight, BoundaryWeight]


def check_weight(params: GhostParams, kappa: WeightPoint) -> None:
    """Raise ``ValueError`` unless ``kappa`` satisfies its invariants on this component."""
    if isinstance(kappa, IntegerWeight):
        params.check_component(kappa.k)
    elif isinstance(kappa, NearIntegerWeight):
        params.check_component(kappa.k_plus)
        if kappa.alpha < params.v0:
            raise ValueError(f"alpha={kappa.alpha} must be >= v0={params.v0}")
    elif isinstance(kappa, BoundaryWeight):
        if kappa.v >= params.v0:
            raise ValueError(f"boundary valuation {kappa.v} must be < v0={params.v0}")
    else:
        raise TypeError(f"not a weight point: {kappa!r}")


def weight_diff_valuation(params: GhostParams, k: int, k2: int) -> ExtRational:
    """``v_p(w_k - w_k2) = 1 + v_p(2) + v_p(k - k2)``."""
    params.check_component(k, k2)
    if k == k2:
        return INF
    return Fraction(1 + params.vp2 + _vp_int(k - k2, params.p))


def exact_weight_coordinate(params: GhostParams, k: int) -> Fraction:
    """``w_k`` as an exact rational (``gamma**k - 1``, shifted on the odd 2-adic component)."""
    params.check_component(k)
    e = k - 1 if (params.p == 2 and params.component == 1) else k
    return _gamma_power(params.gamma, e) - 1


def weight_valuation_profile(params: GhostParams, kappa: WeightPoint, n: int) -> ExtRational:
    """``v_p(w_kappa - w_{k_n})``."""
    if isinstance(kappa, IntegerWeight):
        return weight_diff_valuation(params, kappa.k, params.k(n))
    if isinstance(kappa, NearIntegerWeight):
        return ext_min(kappa.alpha, weight_diff_valuation(params, kappa.k_plus, params.k(n)))
    if isinstance(kappa, BoundaryWeight):
        return kappa.v
    raise TypeError(f"not a weight point: {kappa!r}")


def min_profile(params: GhostParams, kappa: WeightPoint) -> Fraction:
    """A lower bound for every finite value of the profile ``n -> v_p(w_kappa - w_{k_n})``."""
    if isinstance(kappa, BoundaryWeight):
        return kappa.v
    if isinstance(kappa, NearIntegerWeight):
        return min(kappa.alpha, params.v0)
    return params.v0


@functools.lru_cache(maxsize=None)
def _gamma_power(gamma: int, e: int) -> Fraction:
    return Fraction(gamma) ** e
