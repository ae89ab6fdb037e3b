"""Lower convex hulls and certified initial slopes of ghost specializations."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .dimensions import DimensionModel
from .ghost import degree_sequence, lambda_sequence, lambda_shift, valuation_sequence
from .weightspace import INF, WeightPoint, check_weight, min_profile

log = logging.getLogger(__name__)

DEFAULT_I_MAX = 1 << 17


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple  # ((x, y), ...)
    slopes: tuple  # ((slope, multiplicity), ...)

    def slope_list(self, count: Optional[int] = None) -> list:
        out = []
        for s, m in self.slopes:
            out.extend([s] * m)
            if count is not None and len(out) >= count:
                return out[:count]
        return out

    @property
    def length(self) -> int:
        return self.vertices[-1][0] - self.vertices[0][0]

    def vertex_xs(self) -> list:
        return [x for x, _ in self.vertices]


@dataclass(frozen=True)
class SlopeSequence:
    weight: object
    count: int
    slopes: tuple
    certified: bool
    index_bound: int = 0

    def __post_init__(self):
        object.__setattr__(self, "slopes", tuple(Fraction(s) for s in self.slopes))


def _finite_points(points) -> list:
    pts = [(int(x), Fraction(y)) for x, y in points if y is not INF]
    if not pts:
        raise ValueError("no finite points to take a hull of")
    pts.sort()
    for (x1, _), (x2, _) in zip(pts, pts[1:]):
        if x1 == x2:
            raise ValueError(f"duplicate x-coordinate {x1}")
    return pts


def _polygon(vertices: list) -> NewtonPolygon:
    slopes = []
    for (x1, y1), (x2, y2) in zip(vertices, vertices[1:]):
        slopes.append(((y2 - y1) / (x2 - x1), x2 - x1))
    return NewtonPolygon(tuple(vertices), tuple(slopes))


def lower_hull(points: Sequence) -> NewtonPolygon:
    """Monotone-chain lower hull; infinite ordinates are skipped.

    Only breakpoints are kept as vertices, so consecutive slopes are strictly increasing.
    """
    pts = _finite_points(points)
    hull: list = []
    for x, y in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (x - x1) >= (y - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append((x, y))
    return _polygon(hull)


def lower_hull_oracle(points: Sequence) -> NewtonPolygon:
    """Quadratic reference hull: from each vertex jump to the farthest point of least slope."""
    pts = _finite_points(points)
    vertices = [pts[0]]
    j = 0
    while j < len(pts) - 1:
        x0, y0 = pts[j]
        best, best_k = None, None
        for k in range(j + 1, len(pts)):
            s = (pts[k][1] - y0) / (pts[k][0] - x0)
            if best is None or s <= best:
                best, best_k = s, k
        vertices.append(pts[best_k])
        j = best_k
    return _polygon(vertices)


def _certify(ys: list, degrees: list, lambdas: list, Q: int, v_min: Fraction, count: int):
    """Return the first ``count`` slopes if no index beyond ``len(ys) - 1`` can change them."""
    I = len(ys) - 1
    poly = lower_hull(list(enumerate(ys)))
    if poly.length < count:
        return None, poly
    acc = 0
    for (x_v, y_v), (s, m) in zip(poly.vertices[1:], poly.slopes):
        acc += m
        if acc >= count:
            break
    if I < Q:
        return None, poly
    L = min(lambdas[I - Q:I])  # lambda_{I-Q+1} .. lambda_I
    if L <= 0:
        return None, poly
    # beyond I every coefficient has valuation >= v_min * (deg g_I + L (j - I))
    if v_min * degrees[I] >= y_v + s * (I - x_v) and v_min * L >= s:
        return poly.slope_list(count), poly
    return None, poly


def _run(model: DimensionModel, count: int, sequence, v_min: Fraction, weight, i_max: int,
         i_start: Optional[int]) -> SlopeSequence:
    if count < 1:
        raise ValueError("count must be >= 1")
    Q, D = lambda_shift(model)
    if D <= 0:
        raise ArithmeticError("lambda shift is not increasing; (LG) fails")
    I = i_start or max(2 * count, count + 2 * Q, 32)
    poly = None
    while True:
        I = min(I, i_max)
        ys = sequence(I)
        degrees = degree_sequence(model, I)
        lambdas = lambda_sequence(model, I)
        slopes, poly = _certify(ys, degrees, lambdas, Q, v_min, count)
        if slopes is not None:
            return SlopeSequence(weight, count, tuple(slopes), True, I)
        if I >= i_max:
            log.warning("slopes not certified by I_max=%d", i_max)
            partial = poly.slope_list(count) if poly is not None else []
            return SlopeSequence(weight, len(partial), tuple(partial), False, I)
        I *= 2


def ghost_slopes(model: DimensionModel, kappa: WeightPoint, count: int,
                 i_max: int = DEFAULT_I_MAX, i_start: Optional[int] = None) -> SlopeSequence:
    """The first ``count`` slopes of ``NP(G_kappa)`` with a certificate of finality."""
    check_weight(model.params, kappa)
    return _run(model, count, lambda I: valuation_sequence(model, kappa, I),
                min_profile(model.params, kappa), kappa, i_max, i_start)


def wadic_slopes(model: DimensionModel, count: int, i_max: int = DEFAULT_I_MAX,
                 i_start: Optional[int] = None) -> SlopeSequence:
    """Slopes of the hull of ``(i, deg g_i)``."""
    return _run(model, count, lambda I: [Fraction(x) for x in degree_sequence(model, I)],
                Fraction(1), None, i_max, i_start)


def ghost_polygon(model: DimensionModel, kappa: WeightPoint, upto: int) -> NewtonPolygon:
    """Hull of the points ``(i, v_p(g_i(w_kappa)))`` for ``i <= upto``, without certification."""
    return lower_hull(list(enumerate(valuation_sequence(model, kappa, upto))))
