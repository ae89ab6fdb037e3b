import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ghostseries.dimensions import (
    DimensionModel,
    QuasiLinearSpec,
    build_gamma0_model,
    build_quasilinear_model,
)
from ghostseries.ghost import (
    GrowthError,
    SemistableRangeError,
    coefficient,
    degree_sequence,
    delta_data,
    delta_slope,
    delta_star,
    eval_valuation,
    exact_eval_oracle,
    lambda_sequence,
    lambda_shift,
    valuation_sequence,
)
from ghostseries.weightspace import INF, BoundaryWeight, GhostParams, IntegerWeight, NearIntegerWeight


def synthetic(d, dnew):
    """Constant-shift model with d(0), dnew(0) prescribed and slopes 1, 3 per step."""
    return build_quasilinear_model(QuasiLinearSpec((d,), 1, 1), QuasiLinearSpec((dnew,), 1, 3), GhostParams(5))


def test_first_coefficients(m510):
    assert coefficient(m510, 0).zeros == ()
    assert coefficient(m510, 0).degree == 0
    g1 = coefficient(m510, 1)
    assert g1.zeros == ((2, 1),) and (g1.lz, g1.hz) == (2, 2)
    g2 = coefficient(m510, 2)
    assert g2.zeros == ((2, 1), (3, 1), (4, 1), (5, 1)) and g2.degree == 4
    g4 = coefficient(m510, 4)
    assert [m for _, m in g4.zeros] == [2, 3, 2, 2, 2, 1, 1, 1]
    assert (g4.lz, g4.hz) == (4, 11)


def test_constant_term_follows_the_zero_rule():
    # the weight 2 formula gives d = -1 here, so g_0 keeps the zero at w_2
    model = build_gamma0_model(3, 5, 0)
    assert (model.d(1), model.dsum(1)) == (-1, 1)
    assert coefficient(model, 0).zeros == ((1, 1),)
    assert eval_valuation(model, 0, IntegerWeight(2)) is INF
    assert degree_sequence(model, 3) == [coefficient(model, i).degree for i in range(4)]


def test_multiplicity_peak_uses_doubling():
    model = synthetic(3, 4)
    assert coefficient(model, 5).multiplicity(0) == 2
    assert coefficient(model, 4).multiplicity(0) == 1
    assert coefficient(model, 6).multiplicity(0) == 1
    assert coefficient(model, 7).multiplicity(0) == 0


def test_delta_examples(m510):
    dd = delta_data(m510, 2)
    assert dd.plus_range == (3, 5) and dd.minus_range is None
    assert dd.lambda_ == 3


def test_delta_pole_when_order_drops():
    model = synthetic(0, 3)
    assert coefficient(model, 2).multiplicity(0) == 1
    assert coefficient(model, 3).multiplicity(0) == 0
    dd = delta_data(model, 3)
    assert dd.minus_range is not None and dd.minus_range[0] <= 0 <= dd.minus_range[1]


def test_empty_delta_has_zero_lambda():
    model = build_quasilinear_model(QuasiLinearSpec((0, 0, 0, 0, 0, 4), 6, 4), QuasiLinearSpec((0,), 1, 1),
                                    GhostParams(5))
    empties = [i for i in range(1, 40) if delta_data(model, i).plus_range is None
               and delta_data(model, i).minus_range is None]
    for i in empties:
        assert delta_data(model, i).lambda_ == 0


@pytest.mark.parametrize("args", [(5, 1, 0), (2, 3, 0), (7, 1, 2), (3, 5, 0), (11, 2, 4)])
def test_degree_differences_are_lambdas(args):
    model = build_gamma0_model(*args)
    degs = degree_sequence(model, 500)
    for i in (0, 1, 2, 17, 100, 333, 500):
        assert degs[i] == coefficient(model, i).degree
    lam = lambda_sequence(model, 500)
    for i in range(1, 501):
        assert degs[i] - degs[i - 1] == lam[i - 1]


@pytest.mark.parametrize("args", [(5, 1, 0), (2, 3, 0), (7, 1, 2), (3, 5, 0), (13, 1, 0)])
def test_delta_ranges_are_the_quotient_of_zero_sets(args):
    model = build_gamma0_model(*args)
    for i in range(1, 120):
        prev = dict(coefficient(model, i - 1).zeros)
        cur = dict(coefficient(model, i).zeros)
        diff = {n: cur.get(n, 0) - prev.get(n, 0) for n in set(prev) | set(cur)}
        assert set(diff.values()) <= {-1, 0, 1}
        plus = sorted(n for n, e in diff.items() if e == 1)
        minus = sorted(n for n, e in diff.items() if e == -1)
        dd = delta_data(model, i)
        for rng, ns in ((dd.plus_range, plus), (dd.minus_range, minus)):
            assert (list(range(rng[0], rng[1] + 1)) if rng else []) == ns, (args, i)


@pytest.mark.parametrize("i", [0, 1, 7, 60, 300])
def test_zero_ranges_are_consecutive(m510, i):
    g = coefficient(m510, i)
    ns = [n for n, _ in g.zeros]
    assert ns == list(range(ns[0], ns[-1] + 1)) if ns else g.lz is None
    for n, m in g.zeros:
        assert m >= 1 and m510.d(n) < i < m510.dsum(n)


@pytest.mark.parametrize("args", [(5, 1, 0), (2, 3, 0), (7, 1, 0), (13, 1, 0)])
def test_multiplicity_palindromes(args):
    model = build_gamma0_model(*args)
    for n in range(0, 40):
        d, ds = model.d(n), model.dsum(n)
        mults = [coefficient(model, i).multiplicity(n) for i in range(d + 1, ds)]
        assert mults == mults[::-1]
        assert mults == [min(j + 1, len(mults) - j) for j in range(len(mults))]


@pytest.mark.parametrize("args", [(5, 1, 0), (2, 3, 0), (7, 1, 0), (7, 1, 2), (7, 1, 4), (3, 2, 0), (2, 5, 0),
                                  (11, 3, 2), (13, 1, 0), (3, 5, 0)])
def test_lambda_shift_identity(args):
    model = build_gamma0_model(*args)
    Q, D = lambda_shift(model)
    lam = lambda_sequence(model, 500 + Q)
    for i in range(1, 501):
        assert lam[i + Q - 1] == lam[i - 1] + D


def test_lambda_shift_constants(m510, m230, rho13):
    assert lambda_shift(m510) == (5, 8)
    assert lambda_shift(m230) == (4, 1)
    assert lambda_shift(rho13) == (26, 144)


def test_lambda_shift_for_quasilinear_model():
    model = build_quasilinear_model(QuasiLinearSpec((0, 0, 1), 3, 1), QuasiLinearSpec((1, 2), 2, 3), GhostParams(5))
    Q, D = lambda_shift(model)
    lam = lambda_sequence(model, 400 + Q)
    assert all(lam[i + Q - 1] == lam[i - 1] + D for i in range(1, 401))


# |lambda_i - c i| over [100, 1000], frozen from a run
LAMBDA_DRIFT = {(5, 1, 0): Fraction(4, 5), (2, 3, 0): Fraction(1, 2), (7, 1, 0): Fraction(6, 7)}


@pytest.mark.parametrize("args", sorted(LAMBDA_DRIFT))
def test_lambda_growth_rate(args):
    model = build_gamma0_model(*args)
    A, B = model.A, model.B
    c = B * B / (A * (A + B) * (2 * A + B))
    lam = lambda_sequence(model, 1000)
    worst = max(abs(lam[i - 1] - c * i) for i in range(100, 1001))
    assert worst <= LAMBDA_DRIFT[args]


def test_eval_examples(m510):
    k12 = IntegerWeight(12)
    assert eval_valuation(m510, 0, k12) == 0
    assert eval_valuation(m510, 1, k12) == 1
    assert eval_valuation(m510, 2, k12) is INF
    assert eval_valuation(m510, 4, k12) == 16
    assert exact_eval_oracle(m510, 1, 12) == 1
    assert exact_eval_oracle(m510, 4, 12, expand=True) == 16
    assert exact_eval_oracle(m510, 0, 40) == 0


def test_boundary_is_scaled_degree(m510):
    for i in range(0, 50):
        assert eval_valuation(m510, i, BoundaryWeight(Fraction(1, 3))) == Fraction(coefficient(m510, i).degree, 3)


@pytest.mark.parametrize("args", [(5, 1, 0), (2, 3, 0), (7, 1, 2)])
def test_expanded_product_agrees(args):
    model = build_gamma0_model(*args)
    delta = model.params.delta
    for k in range(model.params.k_base - 3 * delta, 60, delta):
        for i in range(0, 9):
            assert exact_eval_oracle(model, i, k, expand=True) == exact_eval_oracle(model, i, k)


@settings(max_examples=60)
@given(st.sampled_from([(5, 1, 0), (2, 3, 0), (7, 1, 4), (3, 2, 0), (3, 5, 0)]), st.integers(-60, 200),
       st.integers(0, 12), st.booleans())
def test_fast_sequence_matches_direct(args, step, extra, near):
    model = build_gamma0_model(*args)
    P = model.params
    k = P.k_base + step * P.delta
    kappa = NearIntegerWeight(k, P.v0 + Fraction(extra, 4)) if near else IntegerWeight(k)
    ys = valuation_sequence(model, kappa, 80)
    assert ys == [eval_valuation(model, i, kappa) for i in range(81)]


def test_delta_slope_and_star(m510):
    k12 = IntegerWeight(12)
    assert delta_slope(m510, 1, k12) == 1
    assert delta_slope(m510, 5, k12) == 10
    with pytest.raises(SemistableRangeError, match="semistable"):
        delta_slope(m510, 2, k12)
    assert delta_star(m510, 2, 3) == 2


def test_delta_star_recovers_value_off_the_zero(m510):
    # when w_{k_n} is neither a zero nor a pole, Delta_i^* is the plain Delta-slope
    for i in range(1, 40):
        dd = delta_data(m510, i)
        for n in range(0, 30):
            inside = any(r and r[0] <= n <= r[1] for r in (dd.plus_range, dd.minus_range))
            a = eval_valuation(m510, i, IntegerWeight(m510.params.k(n)))
            b = eval_valuation(m510, i - 1, IntegerWeight(m510.params.k(n)))
            if not inside and a is not INF and b is not INF:
                assert delta_star(m510, i, n) == a - b


def test_growth_violation_detected():
    flat = QuasiLinearSpec((0,), 1, 0)
    model = DimensionModel(GhostParams(5), flat, QuasiLinearSpec((2,), 1, 1),
                           {"d": (1, 0), "dnew": (1, 1), "dsum": (1, 1), "dp": (1, 1)})
    with pytest.raises(GrowthError, match="growth axiom violated near i=1"):
        coefficient(model, 1)


def test_negative_index_rejected(m510):
    with pytest.raises(ValueError):
        coefficient(m510, -1)
    with pytest.raises(ValueError):
        delta_data(m510, 0)


def test_cache_is_consistent_across_threads(m710):
    from concurrent.futures import ThreadPoolExecutor

    idx = list(range(1, 300)) * 3
    random.Random(0).shuffle(idx)
    with ThreadPoolExecutor(8) as pool:
        got = list(pool.map(lambda i: coefficient(m710, i), idx))
    for i, g in zip(idx, got):
        assert g is coefficient(m710, i)
