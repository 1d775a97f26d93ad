import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from autinv import Polynomial, PolyMap, SeriesVec, TruncSeries, compose_poly_series, eval_at_one, series_add, series_mul
from autinv.series import format_series

from conftest import polynomials


def ts(*coeffs):
    return TruncSeries(coeffs)


@pytest.fixture
def XY1():
    X, Y = Polynomial.variables(2)
    return X, Y, Polynomial.one(2), Polynomial.zero(2)


def test_add_cancels_at_t1(XY1):
    X, Y, _, _ = XY1
    assert series_add(ts(X, Y), ts(Y, -Y)) == ts(X + Y, 0 * X)


def test_add_zero(XY1):
    X, Y, _, _ = XY1
    s = ts(X, Y, X * Y)
    assert series_add(s, TruncSeries.zero(2, 2)) == s


def test_add_doubles(XY1):
    X, _, _, z = XY1
    assert series_add(ts(z, z, X), ts(z, z, X)) == ts(z, z, 2 * X)


def test_mul_order2(XY1):
    _, _, one, z = XY1
    assert series_mul(ts(one, one, z), ts(one, -one, z)) == ts(one, z, -one)


def test_mul_truncates(XY1):
    X, Y, _, _ = XY1
    assert series_mul(ts(X, Y), ts(X, Y)) == ts(X**2, 2 * X * Y)


def test_mul_by_zero(XY1):
    X, Y, _, _ = XY1
    assert series_mul(ts(X, Y, X), TruncSeries.zero(2, 2)).is_zero()


def test_order_mismatch(XY1):
    X, Y, _, _ = XY1
    with pytest.raises(ValueError):
        series_add(ts(X, Y), ts(X))
    with pytest.raises(ValueError):
        series_mul(ts(X), TruncSeries.zero(3, 0))


def test_compose_triangular(XY1):
    X, Y, _, z = XY1
    H = Y**2
    S = SeriesVec([ts(X, -H), ts(Y, z)])
    assert compose_poly_series(X + H, S) == ts(X + H, -H)


def test_compose_projection(XY1):
    X, Y, _, _ = XY1
    S = SeriesVec([ts(X, Y * X, Y), ts(Y, X, X**3)])
    assert compose_poly_series(Y, S) == S[1]
    assert compose_poly_series(X, S) == S[0]


def test_compose_hand_expansion(XY1):
    X, Y, one, z = XY1
    S = SeriesVec([ts(X, one, z), ts(Y, -one, z)])
    assert compose_poly_series(X * Y, S) == ts(X * Y, Y - X, -one)


def test_compose_arity_mismatch(XY1):
    X, Y, _, _ = XY1
    with pytest.raises(ValueError):
        compose_poly_series(X, SeriesVec([ts(X)]))


def test_eval_at_one(XY1):
    X, Y, _, _ = XY1
    H = 2 * Y**5 - 3 * Y
    assert eval_at_one(ts(X, -H)) == X - H
    c = Polynomial.constant(7, 2)
    assert eval_at_one(TruncSeries.constant(c, 4)) == c
    L = (2 * X - 3 * Y) ** 2
    assert eval_at_one(ts(X, -L / 2)) == X - L / 2


def test_format():
    X, Y = Polynomial.variables(2)
    assert format_series(ts(X, -(Y**2), Polynomial.zero(2), X)) == "X + (-Y^2)*t + (X)*t^3"
    assert format_series(TruncSeries.zero(2, 3)) == "0"


def test_t_derivative():
    X, Y = Polynomial.variables(2)
    assert ts(X, Y, X * Y).t_derivative() == ts(Y, 2 * X * Y)


# -- properties --------------------------------------------------------------

series2 = st.lists(polynomials(2, max_terms=3, max_degree=2), min_size=5, max_size=5).map(TruncSeries)


@given(series2, series2, st.integers(min_value=0, max_value=3))
@settings(max_examples=40)
def test_truncation_coherence(s, r, low):
    assert series_add(s, r).truncate(low) == series_add(s.truncate(low), r.truncate(low))
    assert series_mul(s, r).truncate(low) == series_mul(s.truncate(low), r.truncate(low))
    f = Polynomial.variable(0, 2) ** 2 * Polynomial.variable(1, 2) + 3
    S, S_low = SeriesVec([s, r]), SeriesVec([s.truncate(low), r.truncate(low)])
    assert compose_poly_series(f, S).truncate(low) == compose_poly_series(f, S_low)


@given(polynomials(2))
def test_identity_series_composition(f):
    ident = SeriesVec.constant(PolyMap.identity(2), 3)
    out = compose_poly_series(f, ident)
    assert out[0] == f and all(c.is_zero() for c in out.coeffs[1:])


@given(polynomials(2, max_terms=4), polynomials(2, max_terms=4))
def test_mul_embeds_poly_mul(p, q):
    prod = series_mul(TruncSeries.constant(p, 2), TruncSeries.constant(q, 2))
    assert prod == TruncSeries.constant(p * q, 2)
