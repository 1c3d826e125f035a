import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratmaps import motive
from ratmaps.gf import make_field
from ratmaps.polyring import Poly, divrem, monic_polys
from ratmaps.strata import (
    BudgetExceeded,
    MarkedRat,
    PolyTuple,
    StratumParams,
    act,
    common_power_factor,
    compose,
    count_pconf_bruteforce,
    count_poly_bruteforce,
    count_stratum_bruteforce,
    extract,
    is_poly_point,
    poly_tuples,
    psi_normalize,
    psi_section,
    stratum_histogram,
    stratum_index,
)

F2, F3, F4, F5 = make_field(2), make_field(3), make_field(2, 2), make_field(5)


def T(ctx, *coeff_lists):
    return PolyTuple.of(ctx, *coeff_lists)


def P(ctx, *coeffs):
    return Poly(ctx, coeffs)


# -- examples --------------------------------------------------------------------


def test_common_power_factor_examples():
    assert common_power_factor(T(F5, [0, 1, 3, 1]), 2) == P(F5, 4, 1)  # (z-1)^2 z
    assert common_power_factor(T(F2, [0, 0, 1], [0, 1, 1]), 2).is_one()
    assert common_power_factor(T(F3, [0, 0, 1], [0, 0, 1]), 1) == P(F3, 0, 0, 1)


def test_is_poly_point_examples():
    assert is_poly_point(T(F2, [0, 1, 1]), 2)
    assert not is_poly_point(T(F2, [1, 0, 1]), 2)
    assert is_poly_point(T(F2, [1, 0, 1]), 3)


def test_stratum_index_examples():
    assert stratum_index(T(F2, [1, 0, 1]), 2) == 1
    assert stratum_index(T(F2, [0, 1, 1]), 2) == 0
    assert stratum_index(T(F3, [0, 0, 0, 0, 1]), 2) == 2


def test_extract_examples():
    g, h = extract(T(F5, [0, 1, 3, 1]), 2)
    assert g == T(F5, [0, 1]) and h == P(F5, 4, 1)
    t = T(F5, [1, 1, 1])
    assert extract(t, 2) == (t, Poly.one(F5))
    g, h = extract(T(F2, [0, 0, 1]), 2)
    assert g == T(F2, [1]) and g.d == 0 and h == P(F2, 0, 1)


def test_compose_examples():
    assert compose(T(F5, [0, 1]), P(F5, 4, 1), 2) == T(F5, [0, 1, 3, 1])
    g = T(F3, [1, 1], [2, 1])
    assert compose(g, Poly.one(F3), 2) == g
    assert compose(T(F2, [1]), P(F2, 0, 1), 2) == T(F2, [0, 0, 1])


def test_compose_rejects_bad_input():
    with pytest.raises(ValueError):
        compose(T(F2, [1, 0, 1]), P(F2, 1, 1), 2)
    with pytest.raises(ValueError):
        compose(T(F5, [0, 1]), P(F5, 1, 2), 2)


def test_psi_examples():
    rat = T(F5, [0, 1], [1, 1])
    for c in (2, 3, 4):
        conf, out = psi_normalize(MarkedRat((0, 1, c), rat))
        assert conf == (c,) and out == rat
    c = 3
    conf, out = psi_normalize(MarkedRat((1, 0, c), rat))
    assert conf == ((1 - c) % 5,)
    # z -> 1 - w then monic: w - 1 and w - 2
    assert out == T(F5, [4, 1], [3, 1])


def test_psi_needs_two_marks_and_distinct_marks():
    rat = T(F3, [0, 1], [1, 1])
    with pytest.raises(ValueError):
        psi_normalize(MarkedRat((0,), rat))
    with pytest.raises(ValueError):
        MarkedRat((1, 1, 2), rat)


@pytest.mark.parametrize("ctx", [F3, F4, F5])
def test_psi_invariant_and_section(ctx):
    rat = T(ctx, [1, 1], [2 % ctx.q, 1])
    for marks in itertools.permutations(range(ctx.q), 3):
        mr = MarkedRat(marks, rat)
        base = psi_normalize(mr)
        for a in range(1, ctx.q):
            for b in range(ctx.q):
                assert psi_normalize(act(mr, a, b)) == base
        assert psi_normalize(psi_section(*base)) == base


def test_count_examples():
    assert count_poly_bruteforce(2, 2, 1, F2) == 2
    for q in (2, 3, 5, 7):
        assert count_poly_bruteforce(1, 1, 1, make_field(q)) == 0
    assert count_poly_bruteforce(3, 2, 1, F3) == 18


def test_stratum_count_examples():
    assert count_stratum_bruteforce(StratumParams(2, 2, 1, 1), F2) == 2
    assert count_stratum_bruteforce(StratumParams(3, 2, 2, 0), F3) == 3**6
    assert count_stratum_bruteforce(StratumParams(3, 2, 2, 2), F3) == 0


def test_pconf_examples():
    assert count_pconf_bruteforce(3, {0, 1}, F5) == 6
    assert count_pconf_bruteforce(0, {0, 1}, F3) == 1
    assert count_pconf_bruteforce(2, {0, 1}, F3) == 0


def test_budget():
    with pytest.raises(BudgetExceeded) as info:
        count_poly_bruteforce(8, 2, 2, F5, cap=1000)
    assert info.value.required == 5**16


# -- oracles ---------------------------------------------------------------------


def _divides(g, f):
    return divrem(f, g)[1].is_zero()


def _index_by_search(t, n):
    """Largest deg h with h^n dividing every entry, by trying every monic h."""
    best = 0
    for k in range(1, t.d // n + 1):
        for h in monic_polys(t.ctx, k):
            hn = h**n
            if all(_divides(hn, f) for f in t):
                best = k
                break
    return best


@pytest.mark.parametrize("ctx,d,m", [(F2, 6, 1), (F3, 4, 1), (F2, 3, 2), (F4, 3, 1), (F3, 2, 2)])
def test_stratum_index_matches_divisor_search(ctx, d, m):
    for t in poly_tuples(ctx, d, m):
        for n in range(1, d + 1):
            assert stratum_index(t, n) == _index_by_search(t, n), (t, n)


@pytest.mark.parametrize("ctx,d,m", [(F2, 7, 1), (F3, 3, 2), (F4, 3, 1), (make_field(2, 3), 2, 2), (F5, 2, 2)])
def test_kernel_matches_python_engine(ctx, d, m):
    a = stratum_histogram(ctx, d, m, engine="kernel")
    b = stratum_histogram(ctx, d, m, engine="python")
    assert np.array_equal(a, b)


def test_histogram_independent_of_workers():
    a = stratum_histogram(F3, 3, 2, workers=1, engine="python")
    b = stratum_histogram(F3, 3, 2, workers=3, engine="python")
    assert np.array_equal(a, b)


@pytest.mark.parametrize("ctx,d,m", [(F2, 9, 1), (F3, 3, 2), (F4, 2, 2), (F5, 3, 1)])
def test_strata_partition_affine_space(ctx, d, m):
    hist = stratum_histogram(ctx, d, m)
    for n in range(1, d + 1):
        assert hist[n].sum() == ctx.q ** (d * m)
        for k in range(d // n + 1):
            assert hist[n, k] == count_poly_bruteforce(d - k * n, n, m, ctx) * ctx.q**k


@st.composite
def tuple_and_n(draw):
    ctx = draw(st.sampled_from([F2, F3, F4, F5]))
    d = draw(st.integers(1, 6))
    m = draw(st.integers(1, 3))
    polys = [Poly(ctx, draw(st.lists(st.integers(0, ctx.q - 1), min_size=d, max_size=d)) + [1]) for _ in range(m)]
    return PolyTuple(tuple(polys)), draw(st.integers(1, d))


@settings(max_examples=300, deadline=None)
@given(tuple_and_n())
def test_extract_compose_round_trip(data):
    t, n = data
    g, h = extract(t, n)
    assert is_poly_point(g, n)
    assert g.d == t.d - h.degree * n
    assert compose(g, h, n) == t


@settings(max_examples=100, deadline=None)
@given(tuple_and_n(), st.integers(1, 3))
def test_compose_then_extract(data, k):
    t, n = data
    g, _ = extract(t, n)
    ctx = t.ctx
    h = Poly(ctx, [(i * 7 + 1) % ctx.q for i in range(k)] + [1])
    assert extract(compose(g, h, n), n) == (g, h)


def test_stratum_counts_match_classes():
    for ctx, d, m in [(F2, 6, 2), (F3, 4, 2), (F5, 3, 2)]:
        for n in range(1, d + 1):
            for k in range(d // n + 2):
                cls = motive.class_r_stratum(n, d, m, k)
                assert count_stratum_bruteforce(StratumParams(d, n, m, k), ctx) == motive.specialize(cls, ctx.q)
