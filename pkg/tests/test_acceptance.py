"""Acceptance criteria 1-10, all exact.

Each criterion is one test; a PASS/FAIL line per criterion is printed in the
pytest terminal summary, and also when this file is run as a script.
"""

import itertools
import sys

import pytest

from ratmaps import cohom, motive
from ratmaps.gf import make_field
from ratmaps.motive import MotiveClass
from ratmaps.strata import (
    count_pconf_bruteforce,
    count_poly_bruteforce,
    default_workers,
    stratum_histogram,
)
from ratmaps.verify import check_pconf, check_psi, check_rat_poly, check_recursion, check_stratification, check_trace

try:
    from conftest import ACCEPTANCE
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE = {}

FIELDS = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1), 7: (7, 1), 8: (2, 3), 9: (3, 2), 11: (11, 1)}
L = MotiveClass.L()


def field(q):
    return make_field(*FIELDS[q])


def record(num, title):
    def wrap(fn):
        def test():
            try:
                fn()
            except BaseException:
                ACCEPTANCE[num] = (False, title)
                raise
            ACCEPTANCE[num] = (True, title)

        test.__name__ = fn.__name__
        test.__doc__ = fn.__doc__
        return test

    return wrap


def grid(qs, limit):
    for q in qs:
        for m in itertools.count(1):
            if q**m > limit:
                break
            for d in itertools.count(1):
                if q ** (d * m) > limit:
                    break
                yield q, d, m


@record(1, "point counts of Poly_n^{d,m} match the closed form")
def test_criterion_01_point_count_formula():
    assert count_poly_bruteforce(2, 2, 1, field(2)) == 2
    assert count_poly_bruteforce(3, 2, 1, field(3)) == 18
    assert count_poly_bruteforce(1, 1, 2, field(2)) == 2
    cases = 0
    for q, d, m in grid((2, 3, 4, 5), 10**7):
        hist = stratum_histogram(field(q), d, m, workers=default_workers())
        for n in range(1, d + 1):
            cases += 1
            assert int(hist[n, 0]) == motive.specialize(motive.class_poly(n, d, m), q), (q, d, n, m)
    assert cases > 100


@record(2, "stratification recursion equals the closed form")
def test_criterion_02_recursion():
    result = check_recursion(max_d=30, max_m=5)
    assert result.passed, result.counterexample


@record(3, "[Rat*_{d,n}] = [Poly_{n+1}^{d(n+1),1}]")
def test_criterion_03_rat_poly():
    result = check_rat_poly(10)
    assert result.passed, result.counterexample
    for q in (2, 3, 5):
        ctx = field(q)
        rat = count_poly_bruteforce(1, 1, 3, ctx)
        poly = count_poly_bruteforce(3, 3, 1, ctx)
        assert rat == poly == q**3 - q
    assert count_poly_bruteforce(1, 1, 3, field(5)) == 120


@record(4, "extract and compose are inverse bijections on every stratum")
def test_criterion_04_stratification_bijection():
    for q, d, m in grid((2, 3, 4, 5), 10**5):
        for n in range(1, d + 1):
            result = check_stratification(field(q), d, n, m, cap=10**5)
            assert result.passed, result.counterexample


@record(5, "PConf_r(A^1 - {0,1}) counts")
def test_criterion_05_pconf():
    assert count_pconf_bruteforce(3, {0, 1}, field(5)) == 6
    for q in FIELDS:
        result = check_pconf(field(q), max_r=5)
        assert result.passed, result.counterexample
        for r in range(6):
            expected = 1
            for i in range(r):
                expected *= q - 2 - i
            assert count_pconf_bruteforce(r, {0, 1}, field(q)) == expected


@record(6, "trace formula for every weight table")
def test_criterion_06_trace():
    result = check_trace(max_poly_d=12, max_poly_m=4, max_pconf_m=12, max_m0m_m=8, max_m0m_nd=4)
    assert result.passed, result.counterexample


@record(7, "nu by injections equals nu by elementary symmetric polynomials")
def test_criterion_07_nu():
    assert cohom.nu(4, 2) == 1
    assert cohom.nu(4, 1) == 2
    assert cohom.nu(5, 2) == 6
    for m in range(3, 13):
        for a in range(-1, 2 * (m - 3) + 2):
            assert cohom.nu_injections(m, a) == cohom.nu(m, a), (m, a)


@record(8, "psi normalization is Aff_1-invariant and counts orbits")
def test_criterion_08_psi():
    for q in (3, 5):
        for m in (3, 4):
            result = check_psi(field(q), m, d=1, n=1)
            assert result.passed, result.details
            det = result.details
            assert det["group_order"] == q * (q - 1)
            m_star = motive.specialize(motive.class_m0m_star(m, 1, 1), q)
            rat = q**2 - q
            conf_all = 1
            for i in range(m - 1):
                conf_all *= q - i
            assert det["domain"] == conf_all * rat == q * (q - 1) * m_star


def _tables():
    for d in range(1, 13):
        for n in range(1, d + 1):
            for m in range(1, 5):
                yield ("poly", n, d, m), cohom.betti_poly(n, d, m), cohom.weights_poly(n, d, m)
    for d in range(1, 11):
        for n in range(1, 11):
            yield ("rat", d, n), cohom.betti_poly(1, d, n + 1), cohom.weights_rat(d, n)
    for m in range(3, 13):
        yield ("pconf", m), cohom.betti_pconf(m), cohom.weights_pconf(m)
    for m in range(3, 9):
        for n in range(1, 5):
            for d in range(1, 5):
                yield ("m0m-star", m, n, d), cohom.betti_m0m_star(m, n, d), cohom.weights_m0m_star(m, n, d)


@record(9, "weight multiplicities equal compact Betti ranks; Poincare duality")
def test_criterion_09_table_consistency():
    for key, betti, weights in _tables():
        assert weights.ranks() == betti.compact, key
        assert betti.duality_holds(), key


@record(10, "literal vs Kunneth report for M*_{0,3}(P^1, 1)")
def test_criterion_10_literal_vs_kunneth():
    diff = cohom.literal_vs_kunneth(3, 1, 1)
    report = diff.to_json()
    assert not diff.identical
    for entry in report["differences"]:
        assert "degree" in entry
    assert cohom.verify_trace(cohom.weights_m0m_star(3, 1, 1), motive.class_m0m_star(3, 1, 1))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
