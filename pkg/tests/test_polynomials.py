import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spanexcess.errors import NoRootError, ScopeError
from spanexcess.extremal import build_B1_family, build_Gstar, build_star_family
from spanexcess.polynomials import (MultiPoly, UniPoly, b, b1_template, b2_template, bstar_template,
                                    char_poly_exact, char_poly_symbolic, check_f1_negativity, closed_form_rho,
                                    count_real_roots, f1, f1_grid, instantiate, k, largest_real_root, n,
                                    phi_B1, phi_B2, phi_Bstar, s, verify_difference_identity, x)
from spanexcess.spectral import spectral_radius

small = st.integers(-4, 4)


def test_multipoly_arithmetic():
    p = (x + 1) ** 2
    assert p == x * x + 2 * x + 1
    assert (p - p).is_zero()
    assert p.degree("x") == 2 and p.variables() == {"x"}
    assert (n * s + k).substitute(n=2, s=3) == k + 6
    assert (x ** 2 - b).evaluate(x=3, b=1) == 8


@settings(max_examples=60, deadline=None)
@given(small, small, small, small)
def test_multipoly_ring_laws(c1, c2, v1, v2):
    p = x * c1 + s ** 2 - k * c2
    q = x * s + v1
    r = b - v2 * n
    assert p * (q + r) == p * q + p * r
    assert (p * q).evaluate(x=v1, s=v2, k=c1, b=c2, n=1) == p.evaluate(x=v1, s=v2, k=c1) * q.evaluate(x=v1, s=v2)


def test_unipoly_division_and_horner():
    p = UniPoly([-2, -3, 0, 1])  # x^3 - 3x - 2 = (x+1)^2 (x-2)
    q, r = p.divmod(UniPoly([-2, 1]))
    assert r.degree <= 0 and r(0) == 0
    assert q == UniPoly([1, 2, 1])
    assert p(Fraction(1, 2)) == Fraction(1, 8) - Fraction(3, 2) - 2


def test_char_poly_known():
    assert char_poly_exact([[0, 1, 1], [1, 0, 1], [1, 1, 0]]) == UniPoly([-2, -3, 0, 1])
    assert char_poly_exact([[0]]) == UniPoly([0, 1])


def test_char_poly_errors():
    with pytest.raises(ValueError):
        char_poly_exact([[1, 2]])
    with pytest.raises(ScopeError):
        char_poly_exact(np.zeros((13, 13), dtype=int).tolist())


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6).flatmap(lambda m: st.lists(st.lists(st.integers(-3, 3), min_size=m, max_size=m),
                                                     min_size=m, max_size=m)))
def test_char_poly_matches_numpy(M):
    p = char_poly_exact(M)
    ref = np.poly(np.array(M, dtype=float))[::-1]
    assert np.allclose([float(c) for c in p.coeffs], ref, atol=1e-6 * max(1, np.abs(ref).max()))


def test_identity_holds_fast():
    t0 = time.perf_counter()
    res = verify_difference_identity()
    assert res and res.difference.is_zero()
    assert time.perf_counter() - t0 < 1.0


def test_identity_mutation_is_detected():
    res = verify_difference_identity(f1() + 1)
    assert not res
    assert res.difference == s - 1


def test_templates_reproduce_polynomials():
    assert char_poly_symbolic(b1_template()) == phi_B1()
    assert char_poly_symbolic(b2_template()) == phi_B2()
    assert char_poly_symbolic(bstar_template()) == phi_Bstar()
    assert phi_B1().substitute(s=1) == phi_Bstar()


def test_rational_spot_check():
    vals = dict(n=12, s=2, k=5, b=1)
    xv = Fraction(31, 10)
    M = instantiate(b1_template(), **vals)
    det = char_poly_exact(M)(xv)
    assert phi_B1().evaluate(x=xv, **vals) == det
    lhs = phi_Bstar().evaluate(x=xv, **vals) - phi_B1().evaluate(x=xv, **vals)
    assert lhs == (vals["s"] - 1) * f1().evaluate(x=xv, **vals)


@pytest.mark.parametrize("s_,k_,b_", [(s_, k_, b_) for s_ in (1, 2, 3) for k_ in (5, 7) for b_ in (0, 2)])
def test_template_instances_match_determinant(s_, k_, b_):
    n_ = (k_ - 1) * s_ + b_ + 5
    vals = dict(n=n_, s=s_, k=k_, b=b_)
    for tpl, phi in ((b1_template(), phi_B1()), (b2_template(), phi_B2()), (bstar_template(), phi_Bstar())):
        assert char_poly_exact(instantiate(tpl, **vals)) == phi.substitute(**vals).to_unipoly()


def test_closed_form_matches_star_family():
    for s_, k_ in itertools.product(range(1, 7), range(5, 10)):
        for b_ in range(0, k_ - 2):
            assert abs(closed_form_rho(s_, k_, b_) - spectral_radius(build_star_family(s_, k_, b_))) <= 1e-8


def test_largest_root_and_sturm():
    p = UniPoly([-2, -3, 0, 1])
    assert largest_real_root(p, hi=10) == pytest.approx(2, abs=1e-12)
    assert count_real_roots(p, -10, 10) == 2  # distinct roots -1 and 2
    with pytest.raises(NoRootError):
        largest_real_root(UniPoly([1, 0, 1]), hi=10)


@pytest.mark.parametrize("k_,b_", [(5, 0), (5, 1), (6, 2), (7, 3), (8, 0)])
def test_bstar_root_equals_gstar_radius(k_, b_):
    for n_ in range(k_ + b_ + 2, k_ + b_ + 13):
        p = phi_Bstar().substitute(n=n_, k=k_, b=b_).to_unipoly()
        assert abs(largest_real_root(p, hi=n_) - spectral_radius(build_Gstar(n_, k_, b_))) <= 1e-8


def test_b1_root_equals_b1_radius():
    for s_, k_, b_ in [(2, 5, 0), (3, 6, 1), (2, 7, 4)]:
        n_ = (k_ - 1) * s_ + b_ + 6
        p = phi_B1().substitute(n=n_, s=s_, k=k_, b=b_).to_unipoly()
        assert largest_real_root(p, hi=n_) == pytest.approx(spectral_radius(build_B1_family(n_, s_, k_, b_)),
                                                            abs=1e-8)


def test_f1_negative_on_grid():
    report = check_f1_negativity(f1_grid(range(2, 7), range(5, 11)))
    assert report.rows and report.all_negative
    assert report.max_value < -1e-6
    assert all(pt[1:3] == (5, 2) for pt, _, _ in report.skipped)
    assert report.to_csv().startswith("s,k,b,n,rho1,f1_value,sign\n")


def test_f1_report_records_excluded_values():
    report = check_f1_negativity([(2, 5, 2, 13)])
    assert not report.rows
    (pt, reason, val), = report.skipped
    assert "(2,5)" in reason.replace(" ", "") and val is not None
