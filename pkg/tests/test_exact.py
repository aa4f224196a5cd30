from fractions import Fraction
from itertools import combinations
from math import comb, gcd

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from realsplit.exact import (
    DomainError,
    IntMatrix,
    OrderMismatchError,
    TruncatedPoly,
    binomial,
    poly_exp,
    poly_log1p,
    poly_mul,
    smith_normal_form,
    stirling_first_signed,
    stirling_second,
)


def P(order, *coeffs):
    return TruncatedPoly.from_coeffs(order, coeffs)


fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def polys(draw, order=None, nilpotent=False):
    n = draw(st.integers(0, 12)) if order is None else order
    cs = draw(st.lists(fractions, min_size=n + 1, max_size=n + 1))
    if nilpotent:
        cs[0] = Fraction(0)
    return TruncatedPoly(n, tuple(cs))


# -- independent oracles ---------------------------------------------------

u = sympy.Symbol("u")


def sympy_series(expr_of_p, p: TruncatedPoly) -> TruncatedPoly:
    expr = sum(sympy.Rational(c.numerator, c.denominator) * u**k for k, c in enumerate(p.coeffs))
    s = sympy.series(expr_of_p(expr), u, 0, p.order + 1).removeO()
    poly = sympy.Poly(s, u) if s != 0 else None
    cs = [Fraction(0)] * (p.order + 1)
    if poly is not None:
        for (k,), c in poly.terms():
            cs[k] = Fraction(int(c.p), int(c.q))
    return TruncatedPoly(p.order, tuple(cs))


def sympy_exp_by_sum(p: TruncatedPoly) -> TruncatedPoly:
    """exp of a nilpotent p as the finite sum of p^k/k!, expanded by sympy."""
    expr = sum(sympy.Rational(c.numerator, c.denominator) * u**k for k, c in enumerate(p.coeffs))
    total = sympy.expand(sum(expr**k / sympy.factorial(k) for k in range(p.order + 1)))
    poly = sympy.Poly(total, u)
    cs = [Fraction(0)] * (p.order + 1)
    for (k,), c in poly.terms():
        if k <= p.order:
            cs[k] = Fraction(int(c.p), int(c.q))
    return TruncatedPoly(p.order, tuple(cs))


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def falling_factorial_coeffs(k):
    poly = sympy.Poly(sympy.ff(sympy.Symbol("x"), k), sympy.Symbol("x")) if k else None
    if poly is None:
        return {0: 1}
    return {m[0]: int(c) for m, c in poly.terms()}


def det(rows):
    return int(sympy.Matrix(rows).det())


def determinantal_invariants(m: IntMatrix):
    """Invariant factors as ratios of gcds of k x k minors."""
    rows = m.to_rows()
    divisors = [1]
    for k in range(1, min(m.rows, m.cols) + 1):
        g = 0
        for r in combinations(range(m.rows), k):
            for c in combinations(range(m.cols), k):
                g = gcd(g, det([[rows[i][j] for j in c] for i in r]))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[i + 1] // divisors[i] for i in range(len(divisors) - 1)]


# -- truncated polynomials --------------------------------------------------

def test_mul_unit():
    assert poly_mul(P(2, 1), P(2, 0, 1)) == P(2, 0, 1)


def test_mul_monomials():
    assert poly_mul(P(2, 0, 1), P(2, 0, 1)) == P(2, 0, 0, 1)


def test_mul_truncates():
    # (1+u)(1-u+u^2) = 1 + u^3
    assert poly_mul(P(2, 1, 1), P(2, 1, -1, 1)) == P(2, 1)


def test_mul_order_mismatch():
    with pytest.raises(OrderMismatchError):
        poly_mul(P(2, 1), P(3, 1))
    with pytest.raises(OrderMismatchError):
        P(2, 1) + P(1, 1)


def test_from_coeffs_validates_length():
    with pytest.raises(ValueError):
        TruncatedPoly(2, (Fraction(1),))


@pytest.mark.parametrize("p, expected", [
    (P(2, 0, 1), P(2, 0, 1, Fraction(-1, 2))),
    (P(2), P(2)),
    (P(2, 0, 2, 1), P(2, 0, 2, -1)),
])
def test_log1p_examples(p, expected):
    assert poly_log1p(p) == expected


@pytest.mark.parametrize("p, expected", [
    (P(2), P(2, 1)),
    (P(2, 0, 1, Fraction(-1, 2)), P(2, 1, 1)),
    (P(2, 0, 1), P(2, 1, 1, Fraction(1, 2))),
])
def test_exp_examples(p, expected):
    assert poly_exp(p) == expected


@pytest.mark.parametrize("fn", [poly_log1p, poly_exp])
def test_log_exp_reject_units(fn):
    with pytest.raises(DomainError):
        fn(P(3, 1, 1))


@settings(max_examples=40, deadline=None)
@given(polys(nilpotent=True))
def test_log1p_matches_sympy(p):
    assert poly_log1p(p) == sympy_series(lambda e: sympy.log(1 + e), p)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 8).flatmap(lambda n: polys(n, nilpotent=True)))
def test_exp_matches_sympy(p):
    assert poly_exp(p) == sympy_exp_by_sum(p)


@given(st.integers(0, 8).flatmap(lambda n: st.tuples(polys(n), polys(n), polys(n))))
def test_mul_associative_commutative(abc):
    a, b, c = abc
    assert poly_mul(poly_mul(a, b), c) == poly_mul(a, poly_mul(b, c))
    assert poly_mul(a, b) == poly_mul(b, a)


@given(polys(nilpotent=True))
def test_exp_log_round_trip(q):
    one = TruncatedPoly.constant(q.order)
    assert poly_exp(poly_log1p(q)) == one + q
    assert poly_log1p(poly_exp(q) - one) == q


@given(st.integers(0, 6).flatmap(lambda n: st.tuples(polys(n), polys(n, nilpotent=True))))
def test_compose_is_horner_substitution(pw):
    p, w = pw
    expected = TruncatedPoly.zero(p.order)
    for k, c in enumerate(p.coeffs):
        expected = expected + (w ** k).scale(c)
    assert p.compose(w) == expected


def test_str():
    assert str(P(2, 0, 1, Fraction(-1, 2))) == "u - 1/2*u^2"
    assert str(P(1)) == "0"


# -- combinatorics -------------------------------------------------------------

@pytest.mark.parametrize("n, k, expected", [(4, 2, 6), (-1, 3, -1), (3, 0, 1), (3, 5, 0), (5, -1, 0)])
def test_binomial_examples(n, k, expected):
    assert binomial(n, k) == expected


def test_binomial_pascal_grid():
    for n in range(-20, 21):
        for k in range(1, 21):
            assert binomial(n + 1, k) == binomial(n, k) + binomial(n, k - 1)


def test_binomial_agrees_with_comb_and_negation():
    for n in range(0, 15):
        for k in range(0, 15):
            assert binomial(n, k) == comb(n, k)
            if n:
                assert binomial(-n, k) == (-1) ** k * comb(n + k - 1, k)


def test_stirling_small_table():
    assert stirling_second(2, 1) == 1 and stirling_second(2, 2) == 1
    assert stirling_first_signed(3, 1) == 2 and stirling_first_signed(3, 2) == -3
    assert sum(stirling_second(3, k) * stirling_first_signed(k, 2) for k in range(4)) == 0


def test_stirling_second_counts_partitions():
    for m in range(0, 8):
        counts = {}
        for part in set_partitions(list(range(m))):
            counts[len(part)] = counts.get(len(part), 0) + 1
        for k in range(0, m + 1):
            assert stirling_second(m, k) == counts.get(k, 0)


def test_stirling_first_expands_falling_factorial():
    for k in range(0, 10):
        coeffs = falling_factorial_coeffs(k)
        for l in range(0, k + 1):
            assert stirling_first_signed(k, l) == coeffs.get(l, 0)


def test_stirling_orthogonality():
    for m in range(13):
        for l in range(13):
            total = sum(stirling_second(m, k) * stirling_first_signed(k, l) for k in range(13))
            assert total == int(m == l)


# -- Smith normal form ---------------------------------------------------------

def _check_snf(m):
    U, D, V = smith_normal_form(m)
    assert U @ m @ V == D
    assert abs(det(U.to_rows())) == 1 and abs(det(V.to_rows())) == 1
    for i in range(D.rows):
        for j in range(D.cols):
            if i != j:
                assert D[i, j] == 0
    diag = D.diagonal()
    nonzero = [x for x in diag if x]
    assert diag[: len(nonzero)] == nonzero
    assert all(x > 0 for x in nonzero)
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    return U, D, V


def test_snf_identity():
    _, D, _ = _check_snf(IntMatrix.identity(2))
    assert D == IntMatrix.identity(2)


def test_snf_hand_example():
    _, D, _ = _check_snf(IntMatrix.from_rows([[2, 4], [6, 8]]))
    assert D == IntMatrix.from_rows([[2, 0], [0, 4]])


def test_snf_zero():
    _, D, _ = _check_snf(IntMatrix.zeros(3, 2))
    assert D.is_zero()


def test_snf_empty_shapes():
    U, D, V = smith_normal_form(IntMatrix.zeros(0, 3))
    assert (U.rows, D.rows, D.cols, V.rows) == (0, 0, 3, 3)


matrices = st.tuples(st.integers(1, 5), st.integers(1, 5)).flatmap(
    lambda rc: st.lists(st.integers(-30, 30), min_size=rc[0] * rc[1], max_size=rc[0] * rc[1]).map(
        lambda xs: IntMatrix(rc[0], rc[1], tuple(xs))
    )
)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_snf_matches_determinantal_divisors(m):
    _, D, _ = _check_snf(m)
    assert [x for x in D.diagonal() if x] == determinantal_invariants(m)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda n: st.lists(st.integers(-9, 9), min_size=n * n, max_size=n * n).map(
        lambda xs: IntMatrix(n, n, tuple(xs)))))
def test_snf_preserves_determinant(m):
    d = det(m.to_rows())
    _, D, _ = _check_snf(m)
    prod = 1
    for x in D.diagonal():
        prod *= x
    assert prod == abs(d)


def test_snf_larger_matrix_entry_growth_stays_exact():
    rows = [[(i * 7 + j * 13) % 11 - 5 for j in range(12)] for i in range(10)]
    m = IntMatrix.from_rows(rows)
    _, D, _ = _check_snf(m)
    assert len([x for x in D.diagonal() if x]) == sympy.Matrix(rows).rank()
