import pytest

from realsplit.exact import IntMatrix
from realsplit.topology import (
    ChainComplex,
    InvalidComplexError,
    SphereMultiset,
    TopologyInputError,
    certify_splitting,
    circle_complex,
    direct_sum,
    homology,
    homology_ranks,
    product_chain_complex,
    real_points_splitting,
    tensor_complex,
    torus_splitting,
    torus_splitting_inductive,
    wedge_chain_complex,
)


@pytest.mark.parametrize("g, expected", [
    (1, {2: 1}),
    (2, {2: 2, 3: 1}),
    (4, {2: 4, 3: 6, 4: 4, 5: 1}),
])
def test_torus_splitting(g, expected):
    t = torus_splitting(g)
    assert t == SphereMultiset(expected)
    assert t.total() == 2 ** g - 1


@pytest.mark.parametrize("g", range(1, 7))
def test_torus_splitting_pascal_recurrence(g):
    assert torus_splitting(g) == torus_splitting_inductive(g)


def test_torus_splitting_rejects_zero():
    with pytest.raises(TopologyInputError):
        torus_splitting(0)


@pytest.mark.parametrize("g, n, expected", [
    (1, 2, {1: 2, 2: 2}),
    (1, 1, {1: 1, 2: 1}),
    (3, 4, {1: 4, 2: 12, 3: 12, 4: 4}),
])
def test_real_points_splitting(g, n, expected):
    s = real_points_splitting(g, n)
    assert s == SphereMultiset(expected)
    assert s.total() == n * 2 ** g


@pytest.mark.parametrize("n", [0, 3, 6, -2])
def test_real_points_rejects_non_power_of_two(n):
    with pytest.raises(TopologyInputError):
        real_points_splitting(2, n)


def test_sphere_multiset_arithmetic():
    a = SphereMultiset({1: 1, 2: 0})
    assert a.entries == {1: 1}
    assert (a + a).shift(2) == SphereMultiset({3: 2})
    assert a.times(3)[1] == 3 and a[7] == 0
    with pytest.raises(ValueError):
        SphereMultiset({1: -1})


@pytest.mark.parametrize("g, n, ranks", [(1, 1, [1, 1]), (2, 1, [1, 2, 1]), (2, 3, [3, 6, 3])])
def test_product_complex_homology(g, n, ranks):
    c = product_chain_complex(g, n)
    assert c.is_valid()
    assert homology_ranks(c) == ranks


def test_circle_homology():
    assert homology_ranks(circle_complex()) == [1, 1]
    assert homology_ranks(circle_complex(4)) == [1, 1]


def test_torsion_from_boundary_two():
    c = ChainComplex.from_maps((1, 1), [[[2]]])
    h = homology(c)
    assert h.ranks == (0, 0)
    assert h.torsion == ((2,), ())
    assert not h.torsion_free


def test_invalid_complex_rejected():
    # d1 d2 != 0
    c = ChainComplex.from_maps((1, 1, 1), [[[1]], [[1]]])
    assert not c.is_valid()
    with pytest.raises(InvalidComplexError):
        homology(c)


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        ChainComplex((1, 2), (IntMatrix.zeros(0, 1), IntMatrix.zeros(1, 1)))


def test_subdivided_circles_give_same_torus_homology():
    c = product_chain_complex(3, 2, circle_vertices=3)
    assert c.is_valid()
    assert homology_ranks(c) == [2, 6, 6, 2]


def test_tensor_of_moore_complexes_has_tor_torsion():
    # Z --2--> Z in degrees 1,0; the tensor square picks up Tor in degree 1
    m = ChainComplex.from_maps((1, 1), [[[2]]])
    sq = tensor_complex(m, m)
    h = homology(sq)
    assert h.ranks == (0, 0, 0)
    assert h.torsion[0] == (2,) and h.torsion[1] == (2,)


def test_direct_sum_adds_homology():
    a = circle_complex()
    b = product_chain_complex(2, 1)
    assert homology_ranks(direct_sum(a, b)) == [2, 3, 1]


def test_wedge_complex_homology():
    w = wedge_chain_complex(SphereMultiset({1: 1, 2: 2, 3: 1}))
    assert homology_ranks(w) == [1, 1, 2, 1]


@pytest.mark.parametrize("g, n, suspended", [
    (2, 1, [0, 1, 2, 1]),
    (1, 2, [0, 2, 2]),
])
def test_certify_examples(g, n, suspended):
    r = certify_splitting(g, n)
    assert r.passed
    assert r.details["suspension_homology"] == suspended
    assert r.details["wedge_homology"] == suspended


@pytest.mark.parametrize("g", range(1, 6))
@pytest.mark.parametrize("n", [1, 2, 4, 8])
def test_certify_sweep(g, n):
    r = certify_splitting(g, n)
    assert r.passed, r.details
    assert r.details["summands"] == n * 2 ** g
    assert all(not t for t in r.details["torsion"])
    assert len(r.details["suspension_homology"]) == g + 2
