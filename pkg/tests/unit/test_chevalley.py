#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.

import pytest

from chevalley import (
    AutomorphismMatrix,
    BadCharacteristicError,
    DegenerateKillingError,
    FactorialNotInvertibleError,
    InconsistentSamplesError,
    InsufficientSamplesError,
    NotAutomorphismError,
    NotNilpotentError,
    RankOutOfRangeError,
    RepeatedLambdaError,
    classical_algebra,
    exp_ad_nilpotent,
    exp_nilpotent,
    exp_orbit_components,
    is_automorphism,
    nilpotency_index,
    root_system,
    vandermonde_extract,
)
from exactla import MatrixExact, ScalarDomain, VectorExact
from liecore import ad_matrix, killing_form, sl2, validate


@pytest.mark.parametrize(
    "letter,rank,n_roots",
    [
        ("A", 1, 2),
        ("A", 2, 6),
        ("A", 3, 12),
        ("B", 2, 8),
        ("B", 3, 18),
        ("C", 3, 18),
        ("D", 4, 24),
    ],
)
def test_root_counts(letter, rank, n_roots):
    datum = root_system(letter, rank)

    assert len(datum.roots) == n_roots
    assert len(datum.positive_roots) == n_roots // 2
    assert datum.simple_roots == tuple(range(rank))
    assert all(datum.height(r) >= 1 for r in datum.positive_roots)
    assert datum.negative_of(0) == n_roots // 2


@pytest.mark.parametrize("letter,rank", [("A", 0), ("B", 1), ("C", 1), ("D", 2), ("E", 6)])
def test_rank_out_of_range(letter, rank):
    with pytest.raises(RankOutOfRangeError):
        root_system(letter, rank)


def test_highest_and_long_roots():
    a2 = root_system("A", 2)
    assert a2.simple_coordinates[a2.highest_root] == (1, 1)
    assert len(a2.long_roots) == 6

    b2 = root_system("B", 2)
    assert b2.simple_coordinates[b2.highest_root] == (1, 2)
    assert len(b2.long_roots) == 4
    assert [b2.height(r) for r in b2.positive_roots] == [1, 1, 2, 3]


def test_a1_is_sl2(qq):
    frame = classical_algebra("A", 1, qq)

    assert frame.algebra == sl2(qq)
    assert frame.algebra.labels == ("e[1]", "h1", "f[1]")
    assert frame.coroot(0) == frame.h(0)


@pytest.mark.parametrize(
    "letter,rank,dim", [("A", 2, 8), ("B", 2, 10), ("A", 3, 15), ("C", 3, 21), ("D", 4, 28)]
)
def test_classical_dimensions(qq, letter, rank, dim):
    frame = classical_algebra(letter, rank, qq)

    assert frame.algebra.dim == dim
    assert validate(frame.algebra).ok
    assert frame.cartan.dim == rank


@pytest.mark.parametrize(
    "letter,cartan",
    [("A", [[2, -1], [-1, 2]]), ("B", [[2, -1], [-2, 2]])],
)
def test_cartan_matrix(qq, letter, cartan):
    frame = classical_algebra(letter, 2, qq)
    simple = frame.datum.simple_roots

    values = [[frame.root_value(j, frame.h(i)) for j in simple] for i in simple]
    assert values == cartan


def test_prime_field_build(f7):
    frame = classical_algebra("B", 2, f7)

    assert frame.algebra.dim == 10
    assert frame.algebra.domain == f7
    assert killing_form(frame.algebra).nondegenerate


def test_hypotheses_refused(f5):
    with pytest.raises(BadCharacteristicError):
        classical_algebra("A", 1, ScalarDomain.prime(3))
    with pytest.raises(BadCharacteristicError):
        classical_algebra("A", 2, ScalarDomain.prime(2))
    with pytest.raises(DegenerateKillingError):
        classical_algebra("A", 4, f5)


def test_exp_ad_e_on_sl2(sl2_q):
    e, h, f = (sl2_q.basis_vector(i) for i in range(3))
    sigma = exp_ad_nilpotent(sl2_q, e, 1)

    assert sigma.apply(e) == e
    assert sigma.apply(h) == h - e.scale(2)
    assert sigma.apply(f) == f + h - e
    assert is_automorphism(sl2_q, sigma.matrix)


def test_exp_group_law(sl2_q):
    e = sl2_q.basis_vector(0)
    for lam, mu in [(1, 2), (-3, 5), (7, -7)]:
        composed = exp_ad_nilpotent(sl2_q, e, lam).compose(exp_ad_nilpotent(sl2_q, e, mu))
        assert composed.matrix == exp_nilpotent(ad_matrix(sl2_q, e), lam + mu)

    inverse = exp_ad_nilpotent(sl2_q, e, 2).inverse()
    assert inverse.matrix == exp_ad_nilpotent(sl2_q, e, -2).matrix


def test_not_automorphism(sl2_q, qq):
    doubled = MatrixExact.identity(3, qq).scale(2)

    assert not is_automorphism(sl2_q, doubled)
    assert not is_automorphism(sl2_q, MatrixExact.zero(3, 3, qq))
    with pytest.raises(NotAutomorphismError):
        AutomorphismMatrix.checked(sl2_q, doubled)


def test_nilpotency(qq, f5):
    shift = MatrixExact.from_entries(6, 6, [(i, i + 1, 1) for i in range(5)], f5)

    assert nilpotency_index(shift) == 6
    with pytest.raises(NotNilpotentError):
        nilpotency_index(MatrixExact.identity(2, qq))
    with pytest.raises(FactorialNotInvertibleError):
        exp_nilpotent(shift, 1)
    # index 5 needs 4!, a unit mod 5
    short = MatrixExact.from_entries(5, 5, [(i, i + 1, 1) for i in range(4)], f5)
    assert not exp_nilpotent(short, 1).is_zero()


def test_vandermonde_extract(qq):
    planted = [
        VectorExact.from_dense([1, 0], qq),
        VectorExact.from_dense([0, 1], qq),
        VectorExact.from_dense([2, 3], qq),
    ]
    samples = [
        (lam, planted[0] + planted[1].scale(lam) + planted[2].scale(lam * lam))
        for lam in (1, 2, 3)
    ]

    assert vandermonde_extract(samples, 2) == planted
    with pytest.raises(InsufficientSamplesError):
        vandermonde_extract(samples[:2], 2)
    with pytest.raises(RepeatedLambdaError):
        vandermonde_extract([samples[0], samples[0], samples[1]], 2)
    with pytest.raises(InconsistentSamplesError):
        vandermonde_extract(samples, 1)


def test_exp_orbit_components(sl2_q):
    e, h, f = (sl2_q.basis_vector(i) for i in range(3))
    components = exp_orbit_components(ad_matrix(sl2_q, e), f)

    assert components == [f, h, e.scale(-1)]
