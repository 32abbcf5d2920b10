#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.

import pytest

from biderive import BiderMode, BiderTensor
from chevalley import BadCharacteristicError
from exactla import MatrixExact
from witt import (
    CapsIncompatibleError,
    GeneratorStatus,
    WittError,
    generator_vanishing_report,
    preserves_brackets_in_range,
    restricted_inner_tensor,
    truncated_biderivation_space,
    witt_bracket,
    witt_exp_ad_d,
    witt_exp_components,
    witt_truncation,
    witt_weights,
)


@pytest.fixture(scope="module")
def w12(qq):
    return witt_truncation(1, 2, qq)


def test_basis_order_one_variable(qq):
    W = witt_truncation(1, 3, qq)

    assert W.labels == ("∂-1", "∂0", "∂1", "∂2")
    assert [W.degree(i) for i in range(W.dim)] == [0, 1, 2, 3]
    assert W.partial(0) == 0


def test_basis_order_two_variables(qq):
    W = witt_truncation(2, 1, qq)

    assert W.labels == ("d1", "d2", "t1d1", "t2d1", "t1d2", "t2d2")
    assert W.index_of((0, 1), 1) == 5
    assert W.window(0) == (0, 1)


def test_one_variable_brackets(qq):
    W = witt_truncation(1, 3, qq)
    # [∂i, ∂j] = (j - i) ∂(i+j)
    result = witt_bracket(W, 0, 2)
    assert not result.overflow
    assert result.value == W.vector({1: 2})

    assert witt_bracket(W, 1, 1).value.is_zero()
    assert witt_bracket(W, 3, 1).value == W.vector({3: -2})


def test_bracket_overflow(qq):
    W = witt_truncation(1, 3, qq)
    result = witt_bracket(W, 2, 3)

    assert result.overflow
    assert result.overflow_degree == 4
    assert result.value is None
    assert W.oracle(2, 3) is None


def test_vector_bracket(qq):
    W = witt_truncation(1, 2, qq)
    x = W.vector({0: 1, 1: 1})
    # [∂-1 + ∂0, ∂0] = ∂-1
    assert witt_bracket(W, x, W.vector({1: 1})).value == W.vector({0: 1})


def test_two_variable_bracket(qq):
    W = witt_truncation(2, 1, qq)
    # [d1, t1d2] = d2
    assert witt_bracket(W, 0, 4).value == W.vector({1: 1})
    # [t1d1, t2d1] = -t2d1
    assert witt_bracket(W, 2, 3).value == W.vector({3: -1})


def test_truncation_refusals(qq, f5):
    with pytest.raises(BadCharacteristicError):
        witt_truncation(1, 3, f5)
    with pytest.raises(WittError):
        witt_truncation(0, 3, qq)
    with pytest.raises(WittError):
        witt_truncation(1, -1, qq)


@pytest.mark.parametrize("inner_cap", [-1, 2])
def test_caps_incompatible(qq, inner_cap):
    W = witt_truncation(1, 3, qq)
    with pytest.raises(CapsIncompatibleError):
        truncated_biderivation_space(W, inner_cap, BiderMode.SYMMETRIC)


def test_weights(w12):
    decomposition = witt_weights(w12)

    assert [w for w, _ in decomposition.spaces] == [(-1,), (0,), (1,)]
    assert decomposition.cartan_basis == (w12.vector({1: 1}),)


def test_exp_ad_d(w12):
    v = w12.vector({2: 1})
    components = witt_exp_components(w12, 0, v)

    assert components == [v, w12.vector({1: 2}), w12.vector({0: 1})]
    assert witt_exp_ad_d(w12, 0, 1) @ v == w12.vector({0: 1, 1: 2, 2: 1})
    assert preserves_brackets_in_range(w12, witt_exp_ad_d(w12, 0, 3))
    assert not preserves_brackets_in_range(
        w12, MatrixExact.identity(w12.dim, w12.domain).scale(2)
    )


def test_symmetric_window(w12):
    problem = truncated_biderivation_space(w12, 1, BiderMode.SYMMETRIC)

    assert problem.window == (0, 1)
    assert problem.dim_solution == 3
    assert problem.active_instances > 0
    # every solution takes values on ∂-1 only
    assert all(k == 0 for d in problem.basis for _, _, k, _ in d.records())
    assert all(problem.satisfies(d) for d in problem.basis)


def test_symmetric_window_generators(w12):
    problem = truncated_biderivation_space(w12, 1, BiderMode.SYMMETRIC)
    rows = generator_vanishing_report(problem)

    assert [(row.label, row.status) for row in rows] == [
        ("∂-1", GeneratorStatus.NONVANISHING),
        ("∂0", GeneratorStatus.UNCONSTRAINED),
    ]
    assert rows[0].partners == (0,)
    assert problem.is_interior_pair(0, 0)
    assert not problem.is_interior_pair(0, 1)


def test_skew_window_is_restricted_bracket(w12):
    problem = truncated_biderivation_space(w12, 1, BiderMode.SKEW)
    inner = restricted_inner_tensor(w12, 1)

    assert problem.dim_solution == 1
    assert problem.contains(inner)
    assert problem.satisfies(inner)
    assert inner.records() == [(0, 1, 0, 1), (1, 0, 0, -1)]


def test_support_classes(w12):
    problem = truncated_biderivation_space(w12, 1, BiderMode.SYMMETRIC)
    classes = problem.support_classes()

    assert len(classes) == 3
    interior = [pair for c in classes for pair in c.interior]
    assert interior == [(0, 0)]


def test_satisfies_refuses_out_of_window(w12, qq):
    problem = truncated_biderivation_space(w12, 1, BiderMode.FULL)
    outside = BiderTensor(w12.dim, qq, BiderMode.FULL, {(2, 0, 0): 1})

    assert not problem.satisfies(outside)


def test_smallest_window(qq):
    W = witt_truncation(1, 0, qq)
    problem = truncated_biderivation_space(W, 0, BiderMode.SYMMETRIC)
    rows = generator_vanishing_report(problem)

    assert problem.dim_solution == 1
    assert [row.status for row in rows] == [GeneratorStatus.UNCONSTRAINED]


def test_restricted_inner_tensor_overflow(qq):
    W = witt_truncation(1, 3, qq)
    # [∂1, ∂2] has degree 4
    with pytest.raises(CapsIncompatibleError):
        restricted_inner_tensor(W, 3)


def test_window_solution_independent_of_threads(w12):
    serial = truncated_biderivation_space(w12, 1, BiderMode.SYMMETRIC, threads=1)
    threaded = truncated_biderivation_space(w12, 1, BiderMode.SYMMETRIC, threads=3)

    assert serial.basis == threaded.basis
