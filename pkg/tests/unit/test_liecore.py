#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.

from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chevalley import classical_algebra
from exactla import ScalarDomain, VectorExact
from liecore import (
    DimensionMismatchError,
    LieAlgebra,
    LieAlgebraError,
    NotDiagonalizableError,
    StructureConstantsError,
    Subspace,
    abelian,
    ad_matrix,
    affine_line,
    block_swap,
    bracket,
    center,
    derived_subalgebra,
    direct_sum,
    is_ideal,
    is_subalgebra,
    killing_form,
    sl2,
    validate,
    weight_decomposition,
)
from verify import controls


def qq_vector(qq, values) -> VectorExact:
    return VectorExact.from_dense(values, qq)


def test_sl2_brackets(sl2_q):
    e, h, f = (sl2_q.basis_vector(i) for i in range(3))

    assert bracket(sl2_q, h, e) == e.scale(2)
    assert bracket(sl2_q, h, f) == f.scale(-2)
    assert bracket(sl2_q, e, f) == h
    assert bracket(sl2_q, f, e) == h.scale(-1)
    assert bracket(sl2_q, e, e).is_zero()


def test_bracket_refuses_foreign_vectors(sl2_q, aff_q):
    with pytest.raises(DimensionMismatchError):
        bracket(sl2_q, sl2_q.basis_vector(0), aff_q.basis_vector(0))


@pytest.mark.parametrize(
    "constants",
    [{(1, 0): {0: 1}}, {(0, 0): {0: 1}}, {(0, 1): {2: 1}}, {(0, 2): {0: 1}}],
)
def test_structure_constants_refused(qq, constants):
    with pytest.raises(StructureConstantsError):
        LieAlgebra(2, qq, constants)


def test_labels_must_match_dimension(qq):
    with pytest.raises(StructureConstantsError):
        LieAlgebra(2, qq, {}, ["x"])


def test_validate_accepts_lie_algebras(sl2_q, heis_q, f5):
    assert validate(sl2_q).ok
    assert validate(heis_q).ok
    assert validate(sl2(f5)).ok


def test_validate_reports_jacobi_failures(qq):
    # [x,y]=y, [y,z]=x, [x,z]=0 breaks Jacobi at (x, y, z)
    broken = LieAlgebra(3, qq, {(0, 1): {1: 1}, (1, 2): {0: 1}})
    report = validate(broken)

    assert not report.ok
    assert [(r.i, r.j, r.k) for r in report.failures] == [(0, 1, 2)]
    assert not report.failures[0].defect.is_zero()


def test_fingerprint_ignores_labels(qq, f5):
    first = LieAlgebra(2, qq, {(0, 1): {0: 1}}, ["x", "y"])
    second = LieAlgebra(2, qq, {(0, 1): {0: 1}}, ["p", "q"])

    assert first.fingerprint == second.fingerprint
    assert first == second
    assert affine_line(f5).fingerprint != first.fingerprint


def test_constants_reduce_mod_p(f5):
    L = LieAlgebra(2, f5, {(0, 1): {0: 5, 1: 6}})
    assert L.constants == {(0, 1): {1: 1}}


def test_ad_matrix(sl2_q):
    ad_h = ad_matrix(sl2_q, sl2_q.basis_vector(1))
    assert ad_h.to_dense() == [[2, 0, 0], [0, 0, 0], [0, 0, -2]]

    ad_e = ad_matrix(sl2_q, sl2_q.basis_vector(0))
    assert ad_e.to_dense() == [[0, -2, 0], [0, 0, 1], [0, 0, 0]]


def test_killing_form_sl2(sl2_q, f7):
    form = killing_form(sl2_q)

    assert form.nondegenerate
    assert form.matrix.to_dense() == [[0, 0, 4], [0, 8, 0], [4, 0, 0]]
    assert killing_form(sl2(f7)).nondegenerate


def test_killing_form_degenerate(aff_q, heis_q):
    assert not killing_form(aff_q).nondegenerate
    assert not killing_form(heis_q).nondegenerate


def test_center_and_derived(heis_q, sl2_q, qq):
    z = Subspace.span([heis_q.basis_vector(2)], 3, qq)

    assert center(heis_q) == z
    assert derived_subalgebra(heis_q) == z
    assert center(sl2_q).dim == 0
    assert derived_subalgebra(sl2_q) == Subspace.whole(3, qq)
    assert center(abelian(3, qq)) == Subspace.whole(3, qq)
    assert center(heis_q).is_subspace_of(derived_subalgebra(heis_q))
    assert abelian(3, qq).is_abelian()
    assert not heis_q.is_abelian()


def test_subspace_canonical(qq):
    first = Subspace.span([qq_vector(qq, [1, 1, 0]), qq_vector(qq, [0, 1, 1])], 3, qq)
    second = Subspace.span([qq_vector(qq, [1, 2, 1]), qq_vector(qq, [1, 0, -1])], 3, qq)

    assert first == second
    assert first.contains(qq_vector(qq, [2, 3, 1]))
    assert not first.contains(qq_vector(qq, [1, 0, 0]))
    assert first.coordinates(qq_vector(qq, [1, 2, 1])) == [1, 2]
    with pytest.raises(ValueError):
        first.coordinates(qq_vector(qq, [0, 0, 1]))


def test_direct_sum_and_swap(qq):
    L = direct_sum(sl2(qq), sl2(qq))

    assert L.dim == 6
    assert L.labels[:3] == ("e_1", "h_1", "f_1")
    assert validate(L).ok
    assert bracket(L, L.basis_vector(0), L.basis_vector(5)).is_zero()

    swap = block_swap(sl2(qq), sl2(qq))
    assert swap @ L.basis_vector(0) == L.basis_vector(3)
    with pytest.raises(DimensionMismatchError):
        block_swap(sl2(qq), affine_line(qq))


def test_direct_sum_refuses_mixed_domains(qq, f5):
    with pytest.raises(DimensionMismatchError):
        direct_sum(sl2(qq), sl2(f5))


def test_ideals_and_subalgebras(aff_q, qq):
    x = Subspace.span([aff_q.basis_vector(0)], 2, qq)
    y = Subspace.span([aff_q.basis_vector(1)], 2, qq)

    assert is_ideal(aff_q, x)
    assert is_subalgebra(aff_q, y)
    assert not is_ideal(aff_q, y)


def test_weight_decomposition_sl2(sl2_q, qq):
    cartan = Subspace.span([sl2_q.basis_vector(1)], 3, qq)
    decomposition = weight_decomposition(sl2_q, cartan)

    assert [w for w, _ in decomposition.spaces] == [(-2,), (0,), (2,)]
    assert decomposition.total_dim == 3
    assert decomposition.space_of((2,)).contains(sl2_q.basis_vector(0))
    assert decomposition.space_of((5,)) is None


def test_weight_decomposition_over_small_prime(f5):
    L = sl2(f5)
    cartan = Subspace.span([L.basis_vector(1)], 3, f5)
    decomposition = weight_decomposition(L, cartan)

    # -2 is 3 mod 5
    assert [w for w, _ in decomposition.spaces] == [(0,), (2,), (3,)]
    assert len(decomposition.nonzero_spaces()) == 2


def test_weight_decomposition_refuses_nonabelian_cartan(sl2_q):
    with pytest.raises(LieAlgebraError):
        weight_decomposition(sl2_q, Subspace.whole(3, ScalarDomain.rational()))


@pytest.mark.parametrize(
    "field,weights",
    [("Q", [(-2,), (0,), (2,)]), ("F263", [(0,), (2,), (261,)])],
)
def test_weight_decomposition_off_the_diagonal(field, weights):
    # u = e + f, h, w = e - f: ad h has a zero diagonal in this basis
    domain = ScalarDomain.from_spec(field)
    constants = {(0, 1): {2: -2}, (0, 2): {1: -2}, (1, 2): {0: 2}}
    L = LieAlgebra(3, domain, constants, ["u", "h", "w"])
    decomposition = weight_decomposition(L, Subspace.span([L.basis_vector(1)], 3, domain))

    assert [w for w, _ in decomposition.spaces] == weights
    assert decomposition.total_dim == 3
    assert decomposition.space_of((2,)).contains(L.vector({0: 1, 2: 1}))
    assert decomposition.space_of((0,)).contains(L.basis_vector(1))


def test_weight_decomposition_refuses_nilpotent_action(heis_q, qq):
    with pytest.raises(NotDiagonalizableError):
        weight_decomposition(heis_q, Subspace.span([heis_q.basis_vector(0)], 3, qq))


@lru_cache(maxsize=None)
def sample_algebra(name: str, field: str) -> LieAlgebra:
    domain = ScalarDomain.from_spec(field)
    if name in ("A1", "B2"):
        return classical_algebra(name[0], int(name[1]), domain).algebra
    return {control.name: control.algebra for control in controls(domain)}[name]


@lru_cache(maxsize=None)
def sample_frame(name: str, field: str):
    frame = classical_algebra(name[0], int(name[1]), ScalarDomain.from_spec(field))
    return frame, weight_decomposition(frame.algebra, frame.cartan)


SAMPLES = [
    (name, field)
    for name in ("aff(1)", "heisenberg", "sl2+sl2", "sl2+abelian(1)", "A1", "B2")
    for field in ("Q", "F7")
]


def draw_vector(data, L: LieAlgebra) -> VectorExact:
    values = data.draw(st.lists(st.integers(-4, 4), min_size=L.dim, max_size=L.dim))
    return VectorExact.from_dense(values, L.domain)


@pytest.mark.parametrize("name,field", SAMPLES)
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_bracket_is_bilinear_and_antisymmetric(name, field, data):
    L = sample_algebra(name, field)
    x, y, z = (draw_vector(data, L) for _ in range(3))
    a = data.draw(st.integers(-4, 4))

    assert bracket(L, x.scale(a) + y, z) == bracket(L, x, z).scale(a) + bracket(L, y, z)
    assert bracket(L, z, x.scale(a) + y) == bracket(L, z, x).scale(a) + bracket(L, z, y)
    assert bracket(L, x, y) == -bracket(L, y, x)
    assert bracket(L, x, x).is_zero()


@pytest.mark.parametrize("name,field", SAMPLES)
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_jacobi_on_random_triples(name, field, data):
    L = sample_algebra(name, field)
    x, y, z = (draw_vector(data, L) for _ in range(3))

    total = (
        bracket(L, x, bracket(L, y, z))
        + bracket(L, y, bracket(L, z, x))
        + bracket(L, z, bracket(L, x, y))
    )
    assert total.is_zero()


@pytest.mark.parametrize("name,field", SAMPLES)
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_killing_form_is_trace_form_and_invariant(name, field, data):
    L = sample_algebra(name, field)
    form = killing_form(L).matrix
    x, y, z = (draw_vector(data, L) for _ in range(3))

    def kappa(u: VectorExact, v: VectorExact):
        return u.dot(form @ v)

    assert kappa(x, y) == (ad_matrix(L, x) @ ad_matrix(L, y)).trace()
    assert kappa(x, y) == kappa(y, x)
    assert kappa(bracket(L, x, y), z) == kappa(x, bracket(L, y, z))


@pytest.mark.parametrize("name", ["A1", "B2"])
@pytest.mark.parametrize("field", ["Q", "F7"])
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_cartan_acts_by_weights(name, field, data):
    frame, decomposition = sample_frame(name, field)
    L, domain = frame.algebra, frame.algebra.domain
    coefficients = data.draw(
        st.lists(st.integers(-4, 4), min_size=frame.cartan.dim, max_size=frame.cartan.dim)
    )
    h = VectorExact.zero(L.dim, domain)
    for c, basis_vector in zip(coefficients, decomposition.cartan_basis):
        h = h + basis_vector.scale(c)

    for weight, space in decomposition.spaces:
        mix = data.draw(st.lists(st.integers(-4, 4), min_size=space.dim, max_size=space.dim))
        v = VectorExact.zero(L.dim, domain)
        for c, basis_vector in zip(mix, space.vectors()):
            v = v + basis_vector.scale(c)
        value = sum(domain.mul(domain.convert(c), w) for c, w in zip(coefficients, weight))

        assert bracket(L, h, v) == v.scale(value)
