#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.

"""Lie algebras given by structure constants, and their subspaces."""

import hashlib
import logging
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from sympy import QQ, Poly, Rational, symbols
from sympy import Matrix as SympyMatrix

from exactla import (
    EchelonForm,
    MatrixExact,
    Row,
    Scalar,
    ScalarDomain,
    VectorExact,
    _axpy,
    format_scalar,
    kernel_basis,
    rank,
)
from literals import EXHAUSTIVE_PRIME_BOUND

logger = logging.getLogger(__name__)

_X = symbols("x")

Weight = Tuple[Scalar, ...]


class LieAlgebraError(Exception):
    """Base class for errors raised on Lie algebra data."""

    @property
    def message(self) -> str:
        """Return the message passed as an argument."""
        return self.args[0] if self.args else ""


class StructureConstantsError(LieAlgebraError):
    """Structure constants are malformed (index order or range)."""


class DimensionMismatchError(LieAlgebraError):
    """Operand does not live in the algebra."""


class NotDiagonalizableError(LieAlgebraError):
    """Some ad h does not split into eigenspaces over the domain."""


class LieAlgebra:
    """A finite-dimensional Lie algebra over an exact field.

    Only brackets [b_i, b_j] with i < j are stored; antisymmetry is structural.
    """

    def __init__(
        self,
        dim: int,
        domain: ScalarDomain,
        constants: Mapping[Tuple[int, int], Mapping[int, Union[int, Fraction]]],
        labels: Optional[Sequence[str]] = None,
    ) -> None:
        if dim < 0:
            raise StructureConstantsError(f"dimension must be nonnegative, got {dim}")
        if labels is not None and len(labels) != dim:
            raise StructureConstantsError(f"expected {dim} labels, got {len(labels)}")

        self.dim = dim
        self.domain = domain
        self.labels: Tuple[str, ...] = (
            tuple(labels) if labels else tuple(f"b{i}" for i in range(dim))
        )
        self._constants: Dict[Tuple[int, int], Row] = {}
        for (i, j), coeffs in sorted(constants.items()):
            if not 0 <= i < j < dim:
                raise StructureConstantsError(f"constant ({i}, {j}) must satisfy i < j < {dim}")
            row: Row = {}
            for k, value in coeffs.items():
                if not 0 <= k < dim:
                    raise StructureConstantsError(f"output index {k} out of range in ({i}, {j})")
                converted = domain.convert(value)
                if converted:
                    row[k] = converted
            if row:
                self._constants[(i, j)] = row

        self._table: List[Dict[int, Row]] = [{} for _ in range(dim)]
        for (i, j), row in self._constants.items():
            self._table[i][j] = row
            self._table[j][i] = {k: domain.neg(v) for k, v in row.items()}

    @property
    def constants(self) -> Dict[Tuple[int, int], Row]:
        return {key: dict(row) for key, row in self._constants.items()}

    def structure_constants(self) -> List[Tuple[int, int, int, Scalar]]:
        """Sorted (i, j, k, c_ij^k) with i < j."""
        return [
            (i, j, k, v)
            for (i, j), row in sorted(self._constants.items())
            for k, v in sorted(row.items())
        ]

    def bracket_table(self) -> List[Dict[int, Row]]:
        """Per basis index a, the nonzero brackets [b_a, b_m] keyed by m. Read-only."""
        return self._table

    def basis_bracket(self, i: int, j: int) -> Row:
        return dict(self._table[i].get(j, {}))

    def basis_vector(self, i: int) -> VectorExact:
        return VectorExact.unit(self.dim, i, self.domain)

    def vector(self, entries: Mapping[int, Union[int, Fraction]]) -> VectorExact:
        return VectorExact(self.dim, entries, self.domain)

    def is_abelian(self) -> bool:
        return not self._constants

    @property
    def fingerprint(self) -> str:
        """sha256 over the domain, the dimension and the canonical constants (labels excluded)."""
        text = ";".join(
            f"{i},{j},{k},{format_scalar(v, self.domain)}"
            for i, j, k, v in self.structure_constants()
        )
        digest = hashlib.sha256(f"{self.domain.spec}|{self.dim}|{text}".encode("utf-8"))
        return digest.hexdigest()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return (self.dim, self.domain, self._constants) == (
            other.dim,
            other.domain,
            other._constants,
        )

    def __hash__(self) -> int:
        return hash(self.fingerprint)

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim}, {self.domain}, {len(self._constants)} brackets)"


def abelian(n: int, domain: ScalarDomain) -> LieAlgebra:
    return LieAlgebra(n, domain, {}, [f"a{i + 1}" for i in range(n)])


def sl2(domain: ScalarDomain) -> LieAlgebra:
    """sl_2 in the basis (e, h, f) with [h,e]=2e, [h,f]=-2f, [e,f]=h."""
    constants = {(0, 1): {0: -2}, (0, 2): {1: 1}, (1, 2): {2: -2}}
    return LieAlgebra(3, domain, constants, ["e", "h", "f"])


def affine_line(domain: ScalarDomain) -> LieAlgebra:
    """The two-dimensional non-abelian algebra aff(1): [x,y]=x."""
    return LieAlgebra(2, domain, {(0, 1): {0: 1}}, ["x", "y"])


def heisenberg(domain: ScalarDomain) -> LieAlgebra:
    """The three-dimensional Heisenberg algebra: [x,y]=z."""
    return LieAlgebra(3, domain, {(0, 1): {2: 1}}, ["x", "y", "z"])


class JacobiFailure(NamedTuple):
    i: int
    j: int
    k: int
    defect: VectorExact


@dataclass(frozen=True)
class ValidationReport:
    failures: Tuple[JacobiFailure, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def _check_vector(L: LieAlgebra, x: VectorExact) -> None:
    if x.length != L.dim or x.domain != L.domain:
        raise DimensionMismatchError(
            f"vector of length {x.length} over {x.domain} is not in {L!r}"
        )


def _bracket_rows(L: LieAlgebra, x: Mapping[int, Scalar], y: Mapping[int, Scalar]) -> Row:
    p = L.domain.p
    result: Row = {}
    for a, xa in x.items():
        brackets = L._table[a]
        for b, yb in y.items():
            row = brackets.get(b)
            if row:
                _axpy(result, row, L.domain.mul(xa, yb), p)
    return result


def bracket(L: LieAlgebra, x: VectorExact, y: VectorExact) -> VectorExact:
    """Bilinear extension of the structure constants.

    Raises:
        DimensionMismatchError: if either operand does not live in L
    """
    _check_vector(L, x)
    _check_vector(L, y)
    return VectorExact._wrap(L.dim, _bracket_rows(L, x._entries, y._entries), L.domain)


def validate(L: LieAlgebra) -> ValidationReport:
    """Evaluates the Jacobi identity on every basis triple i < j < k.

    Repeated indices need no check once antisymmetry is structural.
    """
    failures = []
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            for k in range(j + 1, L.dim):
                defect: Row = {}
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    inner = L._table[a].get(b)
                    if inner:
                        _axpy(defect, _bracket_rows(L, inner, {c: L.domain.one}), 1, L.domain.p)
                if defect:
                    failures.append(
                        JacobiFailure(i, j, k, VectorExact._wrap(L.dim, defect, L.domain))
                    )

    if failures:
        logger.warning(f"{len(failures)} Jacobi failures in {L!r}")
    return ValidationReport(tuple(failures))


def ad_matrix(L: LieAlgebra, x: VectorExact) -> MatrixExact:
    """Matrix of ad x: column j is [x, b_j]."""
    _check_vector(L, x)
    rows: Dict[int, Row] = defaultdict(dict)
    p = L.domain.p
    for a, xa in x._entries.items():
        for j, row in L._table[a].items():
            for k, value in row.items():
                updated = rows[k].get(j, 0) + xa * value
                if p is not None:
                    updated %= p
                if updated:
                    rows[k][j] = updated
                else:
                    rows[k].pop(j, None)
    return MatrixExact._wrap(L.dim, L.dim, dict(rows), L.domain)


class KillingForm(NamedTuple):
    matrix: MatrixExact
    nondegenerate: bool


def killing_form(L: LieAlgebra) -> KillingForm:
    """Killing form κ_ij = trace(ad b_i ∘ ad b_j), with its nondegeneracy."""
    adjoints = [ad_matrix(L, L.basis_vector(i)) for i in range(L.dim)]
    columns = [a.transpose()._rows for a in adjoints]
    domain = L.domain
    entries: Dict[int, Row] = defaultdict(dict)
    for i in range(L.dim):
        for j in range(i, L.dim):
            # trace(A B) = sum over (k, l) of A[k][l] * B[l][k]
            total = domain.zero
            b_cols = columns[j]
            for k, row in adjoints[i]._rows.items():
                b_col = b_cols.get(k)
                if not b_col:
                    continue
                for l_, value in row.items():
                    if l_ in b_col:
                        total = domain.add(total, domain.mul(value, b_col[l_]))
            if total:
                entries[i][j] = total
                entries[j][i] = total

    matrix = MatrixExact._wrap(L.dim, L.dim, dict(entries), domain)
    return KillingForm(matrix, rank(matrix) == L.dim)


class Subspace:
    """A subspace held as its RREF basis; equal subspaces have equal representations."""

    __slots__ = ("ambient_dim", "domain", "_form")

    def __init__(self, form: EchelonForm) -> None:
        self.ambient_dim = form.n_cols
        self.domain = form.domain
        self._form = form

    @classmethod
    def span(
        cls, vectors: Iterable[VectorExact], ambient_dim: int, domain: ScalarDomain
    ) -> "Subspace":
        form = EchelonForm(ambient_dim, domain)
        for vector in vectors:
            if vector.length != ambient_dim or vector.domain != domain:
                raise DimensionMismatchError("spanning vector outside the ambient space")
            form.add(vector._entries)
        return cls(form)

    @classmethod
    def zero(cls, ambient_dim: int, domain: ScalarDomain) -> "Subspace":
        return cls(EchelonForm(ambient_dim, domain))

    @classmethod
    def whole(cls, ambient_dim: int, domain: ScalarDomain) -> "Subspace":
        units = (VectorExact.unit(ambient_dim, i, domain) for i in range(ambient_dim))
        return cls.span(units, ambient_dim, domain)

    @property
    def dim(self) -> int:
        return self._form.rank

    @property
    def basis(self) -> MatrixExact:
        return self._form.to_matrix()

    @property
    def pivot_cols(self) -> Tuple[int, ...]:
        return self._form.pivot_cols

    def vectors(self) -> List[VectorExact]:
        return self._form.rows()

    def contains(self, vector: VectorExact) -> bool:
        return self._form.contains(vector._entries)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.vectors())

    def coordinates(self, vector: VectorExact) -> List[Scalar]:
        """Coefficients of a member vector in the RREF basis.

        Raises:
            ValueError: if the vector is not in the subspace
        """
        if not self.contains(vector):
            raise ValueError("vector is not in the subspace")
        return [vector[c] for c in self.pivot_cols]

    def image(self, matrix: MatrixExact) -> "Subspace":
        return Subspace.span((matrix @ v for v in self.vectors()), matrix.n_rows, self.domain)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim, self.domain) == (other.ambient_dim, other.domain) and (
            self.basis == other.basis
        )

    def __hash__(self) -> int:
        return hash(self.basis)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, {self.domain})"


def derived_subalgebra(L: LieAlgebra) -> Subspace:
    """[L, L]."""
    brackets = (
        VectorExact._wrap(L.dim, dict(row), L.domain) for row in L._constants.values()
    )
    return Subspace.span(brackets, L.dim, L.domain)


def center(L: LieAlgebra) -> Subspace:
    """Kernel of x -> ad x, assembled as a dim² x dim system."""
    n = L.dim
    rows: Dict[int, Row] = defaultdict(dict)
    for a in range(n):
        for j, row in L._table[a].items():
            for k, value in row.items():
                rows[j * n + k][a] = value
    system = MatrixExact._wrap(n * n, n, dict(rows), L.domain)
    return Subspace.span(kernel_basis(system), n, L.domain)


def direct_sum(L1: LieAlgebra, L2: LieAlgebra) -> LieAlgebra:
    """L1 ⊕ L2 with the basis of L1 first; clashing labels get `_1`/`_2` suffixes."""
    if L1.domain != L2.domain:
        raise DimensionMismatchError(f"cannot sum algebras over {L1.domain} and {L2.domain}")

    shift = L1.dim
    constants: Dict[Tuple[int, int], Row] = dict(L1._constants)
    for (i, j), row in L2._constants.items():
        constants[(i + shift, j + shift)] = {k + shift: v for k, v in row.items()}

    labels = list(L1.labels) + list(L2.labels)
    if set(L1.labels) & set(L2.labels):
        labels = [f"{label}_1" for label in L1.labels] + [f"{label}_2" for label in L2.labels]

    return LieAlgebra(L1.dim + L2.dim, L1.domain, constants, labels)


def block_swap(L1: LieAlgebra, L2: LieAlgebra) -> MatrixExact:
    """Matrix of the map exchanging the two summands of L1 ⊕ L2 (requires L1 = L2)."""
    if L1 != L2:
        raise DimensionMismatchError("summands must coincide to be exchanged")
    n = L1.dim
    entries = [(i + n, i, 1) for i in range(n)] + [(i, i + n, 1) for i in range(n)]
    return MatrixExact.from_entries(2 * n, 2 * n, entries, L1.domain)


def is_subalgebra(L: LieAlgebra, S: Subspace) -> bool:
    if S.ambient_dim != L.dim:
        raise DimensionMismatchError("subspace is not in the algebra")
    basis = S.vectors()
    return all(
        S.contains(bracket(L, u, v)) for i, u in enumerate(basis) for v in basis[i + 1 :]
    )


def is_ideal(L: LieAlgebra, S: Subspace) -> bool:
    if S.ambient_dim != L.dim:
        raise DimensionMismatchError("subspace is not in the algebra")
    return all(
        S.contains(bracket(L, L.basis_vector(j), u)) for u in S.vectors() for j in range(L.dim)
    )


@dataclass(frozen=True)
class WeightDecomposition:
    """Simultaneous eigenspaces of ad h over a basis of a toral subalgebra."""

    cartan_basis: Tuple[VectorExact, ...]
    spaces: Tuple[Tuple[Weight, Subspace], ...]

    @property
    def total_dim(self) -> int:
        return sum(space.dim for _, space in self.spaces)

    def nonzero_spaces(self) -> List[Tuple[Weight, Subspace]]:
        return [(w, s) for w, s in self.spaces if any(w)]

    def space_of(self, weight: Weight) -> Optional[Subspace]:
        for candidate, space in self.spaces:
            if candidate == weight:
                return space
        return None


def _domain_roots(coefficients: Sequence[Scalar], domain: ScalarDomain) -> List[Scalar]:
    """Roots lying in the domain of a polynomial given by coefficients, highest degree first."""
    if domain.p is None:
        poly = Poly([Rational(c.numerator, c.denominator) for c in coefficients], _X, domain=QQ)
    else:
        poly = Poly([int(c) for c in coefficients], _X, modulus=domain.p)

    roots = []
    for factor, _ in poly.factor_list()[1]:
        if factor.degree() != 1:
            continue
        a, b = (domain.convert(Fraction(int(c.p), int(c.q))) for c in factor.all_coeffs())
        roots.append(domain.div(domain.neg(b), a))
    return roots


def _characteristic_roots(restricted: MatrixExact, domain: ScalarDomain) -> List[Scalar]:
    """Eigenvalues in the domain, read off the characteristic polynomial.

    Over F_p the polynomial is computed on integer representatives and reduced afterwards.
    """
    dense = SympyMatrix(
        [[Rational(v.numerator, v.denominator) for v in row] for row in restricted.to_dense()]
    )
    coefficients = [Fraction(int(c.p), int(c.q)) for c in dense.charpoly(_X).all_coeffs()]
    return _domain_roots([domain.convert(c) for c in coefficients], domain)


def _split(
    restricted: MatrixExact,
    basis: Sequence[VectorExact],
    ambient_dim: int,
    candidates: Iterable[Scalar],
    domain: ScalarDomain,
) -> List[Tuple[Scalar, Subspace]]:
    r = len(basis)
    found = []
    for value in candidates:
        shifted = restricted - MatrixExact.identity(r, domain).scale(value)
        kernel = kernel_basis(shifted)
        if not kernel:
            continue
        vectors = []
        for coords in kernel:
            combined: Row = {}
            for b, c in coords._entries.items():
                _axpy(combined, basis[b]._entries, c, domain.p)
            vectors.append(VectorExact._wrap(ambient_dim, combined, domain))
        found.append((value, Subspace.span(vectors, ambient_dim, domain)))
    return found


def _eigenspaces(
    ad: MatrixExact, space: Subspace, domain: ScalarDomain, exhaustive_bound: int
) -> List[Tuple[Scalar, Subspace]]:
    basis = space.vectors()
    r = len(basis)
    images = [ad @ w for w in basis]
    if not all(space.contains(image) for image in images):
        raise NotDiagonalizableError("weight space is not invariant under ad h")
    restricted = MatrixExact.from_columns(
        [VectorExact(r, dict(enumerate(space.coordinates(image))), domain) for image in images],
        r,
        domain,
    )

    if domain.p is not None and domain.p <= exhaustive_bound:
        candidates = [domain.convert(c) for c in range(domain.p)]
    else:
        harvested = {domain.zero}
        harvested.update(restricted[i, i] for i in range(r))
        harvested.update(ad[i, i] for i in range(ad.n_rows))
        candidates = sorted(harvested)

    found = _split(restricted, basis, space.ambient_dim, candidates, domain)
    total = sum(eigen.dim for _, eigen in found)
    if total < r and not (domain.p is not None and domain.p <= exhaustive_bound):
        # the basis hides some eigenvalues off the diagonal
        tried = set(candidates)
        extra = sorted(set(_characteristic_roots(restricted, domain)) - tried)
        logger.debug(f"diagonal missed {r - total} dimensions, trying roots {extra}")
        found = sorted(
            found + _split(restricted, basis, space.ambient_dim, extra, domain),
            key=lambda item: domain.sort_key(item[0]),
        )
        total = sum(eigen.dim for _, eigen in found)

    if total != r:
        raise NotDiagonalizableError(f"eigenspaces cover {total} of {r} dimensions")
    return found


def weight_decomposition(
    L: LieAlgebra, cartan: Subspace, exhaustive_bound: int = EXHAUSTIVE_PRIME_BOUND
) -> WeightDecomposition:
    """Simultaneous eigenspace decomposition of L under ad of a toral subalgebra.

    Candidate eigenvalues are every residue when p <= `exhaustive_bound`, otherwise the diagonal
    entries of ad h and of its restrictions. When those leave part of a space uncovered, the
    roots in the domain of the characteristic polynomial of the restriction are tried as well.

    Args:
        L: the algebra
        cartan: an abelian subalgebra acting diagonalizably
        exhaustive_bound: largest prime for which every residue is tried

    Returns:
        The decomposition, spaces sorted by weight

    Raises:
        LieAlgebraError: if cartan is not abelian
        NotDiagonalizableError: if some ad h does not split over the domain
    """
    cartan_basis = cartan.vectors()
    for i, u in enumerate(cartan_basis):
        for v in cartan_basis[i + 1 :]:
            if not bracket(L, u, v).is_zero():
                raise LieAlgebraError("cartan subalgebra must be abelian")

    spaces: List[Tuple[Weight, Subspace]] = [((), Subspace.whole(L.dim, L.domain))]
    for h in cartan_basis:
        ad = ad_matrix(L, h)
        refined = []
        for weight, space in spaces:
            for value, eigen in _eigenspaces(ad, space, L.domain, exhaustive_bound):
                refined.append((weight + (value,), eigen))
        spaces = refined

    spaces.sort(key=lambda item: tuple(L.domain.sort_key(v) for v in item[0]))
    logger.debug(f"weight decomposition of {L!r}: {len(spaces)} spaces")
    return WeightDecomposition(tuple(cartan_basis), tuple(spaces))
