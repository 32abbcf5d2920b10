#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.

"""Derivations, biderivations, the symmetric radical and commutative post-Lie products.

A biderivation δ is bilinear with both δ(x, ·) and δ(·, x) derivations, written as the pair of
identities

    δ([x,y],z) = [x,δ(y,z)] − [y,δ(x,z)]
    δ(x,[y,z]) = [δ(x,y),z] + [y,δ(x,z)]

on basis triples. Tensors d_ab^k are the unknowns; every instance of either identity gives one
scalar row per output coordinate k.
"""

import itertools
import logging
import random
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import (
    Any,
    Callable,
    Dict,
    Hashable,
    Iterable,
    List,
    Mapping,
    MutableMapping,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from chevalley import AutomorphismMatrix, NotAutomorphismError, is_automorphism
from exactla import MatrixExact, Row, Scalar, ScalarDomain, VectorExact, kernel_basis
from liecore import (
    LieAlgebra,
    Subspace,
    WeightDecomposition,
    Weight,
    ad_matrix,
    bracket,
    is_ideal,
    is_subalgebra,
)
from literals import ENUMERATION_LIMIT, RATIONAL_GRID_RADIUS
from utils import parallel_map

logger = logging.getLogger(__name__)

Entry = Tuple[int, int, int]
BracketOracle = Callable[[int, int], Optional[Mapping[int, Scalar]]]


class BiderivationError(Exception):
    """Base class for biderivation errors."""

    @property
    def message(self) -> str:
        """Return the message passed as an argument."""
        return self.args[0] if self.args else ""


class ModeMismatchError(BiderivationError):
    """Tensor entries are inconsistent with the declared mode, or the mode is wrong here."""


class ModeUnavailableError(BiderivationError):
    """Symmetric/skew split requested in characteristic 2."""


class BiderMode(str, Enum):
    """Enum for the symmetry class of a biderivation."""

    FULL = "full"
    SYMMETRIC = "sym"
    SKEW = "skew"


def check_mode(domain: ScalarDomain, mode: BiderMode) -> None:
    """Refuses the symmetric/skew split where the two modes coincide.

    Raises:
        ModeUnavailableError: for sym or skew in characteristic 2
    """
    if domain.characteristic != 2:
        return
    if mode is not BiderMode.FULL:
        raise ModeUnavailableError(f"mode {mode.value} is unavailable over {domain}")
    logger.warning(f"solving full biderivations over {domain}: sym and skew coincide")


class BiderTensor:
    """Coefficients d_ij^k with δ(b_i, b_j) = Σ_k d_ij^k b_k, stored by pair."""

    __slots__ = ("dim", "domain", "mode", "_pairs")

    def __init__(
        self,
        dim: int,
        domain: ScalarDomain,
        mode: BiderMode,
        entries: Mapping[Entry, Union[int, Fraction]],
    ) -> None:
        pairs: Dict[Tuple[int, int], Row] = defaultdict(dict)
        for (i, j, k), value in entries.items():
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                raise IndexError(f"entry ({i}, {j}, {k}) out of range for dimension {dim}")
            converted = domain.convert(value)
            if converted:
                pairs[(i, j)][k] = converted
        self.dim = dim
        self.domain = domain
        self.mode = mode
        self._pairs: Dict[Tuple[int, int], Row] = dict(pairs)
        self._check_mode()

    @classmethod
    def _wrap(
        cls, dim: int, domain: ScalarDomain, mode: BiderMode, pairs: Dict[Tuple[int, int], Row]
    ) -> "BiderTensor":
        tensor = cls.__new__(cls)
        tensor.dim = dim
        tensor.domain = domain
        tensor.mode = mode
        tensor._pairs = {pair: row for pair, row in pairs.items() if row}
        return tensor

    @classmethod
    def zero(cls, dim: int, domain: ScalarDomain, mode: BiderMode) -> "BiderTensor":
        return cls._wrap(dim, domain, mode, {})

    @classmethod
    def from_flat(cls, vector: VectorExact, dim: int, mode: BiderMode) -> "BiderTensor":
        """Inverse of `flatten`: index (i·dim + j)·dim + k holds d_ij^k."""
        entries = {}
        for index, value in vector.items():
            pair, k = divmod(index, dim)
            i, j = divmod(pair, dim)
            entries[(i, j, k)] = value
        return cls(dim, vector.domain, mode, entries)

    def _check_mode(self) -> None:
        if self.mode is BiderMode.FULL:
            return
        for (i, j), row in self._pairs.items():
            mirror = self._pairs.get((j, i), {})
            if self.mode is BiderMode.SYMMETRIC and mirror != row:
                raise ModeMismatchError(f"d[{i},{j}] and d[{j},{i}] differ in symmetric mode")
            if self.mode is BiderMode.SKEW:
                if i == j:
                    raise ModeMismatchError(f"d[{i},{i}] must vanish in skew mode")
                if mirror != {k: self.domain.neg(v) for k, v in row.items()}:
                    raise ModeMismatchError(f"d[{i},{j}] and d[{j},{i}] must be opposite")

    def pairs(self) -> List[Tuple[Tuple[int, int], Row]]:
        """Sorted nonzero (pair, coordinates) items. Read-only."""
        return sorted(self._pairs.items())

    def pair_row(self, i: int, j: int) -> Row:
        """Read-only coordinates of δ(b_i, b_j)."""
        return self._pairs.get((i, j), {})

    def value(self, i: int, j: int) -> VectorExact:
        return VectorExact(self.dim, self.pair_row(i, j), self.domain)

    def entries(self) -> Dict[Entry, Scalar]:
        return {(i, j, k): v for (i, j), row in self._pairs.items() for k, v in row.items()}

    def records(self) -> List[Tuple[int, int, int, Scalar]]:
        """Sorted (i, j, k, d_ij^k) records."""
        return sorted((i, j, k, v) for (i, j, k), v in self.entries().items())

    def flatten(self) -> VectorExact:
        n = self.dim
        return VectorExact(
            n**3, {(i * n + j) * n + k: v for (i, j, k), v in self.entries().items()}, self.domain
        )

    def is_zero(self) -> bool:
        return not self._pairs

    def scale(self, factor: Union[int, Fraction]) -> "BiderTensor":
        factor = self.domain.convert(factor)
        pairs = {
            pair: {k: self.domain.mul(v, factor) for k, v in row.items()}
            for pair, row in self._pairs.items()
        }
        return BiderTensor._wrap(self.dim, self.domain, self.mode, pairs if factor else {})

    def __add__(self, other: "BiderTensor") -> "BiderTensor":
        if (self.dim, self.domain) != (other.dim, other.domain):
            raise ModeMismatchError("tensors live on different algebras")
        mode = self.mode if self.mode is other.mode else BiderMode.FULL
        pairs: Dict[Tuple[int, int], Row] = {pair: dict(row) for pair, row in self._pairs.items()}
        for pair, row in other._pairs.items():
            target = pairs.setdefault(pair, {})
            for k, v in row.items():
                total = self.domain.add(target.get(k, self.domain.zero), v)
                if total:
                    target[k] = total
                else:
                    target.pop(k, None)
        return BiderTensor._wrap(self.dim, self.domain, mode, pairs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BiderTensor):
            return NotImplemented
        return (self.dim, self.domain, self._pairs) == (other.dim, other.domain, other._pairs)

    def __hash__(self) -> int:
        return hash((self.dim, self.domain, tuple(self.records())))

    def __repr__(self) -> str:
        return f"BiderTensor(dim={self.dim}, mode={self.mode.value}, nnz={len(self.entries())})"


class UnknownLayout:
    """Column numbering of the unknowns d_ab^k for a window of arguments.

    Pairs are reduced by symmetry class before elimination: a ≤ b for sym, a < b for skew,
    every ordered pair for full. Values range over all `n_values` coordinates.
    """

    def __init__(self, args: Sequence[int], n_values: int, mode: BiderMode) -> None:
        self.args = tuple(args)
        self.n_values = n_values
        self.mode = mode
        self.position = {a: p for p, a in enumerate(self.args)}
        if mode is BiderMode.FULL:
            pairs = [(a, b) for a in self.args for b in self.args]
        elif mode is BiderMode.SYMMETRIC:
            pairs = list(itertools.combinations_with_replacement(self.args, 2))
        else:
            pairs = list(itertools.combinations(self.args, 2))
        self.pairs: Tuple[Tuple[int, int], ...] = tuple(pairs)
        self._pair_index = {pair: index for index, pair in enumerate(self.pairs)}

    @property
    def n_unknowns(self) -> int:
        return len(self.pairs) * self.n_values

    def column(self, a: int, b: int, k: int) -> Optional[Tuple[int, int]]:
        """(column, sign) of d_ab^k, or None when the entry is forced to zero."""
        if self.mode is BiderMode.FULL:
            return self._pair_index[(a, b)] * self.n_values + k, 1
        if a == b and self.mode is BiderMode.SKEW:
            return None
        if self.position[a] <= self.position[b]:
            return self._pair_index[(a, b)] * self.n_values + k, 1
        sign = -1 if self.mode is BiderMode.SKEW else 1
        return self._pair_index[(b, a)] * self.n_values + k, sign

    def tensor(self, vector: VectorExact, dim: int) -> BiderTensor:
        """Expands a vector of unknowns into a full tensor on a dim-dimensional algebra."""
        domain = vector.domain
        pairs: Dict[Tuple[int, int], Row] = defaultdict(dict)
        for col, value in vector.items():
            index, k = divmod(col, self.n_values)
            a, b = self.pairs[index]
            pairs[(a, b)][k] = value
            if a != b and self.mode is BiderMode.SYMMETRIC:
                pairs[(b, a)][k] = value
            elif a != b and self.mode is BiderMode.SKEW:
                pairs[(b, a)][k] = domain.neg(value)
        return BiderTensor._wrap(dim, domain, self.mode, dict(pairs))


class ConstraintSystem(NamedTuple):
    matrix: MatrixExact
    active_instances: int


def _accumulate(
    row: MutableMapping[Any, Scalar], key: Hashable, value: Scalar, domain: ScalarDomain
) -> None:
    total = domain.add(row.get(key, domain.zero), value)
    if total:
        row[key] = total
    else:
        row.pop(key, None)


class _RowBuilder:
    """Rows of one identity instance, keyed by output coordinate."""

    def __init__(self, layout: UnknownLayout, domain: ScalarDomain) -> None:
        self.layout = layout
        self.domain = domain
        self.rows: Dict[int, Row] = {}

    def add(self, k: int, a: int, b: int, m: int, coeff: Scalar) -> None:
        """Adds coeff · d_ab^m to row k."""
        target = self.layout.column(a, b, m)
        if target is None:
            return
        col, sign = target
        value = coeff if sign > 0 else self.domain.neg(coeff)
        _accumulate(self.rows.setdefault(k, {}), col, value, self.domain)

    def finish(self) -> List[Row]:
        return [self.rows[k] for k in sorted(self.rows) if self.rows[k]]


AdTable = Dict[int, List[Tuple[int, Mapping[int, Scalar]]]]


def _in_window(layout: UnknownLayout, product: Optional[Mapping[int, Scalar]]) -> bool:
    return product is not None and all(l in layout.position for l in product)


def _instance_rows(
    layout: UnknownLayout, oracle: BracketOracle, ad: AdTable, domain: ScalarDomain, x: int
) -> Tuple[List[Row], int]:
    produced: List[Row] = []
    active = 0
    for y in layout.args:
        xy = oracle(x, y)
        first_active = _in_window(layout, xy)
        for z in layout.args:
            if first_active and xy is not None:
                # δ([x,y],z) − [x,δ(y,z)] + [y,δ(x,z)]
                active += 1
                builder = _RowBuilder(layout, domain)
                for l, c in xy.items():
                    for k in range(layout.n_values):
                        builder.add(k, l, z, k, c)
                for m, image in ad[x]:
                    for k, c in image.items():
                        builder.add(k, y, z, m, domain.neg(c))
                for m, image in ad[y]:
                    for k, c in image.items():
                        builder.add(k, x, z, m, c)
                produced.extend(builder.finish())

            yz = oracle(y, z)
            if _in_window(layout, yz) and yz is not None:
                # δ(x,[y,z]) + [z,δ(x,y)] − [y,δ(x,z)]
                active += 1
                builder = _RowBuilder(layout, domain)
                for l, c in yz.items():
                    for k in range(layout.n_values):
                        builder.add(k, x, l, k, c)
                for m, image in ad[z]:
                    for k, c in image.items():
                        builder.add(k, x, y, m, c)
                for m, image in ad[y]:
                    for k, c in image.items():
                        builder.add(k, x, z, m, domain.neg(c))
                produced.extend(builder.finish())
    return produced, active


def _monic_key(row: Row, domain: ScalarDomain) -> Tuple[Tuple[int, Scalar], ...]:
    lead = min(row)
    scale = domain.inv(row[lead])
    return tuple(sorted((col, domain.mul(value, scale)) for col, value in row.items()))


def assemble_constraints(
    layout: UnknownLayout, oracle: BracketOracle, domain: ScalarDomain, threads: int = 1
) -> ConstraintSystem:
    """Instantiates both biderivation identities on every triple of window arguments.

    An instance is imposed only when the bracket it differentiates, [x,y] or [y,z], is known
    and lies inside the window. Ad terms the oracle reports as overflowing (None) are skipped.
    Rows are generated per first argument, merged in argument order, then made monic and
    deduplicated, so the matrix does not depend on `threads`.

    Args:
        layout: the unknowns
        oracle: basis bracket lookup, None when the bracket leaves the model
        domain: the ground field
        threads: worker threads for row generation

    Returns:
        The constraint matrix and the number of imposed identity instances
    """
    ad: AdTable = {}
    for a in layout.args:
        ad[a] = []
        for m in range(layout.n_values):
            image = oracle(a, m)
            if image:
                ad[a].append((m, image))

    results = parallel_map(
        lambda x: _instance_rows(layout, oracle, ad, domain, x), layout.args, threads
    )

    seen: Dict[Tuple[Tuple[int, Scalar], ...], None] = {}
    active = 0
    for produced, count in results:
        active += count
        for row in produced:
            seen.setdefault(_monic_key(row, domain), None)
    rows = {index: dict(key) for index, key in enumerate(seen)}
    matrix = MatrixExact(len(rows), layout.n_unknowns, rows, domain)
    logger.debug(
        f"{layout.mode.value} system: {active} instances, {matrix.n_rows} rows, "
        f"{matrix.n_cols} unknowns"
    )
    return ConstraintSystem(matrix, active)


def algebra_oracle(L: LieAlgebra) -> BracketOracle:
    table = L.bracket_table()
    return lambda i, j: table[i].get(j, {})


def biderivation_system(L: LieAlgebra, mode: BiderMode, threads: int = 1) -> MatrixExact:
    """Constraint matrix whose right kernel, reshaped, is the biderivation space.

    Raises:
        ModeUnavailableError: for sym or skew in characteristic 2
    """
    check_mode(L.domain, mode)
    layout = UnknownLayout(range(L.dim), L.dim, mode)
    return assemble_constraints(layout, algebra_oracle(L), L.domain, threads).matrix


@dataclass(frozen=True, eq=False)
class BiderSolutionSpace:
    """Canonical basis of a biderivation space: RREF rows of the flattened tensors."""

    fingerprint: str
    mode: BiderMode
    dim: int
    domain: ScalarDomain
    basis: Tuple[BiderTensor, ...]
    span: Subspace

    @property
    def dim_solution(self) -> int:
        return len(self.basis)

    def contains(self, d: BiderTensor) -> bool:
        if (d.dim, d.domain) != (self.dim, self.domain):
            return False
        return self.span.contains(d.flatten())


def solution_space(
    fingerprint: str, dim: int, domain: ScalarDomain, layout: UnknownLayout, matrix: MatrixExact
) -> BiderSolutionSpace:
    """Reshapes the kernel of a constraint matrix into canonical tensors."""
    tensors = (layout.tensor(v, dim) for v in kernel_basis(matrix))
    span = Subspace.span((t.flatten() for t in tensors), dim**3, domain)
    basis = tuple(BiderTensor.from_flat(v, dim, layout.mode) for v in span.vectors())
    return BiderSolutionSpace(fingerprint, layout.mode, dim, domain, basis, span)


def biderivation_space(L: LieAlgebra, mode: BiderMode, threads: int = 1) -> BiderSolutionSpace:
    """Biderivations of L in the given mode.

    Raises:
        ModeUnavailableError: for sym or skew in characteristic 2
    """
    check_mode(L.domain, mode)
    layout = UnknownLayout(range(L.dim), L.dim, mode)
    system = assemble_constraints(layout, algebra_oracle(L), L.domain, threads)
    space = solution_space(L.fingerprint, L.dim, L.domain, layout, system.matrix)
    logger.info(f"{mode.value} biderivations of {L!r}: dim {space.dim_solution}")
    return space


@dataclass(frozen=True)
class DerivationMatrix:
    matrix: MatrixExact

    def apply(self, v: VectorExact) -> VectorExact:
        return self.matrix @ v

    def flatten(self) -> VectorExact:
        """Entry (k, j) of the matrix sits at index j·n + k."""
        n = self.matrix.n_cols
        return VectorExact(
            n * n, {j * n + k: v for k, j, v in self.matrix.entries()}, self.matrix.domain
        )


def derivation_system(L: LieAlgebra) -> MatrixExact:
    """Leibniz constraints D[b_a,b_b] = [Db_a,b_b] + [b_a,Db_b] for a < b.

    The unknown D_kj (coefficient of b_k in D b_j) is column j·n + k.
    """
    n, domain = L.dim, L.domain
    table = L.bracket_table()
    rows: List[Row] = []
    for a in range(n):
        for b in range(a + 1, n):
            pair_rows: Dict[int, Row] = defaultdict(dict)
            for l, c in table[a].get(b, {}).items():
                for k in range(n):
                    _accumulate(pair_rows[k], l * n + k, c, domain)
            for m, image in table[b].items():
                for k, c in image.items():
                    _accumulate(pair_rows[k], a * n + m, c, domain)
            for m, image in table[a].items():
                for k, c in image.items():
                    _accumulate(pair_rows[k], b * n + m, domain.neg(c), domain)
            rows.extend(pair_rows[k] for k in sorted(pair_rows) if pair_rows[k])
    return MatrixExact(len(rows), n * n, dict(enumerate(rows)), domain)


def derivation_space(L: LieAlgebra) -> List[DerivationMatrix]:
    """Canonical basis of Der(L), in free-column order of the Leibniz system."""
    n = L.dim
    derivations = []
    for vector in kernel_basis(derivation_system(L)):
        entries = []
        for index, value in vector.items():
            j, k = divmod(index, n)
            entries.append((k, j, value))
        derivations.append(DerivationMatrix(MatrixExact.from_entries(n, n, entries, L.domain)))
    logger.debug(f"derivations of {L!r}: dim {len(derivations)}")
    return derivations


def is_derivation(L: LieAlgebra, d: DerivationMatrix) -> bool:
    images = d.matrix.columns()
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            lhs = d.apply(VectorExact(L.dim, L.basis_bracket(i, j), L.domain))
            rhs = bracket(L, images[i], L.basis_vector(j)) + bracket(
                L, L.basis_vector(i), images[j]
            )
            if lhs != rhs:
                return False
    return True


def inner_derivations(L: LieAlgebra) -> Tuple[Subspace, int]:
    """span{ad b_i} in flattened coordinates, and dim Der(L) minus its dimension."""
    inner = Subspace.span(
        (DerivationMatrix(ad_matrix(L, L.basis_vector(i))).flatten() for i in range(L.dim)),
        L.dim * L.dim,
        L.domain,
    )
    return inner, len(derivation_space(L)) - inner.dim


def _check_tensor(L: LieAlgebra, d: BiderTensor) -> None:
    if (d.dim, d.domain) != (L.dim, L.domain):
        raise ModeMismatchError(f"tensor of dimension {d.dim} over {d.domain} does not fit {L!r}")


def apply_biderivation(d: BiderTensor, x: VectorExact, y: VectorExact) -> VectorExact:
    """Bilinear extension δ(x, y) = Σ x_i y_j δ(b_i, b_j)."""
    if x.length != d.dim or y.length != d.dim:
        raise ModeMismatchError(f"arguments must have length {d.dim}")
    domain = d.domain
    result: Row = {}
    for i, xi in x.items():
        for j, yj in y.items():
            row = d.pair_row(i, j)
            if not row:
                continue
            weight = domain.mul(xi, yj)
            for k, v in row.items():
                _accumulate(result, k, domain.mul(weight, v), domain)
    return VectorExact(d.dim, result, domain)


def biderivation_defects(
    L: LieAlgebra, d: BiderTensor, x: VectorExact, y: VectorExact, z: VectorExact
) -> Tuple[VectorExact, VectorExact]:
    """Residuals of both biderivation identities at (x, y, z)."""
    xz = apply_biderivation(d, x, z)
    first = (
        apply_biderivation(d, bracket(L, x, y), z)
        - bracket(L, x, apply_biderivation(d, y, z))
        + bracket(L, y, xz)
    )
    second = (
        apply_biderivation(d, x, bracket(L, y, z))
        - bracket(L, apply_biderivation(d, x, y), z)
        - bracket(L, y, xz)
    )
    return first, second


def is_biderivation(L: LieAlgebra, d: BiderTensor) -> bool:
    _check_tensor(L, d)
    basis = [L.basis_vector(i) for i in range(L.dim)]
    for x, y, z in itertools.product(basis, repeat=3):
        first, second = biderivation_defects(L, d, x, y, z)
        if not (first.is_zero() and second.is_zero()):
            return False
    return True


def cyclic_defect(
    L: LieAlgebra, d: BiderTensor, x: VectorExact, y: VectorExact, z: VectorExact
) -> VectorExact:
    """δ(x,[y,z]) + δ(y,[z,x]) + δ(z,[x,y]), zero for symmetric biderivations.

    Raises:
        ModeMismatchError: if d is not symmetric
    """
    if d.mode is not BiderMode.SYMMETRIC:
        raise ModeMismatchError("cyclic identity applies to symmetric tensors only")
    return (
        apply_biderivation(d, x, bracket(L, y, z))
        + apply_biderivation(d, y, bracket(L, z, x))
        + apply_biderivation(d, z, bracket(L, x, y))
    )


def twist(L: LieAlgebra, d: BiderTensor, sigma: AutomorphismMatrix) -> BiderTensor:
    """δ_σ(x, y) = σ δ(σ⁻¹x, σ⁻¹y).

    Raises:
        NotAutomorphismError: if sigma does not preserve the brackets of L
    """
    _check_tensor(L, d)
    if not is_automorphism(L, sigma.matrix):
        raise NotAutomorphismError(f"twist needs an automorphism of {L!r}")
    preimages = sigma.inverse().matrix.columns()
    pairs: Dict[Tuple[int, int], Row] = {}
    for i in range(L.dim):
        for j in range(L.dim):
            value = sigma.apply(apply_biderivation(d, preimages[i], preimages[j]))
            if not value.is_zero():
                pairs[(i, j)] = value.entries
    return BiderTensor._wrap(L.dim, L.domain, d.mode, pairs)


def span_is_twist_stable(
    L: LieAlgebra, space: BiderSolutionSpace, sigma: AutomorphismMatrix
) -> bool:
    """Whether twisting by sigma maps the solution space onto itself."""
    twisted = Subspace.span(
        (twist(L, d, sigma).flatten() for d in space.basis), space.dim**3, space.domain
    )
    return twisted == space.span


def inner_tensor(L: LieAlgebra) -> BiderTensor:
    """The skew biderivation δ(x, y) = [x, y]."""
    pairs: Dict[Tuple[int, int], Row] = {}
    for (i, j), row in L.constants.items():
        pairs[(i, j)] = row
        pairs[(j, i)] = {k: L.domain.neg(v) for k, v in row.items()}
    return BiderTensor._wrap(L.dim, L.domain, BiderMode.SKEW, pairs)


@dataclass(frozen=True, eq=False)
class RadicalResult:
    radical: Subspace
    # basis index outside the radical -> (solution index, partner index) with δ(b_a, b_j) ≠ 0
    witnesses: Dict[int, Tuple[int, int]]
    space: BiderSolutionSpace


def symmetric_radical(
    L: LieAlgebra, space: Optional[BiderSolutionSpace] = None, threads: int = 1
) -> RadicalResult:
    """Common kernel of x ↦ δ(x, b_j) over every symmetric solution δ and every j."""
    space = space or biderivation_space(L, BiderMode.SYMMETRIC, threads)
    rows: Dict[Tuple[int, int, int], Row] = defaultdict(dict)
    witnesses: Dict[int, Tuple[int, int]] = {}
    for s, d in enumerate(space.basis):
        for (a, j), row in d.pairs():
            witnesses.setdefault(a, (s, j))
            for k, v in row.items():
                rows[(s, j, k)][a] = v

    ordered = {index: rows[key] for index, key in enumerate(sorted(rows))}
    matrix = MatrixExact(len(ordered), L.dim, ordered, L.domain)
    radical = Subspace.span(kernel_basis(matrix), L.dim, L.domain)
    logger.info(f"symmetric radical of {L!r}: dim {radical.dim}")
    return RadicalResult(radical, dict(sorted(witnesses.items())), space)


@dataclass(frozen=True)
class PropertyReport:
    subalgebra: bool
    stable: Tuple[bool, ...]
    is_ideal: bool
    annihilated: bool

    @property
    def passed(self) -> bool:
        """Bracket closure, stability and annihilation; being an ideal is recorded only."""
        return self.subalgebra and all(self.stable) and self.annihilated


def radical_properties(
    L: LieAlgebra, r: RadicalResult, automorphisms: Iterable[AutomorphismMatrix] = ()
) -> PropertyReport:
    radical = r.radical
    annihilated = all(
        apply_biderivation(d, v, L.basis_vector(j)).is_zero()
        for v in radical.vectors()
        for d in r.space.basis
        for j in range(L.dim)
    )
    return PropertyReport(
        subalgebra=is_subalgebra(L, radical),
        stable=tuple(radical.image(sigma.matrix) == radical for sigma in automorphisms),
        is_ideal=is_ideal(L, radical),
        annihilated=annihilated,
    )


class WeightDefect(NamedTuple):
    weights: Tuple[Weight, Weight]
    x: VectorExact
    y: VectorExact
    value: VectorExact


def _centralizer_in(L: LieAlgebra, x: VectorExact, space: Subspace) -> List[VectorExact]:
    """Basis of the vectors y of `space` with [x, y] = 0."""
    basis = space.vectors()
    images = MatrixExact.from_columns([bracket(L, x, y) for y in basis], L.dim, L.domain)
    found = []
    for coords in kernel_basis(images):
        y = VectorExact.zero(L.dim, L.domain)
        for index, c in coords.items():
            y = y + basis[index].scale(c)
        found.append(y)
    return found


def _sample(space: Subspace, rng: random.Random) -> VectorExact:
    vector = VectorExact.zero(space.ambient_dim, space.domain)
    for basis_vector in space.vectors():
        vector = vector + basis_vector.scale(rng.randint(-3, 3))
    return vector


def weight_vanishing_defects(
    L: LieAlgebra,
    d: BiderTensor,
    decomposition: WeightDecomposition,
    rng: Optional[random.Random] = None,
    samples: int = 2,
) -> List[WeightDefect]:
    """Weight vectors x, y of different weights that commute but have δ(x, y) ≠ 0.

    For every x tried, δ(x, ·) is checked on the whole centralizer of x in the other weight
    space. The x tried are the basis of each weight space, plus `samples` random combinations
    of it when `rng` is given and the space has dimension above one.
    """
    defects = []
    for (alpha, first), (beta, second) in itertools.permutations(decomposition.spaces, 2):
        candidates = first.vectors()
        if rng is not None and first.dim > 1:
            candidates += [_sample(first, rng) for _ in range(samples)]
        for x in candidates:
            if x.is_zero():
                continue
            for y in _centralizer_in(L, x, second):
                value = apply_biderivation(d, x, y)
                if not value.is_zero():
                    defects.append(WeightDefect((alpha, beta), x, y, value))
    return defects


class PairingCheck(NamedTuple):
    stated: bool
    flipped: bool


def root_pairing_identities(
    L: LieAlgebra,
    d: BiderTensor,
    e: VectorExact,
    f: VectorExact,
    h_alpha: VectorExact,
    h: VectorExact,
    alpha_h: Scalar,
) -> PairingCheck:
    """Evaluates δ(h_α, h) = −2α(h)δ(e_α, f_α) and its sign-flipped form.

    Taking h = h_α (α(h_α) = 2) gives δ(h_α, h_α) = −4δ(e_α, f_α).
    """
    domain = L.domain
    lhs = apply_biderivation(d, h_alpha, h)
    pairing = apply_biderivation(d, e, f)
    factor = domain.mul(domain.convert(2), alpha_h)
    return PairingCheck(
        stated=lhs == pairing.scale(domain.neg(factor)),
        flipped=lhs == pairing.scale(factor),
    )


class PostLieVerdict(str, Enum):
    """Enum for the outcome of the post-Lie classification."""

    TRIVIAL_ONLY = "trivial-only"
    NONTRIVIAL_FOUND = "nontrivial-found"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class QuadraticPolynomial:
    """Σ a_s t_s + Σ a_st t_s t_t, monic in its leading term."""

    domain: ScalarDomain
    linear: Tuple[Tuple[int, Scalar], ...]
    quadratic: Tuple[Tuple[Tuple[int, int], Scalar], ...]

    @classmethod
    def build(
        cls,
        domain: ScalarDomain,
        linear: Mapping[int, Scalar],
        quadratic: Mapping[Tuple[int, int], Scalar],
    ) -> Optional["QuadraticPolynomial"]:
        """Normalized polynomial, or None when every coefficient vanishes."""
        lin = sorted((s, c) for s, c in linear.items() if c)
        quad = sorted((st, c) for st, c in quadratic.items() if c)
        if not lin and not quad:
            return None
        scale = domain.inv(quad[0][1] if quad else lin[0][1])
        return cls(
            domain,
            tuple((s, domain.mul(c, scale)) for s, c in lin),
            tuple((st, domain.mul(c, scale)) for st, c in quad),
        )

    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        domain = self.domain
        total = domain.zero
        for s, c in self.linear:
            total = domain.add(total, domain.mul(c, point[s]))
        for (s, t), c in self.quadratic:
            total = domain.add(total, domain.mul(c, domain.mul(point[s], point[t])))
        return total


@dataclass(frozen=True, eq=False)
class PostLieReport:
    param_dim: int
    system: Tuple[QuadraticPolynomial, ...]
    verdict: PostLieVerdict
    points: Tuple[Tuple[Scalar, ...], ...]
    # how the verdict was reached: no-parameters, identically-zero, enumeration, grid, emitted
    method: str
    space: BiderSolutionSpace


def postlie_system(L: LieAlgebra, space: BiderSolutionSpace) -> Tuple[QuadraticPolynomial, ...]:
    """Coordinates of [x,y]·z − x·(y·z) + y·(x·z) for x·y = Σ t_s δ_s(x, y), basis x < y.

    Each coordinate is a polynomial of degree at most 2 in the parameters t_s; zero
    polynomials are dropped and the rest deduplicated in generation order.
    """
    domain, n = L.domain, L.dim
    basis = space.basis
    table = L.bracket_table()
    seen: Dict[QuadraticPolynomial, None] = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                linear: Dict[int, Row] = defaultdict(dict)
                quadratic: Dict[int, Dict[Tuple[int, int], Scalar]] = defaultdict(dict)
                for l, c in table[i].get(j, {}).items():
                    for s, d_s in enumerate(basis):
                        for r, v in d_s.pair_row(l, k).items():
                            _accumulate(linear[r], s, domain.mul(c, v), domain)
                for s, d_s in enumerate(basis):
                    for t, d_t in enumerate(basis):
                        key = (min(s, t), max(s, t))
                        for b, w in d_t.pair_row(j, k).items():
                            for r, v in d_s.pair_row(i, b).items():
                                product = domain.neg(domain.mul(w, v))
                                _accumulate(quadratic[r], key, product, domain)
                        for b, w in d_t.pair_row(i, k).items():
                            for r, v in d_s.pair_row(j, b).items():
                                _accumulate(quadratic[r], key, domain.mul(w, v), domain)
                for r in sorted(set(linear) | set(quadratic)):
                    poly = QuadraticPolynomial.build(domain, linear[r], quadratic[r])
                    if poly is not None:
                        seen.setdefault(poly, None)
    return tuple(seen)


def tensor_from_parameters(space: BiderSolutionSpace, point: Sequence[Scalar]) -> BiderTensor:
    """Σ point_s · basis_s."""
    if len(point) != space.dim_solution:
        raise ValueError(f"expected {space.dim_solution} parameters, got {len(point)}")
    result = BiderTensor.zero(space.dim, space.domain, space.mode)
    for value, d in zip(point, space.basis):
        result = result + d.scale(value)
    return result


def _points_with_first(
    system: Sequence[QuadraticPolynomial], values: Sequence[Scalar], m: int, first: Scalar
) -> List[Tuple[Scalar, ...]]:
    found = []
    for rest in itertools.product(values, repeat=m - 1):
        point = (first, *rest)
        if not any(point):
            continue
        if all(not poly.evaluate(point) for poly in system):
            found.append(point)
    return found


def postlie_classify(
    L: LieAlgebra,
    enumerate_over_field: bool = True,
    enumeration_limit: int = ENUMERATION_LIMIT,
    grid_radius: int = RATIONAL_GRID_RADIUS,
    threads: int = 1,
    space: Optional[BiderSolutionSpace] = None,
) -> PostLieReport:
    """Classifies commutative post-Lie products on L.

    Every such product is a symmetric biderivation, so only the symmetric solution space is
    parametrized. Over F_p with p^m within the limit every parameter point is tried; over Q
    the integer grid {-r..r}^m is point-checked, which can find solutions but never rule
    them out.

    Args:
        L: the algebra
        enumerate_over_field: whether to search parameter points at all
        enumeration_limit: maximum number of points to try
        grid_radius: r for the rational grid
        threads: worker threads for the search
        space: a precomputed symmetric solution space of L

    Returns:
        The report with the emitted system, the verdict and any nonzero solutions found
    """
    space = space or biderivation_space(L, BiderMode.SYMMETRIC, threads)
    m = space.dim_solution
    if m == 0:
        return PostLieReport(0, (), PostLieVerdict.TRIVIAL_ONLY, (), "no-parameters", space)

    domain = L.domain
    system = postlie_system(L, space)
    if not system:
        units = tuple(
            tuple(domain.one if s == t else domain.zero for t in range(m)) for s in range(m)
        )
        return PostLieReport(
            m, system, PostLieVerdict.NONTRIVIAL_FOUND, units, "identically-zero", space
        )

    if domain.is_rational:
        values = [domain.convert(v) for v in range(-grid_radius, grid_radius + 1)]
        method = "grid"
    else:
        values = list(range(domain.characteristic))
        method = "enumeration"
    if not enumerate_over_field or len(values) ** m > enumeration_limit:
        return PostLieReport(m, system, PostLieVerdict.UNDECIDED, (), "emitted", space)

    # chunks come back in value order, so points are lexicographic
    found = parallel_map(
        lambda first: _points_with_first(system, values, m, first), values, threads
    )
    points = tuple(p for chunk in found for p in chunk)
    logger.info(f"post-Lie search on {L!r}: {len(points)} nonzero points by {method}")
    if points:
        verdict = PostLieVerdict.NONTRIVIAL_FOUND
    elif domain.is_rational:
        verdict = PostLieVerdict.UNDECIDED
    else:
        verdict = PostLieVerdict.TRIVIAL_ONLY
    return PostLieReport(m, system, verdict, points, method, space)


def is_postlie(L: LieAlgebra, d: BiderTensor) -> bool:
    """Whether x·y = δ(x, y) is a commutative post-Lie product.

    Raises:
        ModeMismatchError: if d is not symmetric
    """
    if d.mode is not BiderMode.SYMMETRIC:
        raise ModeMismatchError("post-Lie products are checked on symmetric tensors only")
    if not is_biderivation(L, d):
        return False
    basis = [L.basis_vector(i) for i in range(L.dim)]
    for i, j in itertools.combinations(range(L.dim), 2):
        x, y = basis[i], basis[j]
        for z in basis:
            residual = (
                apply_biderivation(d, bracket(L, x, y), z)
                - apply_biderivation(d, x, apply_biderivation(d, y, z))
                + apply_biderivation(d, y, apply_biderivation(d, x, z))
            )
            if not residual.is_zero():
                return False
    return True
