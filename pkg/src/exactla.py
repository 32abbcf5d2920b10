#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.

"""Exact scalars over Q and F_p, and sparse exact linear algebra.

Rational scalars are `fractions.Fraction` values, which are always kept in lowest terms with a
positive denominator. Prime-field scalars are plain `int` residues in `[0, p)`.
"""

import logging
import re
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import (
    Dict,
    Iterable,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from sympy import isprime

from literals import MAX_PRIME

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, int]
Row = Dict[int, Scalar]

SCALAR_PATTERN = re.compile(r"(-?[0-9]+)(?:/([0-9]+))?")
FIELD_PATTERN = re.compile(r"(?:prime:|F|GF)([0-9]+)")


class ExactArithmeticError(Exception):
    """Base class for errors raised by exact arithmetic."""

    def __repr__(self):
        """String representation of the error."""
        return f"<{type(self).__module__}.{type(self).__name__} {self.args}>"

    @property
    def message(self) -> str:
        """Return the message passed as an argument."""
        return self.args[0] if self.args else ""


class MalformedScalarError(ExactArithmeticError):
    """Scalar text does not match `-?digits(/digits)?`."""


class ZeroDenominatorError(ExactArithmeticError):
    """Scalar text has a zero denominator."""


class DomainMismatchError(ExactArithmeticError):
    """Value or operand does not belong to the expected domain."""


class InvalidDomainError(ExactArithmeticError):
    """Domain parameters are not acceptable."""


class SingularMatrixError(ExactArithmeticError):
    """Matrix is not invertible, or a system has no unique solution."""


class InconsistentSystemError(ExactArithmeticError):
    """Linear system has no solution."""


class DomainKind(str, Enum):
    """Kinds of scalar domain."""

    RATIONAL = "rational"
    PRIME = "prime"


@dataclass(frozen=True)
class ScalarDomain:
    """An exact field: the rationals or a prime field F_p with p < 2^31."""

    kind: DomainKind
    p: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind == DomainKind.PRIME:
            if self.p is None or not 2 <= self.p < MAX_PRIME or not isprime(self.p):
                raise InvalidDomainError(f"modulus must be a prime below 2^31, got {self.p}")
        elif self.p is not None:
            raise InvalidDomainError("the rational domain takes no modulus")

    @classmethod
    def rational(cls) -> "ScalarDomain":
        return cls(DomainKind.RATIONAL)

    @classmethod
    def prime(cls, p: int) -> "ScalarDomain":
        return cls(DomainKind.PRIME, p)

    @classmethod
    def from_spec(cls, spec: str) -> "ScalarDomain":
        """Parses a field descriptor.

        Accepted forms are `rational`, `Q`, `prime:7`, `F7` and `GF7`.

        Raises:
            InvalidDomainError: if the descriptor is not recognised or the modulus is not prime
        """
        text = spec.strip()
        if text.lower() in ("rational", "q", "qq"):
            return cls.rational()

        match = FIELD_PATTERN.fullmatch(text)
        if not match:
            raise InvalidDomainError(f"unrecognised field descriptor {spec!r}")

        return cls.prime(int(match.group(1)))

    @property
    def is_rational(self) -> bool:
        return self.kind == DomainKind.RATIONAL

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def theorem_scope(self) -> bool:
        """Whether the characteristic lies outside {2, 3}."""
        return self.characteristic not in (2, 3)

    @property
    def spec(self) -> str:
        return "rational" if self.p is None else f"prime:{self.p}"

    def __str__(self) -> str:
        return "Q" if self.p is None else f"F{self.p}"

    @property
    def zero(self) -> Scalar:
        return Fraction(0) if self.p is None else 0

    @property
    def one(self) -> Scalar:
        return Fraction(1) if self.p is None else 1

    def convert(self, value: Union[int, Fraction]) -> Scalar:
        """Maps an integer or rational into the domain.

        Raises:
            DomainMismatchError: if a denominator is not invertible mod p
        """
        if self.p is None:
            return Fraction(value)

        if isinstance(value, Fraction):
            denominator = value.denominator % self.p
            if not denominator:
                raise DomainMismatchError(f"{value} has no image in F{self.p}")
            return value.numerator * pow(denominator, -1, self.p) % self.p

        return int(value) % self.p

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a: Scalar) -> Scalar:
        return -a if self.p is None else (-a) % self.p

    def inv(self, a: Scalar) -> Scalar:
        if not a:
            raise ZeroDivisionError("zero has no inverse")
        return 1 / Fraction(a) if self.p is None else pow(a, -1, self.p)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def power(self, a: Scalar, k: int) -> Scalar:
        return a**k if self.p is None else pow(a, k, self.p)

    def factorial_invertible(self, m: int) -> bool:
        """Whether m! is a unit of the domain."""
        return self.p is None or m < self.p

    def sort_key(self, a: Scalar) -> Union[Fraction, int]:
        return a

    def parse(self, text: str) -> Scalar:
        return parse_scalar(text, self)

    def format(self, value: Scalar) -> str:
        return format_scalar(value, self)


def parse_scalar(text: str, domain: ScalarDomain) -> Scalar:
    """Parses canonical scalar text into the domain.

    Args:
        text: the scalar text, `-?digits(/digits)?`
        domain: the target domain

    Returns:
        The canonical scalar

    Raises:
        MalformedScalarError: if the text does not match the scalar pattern
        ZeroDenominatorError: if the denominator is zero
        DomainMismatchError: if the value does not reduce into the domain
    """
    match = SCALAR_PATTERN.fullmatch(text)
    if not match:
        raise MalformedScalarError(f"malformed scalar {text!r}")

    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if not denominator:
        raise ZeroDenominatorError(f"zero denominator in {text!r}")

    return domain.convert(Fraction(numerator, denominator))


def format_scalar(value: Scalar, domain: ScalarDomain) -> str:
    """Prints a scalar in the canonical text form."""
    if domain.p is not None:
        return str(int(value) % domain.p)

    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _axpy(target: Row, source: Mapping[int, Scalar], factor: Scalar, p: Optional[int]) -> None:
    """In place target += factor * source, dropping entries that cancel."""
    for col, value in source.items():
        current = target.get(col)
        if current is None:
            target[col] = factor * value if p is None else factor * value % p
            continue

        updated = current + factor * value
        if p is not None:
            updated %= p
        if updated:
            target[col] = updated
        else:
            del target[col]


def _clean(entries: Mapping[int, Scalar], length: int, domain: ScalarDomain) -> Row:
    row: Row = {}
    for index, value in entries.items():
        if not 0 <= index < length:
            raise IndexError(f"index {index} out of range for length {length}")
        converted = domain.convert(value)
        if converted:
            row[index] = converted
    return row


class VectorExact:
    """Immutable sparse vector. Zero entries are never stored."""

    __slots__ = ("length", "domain", "_entries")

    def __init__(self, length: int, entries: Mapping[int, Scalar], domain: ScalarDomain) -> None:
        self.length = length
        self.domain = domain
        self._entries = _clean(entries, length, domain)

    @classmethod
    def _wrap(cls, length: int, entries: Row, domain: ScalarDomain) -> "VectorExact":
        vector = cls.__new__(cls)
        vector.length = length
        vector.domain = domain
        vector._entries = entries
        return vector

    @classmethod
    def zero(cls, length: int, domain: ScalarDomain) -> "VectorExact":
        return cls._wrap(length, {}, domain)

    @classmethod
    def unit(cls, length: int, index: int, domain: ScalarDomain) -> "VectorExact":
        return cls(length, {index: 1}, domain)

    @classmethod
    def from_dense(cls, values: Sequence[Union[int, Fraction]], domain: ScalarDomain):
        return cls(len(values), dict(enumerate(values)), domain)

    @property
    def entries(self) -> Row:
        return dict(self._entries)

    def items(self) -> List[Tuple[int, Scalar]]:
        return sorted(self._entries.items())

    def support(self) -> List[int]:
        return sorted(self._entries)

    def __getitem__(self, index: int) -> Scalar:
        return self._entries.get(index, self.domain.zero)

    def __len__(self) -> int:
        return self.length

    def is_zero(self) -> bool:
        return not self._entries

    def to_dense(self) -> List[Scalar]:
        return [self[i] for i in range(self.length)]

    def _check(self, other: "VectorExact") -> None:
        if self.length != other.length or self.domain != other.domain:
            raise DomainMismatchError(
                f"vectors of length {self.length} over {self.domain} and "
                f"{other.length} over {other.domain} do not combine"
            )

    def __add__(self, other: "VectorExact") -> "VectorExact":
        self._check(other)
        entries = dict(self._entries)
        _axpy(entries, other._entries, 1, self.domain.p)
        return VectorExact._wrap(self.length, entries, self.domain)

    def __sub__(self, other: "VectorExact") -> "VectorExact":
        self._check(other)
        entries = dict(self._entries)
        _axpy(entries, other._entries, -1, self.domain.p)
        return VectorExact._wrap(self.length, entries, self.domain)

    def __neg__(self) -> "VectorExact":
        return self.scale(-1)

    def scale(self, factor: Union[int, Fraction]) -> "VectorExact":
        factor = self.domain.convert(factor)
        if not factor:
            return VectorExact.zero(self.length, self.domain)
        entries = {i: self.domain.mul(v, factor) for i, v in self._entries.items()}
        return VectorExact._wrap(self.length, entries, self.domain)

    def dot(self, other: "VectorExact") -> Scalar:
        self._check(other)
        total = self.domain.zero
        for index, value in self._entries.items():
            if index in other._entries:
                total = self.domain.add(total, self.domain.mul(value, other._entries[index]))
        return total

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VectorExact):
            return NotImplemented
        return (
            self.length == other.length
            and self.domain == other.domain
            and self._entries == other._entries
        )

    def __hash__(self) -> int:
        return hash((self.length, self.domain, frozenset(self._entries.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{i}: {format_scalar(v, self.domain)}" for i, v in self.items())
        return f"VectorExact({self.length}, {{{body}}}, {self.domain})"


class MatrixExact:
    """Immutable sparse matrix stored as rows of column -> scalar maps."""

    __slots__ = ("n_rows", "n_cols", "domain", "_rows")

    def __init__(
        self,
        n_rows: int,
        n_cols: int,
        rows: Mapping[int, Mapping[int, Scalar]],
        domain: ScalarDomain,
    ) -> None:
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.domain = domain
        self._rows: Dict[int, Row] = {}
        for index, row in rows.items():
            if not 0 <= index < n_rows:
                raise IndexError(f"row {index} out of range for {n_rows} rows")
            cleaned = _clean(row, n_cols, domain)
            if cleaned:
                self._rows[index] = cleaned

    @classmethod
    def _wrap(cls, n_rows: int, n_cols: int, rows: Dict[int, Row], domain: ScalarDomain):
        matrix = cls.__new__(cls)
        matrix.n_rows = n_rows
        matrix.n_cols = n_cols
        matrix.domain = domain
        matrix._rows = {i: row for i, row in rows.items() if row}
        return matrix

    @classmethod
    def from_entries(
        cls,
        n_rows: int,
        n_cols: int,
        entries: Iterable[Tuple[int, int, Union[int, Fraction]]],
        domain: ScalarDomain,
    ) -> "MatrixExact":
        """Builds a matrix from (row, col, value) triples, one per position."""
        rows: Dict[int, Dict[int, Union[int, Fraction]]] = defaultdict(dict)
        for row, col, value in entries:
            if col in rows[row]:
                raise ValueError(f"duplicate entry at ({row}, {col})")
            rows[row][col] = value
        return cls(n_rows, n_cols, rows, domain)

    @classmethod
    def from_dense(
        cls, values: Sequence[Sequence[Union[int, Fraction]]], domain: ScalarDomain
    ) -> "MatrixExact":
        n_cols = len(values[0]) if values else 0
        rows = {i: dict(enumerate(r)) for i, r in enumerate(values)}
        return cls(len(values), n_cols, rows, domain)

    @classmethod
    def from_rows(cls, rows: Sequence[VectorExact], n_cols: int, domain: ScalarDomain):
        entries = {i: dict(v._entries) for i, v in enumerate(rows)}
        return cls._wrap(len(rows), n_cols, entries, domain)

    @classmethod
    def from_columns(cls, columns: Sequence[VectorExact], n_rows: int, domain: ScalarDomain):
        rows: Dict[int, Row] = defaultdict(dict)
        for j, column in enumerate(columns):
            for i, value in column._entries.items():
                rows[i][j] = value
        return cls._wrap(n_rows, len(columns), dict(rows), domain)

    @classmethod
    def identity(cls, n: int, domain: ScalarDomain) -> "MatrixExact":
        return cls._wrap(n, n, {i: {i: domain.one} for i in range(n)}, domain)

    @classmethod
    def zero(cls, n_rows: int, n_cols: int, domain: ScalarDomain) -> "MatrixExact":
        return cls._wrap(n_rows, n_cols, {}, domain)

    def __getitem__(self, position: Tuple[int, int]) -> Scalar:
        row, col = position
        return self._rows.get(row, {}).get(col, self.domain.zero)

    def row(self, index: int) -> VectorExact:
        return VectorExact._wrap(self.n_cols, dict(self._rows.get(index, {})), self.domain)

    def rows(self) -> List[VectorExact]:
        return [self.row(i) for i in range(self.n_rows)]

    def column(self, index: int) -> VectorExact:
        entries = {i: row[index] for i, row in self._rows.items() if index in row}
        return VectorExact._wrap(self.n_rows, entries, self.domain)

    def columns(self) -> List[VectorExact]:
        cols: Dict[int, Row] = defaultdict(dict)
        for i, row in self._rows.items():
            for j, value in row.items():
                cols[j][i] = value
        return [
            VectorExact._wrap(self.n_rows, cols.get(j, {}), self.domain)
            for j in range(self.n_cols)
        ]

    def entries(self) -> List[Tuple[int, int, Scalar]]:
        return [(i, j, v) for i in sorted(self._rows) for j, v in sorted(self._rows[i].items())]

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self._rows.values())

    def is_zero(self) -> bool:
        return not self._rows

    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def to_dense(self) -> List[List[Scalar]]:
        return [[self[i, j] for j in range(self.n_cols)] for i in range(self.n_rows)]

    def transpose(self) -> "MatrixExact":
        rows: Dict[int, Row] = defaultdict(dict)
        for i, row in self._rows.items():
            for j, value in row.items():
                rows[j][i] = value
        return MatrixExact._wrap(self.n_cols, self.n_rows, dict(rows), self.domain)

    def trace(self) -> Scalar:
        total = self.domain.zero
        for i, row in self._rows.items():
            if i in row:
                total = self.domain.add(total, row[i])
        return total

    def __matmul__(self, other):
        if isinstance(other, VectorExact):
            if other.length != self.n_cols or other.domain != self.domain:
                raise DomainMismatchError("matrix and vector do not combine")
            entries: Row = {}
            for i, row in self._rows.items():
                total = self.domain.zero
                for j, value in row.items():
                    if j in other._entries:
                        total = self.domain.add(total, self.domain.mul(value, other._entries[j]))
                if total:
                    entries[i] = total
            return VectorExact._wrap(self.n_rows, entries, self.domain)

        if self.n_cols != other.n_rows or self.domain != other.domain:
            raise DomainMismatchError(
                f"cannot multiply {self.n_rows}x{self.n_cols} by {other.n_rows}x{other.n_cols}"
            )
        rows: Dict[int, Row] = {}
        for i, row in self._rows.items():
            accumulated: Row = {}
            for k, value in row.items():
                if k in other._rows:
                    _axpy(accumulated, other._rows[k], value, self.domain.p)
            rows[i] = accumulated
        return MatrixExact._wrap(self.n_rows, other.n_cols, rows, self.domain)

    def _combine(self, other: "MatrixExact", factor: int) -> "MatrixExact":
        if (self.n_rows, self.n_cols, self.domain) != (other.n_rows, other.n_cols, other.domain):
            raise DomainMismatchError("matrix shapes or domains differ")
        rows = {i: dict(row) for i, row in self._rows.items()}
        for i, row in other._rows.items():
            target = rows.setdefault(i, {})
            _axpy(target, row, factor, self.domain.p)
        return MatrixExact._wrap(self.n_rows, self.n_cols, rows, self.domain)

    def __add__(self, other: "MatrixExact") -> "MatrixExact":
        return self._combine(other, 1)

    def __sub__(self, other: "MatrixExact") -> "MatrixExact":
        return self._combine(other, -1)

    def __neg__(self) -> "MatrixExact":
        return self.scale(-1)

    def scale(self, factor: Union[int, Fraction]) -> "MatrixExact":
        factor = self.domain.convert(factor)
        rows = {
            i: {j: self.domain.mul(v, factor) for j, v in row.items()}
            for i, row in self._rows.items()
        }
        return MatrixExact._wrap(self.n_rows, self.n_cols, rows if factor else {}, self.domain)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixExact):
            return NotImplemented
        return (
            self.n_rows == other.n_rows
            and self.n_cols == other.n_cols
            and self.domain == other.domain
            and self._rows == other._rows
        )

    def __hash__(self) -> int:
        return hash((self.n_rows, self.n_cols, self.domain, tuple(self.entries())))

    def __repr__(self) -> str:
        return f"MatrixExact({self.n_rows}x{self.n_cols}, nnz={self.nnz}, {self.domain})"


class EchelonForm:
    """Incrementally maintained reduced row echelon form of a row space.

    Pivot rows are monic and fully reduced against each other, so after any sequence of
    insertions the state is the unique RREF of the span, whatever the insertion order.
    Only `add` mutates; `reduce`, `contains` and the accessors are read-only.
    """

    def __init__(self, n_cols: int, domain: ScalarDomain) -> None:
        self.n_cols = n_cols
        self.domain = domain
        self._pivots: Dict[int, Row] = {}
        # column -> pivot columns whose row has a non-pivot entry there
        self._occurs: Dict[int, Set[int]] = defaultdict(set)

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def pivot_cols(self) -> Tuple[int, ...]:
        return tuple(sorted(self._pivots))

    def reduce(self, row: Mapping[int, Scalar]) -> Row:
        """Returns the residual of a row against the current pivots."""
        residual = dict(row)
        for col in sorted(c for c in row if c in self._pivots):
            factor = residual.get(col)
            if factor:
                _axpy(residual, self._pivots[col], -factor, self.domain.p)
        return residual

    def contains(self, row: Mapping[int, Scalar]) -> bool:
        return not self.reduce(row)

    def add(self, row: Mapping[int, Scalar]) -> bool:
        """Inserts a row; returns whether the rank grew."""
        residual = self.reduce(row)
        if not residual:
            return False

        pivot = min(residual)
        scale = self.domain.inv(residual[pivot])
        residual = {c: self.domain.mul(v, scale) for c, v in residual.items()}

        for owner in sorted(self._occurs.pop(pivot, ())):
            target = self._pivots[owner]
            self._eliminate(owner, target, residual, self.domain.neg(target[pivot]))

        self._pivots[pivot] = residual
        for col in residual:
            if col != pivot:
                self._occurs[col].add(pivot)
        return True

    def _eliminate(self, owner: int, target: Row, source: Row, factor: Scalar) -> None:
        p = self.domain.p
        for col, value in source.items():
            current = target.get(col)
            if current is None:
                target[col] = factor * value if p is None else factor * value % p
                self._occurs[col].add(owner)
                continue
            updated = current + factor * value
            if p is not None:
                updated %= p
            if updated:
                target[col] = updated
            else:
                del target[col]
                if col in self._occurs:
                    self._occurs[col].discard(owner)

    def rows(self) -> List[VectorExact]:
        return [
            VectorExact._wrap(self.n_cols, dict(self._pivots[c]), self.domain)
            for c in sorted(self._pivots)
        ]

    def to_matrix(self) -> MatrixExact:
        ordered = {i: dict(self._pivots[c]) for i, c in enumerate(sorted(self._pivots))}
        return MatrixExact._wrap(len(ordered), self.n_cols, ordered, self.domain)

    def kernel_vectors(self) -> List[VectorExact]:
        """Free-variable parametrization of the right null space, ordered by free column."""
        vectors = []
        for free in range(self.n_cols):
            if free in self._pivots:
                continue
            entries: Row = {free: self.domain.one}
            for owner in self._occurs.get(free, ()):
                entries[owner] = self.domain.neg(self._pivots[owner][free])
            vectors.append(VectorExact._wrap(self.n_cols, entries, self.domain))
        return vectors


class RrefResult(NamedTuple):
    matrix: MatrixExact
    pivot_cols: Tuple[int, ...]
    rank: int


def echelon(m: MatrixExact) -> EchelonForm:
    """Feeds every row of the matrix, in index order, into an `EchelonForm`."""
    form = EchelonForm(m.n_cols, m.domain)
    for index in sorted(m._rows):
        form.add(m._rows[index])
    logger.debug(f"eliminated {m.n_rows}x{m.n_cols} over {m.domain}: rank {form.rank}")
    return form


def rref(m: MatrixExact) -> RrefResult:
    """Reduced row echelon form.

    Args:
        m: the matrix to reduce

    Returns:
        The RREF (rows sorted by pivot, zero rows omitted), the pivot columns and the rank
    """
    form = echelon(m)
    return RrefResult(form.to_matrix(), form.pivot_cols, form.rank)


def rank(m: MatrixExact) -> int:
    return echelon(m).rank


def kernel_basis(m: MatrixExact) -> List[VectorExact]:
    """Canonical basis of the right null space, one vector per free column."""
    return echelon(m).kernel_vectors()


def solve(m: MatrixExact, rhs: MatrixExact) -> MatrixExact:
    """Solves m·X = rhs exactly.

    Raises:
        InconsistentSystemError: if some column of rhs is outside the column space of m
        SingularMatrixError: if m has dependent columns, so a solution is not unique
    """
    if m.n_rows != rhs.n_rows or m.domain != rhs.domain:
        raise DomainMismatchError("system and right hand side do not combine")

    n = m.n_cols
    form = EchelonForm(n + rhs.n_cols, m.domain)
    for i in range(m.n_rows):
        row = dict(m._rows.get(i, {}))
        for j, value in rhs._rows.get(i, {}).items():
            row[n + j] = value
        if row:
            form.add(row)

    pivots = form.pivot_cols
    if pivots and pivots[-1] >= n:
        raise InconsistentSystemError("right hand side is not in the column space")
    if len(pivots) < n:
        raise SingularMatrixError(f"solution not unique: rank {len(pivots)} < {n} unknowns")

    rows = {
        c: {j - n: v for j, v in form._pivots[c].items() if j >= n} for c in pivots
    }
    return MatrixExact._wrap(n, rhs.n_cols, rows, m.domain)


def inverse(m: MatrixExact) -> MatrixExact:
    """Exact inverse of a square matrix.

    Raises:
        SingularMatrixError: if the matrix is not invertible
    """
    if not m.is_square():
        raise SingularMatrixError("only square matrices are invertible")
    try:
        return solve(m, MatrixExact.identity(m.n_rows, m.domain))
    except InconsistentSystemError:
        raise SingularMatrixError("matrix is singular")
