#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.

"""Classical simple Lie algebras with Chevalley frames, and automorphism machinery.

Algebras of types A-D are realized as matrix algebras preserving an anti-diagonal form, so the
Cartan is diagonal and every root vector is a matrix unit or a binomial of two. Structure
constants are read off the commutators, which keeps the Chevalley signs those of the
realization.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from exactla import (
    InconsistentSystemError,
    MatrixExact,
    Scalar,
    ScalarDomain,
    VectorExact,
    inverse,
    rank,
    solve,
)
from liecore import (
    LieAlgebra,
    Subspace,
    ad_matrix,
    bracket,
    killing_form,
    validate,
)
from literals import HYPOTHESIS_CHARACTERISTIC, HYPOTHESIS_KILLING, RANK_MINIMUM

logger = logging.getLogger(__name__)

Root = Tuple[int, ...]


class ChevalleyError(Exception):
    """Base class for errors raised while building or acting on classical algebras."""

    @property
    def message(self) -> str:
        """Return the message passed as an argument."""
        return self.args[0] if self.args else ""


class RankOutOfRangeError(ChevalleyError):
    """Type/rank combination is not a classical simple algebra."""


class BadCharacteristicError(ChevalleyError):
    """Characteristic of the domain is excluded by hypothesis."""


class DegenerateKillingError(ChevalleyError):
    """Killing form of the constructed algebra degenerates over the domain."""


class NotNilpotentError(ChevalleyError):
    """Matrix has no vanishing power up to its size."""


class FactorialNotInvertibleError(ChevalleyError):
    """Some factorial needed by the exponential vanishes in the domain."""


class NotAutomorphismError(ChevalleyError):
    """Map is singular or does not preserve brackets."""


class RepeatedLambdaError(ChevalleyError):
    """Two samples share the same parameter value."""


class InconsistentSamplesError(ChevalleyError):
    """Samples are not values of a polynomial of the stated degree."""


class InsufficientSamplesError(ChevalleyError):
    """Fewer samples than coefficients."""


@dataclass(frozen=True)
class RootDatum:
    """Root system of a classical type in ε-coordinates."""

    type_letter: str
    rank: int
    roots: Tuple[Root, ...]
    positive_roots: Tuple[int, ...]
    simple_roots: Tuple[int, ...]
    highest_root: int
    long_roots: FrozenSet[int]
    simple_coordinates: Tuple[Tuple[int, ...], ...]

    def index_of(self, root: Sequence[int]) -> int:
        return self.roots.index(tuple(root))

    def height(self, index: int) -> int:
        return sum(self.simple_coordinates[index])

    def negative_of(self, index: int) -> int:
        return self.index_of(tuple(-c for c in self.roots[index]))


def _check_rank(type_letter: str, rank_: int) -> None:
    if type_letter not in RANK_MINIMUM:
        raise RankOutOfRangeError(f"unknown classical type {type_letter!r}")
    if rank_ < RANK_MINIMUM[type_letter]:
        raise RankOutOfRangeError(
            f"type {type_letter} needs rank >= {RANK_MINIMUM[type_letter]}, got {rank_}"
        )


def _expected_root_count(type_letter: str, n: int) -> int:
    return {"A": n * (n + 1), "B": 2 * n * n, "C": 2 * n * n, "D": 2 * n * (n - 1)}[type_letter]


def _epsilon(size: int, *terms: Tuple[int, int]) -> Root:
    vector = [0] * size
    for index, coeff in terms:
        vector[index] += coeff
    return tuple(vector)


def _epsilon_roots(type_letter: str, n: int) -> Tuple[List[Root], List[Root]]:
    if type_letter == "A":
        size = n + 1
        roots = [
            _epsilon(size, (i, 1), (j, -1)) for i in range(size) for j in range(size) if i != j
        ]
        simple = [_epsilon(size, (i, 1), (i + 1, -1)) for i in range(n)]
        return roots, simple

    roots = [
        _epsilon(n, (i, s), (j, t))
        for i in range(n)
        for j in range(i + 1, n)
        for s in (1, -1)
        for t in (1, -1)
    ]
    simple = [_epsilon(n, (i, 1), (i + 1, -1)) for i in range(n - 1)]
    if type_letter == "B":
        roots += [_epsilon(n, (i, s)) for i in range(n) for s in (1, -1)]
        simple.append(_epsilon(n, (n - 1, 1)))
    elif type_letter == "C":
        roots += [_epsilon(n, (i, 2 * s)) for i in range(n) for s in (1, -1)]
        simple.append(_epsilon(n, (n - 1, 2)))
    else:
        simple.append(_epsilon(n, (n - 2, 1), (n - 1, 1)))
    return roots, simple


def root_system(type_letter: str, rank: int) -> RootDatum:
    """Root datum of a classical type.

    Positive roots are ordered by height, then by descending simple-root coordinates, and the
    negative roots follow in the same order. The highest root is the lexicographically largest
    positive root in simple-root coordinates.

    Raises:
        RankOutOfRangeError: if the rank is too small for the type
    """
    _check_rank(type_letter, rank)
    roots, simple = _epsilon_roots(type_letter, rank)
    if len(roots) != _expected_root_count(type_letter, rank):
        raise ChevalleyError(f"enumerated {len(roots)} roots for {type_letter}{rank}")

    domain = ScalarDomain.rational()
    simple_matrix = MatrixExact.from_columns(
        [VectorExact.from_dense(r, domain) for r in simple], len(simple[0]), domain
    )
    root_matrix = MatrixExact.from_columns(
        [VectorExact.from_dense(r, domain) for r in roots], len(simple[0]), domain
    )
    coordinates = solve(simple_matrix, root_matrix).columns()
    coords: Dict[Root, Tuple[int, ...]] = {}
    for root, column in zip(roots, coordinates):
        values = column.to_dense()
        if any(Fraction(v).denominator != 1 for v in values):
            raise ChevalleyError(f"root {root} is not an integer combination of simple roots")
        coords[root] = tuple(int(v) for v in values)

    positive = sorted(
        (r for r in roots if all(c >= 0 for c in coords[r])),
        key=lambda r: (sum(coords[r]), tuple(-c for c in coords[r])),
    )
    ordered = positive + [tuple(-c for c in r) for r in positive]
    n_pos = len(positive)

    lengths = [sum(c * c for c in r) for r in ordered]
    longest = max(lengths)
    highest = max(range(n_pos), key=lambda i: coords[ordered[i]])

    return RootDatum(
        type_letter=type_letter,
        rank=rank,
        roots=tuple(ordered),
        positive_roots=tuple(range(n_pos)),
        simple_roots=tuple(ordered.index(s) for s in simple),
        highest_root=highest,
        long_roots=frozenset(i for i, length in enumerate(lengths) if length == longest),
        simple_coordinates=tuple(coords[r] for r in ordered),
    )


@dataclass(frozen=True, eq=False)
class ChevalleyFrame:
    """A classical algebra together with the basis positions of its Chevalley generators."""

    algebra: LieAlgebra
    datum: RootDatum
    e_index: Dict[int, int]
    f_index: Dict[int, int]
    h_index: Dict[int, int]
    cartan: Subspace

    def e(self, root: int) -> VectorExact:
        return self.algebra.basis_vector(self.e_index[root])

    def f(self, root: int) -> VectorExact:
        return self.algebra.basis_vector(self.f_index[root])

    def h(self, simple_root: int) -> VectorExact:
        return self.algebra.basis_vector(self.h_index[simple_root])

    def coroot(self, root: int) -> VectorExact:
        """h_α = [e_α, f_α]."""
        return bracket(self.algebra, self.e(root), self.f(root))

    def root_value(self, root: int, h: VectorExact) -> Scalar:
        """α(h), read off [h, e_α] = α(h) e_α."""
        return bracket(self.algebra, h, self.e(root))[self.e_index[root]]


class _Realization:
    """Matrix realization of a classical type on `size` coordinates."""

    def __init__(self, datum: RootDatum) -> None:
        letter, n = datum.type_letter, datum.rank
        self.letter = letter
        self.size = {"A": n + 1, "B": 2 * n + 1}.get(letter, 2 * n)
        width = len(datum.roots[0])
        self.weights: List[Root] = []
        for k in range(self.size):
            if letter == "A":
                self.weights.append(_epsilon(width, (k, 1)))
            elif k < n:
                self.weights.append(_epsilon(width, (k, 1)))
            elif k >= self.size - n:
                self.weights.append(_epsilon(width, (self.size - 1 - k, -1)))
            else:
                self.weights.append(_epsilon(width))
        # anti-diagonal form signs: symmetric for B/D, alternating for C
        self.signs = [1 if letter != "C" or k < n else -1 for k in range(self.size)]
        self.domain = ScalarDomain.rational()

    def unit(self, *terms: Tuple[int, int, int]) -> MatrixExact:
        return MatrixExact.from_entries(self.size, self.size, terms, self.domain)

    def root_vector(self, root: Root) -> MatrixExact:
        for i in range(self.size):
            for j in range(self.size):
                if i == j:
                    continue
                if tuple(a - b for a, b in zip(self.weights[i], self.weights[j])) != root:
                    continue
                if self.letter == "A":
                    return self.unit((i, j, 1))
                ip, jp = self.size - 1 - i, self.size - 1 - j
                sign = self.signs[i] * self.signs[j]
                if (jp, ip) == (i, j):
                    if sign == 1:
                        continue
                    return self.unit((i, j, 1))
                return self.unit((i, j, 1), (jp, ip, -sign))
        raise ChevalleyError(f"no root vector for {root} in type {self.letter}")


def _commutator(a: MatrixExact, b: MatrixExact) -> MatrixExact:
    return a @ b - b @ a


def _flatten(m: MatrixExact) -> VectorExact:
    size = m.n_cols
    return VectorExact(size * size, {i * size + j: v for i, j, v in m.entries()}, m.domain)


def _frame_matrices(datum: RootDatum) -> Tuple[List[MatrixExact], List[str]]:
    realization = _Realization(datum)
    es, fs, hs = [], [], {}
    for root_index in datum.positive_roots:
        root = datum.roots[root_index]
        e = realization.root_vector(root)
        f_raw = realization.root_vector(tuple(-c for c in root))
        h_raw = _commutator(e, f_raw)
        i, j, _ = e.entries()[0]
        t = h_raw[i, i] - h_raw[j, j]
        if not t:
            raise ChevalleyError(f"root vectors of {root} do not form an sl2 triple")
        scale = Fraction(2) / t
        es.append(e)
        fs.append(f_raw.scale(scale))
        hs[root_index] = h_raw.scale(scale)

    labels = [f"e{list(datum.simple_coordinates[r])}" for r in datum.positive_roots]
    labels += [f"h{k + 1}" for k in range(datum.rank)]
    labels += [f"f{list(datum.simple_coordinates[r])}" for r in datum.positive_roots]
    matrices = es + [hs[s] for s in datum.simple_roots] + fs
    return matrices, [label.replace(" ", "") for label in labels]


def _structure_constants(matrices: List[MatrixExact]) -> Dict[Tuple[int, int], Dict[int, int]]:
    domain = matrices[0].domain
    size = matrices[0].n_rows
    flat = MatrixExact.from_columns([_flatten(m) for m in matrices], size * size, domain)
    pairs = [(i, j) for i in range(len(matrices)) for j in range(i + 1, len(matrices))]
    commutators = MatrixExact.from_columns(
        [_flatten(_commutator(matrices[i], matrices[j])) for i, j in pairs], size * size, domain
    )
    try:
        solution = solve(flat, commutators)
    except InconsistentSystemError:
        raise ChevalleyError("frame matrices are not closed under commutators")

    constants: Dict[Tuple[int, int], Dict[int, int]] = {}
    for column, pair in zip(solution.columns(), pairs):
        coeffs = {}
        for k, value in column.items():
            if Fraction(value).denominator != 1:
                raise ChevalleyError(f"non-integer structure constant at {pair}: {value}")
            coeffs[k] = int(value)
        if coeffs:
            constants[pair] = coeffs
    return constants


def classical_algebra(type_letter: str, rank: int, domain: ScalarDomain) -> ChevalleyFrame:
    """Builds a classical simple algebra with its Chevalley frame.

    The basis is (e_α for positive α, h_i for simple α_i, f_α for positive α).

    Args:
        type_letter: one of A, B, C, D
        rank: the rank of the type
        domain: the ground field

    Returns:
        The frame of the validated algebra

    Raises:
        RankOutOfRangeError: if the rank is too small for the type
        BadCharacteristicError: if the characteristic is 2 or 3
        DegenerateKillingError: if the Killing form degenerates over the domain
    """
    datum = root_system(type_letter, rank)
    if not domain.theorem_scope:
        raise BadCharacteristicError(
            f'hypothesis violated: "{HYPOTHESIS_CHARACTERISTIC}" (got {domain})'
        )

    matrices, labels = _frame_matrices(datum)
    constants = _structure_constants(matrices)
    algebra = LieAlgebra(len(matrices), domain, constants, labels)
    if not validate(algebra).ok:
        raise ChevalleyError(f"{type_letter}{rank} constants fail the Jacobi identity")
    if not killing_form(algebra).nondegenerate:
        raise DegenerateKillingError(
            f'hypothesis violated: "{HYPOTHESIS_KILLING}" ({type_letter}{rank} over {domain})'
        )

    n_pos = len(datum.positive_roots)
    e_index = {r: k for k, r in enumerate(datum.positive_roots)}
    h_index = {s: n_pos + k for k, s in enumerate(datum.simple_roots)}
    f_index = {r: n_pos + rank + k for k, r in enumerate(datum.positive_roots)}
    cartan = Subspace.span(
        [algebra.basis_vector(i) for i in h_index.values()], algebra.dim, domain
    )
    logger.info(f"built {type_letter}{rank} over {domain}: dim {algebra.dim}")
    return ChevalleyFrame(algebra, datum, e_index, f_index, h_index, cartan)


def is_automorphism(L: LieAlgebra, m: MatrixExact) -> bool:
    """Whether m is invertible and preserves every basis bracket."""
    if not m.is_square() or m.n_rows != L.dim or m.domain != L.domain:
        return False
    if rank(m) != L.dim:
        return False

    images = m.columns()
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            lhs = m @ VectorExact(L.dim, L.basis_bracket(i, j), L.domain)
            if lhs != bracket(L, images[i], images[j]):
                return False
    return True


@dataclass(frozen=True)
class AutomorphismMatrix:
    matrix: MatrixExact

    @classmethod
    def checked(cls, L: LieAlgebra, matrix: MatrixExact) -> "AutomorphismMatrix":
        """Wraps a matrix after verifying it is an automorphism of L.

        Raises:
            NotAutomorphismError: if the matrix is singular or breaks some bracket
        """
        if not is_automorphism(L, matrix):
            raise NotAutomorphismError(f"map is not an automorphism of {L!r}")
        return cls(matrix)

    def inverse(self) -> "AutomorphismMatrix":
        return AutomorphismMatrix(inverse(self.matrix))

    def apply(self, v: VectorExact) -> VectorExact:
        return self.matrix @ v

    def compose(self, other: "AutomorphismMatrix") -> "AutomorphismMatrix":
        return AutomorphismMatrix(self.matrix @ other.matrix)


def nilpotency_index(n_matrix: MatrixExact) -> int:
    """Smallest k with N^k = 0.

    Raises:
        NotNilpotentError: if no power up to the size vanishes
    """
    power, k = n_matrix, 1
    while not power.is_zero():
        if k >= n_matrix.n_rows:
            raise NotNilpotentError(f"no power up to {n_matrix.n_rows} vanishes")
        power, k = power @ n_matrix, k + 1
    return k


def exp_nilpotent(
    n_matrix: MatrixExact, lam: Union[int, Fraction], domain: Optional[ScalarDomain] = None
) -> MatrixExact:
    """Finite exponential sum Σ λ^m N^m / m! of a nilpotent matrix.

    Raises:
        NotNilpotentError: if N is not nilpotent
        FactorialNotInvertibleError: if some m! needed vanishes in the domain
    """
    domain = domain or n_matrix.domain
    lam = domain.convert(lam)
    index = nilpotency_index(n_matrix) if n_matrix.n_rows else 1
    for m in range(2, index):
        if not domain.factorial_invertible(m):
            raise FactorialNotInvertibleError(f"{m}! is not invertible in {domain}")

    result = MatrixExact.identity(n_matrix.n_rows, domain)
    power = MatrixExact.identity(n_matrix.n_rows, domain)
    factorial = 1
    for m in range(1, index):
        power = power @ n_matrix
        factorial *= m
        coeff = domain.div(domain.power(lam, m), domain.convert(factorial))
        result = result + power.scale(coeff)
    return result


def exp_ad_nilpotent(
    L: LieAlgebra, x: VectorExact, lam: Union[int, Fraction]
) -> AutomorphismMatrix:
    """exp(λ ad x) for ad-nilpotent x, validated as an automorphism.

    Raises:
        NotNilpotentError: if ad x is not nilpotent
        FactorialNotInvertibleError: if the characteristic is too small for the index
        NotAutomorphismError: if the sum fails to preserve brackets
    """
    return AutomorphismMatrix.checked(L, exp_nilpotent(ad_matrix(L, x), lam, L.domain))


def vandermonde_extract(
    samples: Sequence[Tuple[Union[int, Fraction], VectorExact]], degree: int
) -> List[VectorExact]:
    """Recovers u_0..u_degree from samples of value(λ) = Σ λ^m u_m.

    Args:
        samples: (λ, value) pairs with pairwise distinct λ
        degree: the polynomial degree

    Returns:
        The coefficient vectors u_0, ..., u_degree

    Raises:
        InsufficientSamplesError: if there are fewer than degree + 1 samples
        RepeatedLambdaError: if two samples share λ
        InconsistentSamplesError: if no polynomial of that degree fits every sample
    """
    if degree < 0 or len(samples) < degree + 1:
        raise InsufficientSamplesError(f"need {degree + 1} samples, got {len(samples)}")

    domain = samples[0][1].domain
    length = samples[0][1].length
    lambdas = [domain.convert(lam) for lam, _ in samples]
    if len(set(lambdas)) != len(lambdas):
        raise RepeatedLambdaError("sample parameters must be pairwise distinct")
    if any(v.domain != domain or v.length != length for _, v in samples):
        raise InconsistentSamplesError("sample values differ in length or domain")

    vandermonde = MatrixExact(
        len(samples),
        degree + 1,
        {s: {m: domain.power(lam, m) for m in range(degree + 1)} for s, lam in enumerate(lambdas)},
        domain,
    )
    values = MatrixExact.from_rows([v for _, v in samples], length, domain)
    try:
        coefficients = solve(vandermonde, values)
    except InconsistentSystemError:
        raise InconsistentSamplesError(f"samples do not fit a polynomial of degree {degree}")
    return [coefficients.row(m) for m in range(degree + 1)]


def exp_orbit_components(
    n_matrix: MatrixExact, v: VectorExact, lambdas: Optional[Sequence[int]] = None
) -> List[VectorExact]:
    """Recovers N^m v / m! from sampled values exp(λN) v at distinct λ.

    Defaults to λ = 1, ..., k where k is the nilpotency index of N.
    """
    index = nilpotency_index(n_matrix)
    lambdas = list(lambdas) if lambdas is not None else list(range(1, index + 1))
    samples = [(lam, exp_nilpotent(n_matrix, lam) @ v) for lam in lambdas]
    return vandermonde_extract(samples, index - 1)
