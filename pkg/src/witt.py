#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.

"""Degree-truncated Witt algebras of polynomial vector fields t^α d_i.

The span of monomials of degree at least N is not an ideal ([d_i, t^α d_j] lowers the degree),
so the truncation is not a quotient algebra. Brackets leaving the truncation are reported as
overflow values, and biderivation constraints are filtered: an instance is imposed only when
every argument it differentiates stays inside the window. Brackets of monomials are homogeneous
of degree |α| + |β| − 1, so an overflowing term never touches a coordinate inside the
truncation and every imposed row is exact.
"""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from biderive import (
    BiderMode,
    BiderSolutionSpace,
    BiderTensor,
    UnknownLayout,
    assemble_constraints,
    check_mode,
    solution_space,
)
from chevalley import BadCharacteristicError, exp_nilpotent, exp_orbit_components
from exactla import MatrixExact, Row, Scalar, ScalarDomain, VectorExact
from liecore import Subspace, Weight, WeightDecomposition
from literals import HYPOTHESIS_CHAR_ZERO
from utils import sha256_hex

logger = logging.getLogger(__name__)

Monomial = Tuple[Tuple[int, ...], int]


class WittError(Exception):
    """Base class for truncated Witt algebra errors."""

    @property
    def message(self) -> str:
        """Return the message passed as an argument."""
        return self.args[0] if self.args else ""


class CapsIncompatibleError(WittError):
    """Window cap N_in does not fit the truncation cap N."""


class TruncatedBracketResult(NamedTuple):
    value: Optional[VectorExact]
    overflow_degree: Optional[int]

    @property
    def overflow(self) -> bool:
        return self.overflow_degree is not None


def _label(alpha: Tuple[int, ...], var: int) -> str:
    if len(alpha) == 1:
        return f"∂{alpha[0] - 1}"
    coefficient = "".join(
        f"t{k + 1}" + (f"^{e}" if e > 1 else "") for k, e in enumerate(alpha) if e
    )
    return f"{coefficient}d{var + 1}"


def _monomial_bracket(first: Monomial, second: Monomial) -> Dict[Monomial, int]:
    """[t^α d_i, t^β d_j] = β_i t^(α+β−e_i) d_j − α_j t^(α+β−e_j) d_i."""
    (alpha, i), (beta, j) = first, second
    total = [a + b for a, b in zip(alpha, beta)]
    result: Dict[Monomial, int] = {}
    if beta[i]:
        exponent = list(total)
        exponent[i] -= 1
        key = (tuple(exponent), j)
        result[key] = result.get(key, 0) + beta[i]
    if alpha[j]:
        exponent = list(total)
        exponent[j] -= 1
        key = (tuple(exponent), i)
        result[key] = result.get(key, 0) - alpha[j]
    return {key: c for key, c in result.items() if c}


class WittTruncation:
    """Monomials t^α d_i with |α| ≤ N, ordered by degree, then variable, then descending α."""

    def __init__(self, n_vars: int, deg_cap: int, domain: ScalarDomain) -> None:
        self.n_vars = n_vars
        self.deg_cap = deg_cap
        self.domain = domain
        exponents = [
            alpha
            for alpha in itertools.product(range(deg_cap + 1), repeat=n_vars)
            if sum(alpha) <= deg_cap
        ]
        self.basis: Tuple[Monomial, ...] = tuple(
            sorted(
                ((alpha, var) for alpha in exponents for var in range(n_vars)),
                key=lambda m: (sum(m[0]), m[1], tuple(-a for a in m[0])),
            )
        )
        self.labels = tuple(_label(alpha, var) for alpha, var in self.basis)
        self._index = {monomial: index for index, monomial in enumerate(self.basis)}
        self._brackets = {
            (a, b): self._combine({(a, b): domain.one})
            for a in range(self.dim)
            for b in range(self.dim)
        }

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def fingerprint(self) -> str:
        return sha256_hex(f"witt|{self.n_vars}|{self.deg_cap}|{self.domain.spec}")

    def degree(self, index: int) -> int:
        return sum(self.basis[index][0])

    def index_of(self, alpha: Sequence[int], var: int) -> int:
        return self._index[(tuple(alpha), var)]

    def partial(self, var: int) -> int:
        """Basis index of d_var."""
        return self.index_of((0,) * self.n_vars, var)

    def window(self, inner_cap: int) -> Tuple[int, ...]:
        return tuple(i for i in range(self.dim) if self.degree(i) <= inner_cap)

    def vector(self, entries: Mapping[int, Union[int, Fraction]]) -> VectorExact:
        return VectorExact(self.dim, entries, self.domain)

    def _combine(self, weights: Mapping[Tuple[int, int], Scalar]) -> TruncatedBracketResult:
        domain = self.domain
        raw: Dict[Monomial, Scalar] = {}
        for (a, b), weight in weights.items():
            for monomial, c in _monomial_bracket(self.basis[a], self.basis[b]).items():
                total = domain.add(raw.get(monomial, domain.zero), domain.mul(weight, c))
                raw[monomial] = total
        raw = {monomial: c for monomial, c in raw.items() if c}
        overflow = [sum(alpha) for alpha, _ in raw if sum(alpha) > self.deg_cap]
        if overflow:
            return TruncatedBracketResult(None, max(overflow))
        entries = {self._index[monomial]: c for monomial, c in raw.items()}
        return TruncatedBracketResult(VectorExact(self.dim, entries, domain), None)

    def basis_bracket(self, a: int, b: int) -> TruncatedBracketResult:
        return self._brackets[(a, b)]

    def oracle(self, a: int, b: int) -> Optional[Row]:
        """Coordinates of [b_a, b_b], None on overflow."""
        value = self._brackets[(a, b)].value
        return None if value is None else value.entries

    def __repr__(self) -> str:
        return f"WittTruncation(n={self.n_vars}, N={self.deg_cap}, {self.domain})"


def witt_truncation(n_vars: int, N: int, domain: ScalarDomain) -> WittTruncation:
    """Builds the degree-N truncation of the Witt algebra in n_vars variables.

    Raises:
        BadCharacteristicError: if the domain has positive characteristic
        WittError: if n_vars < 1 or N < 0
    """
    if domain.characteristic != 0:
        raise BadCharacteristicError(
            f'hypothesis violated: "{HYPOTHESIS_CHAR_ZERO}" (got {domain})'
        )
    if n_vars < 1 or N < 0:
        raise WittError(f"need n_vars >= 1 and N >= 0, got n_vars={n_vars}, N={N}")
    truncation = WittTruncation(n_vars, N, domain)
    logger.debug(f"built {truncation!r} with {truncation.dim} monomials")
    return truncation


def witt_bracket(
    W: WittTruncation, a: Union[int, VectorExact], b: Union[int, VectorExact]
) -> TruncatedBracketResult:
    """Bracket of basis indices or vectors; overflow when any monomial of degree > N survives."""
    if isinstance(a, int) and isinstance(b, int):
        return W.basis_bracket(a, b)
    x = W.vector({a: 1}) if isinstance(a, int) else a
    y = W.vector({b: 1}) if isinstance(b, int) else b
    weights = {
        (i, j): W.domain.mul(xi, yj) for i, xi in x.items() for j, yj in y.items()
    }
    return W._combine(weights)


def witt_weights(W: WittTruncation) -> WeightDecomposition:
    """Weights of t^α d_i under ad(t_k d_k): α_k − δ_ik."""
    domain = W.domain
    grouped: Dict[Weight, List[int]] = {}
    for index, (alpha, var) in enumerate(W.basis):
        weight = tuple(
            domain.convert(a - (1 if k == var else 0)) for k, a in enumerate(alpha)
        )
        grouped.setdefault(weight, []).append(index)

    cartan: Tuple[VectorExact, ...] = ()
    if W.deg_cap >= 1:
        cartan = tuple(
            W.vector({W.index_of(tuple(int(k == var) for k in range(W.n_vars)), var): 1})
            for var in range(W.n_vars)
        )
    spaces = tuple(
        (weight, Subspace.span((W.vector({i: 1}) for i in indices), W.dim, domain))
        for weight, indices in sorted(grouped.items())
    )
    return WeightDecomposition(cartan, spaces)


def witt_ad_d_matrix(W: WittTruncation, var: int) -> MatrixExact:
    """ad d_var: t^α d_j ↦ α_var t^(α−e_var) d_j, strictly lowering the degree."""
    entries = []
    for index, (alpha, j) in enumerate(W.basis):
        if alpha[var]:
            lowered = list(alpha)
            lowered[var] -= 1
            entries.append((W.index_of(lowered, j), index, alpha[var]))
    return MatrixExact.from_entries(W.dim, W.dim, entries, W.domain)


def witt_exp_ad_d(W: WittTruncation, var: int, lam: Union[int, Fraction]) -> MatrixExact:
    """exp(λ ad d_var) on the truncation."""
    return exp_nilpotent(witt_ad_d_matrix(W, var), lam, W.domain)


def preserves_brackets_in_range(W: WittTruncation, m: MatrixExact) -> bool:
    """Whether m[a,b] = [ma, mb] for every basis pair whose brackets stay in range."""
    images = m.columns()
    for a in range(W.dim):
        for b in range(a + 1, W.dim):
            product = W.basis_bracket(a, b)
            if product.value is None:
                continue
            image = witt_bracket(W, images[a], images[b])
            if image.value is None:
                continue
            if m @ product.value != image.value:
                return False
    return True


def witt_exp_components(
    W: WittTruncation, var: int, v: VectorExact, lambdas: Optional[Sequence[int]] = None
) -> List[VectorExact]:
    """Recovers (ad d_var)^m v / m! from sampled exp(λ ad d_var) v."""
    return exp_orbit_components(witt_ad_d_matrix(W, var), v, lambdas)


class SupportClass(NamedTuple):
    interior: Tuple[Tuple[int, int], ...]
    boundary: Tuple[Tuple[int, int], ...]


@dataclass(frozen=True, eq=False)
class FilteredBiderProblem:
    """Biderivations of a truncation with arguments restricted to degrees ≤ N_in."""

    truncation: WittTruncation
    inner_cap: int
    mode: BiderMode
    window: Tuple[int, ...]
    layout: UnknownLayout
    system: MatrixExact
    active_instances: int
    space: BiderSolutionSpace

    @property
    def basis(self) -> Tuple[BiderTensor, ...]:
        return self.space.basis

    @property
    def dim_solution(self) -> int:
        return self.space.dim_solution

    def is_interior_pair(self, a: int, b: int) -> bool:
        """Both degrees ≤ N_in − 1, where every lowering instance through ad d_k is imposed."""
        cap = self.inner_cap - 1
        return self.truncation.degree(a) <= cap and self.truncation.degree(b) <= cap

    def contains(self, d: BiderTensor) -> bool:
        return self.space.contains(d)

    def satisfies(self, d: BiderTensor) -> bool:
        """Whether d is supported on the window and passes every imposed constraint."""
        window = set(self.window)
        if any(a not in window or b not in window for (a, b), _ in d.pairs()):
            return False
        n_values = self.layout.n_values
        entries = {}
        for index, (a, b) in enumerate(self.layout.pairs):
            for k, v in d.pair_row(a, b).items():
                entries[index * n_values + k] = v
        unknowns = VectorExact(self.layout.n_unknowns, entries, d.domain)
        return (self.system @ unknowns).is_zero()

    def support_classes(self) -> Tuple[SupportClass, ...]:
        """Nonzero pairs of each solution, split into interior and boundary."""
        classes = []
        for d in self.basis:
            pairs = [pair for pair, _ in d.pairs()]
            classes.append(
                SupportClass(
                    interior=tuple(p for p in pairs if self.is_interior_pair(*p)),
                    boundary=tuple(p for p in pairs if not self.is_interior_pair(*p)),
                )
            )
        return tuple(classes)


def truncated_biderivation_space(
    W: WittTruncation, inner_cap: int, mode: BiderMode, threads: int = 1
) -> FilteredBiderProblem:
    """Solves the filtered biderivation system on the window of degrees ≤ inner_cap.

    Unknowns are δ(a, b) for window elements a, b with values anywhere in the truncation.

    Raises:
        CapsIncompatibleError: unless 0 ≤ 2·inner_cap ≤ N
    """
    if inner_cap < 0 or 2 * inner_cap > W.deg_cap:
        raise CapsIncompatibleError(
            f"window caps incompatible: need 0 <= 2*N_in <= N, got N={W.deg_cap}, "
            f"N_in={inner_cap}"
        )
    check_mode(W.domain, mode)
    window = W.window(inner_cap)
    layout = UnknownLayout(window, W.dim, mode)
    system = assemble_constraints(layout, W.oracle, W.domain, threads)
    space = solution_space(W.fingerprint, W.dim, W.domain, layout, system.matrix)
    logger.info(
        f"{mode.value} window of {W!r} at N_in={inner_cap}: "
        f"{system.active_instances} instances, dim {space.dim_solution}"
    )
    return FilteredBiderProblem(
        W, inner_cap, mode, window, layout, system.matrix, system.active_instances, space
    )


def restricted_inner_tensor(W: WittTruncation, inner_cap: int) -> BiderTensor:
    """δ(a, b) = [a, b] on window pairs, zero elsewhere.

    Raises:
        CapsIncompatibleError: if some window bracket overflows
    """
    window = W.window(inner_cap)
    entries = {}
    for a in window:
        for b in window:
            product = W.basis_bracket(a, b)
            if product.value is None:
                raise CapsIncompatibleError(
                    f"[{W.labels[a]}, {W.labels[b]}] leaves the truncation"
                )
            for k, v in product.value.items():
                entries[(a, b, k)] = v
    return BiderTensor(W.dim, W.domain, BiderMode.SKEW, entries)


class GeneratorStatus(str, Enum):
    """Enum for a row of the generator vanishing table."""

    VANISHING = "vanishing"
    NONVANISHING = "nonvanishing"
    UNCONSTRAINED = "unconstrained"


class GeneratorRow(NamedTuple):
    index: int
    label: str
    status: GeneratorStatus
    partners: Tuple[int, ...]


def generator_vanishing_report(problem: FilteredBiderProblem) -> Tuple[GeneratorRow, ...]:
    """Per window element a, whether every solution vanishes on (a, b) over interior partners b.

    Elements without interior partners are unconstrained.
    """
    rows = []
    for a in problem.window:
        partners = tuple(b for b in problem.window if problem.is_interior_pair(a, b))
        if not partners:
            status = GeneratorStatus.UNCONSTRAINED
        elif all(not d.pair_row(a, b) for d in problem.basis for b in partners):
            status = GeneratorStatus.VANISHING
        else:
            status = GeneratorStatus.NONVANISHING
        rows.append(GeneratorRow(a, problem.truncation.labels[a], status, partners))
    return tuple(rows)
