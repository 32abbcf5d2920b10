#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.

"""Dense brute-force oracle over Q, independent of the sparse solver.

Every identity is written out over all basis pairs or triples as a sympy matrix and the
solution dimension is read off its rank.
"""

from typing import List

from sympy import Matrix, Rational, zeros

from biderive import BiderMode
from liecore import LieAlgebra


def dense_brackets(L: LieAlgebra) -> List[List[List[Rational]]]:
    """c[i][j][k], the coefficient of b_k in [b_i, b_j]."""
    n = L.dim
    c = [[[Rational(0)] * n for _ in range(n)] for _ in range(n)]
    for i, j, k, v in L.structure_constants():
        c[i][j][k] = Rational(v.numerator, v.denominator)
        c[j][i][k] = -c[i][j][k]
    return c


def dense_derivation_dim(L: LieAlgebra) -> int:
    """dim Der(L); unknown D[k][l] is the coefficient of b_k in D(b_l)."""
    n = L.dim
    c = dense_brackets(L)
    system = zeros(n**3, n * n)
    for i in range(n):
        for j in range(n):
            for m in range(n):
                row = (i * n + j) * n + m
                # D[b_i, b_j] - [D b_i, b_j] - [b_i, D b_j] at b_m
                for s in range(n):
                    system[row, m * n + s] += c[i][j][s]
                    system[row, s * n + i] -= c[s][j][m]
                    system[row, s * n + j] -= c[i][s][m]
    return n * n - system.rank()


def dense_biderivation_dim(L: LieAlgebra, mode: BiderMode) -> int:
    """Dimension of the biderivations of L; unknown d[i][j][k] is δ(b_i, b_j) at b_k."""
    n = L.dim
    c = dense_brackets(L)

    def col(i: int, j: int, k: int) -> int:
        return (i * n + j) * n + k

    rows = []
    for a in range(n):
        for b in range(n):
            for z in range(n):
                for m in range(n):
                    left = [Rational(0)] * n**3
                    right = [Rational(0)] * n**3
                    for t in range(n):
                        # δ([a,b],z) - [a,δ(b,z)] - [δ(a,z),b]
                        left[col(t, z, m)] += c[a][b][t]
                        left[col(b, z, t)] -= c[a][t][m]
                        left[col(a, z, t)] -= c[t][b][m]
                        # δ(a,[b,z]) - [δ(a,b),z] - [b,δ(a,z)]
                        right[col(a, t, m)] += c[b][z][t]
                        right[col(a, b, t)] -= c[t][z][m]
                        right[col(a, z, t)] -= c[b][t][m]
                    rows.extend(r for r in (left, right) if any(r))

    sign = {BiderMode.SYMMETRIC: -1, BiderMode.SKEW: 1}.get(mode)
    if sign is not None:
        for i in range(n):
            for j in range(i, n):
                for k in range(n):
                    row = [Rational(0)] * n**3
                    row[col(i, j, k)] += 1
                    row[col(j, i, k)] += sign
                    if any(row):
                        rows.append(row)

    if not rows:
        return n**3
    return n**3 - Matrix(rows).rank()
