"""Exact linear algebra over Fraction / GaussianRational entries."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .scalars import Scalar, sc_div


def row_echelon(rows: list[list[Scalar]]) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form; returns (rref rows, pivot column indices)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        m[r] = [sc_div(x, piv) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Scalar]]) -> int:
    reduced, _ = row_echelon([list(r) for r in rows])
    return len(reduced)


def kernel_basis(rows: Sequence[Sequence[Scalar]], ncols: int) -> list[list[Scalar]]:
    """Basis of the right kernel, from the reduced echelon form."""
    reduced, pivots = row_echelon([list(r) for r in rows])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v: list[Scalar] = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -reduced[r][fc]
        basis.append(v)
    return basis


def primitive_integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[int]:
    """The one-dimensional kernel of an integer matrix of rank ncols-1,
    returned as a primitive integer vector with positive first nonzero entry."""
    basis = kernel_basis([[Fraction(x) for x in r] for r in rows], ncols)
    if len(basis) != 1:
        raise ValueError(f"kernel dimension is {len(basis)}, expected 1")
    v = basis[0]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return ints


def int_det(matrix: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix, exact (fraction-free Gauss via Fractions)."""
    k = len(matrix)
    if k == 0:
        return 1
    m = [[Fraction(x) for x in row] for row in matrix]
    det = Fraction(1)
    for c in range(k):
        pr = next((i for i in range(c, k) if m[i][c] != 0), None)
        if pr is None:
            return 0
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, k):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    assert det.denominator == 1
    return int(det)
