"""First integrals of maps and fields: construction, search, pullback,
exact verification, and randomized-but-exact independence certificates."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import HypothesisError
from .linalg import kernel_basis, rank as q_rank
from .resonance import LatticeBasis, iter_exponents, lattice_resonant
from .scalars import Scalar
from .series import (
    Exponent,
    ScalarSeries,
    VectorSeries,
    compose_scalar,
    gradient,
    invert,
    scalar_inner,
)
from .normalizer import FieldSystem, MapSystem


@dataclass(frozen=True)
class IndependenceCertificate:
    independent: bool
    rank_found: int
    witness: Optional[tuple[Scalar, ...]]
    trials: int


@dataclass(frozen=True)
class IntegralSet:
    """First integrals (zero constant term) with an optional independence
    certificate; every member is expected to pass its verify_integral check
    with an exactly zero residual."""

    integrals: tuple[ScalarSeries, ...]
    independence: Optional[IndependenceCertificate] = None

    def __len__(self):
        return len(self.integrals)

    def __iter__(self):
        return iter(self.integrals)

    def __getitem__(self, i: int) -> ScalarSeries:
        return self.integrals[i]


def monomial_integrals(basis: LatticeBasis, trunc: int | None = None) -> IntegralSet:
    """The monomial first integrals y^m of the linear system, one per
    lattice generator."""
    if not basis.generators:
        return IntegralSet(integrals=())
    if trunc is None:
        trunc = max(basis.bound, max(sum(g) for g in basis.generators))
    return IntegralSet(
        integrals=tuple(
            ScalarSeries.monomial(basis.n, trunc, g) for g in basis.generators
        )
    )


def pullback_integrals(
    integrals: IntegralSet | Sequence[ScalarSeries],
    phi: VectorSeries,
    order: int | None = None,
) -> IntegralSet:
    """Transport integrals of the normal form back to the original system
    through the inverse of x = y + phi(y)."""
    vs = tuple(integrals)
    if order is None:
        order = min([phi.trunc] + [v.trunc for v in vs])
    psi = invert(VectorSeries.identity(phi.n, order) + phi.truncate(order), order)
    return IntegralSet(
        integrals=tuple(compose_scalar(v.truncate(order), psi, order) for v in vs)
    )


def verify_integral_map(V: ScalarSeries, F: MapSystem, order: int | None = None) -> ScalarSeries:
    """Exact residual V o F - V through the order (zero iff V is invariant)."""
    if order is None:
        order = min(V.trunc, F.order)
    if not F.mu.has_exact_values():
        # formal base: only the linear map is representable, and the residual
        # of a monomial y^m is (mu^m - 1) y^m, so invariance is decided on the
        # exponent certificate alone
        if not F.nonlinear.is_zero():
            raise HypothesisError(
                "formal-base verification supports linear maps only"
            )
        for m, _ in V.terms():
            if not lattice_resonant(F.mu, m):
                raise HypothesisError(
                    f"residual of monomial {m} is not representable over the "
                    "coefficient field (nonresonant against the formal base)"
                )
        return ScalarSeries.zero(V.n, order)
    return compose_scalar(V.truncate(order), F.full_map(order), order) - V.truncate(order)


def verify_integral_field(V: ScalarSeries, X: FieldSystem, order: int | None = None) -> ScalarSeries:
    """Exact residual <grad V, A x + f(x)> through the order."""
    if order is None:
        order = min(V.trunc, X.order)
    return scalar_inner(gradient(V), X.full_field(order), order)


# -- search -----------------------------------------------------------------------


def _echelon_kernel_series(
    columns: dict[Exponent, dict[Exponent, Scalar]],
    monomials: list[Exponent],
    n: int,
    degree: int,
) -> tuple[ScalarSeries, ...]:
    """Kernel of the linear map whose column at y^m is columns[m], expressed
    as series over the monomial basis in graded-lex order."""
    row_index: dict[Exponent, int] = {}
    for col in columns.values():
        for out_m in col:
            row_index.setdefault(out_m, len(row_index))
    rows: list[list[Scalar]] = [
        [Fraction(0)] * len(monomials) for _ in range(len(row_index))
    ]
    for c, m in enumerate(monomials):
        for out_m, v in columns[m].items():
            rows[row_index[out_m]][c] = v
    kernel = kernel_basis(rows, len(monomials))
    series = [
        ScalarSeries(n, degree, {m: v for m, v in zip(monomials, vec) if v != 0})
        for vec in kernel
    ]
    series.sort(key=lambda s: s.terms()[0][0] if not s.is_zero() else ())
    return tuple(series)


def search_integrals_map(F: MapSystem, degree: int) -> IntegralSet:
    """Spanning set of polynomial W of degree <= `degree` with W o F = W
    exactly through every degree the system data certifies.

    The free parameters sit on the resonant monomials; nonresonant slots are
    forced, and the higher-order compatibility conditions (through the full
    certified order, not just `degree`) remove truncation artifacts such as
    powers of lower-degree solutions.  The flip side: an integral whose honest
    polynomial degree exceeds `degree` contributes nothing, so searching below
    the certification order can legitimately come back empty even for
    integrable systems.  Solved as one exact kernel computation over the
    monomial basis."""
    if degree > F.order:
        raise HypothesisError(
            f"system data certified to degree {F.order}; cannot search to {degree}"
        )
    n = F.n
    if not F.mu.has_exact_values():
        if not F.nonlinear.is_zero():
            raise HypothesisError("formal-base search supports linear maps only")
        found = [
            ScalarSeries.monomial(n, degree, m)
            for m in iter_exponents(n, 1, degree)
            if lattice_resonant(F.mu, m)
        ]
        return IntegralSet(integrals=tuple(found))
    through = F.order
    monomials = list(iter_exponents(n, 1, degree))
    Fm = F.full_map(through)
    pows: list[list[ScalarSeries]] = [
        [ScalarSeries.one(n, through), comp] for comp in Fm.components
    ]

    def comp_pow(i: int, k: int) -> ScalarSeries:
        col = pows[i]
        while len(col) <= k:
            col.append(col[-1].mul(col[1], through))
        return col[k]

    columns: dict[Exponent, dict[Exponent, Scalar]] = {}
    for m in monomials:
        prod: Optional[ScalarSeries] = None
        for i, e in enumerate(m):
            if e == 0:
                continue
            p = comp_pow(i, e)
            prod = p if prod is None else prod.mul(p, through)
        col = prod - ScalarSeries.monomial(n, through, m)
        columns[m] = dict(col.coeffs)
    return IntegralSet(
        integrals=_echelon_kernel_series(columns, monomials, n, degree)
    )


def search_integrals_field(X: FieldSystem, degree: int) -> IntegralSet:
    """Spanning set of polynomial V of degree <= `degree` whose derivative
    along the field vanishes exactly through every certified degree."""
    if degree > X.order:
        raise HypothesisError(
            f"system data certified to degree {X.order}; cannot search to {degree}"
        )
    n = X.n
    through = X.order
    Xf = X.full_field(through)
    monomials = list(iter_exponents(n, 1, degree))
    columns: dict[Exponent, dict[Exponent, Scalar]] = {}
    for m in monomials:
        acc: dict[Exponent, Scalar] = {}
        for i, e in enumerate(m):
            if e == 0:
                continue
            shifted = m[:i] + (e - 1,) + m[i + 1 :]
            base = sum(shifted)
            for mm, c in Xf.components[i].coeffs.items():
                if base + sum(mm) > through:
                    continue
                out = tuple(a + b for a, b in zip(shifted, mm))
                prev = acc.get(out, Fraction(0))
                v = prev + c * e
                if v == 0:
                    acc.pop(out, None)
                else:
                    acc[out] = v
        columns[m] = acc
    return IntegralSet(
        integrals=_echelon_kernel_series(columns, monomials, n, degree)
    )


# -- independence ------------------------------------------------------------------


def independence_check(
    integrals: IntegralSet | Sequence[ScalarSeries],
    trials: int = 8,
    seed: int = 0,
) -> IndependenceCertificate:
    """Exact-rank test of the gradients at pseudo-random rational points.

    A full-rank evaluation is a certificate of functional independence (the
    witness point is recorded); failing every trial only reports "not
    certified", since rank deficiency at sample points proves nothing."""
    vs = tuple(integrals)
    if not vs:
        raise ValueError("independence check needs at least one integral")
    n = vs[0].n
    k = len(vs)
    grads = [gradient(v) for v in vs]
    rng = random.Random(seed)
    best = 0
    for t in range(trials):
        # rationals from a fixed box, never on a coordinate hyperplane
        point = tuple(
            Fraction(rng.randint(1, 40), rng.randint(1, 8)) for _ in range(n)
        )
        rows = [[comp.eval(point) for comp in g.components] for g in grads]
        r = q_rank(rows)
        best = max(best, r)
        if r == k:
            return IndependenceCertificate(
                independent=True, rank_found=k, witness=point, trials=t + 1
            )
    return IndependenceCertificate(
        independent=False, rank_found=best, witness=None, trials=trials
    )
