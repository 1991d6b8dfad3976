"""Cross-product vector fields attached to integrable maps.

Given n-1 first integrals, the generalized cross product of their gradients
is a field tangent to every common level set.  For a map F the construction
rescales that field by the Jacobian determinant of F evaluated along F^(-1);
the output is checked for exact tangency and for the intertwining identity
DF(y) X(y) = X(F(y)).

The intertwining identity is what the construction certifies; it does not by
itself make F the time-one map of X.  time_one_map exposes the truncated
flow so the two can be compared, and reports flag the difference.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import HypothesisError
from .integrals import IntegralSet
from .normalizer import MapSystem
from .scalars import sc_div
from .series import (
    ScalarSeries,
    VectorSeries,
    compose,
    compose_scalar,
    cross,
    det_series,
    gradient,
    invert,
    jacobian,
    mat_vec,
    scalar_inner,
)


@dataclass(frozen=True)
class EmbeddingField:
    """The constructed field with its provenance and verification record."""

    field: VectorSeries
    order: int
    system: MapSystem
    integrals: tuple[ScalarSeries, ...]
    tangency_residuals: tuple[ScalarSeries, ...]
    equivariance_residual: VectorSeries
    flags: tuple[str, ...] = ()

    @property
    def tangent(self) -> bool:
        return all(r.is_zero() for r in self.tangency_residuals)

    @property
    def equivariant(self) -> bool:
        return self.equivariance_residual.is_zero()


def cross_field(
    integrals: IntegralSet | Sequence[ScalarSeries], order: int | None = None
) -> VectorSeries:
    """Cross product of the integral gradients; each input is a first
    integral of the output by the repeated-row determinant identity."""
    vs = tuple(integrals)
    if not vs:
        raise ValueError("cross field needs integrals")
    n = vs[0].n
    if len(vs) != n - 1:
        raise HypothesisError(
            f"dimension {n} needs exactly {n - 1} integrals, got {len(vs)}"
        )
    grads = [gradient(v) for v in vs]
    if order is None:
        order = min(g.trunc for g in grads)
    return cross(grads, order)


def embedding_field(
    F: MapSystem,
    integrals: IntegralSet | Sequence[ScalarSeries],
    order: int | None = None,
) -> EmbeddingField:
    """det(DF) o F^(-1) times the cross product of the integral gradients.

    The determinant factor is what makes the intertwining identity provable
    from invariance of the integrals; tangency holds for the bare cross
    product already.  Both residuals are computed exactly and recorded, and
    a nonzero intertwining residual is flagged rather than hidden: it occurs
    precisely when det(DF) is not identically one, where rescaling along
    orbits would be needed and no canonical choice exists.
    """
    vs = tuple(integrals)
    n = F.n
    if len(vs) != n - 1:
        raise HypothesisError(
            f"dimension {n} needs exactly {n - 1} integrals, got {len(vs)}"
        )
    if not F.mu.has_exact_values():
        raise HypothesisError("embedding needs exactly representable eigenvalues")
    if order is None:
        order = min([F.order - 1] + [v.trunc - 1 for v in vs])
    if order < 1:
        raise ValueError("embedding order must be >= 1")
    Fm = F.full_map(F.order)
    DF = jacobian(Fm)
    det = det_series(DF, order)
    # F^(-1) = (id + B^(-1) f)^(-1) o B^(-1)
    b_inv = [sc_div(Fraction(1), v) for v in F.mu.values]
    unit = VectorSeries.identity(n, order) + VectorSeries(
        [comp.truncate(order).scale(b_inv[j]) for j, comp in enumerate(F.nonlinear.components)]
    )
    f_inv = compose(invert(unit, order), VectorSeries.diagonal_linear(b_inv, order), order)
    det_back = compose_scalar(det, f_inv, order)
    base = cross([gradient(v) for v in vs], order)
    X = VectorSeries([det_back.mul(c, order) for c in base.components])
    tangency = tuple(
        scalar_inner(gradient(v), X, order) for v in vs
    )
    equi = verify_equivariance(F, X, order)
    flags: list[str] = []
    if not equi.is_zero():
        flags.append(
            "intertwining residual DF*X - X(F) is nonzero: det(DF) is not "
            "identically one, and the determinant-rescaled construction only "
            "intertwines up to the det(DF) cocycle"
        )
    return EmbeddingField(
        field=X,
        order=order,
        system=F,
        integrals=vs,
        tangency_residuals=tangency,
        equivariance_residual=equi,
        flags=tuple(flags),
    )


def verify_equivariance(F: MapSystem, X: VectorSeries, order: int | None = None) -> VectorSeries:
    """Exact residual DF(y) X(y) - X(F(y)) through the order."""
    if order is None:
        order = min(F.order, X.trunc)
    low = X.low_degree()
    if low == 0 and order > F.order - 1:
        raise HypothesisError(
            "X has constant terms; the residual is only certified one degree "
            "below the system order"
        )
    Fm = F.full_map(F.order)
    lhs = mat_vec(jacobian(Fm), X, order)
    rhs = compose(X, Fm.truncate(order), order)
    return lhs - rhs


def time_one_map(X: VectorSeries, lie_order: int, order: int | None = None) -> VectorSeries:
    """Truncated time-one flow of X: the partial sum of the exponential of
    the derivation along X, applied to the identity.

    Exact rational output; nilpotent fields make the sum terminate, so the
    result is then independent of lie_order once it stabilizes."""
    if any(c != 0 for c in X.constant_part()):
        raise ValueError("flow needs a field without constant term")
    if order is None:
        order = X.trunc
    acc = VectorSeries.identity(X.n, order)
    term = acc
    for k in range(1, lie_order + 1):
        term = mat_vec(jacobian(term), X.truncate(order), order).scale(Fraction(1, k))
        if term.is_zero():
            break
        acc = acc + term
    return acc
