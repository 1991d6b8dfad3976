"""Sparse exact multivariate truncated power series.

A series knows its dimension ``n`` and truncation degree ``trunc``; only
monomials of total degree <= trunc are representable and explicit zeros are
never stored.  All arithmetic is exact over Fraction / GaussianRational
coefficients.  Values are immutable after construction and every operation
is a pure function, so sharing across threads is safe.

Binary operations take an explicit output truncation degree and default to
the minimum of the operands' degrees, which prevents silently claiming more
precision than the inputs carry.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import DulacError
from .scalars import Scalar, format_scalar, sc_pow

Exponent = tuple[int, ...]


class SeriesError(DulacError):
    """Dimension mismatch, bad exponents, or violated series preconditions."""


def grlex_key(m: Exponent) -> tuple[int, Exponent]:
    return (sum(m), m)


def exp_add(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def _check_exponent(m, n: int, trunc: int):
    if len(m) != n:
        raise SeriesError(f"exponent {m} has length {len(m)}, expected {n}")
    if any(e < 0 or not isinstance(e, int) for e in m):
        raise SeriesError(f"exponent {m} has negative or non-integer entries")
    if sum(m) > trunc:
        raise SeriesError(f"exponent {m} exceeds truncation degree {trunc}")


class ScalarSeries:
    """A scalar-valued series, stored as a sparse exponent -> coefficient map."""

    __slots__ = ("n", "trunc", "coeffs")

    def __init__(self, n: int, trunc: int, coeffs: dict | None = None):
        if n < 1:
            raise SeriesError("dimension must be >= 1")
        if trunc < 0:
            raise SeriesError("truncation degree must be >= 0")
        clean: dict[Exponent, Scalar] = {}
        if coeffs:
            for m, c in coeffs.items():
                m = tuple(m)
                _check_exponent(m, n, trunc)
                if isinstance(c, int):
                    c = Fraction(c)
                if c == 0:
                    continue
                clean[m] = c
        self.n = n
        self.trunc = trunc
        self.coeffs = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int, trunc: int) -> "ScalarSeries":
        return cls(n, trunc)

    @classmethod
    def const(cls, n: int, trunc: int, c) -> "ScalarSeries":
        return cls(n, trunc, {(0,) * n: c})

    @classmethod
    def one(cls, n: int, trunc: int) -> "ScalarSeries":
        return cls.const(n, trunc, 1)

    @classmethod
    def variable(cls, n: int, i: int, trunc: int) -> "ScalarSeries":
        m = tuple(1 if j == i else 0 for j in range(n))
        return cls(n, trunc, {m: 1})

    @classmethod
    def monomial(cls, n: int, trunc: int, m, c=1) -> "ScalarSeries":
        return cls(n, trunc, {tuple(m): c})

    # -- inspection --------------------------------------------------------

    def coeff(self, m) -> Scalar:
        return self.coeffs.get(tuple(m), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Largest total degree present; -1 for the zero series."""
        return max((sum(m) for m in self.coeffs), default=-1)

    def low_degree(self) -> int:
        """Smallest total degree present; -1 for the zero series."""
        return min((sum(m) for m in self.coeffs), default=-1)

    def terms(self) -> list[tuple[Exponent, Scalar]]:
        """Terms in graded lexicographic order (canonical)."""
        return sorted(self.coeffs.items(), key=lambda t: grlex_key(t[0]))

    def constant_term(self) -> Scalar:
        return self.coeff((0,) * self.n)

    def homogeneous_part(self, s: int) -> "ScalarSeries":
        return ScalarSeries(
            self.n, self.trunc, {m: c for m, c in self.coeffs.items() if sum(m) == s}
        )

    # -- structure ---------------------------------------------------------

    def truncate(self, trunc: int) -> "ScalarSeries":
        if trunc > self.trunc:
            raise SeriesError(
                f"cannot truncate to degree {trunc}: value only certified to "
                f"{self.trunc} (use with_trunc to assert exactness)"
            )
        if trunc == self.trunc:
            return self
        return ScalarSeries(
            self.n, trunc, {m: c for m, c in self.coeffs.items() if sum(m) <= trunc}
        )

    def with_trunc(self, trunc: int) -> "ScalarSeries":
        """Re-declare the truncation degree (treats the value as exact)."""
        return ScalarSeries(self.n, trunc, {m: c for m, c in self.coeffs.items() if sum(m) <= trunc})

    # -- arithmetic ---------------------------------------------------------

    def _binary_trunc(self, other: "ScalarSeries") -> int:
        if self.n != other.n:
            raise SeriesError(f"dimension mismatch: {self.n} vs {other.n}")
        return min(self.trunc, other.trunc)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ScalarSeries.const(self.n, self.trunc, other)
        if not isinstance(other, ScalarSeries):
            return NotImplemented
        trunc = self._binary_trunc(other)
        out = {m: c for m, c in self.coeffs.items() if sum(m) <= trunc}
        for m, c in other.coeffs.items():
            if sum(m) > trunc:
                continue
            v = out.get(m, Fraction(0)) + c
            if v == 0:
                out.pop(m, None)
            else:
                out[m] = v
        return ScalarSeries(self.n, trunc, out)

    __radd__ = __add__

    def __neg__(self):
        return ScalarSeries(self.n, self.trunc, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ScalarSeries.const(self.n, self.trunc, other)
        if not isinstance(other, ScalarSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "ScalarSeries":
        if isinstance(c, int):
            c = Fraction(c)
        if c == 0:
            return ScalarSeries.zero(self.n, self.trunc)
        return ScalarSeries(self.n, self.trunc, {m: c * v for m, v in self.coeffs.items()})

    def mul(self, other: "ScalarSeries", trunc: int | None = None) -> "ScalarSeries":
        """Exact truncated product; every kept coefficient is the full convolution."""
        if trunc is None:
            trunc = self._binary_trunc(other)
        elif self.n != other.n:
            raise SeriesError(f"dimension mismatch: {self.n} vs {other.n}")
        a, b = self, other
        if len(a.coeffs) > len(b.coeffs):
            a, b = b, a
        out: dict[Exponent, Scalar] = {}
        bterms = sorted(((sum(m), m, c) for m, c in b.coeffs.items()))
        for ma, ca in a.coeffs.items():
            da = sum(ma)
            room = trunc - da
            if room < 0:
                continue
            for db, mb, cb in bterms:
                if db > room:
                    break
                m = exp_add(ma, mb)
                v = out.get(m)
                v = ca * cb if v is None else v + ca * cb
                out[m] = v
        out = {m: c for m, c in out.items() if c != 0}
        return ScalarSeries(self.n, trunc, out)

    def __mul__(self, other):
        if isinstance(other, ScalarSeries):
            return self.mul(other)
        if isinstance(other, (int, Fraction)) or hasattr(other, "abs2"):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) or hasattr(other, "abs2"):
            return self.scale(other)
        return NotImplemented

    def pow_int(self, k: int, trunc: int | None = None) -> "ScalarSeries":
        if k < 0:
            raise SeriesError("negative power of a plain series; use unit_power")
        if trunc is None:
            trunc = self.trunc
        result = ScalarSeries.one(self.n, trunc)
        base = self.truncate(trunc)
        while k:
            if k & 1:
                result = result.mul(base, trunc)
            k >>= 1
            if k:
                base = base.mul(base, trunc)
        return result

    # -- calculus ----------------------------------------------------------

    def diff(self, i: int) -> "ScalarSeries":
        out: dict[Exponent, Scalar] = {}
        for m, c in self.coeffs.items():
            if m[i] == 0:
                continue
            dm = m[:i] + (m[i] - 1,) + m[i + 1 :]
            out[dm] = c * m[i]
        return ScalarSeries(self.n, max(self.trunc - 1, 0), out)

    def eval(self, point: Sequence[Scalar]) -> Scalar:
        """Exact evaluation at a point (the truncation is evaluated as given)."""
        if len(point) != self.n:
            raise SeriesError("point dimension mismatch")
        total: Scalar = Fraction(0)
        for m, c in self.coeffs.items():
            v: Scalar = c
            for p, e in zip(point, m):
                if e:
                    v = v * sc_pow(p, e)
            total = total + v
        return total

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, ScalarSeries):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))

    def __str__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for m, c in self.terms():
            mono = "*".join(
                f"y{i+1}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(m)
                if e > 0
            )
            cs = format_scalar(c)
            bits.append(f"({cs})" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)

    def __repr__(self):
        return f"ScalarSeries(n={self.n}, trunc={self.trunc}, {str(self)})"


class VectorSeries:
    """A tuple of n scalar series in n variables sharing one truncation degree."""

    __slots__ = ("n", "trunc", "components")

    def __init__(self, components: Sequence[ScalarSeries]):
        components = tuple(components)
        if not components:
            raise SeriesError("empty vector series")
        n = components[0].n
        if len(components) != n:
            raise SeriesError(f"{len(components)} components for dimension {n}")
        if any(c.n != n for c in components):
            raise SeriesError("component dimension mismatch")
        trunc = min(c.trunc for c in components)
        self.n = n
        self.trunc = trunc
        self.components = tuple(c.truncate(trunc) for c in components)

    @classmethod
    def zero(cls, n: int, trunc: int) -> "VectorSeries":
        return cls([ScalarSeries.zero(n, trunc)] * n)

    @classmethod
    def identity(cls, n: int, trunc: int) -> "VectorSeries":
        return cls([ScalarSeries.variable(n, i, trunc) for i in range(n)])

    @classmethod
    def diagonal_linear(cls, diag: Sequence[Scalar], trunc: int) -> "VectorSeries":
        n = len(diag)
        return cls(
            [ScalarSeries.variable(n, i, trunc).scale(diag[i]) for i in range(n)]
        )

    @classmethod
    def from_terms(
        cls, n: int, trunc: int, terms: Iterable[tuple[int, Exponent, Scalar]]
    ) -> "VectorSeries":
        """Build from (component, exponent, coefficient) triples; 0-based components."""
        maps: list[dict] = [dict() for _ in range(n)]
        for j, m, c in terms:
            if not 0 <= j < n:
                raise SeriesError(f"component index {j} out of range")
            m = tuple(m)
            prev = maps[j].get(m, Fraction(0))
            maps[j][m] = prev + c
        return cls([ScalarSeries(n, trunc, mp) for mp in maps])

    def __getitem__(self, i: int) -> ScalarSeries:
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def low_degree(self) -> int:
        degs = [c.low_degree() for c in self.components if not c.is_zero()]
        return min(degs) if degs else -1

    def truncate(self, trunc: int) -> "VectorSeries":
        return VectorSeries([c.truncate(trunc) for c in self.components])

    def with_trunc(self, trunc: int) -> "VectorSeries":
        return VectorSeries([c.with_trunc(trunc) for c in self.components])

    def map(self, f) -> "VectorSeries":
        return VectorSeries([f(c) for c in self.components])

    def __add__(self, other):
        if not isinstance(other, VectorSeries):
            return NotImplemented
        return VectorSeries([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        if not isinstance(other, VectorSeries):
            return NotImplemented
        return VectorSeries([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return VectorSeries([-c for c in self.components])

    def scale(self, c) -> "VectorSeries":
        return VectorSeries([comp.scale(c) for comp in self.components])

    def constant_part(self) -> tuple[Scalar, ...]:
        return tuple(c.constant_term() for c in self.components)

    def linear_matrix(self) -> list[list[Scalar]]:
        """The n x n matrix of degree-1 coefficients."""
        mat = []
        for comp in self.components:
            row = []
            for j in range(self.n):
                e = tuple(1 if k == j else 0 for k in range(self.n))
                row.append(comp.coeff(e))
            mat.append(row)
        return mat

    def strip_low(self, min_degree: int) -> "VectorSeries":
        """Drop all terms of total degree < min_degree."""
        return VectorSeries(
            [
                ScalarSeries(
                    self.n,
                    self.trunc,
                    {m: c for m, c in comp.coeffs.items() if sum(m) >= min_degree},
                )
                for comp in self.components
            ]
        )

    def homogeneous_part(self, s: int) -> "VectorSeries":
        return VectorSeries([c.homogeneous_part(s) for c in self.components])

    def __eq__(self, other):
        if not isinstance(other, VectorSeries):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"

    def __repr__(self):
        return f"VectorSeries(n={self.n}, trunc={self.trunc}, {str(self)})"


# -- composition and inversion ----------------------------------------------


class _PowerCache:
    """Lazy cache of truncated powers of each component of an inner map."""

    def __init__(self, inner: VectorSeries, trunc: int):
        self.trunc = trunc
        self.pows: list[list[ScalarSeries]] = [
            [ScalarSeries.one(inner.n, trunc), comp.truncate(trunc)]
            for comp in inner.components
        ]

    def get(self, i: int, k: int) -> ScalarSeries:
        col = self.pows[i]
        while len(col) <= k:
            col.append(col[-1].mul(col[1], self.trunc))
        return col[k]

    def monomial(self, m: Exponent) -> ScalarSeries:
        result: ScalarSeries | None = None
        for i, e in enumerate(m):
            if e == 0:
                continue
            p = self.get(i, e)
            result = p if result is None else result.mul(p, self.trunc)
        if result is None:
            raise SeriesError("constant exponent in composition")
        return result


def compose_scalar(
    outer: ScalarSeries, inner: VectorSeries, trunc: int | None = None
) -> ScalarSeries:
    """Exact truncation of outer(inner(y)); inner must have no constant term."""
    if outer.n != inner.n:
        raise SeriesError("composition dimension mismatch")
    if any(c != 0 for c in inner.constant_part()):
        raise SeriesError("inner map has a constant term")
    if trunc is None:
        trunc = min(outer.trunc, inner.trunc)
    cache = _PowerCache(inner, trunc)
    out = ScalarSeries.zero(outer.n, trunc)
    const = outer.constant_term()
    if const != 0:
        out = out + ScalarSeries.const(outer.n, trunc, const)
    # inner is constant-free, so a degree-d outer term only feeds degrees >= d
    for m, c in outer.terms():
        d = sum(m)
        if d == 0:
            continue
        if d > trunc:
            break
        out = out + cache.monomial(m).scale(c)
    return out


def compose(
    outer: VectorSeries, inner: VectorSeries, trunc: int | None = None
) -> VectorSeries:
    """Componentwise exact truncated composition outer o inner."""
    if trunc is None:
        trunc = min(outer.trunc, inner.trunc)
    if outer.n != inner.n:
        raise SeriesError("composition dimension mismatch")
    if any(c != 0 for c in inner.constant_part()):
        raise SeriesError("inner map has a constant term")
    cache = _PowerCache(inner, trunc)
    comps = []
    for comp in outer.components:
        out = ScalarSeries.zero(outer.n, trunc)
        const = comp.constant_term()
        if const != 0:
            out = out + ScalarSeries.const(outer.n, trunc, const)
        for m, c in comp.terms():
            if sum(m) == 0:
                continue
            if sum(m) > trunc:
                break
            out = out + cache.monomial(m).scale(c)
        comps.append(out)
    return VectorSeries(comps)


def invert(phi: VectorSeries, trunc: int | None = None) -> VectorSeries:
    """Compositional inverse of a tangent-to-identity map, by back-substitution.

    phi must be identity + higher-order terms; the result psi satisfies
    compose(phi, psi) == compose(psi, phi) == identity through the truncation
    degree exactly.
    """
    if trunc is None:
        trunc = phi.trunc
    n = phi.n
    ident = VectorSeries.identity(n, trunc)
    if any(c != 0 for c in phi.constant_part()):
        raise SeriesError("map to invert has a constant term")
    lin = phi.linear_matrix()
    if any(lin[i][j] != (1 if i == j else 0) for i in range(n) for j in range(n)):
        raise SeriesError("linear part is not the identity; factor it out first")
    nonlinear = (phi.truncate(trunc) - ident).strip_low(2)
    psi = ident
    # each pass settles one more degree: after k passes psi is exact through k+1
    for _ in range(max(trunc - 1, 0)):
        psi = ident - compose(nonlinear, psi, trunc)
    return psi


# -- matrices of series ------------------------------------------------------


def jacobian(F: VectorSeries) -> list[list[ScalarSeries]]:
    """Matrix of partial derivatives, entry (i, j) = dF_i/dy_j."""
    return [[comp.diff(j) for j in range(F.n)] for comp in F.components]


def gradient(V: ScalarSeries) -> VectorSeries:
    return VectorSeries([V.diff(j) for j in range(V.n)])


def mat_vec(
    M: Sequence[Sequence[ScalarSeries]], X: VectorSeries, trunc: int | None = None
) -> VectorSeries:
    if trunc is None:
        trunc = min(min(e.trunc for e in row) for row in M)
        trunc = min(trunc, X.trunc)
    comps = []
    for row in M:
        acc = ScalarSeries.zero(X.n, trunc)
        for entry, x in zip(row, X.components):
            acc = acc + entry.mul(x, trunc)
        comps.append(acc)
    return VectorSeries(comps)


def det_series(M: Sequence[Sequence[ScalarSeries]], trunc: int | None = None) -> ScalarSeries:
    """Exact truncated determinant via minor expansion memoized on column sets.

    Division-free: fraction-free elimination would need exact quotients that
    truncation destroys, so cofactor expansion is used at every size.
    """
    k = len(M)
    if any(len(row) != k for row in M):
        raise SeriesError("determinant of a non-square matrix")
    n = M[0][0].n
    if trunc is None:
        trunc = min(min(e.trunc for e in row) for row in M)
    # minors[cols] = det of rows 0..len(cols)-1 restricted to cols
    minors: dict[tuple[int, ...], ScalarSeries] = {(): ScalarSeries.one(n, trunc)}
    for size in range(1, k + 1):
        nxt: dict[tuple[int, ...], ScalarSeries] = {}
        row = M[size - 1]
        for cols in combinations(range(k), size):
            acc = ScalarSeries.zero(n, trunc)
            for pos, j in enumerate(cols):
                entry = row[j]
                if entry.is_zero():
                    continue
                sub = minors[cols[:pos] + cols[pos + 1 :]]
                term = entry.mul(sub, trunc)
                # expansion along the last used row: sign (-1)^(row+pos)
                acc = acc + (term if (size - 1 + pos) % 2 == 0 else -term)
            nxt[cols] = acc
        minors = nxt
    return minors[tuple(range(k))]


def cross(vs: Sequence[VectorSeries], trunc: int | None = None) -> VectorSeries:
    """Generalized cross product of n-1 vectors in dimension n.

    Returns the vector c with <c, w> = det(w; v_1; ...; v_{n-1}) for every w;
    c is exactly orthogonal to each input.
    """
    vs = list(vs)
    if not vs:
        raise SeriesError("cross product needs at least one vector")
    n = vs[0].n
    if len(vs) != n - 1:
        raise SeriesError(f"cross product in dimension {n} needs {n-1} vectors")
    if any(v.n != n for v in vs):
        raise SeriesError("cross product dimension mismatch")
    if trunc is None:
        trunc = min(v.trunc for v in vs)
    comps = []
    for j in range(n):
        minor = [[v.components[c] for c in range(n) if c != j] for v in vs]
        d = det_series(minor, trunc) if n > 1 else ScalarSeries.one(n, trunc)
        comps.append(d if j % 2 == 0 else -d)
    return VectorSeries(comps)


def unit_power(u: ScalarSeries, r, trunc: int | None = None) -> ScalarSeries:
    """Exact truncation of (1 + u)^r for rational r; u must have no constant term."""
    if u.constant_term() != 0:
        raise SeriesError("unit_power needs a series without constant term")
    r = Fraction(r)
    if trunc is None:
        trunc = u.trunc
    u = u.truncate(trunc)
    result = ScalarSeries.one(u.n, trunc)
    term = ScalarSeries.one(u.n, trunc)
    low = u.low_degree()
    if low < 0:
        return result
    k = 0
    while k * low <= trunc:
        k += 1
        coef = Fraction(r - (k - 1), k)
        if coef == 0:
            break
        term = term.mul(u, trunc).scale(coef)
        if term.is_zero():
            break
        result = result + term
    return result


def scalar_inner(a: VectorSeries, b: VectorSeries, trunc: int | None = None) -> ScalarSeries:
    """Exact truncated inner product <a, b> = sum a_i * b_i."""
    if a.n != b.n:
        raise SeriesError("inner product dimension mismatch")
    if trunc is None:
        trunc = min(a.trunc, b.trunc)
    acc = ScalarSeries.zero(a.n, trunc)
    for x, y in zip(a.components, b.components):
        acc = acc + x.mul(y, trunc)
    return acc
