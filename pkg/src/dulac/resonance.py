"""Eigenvalue data, exact resonance tests, resonant lattices, divisor bounds.

Eigenvalue tuples come in three exact forms:

* ``additive`` -- vector-field eigenvalues, Gaussian rationals; a monomial
  ``y^m e_j`` resonates when ``<m, lambda> = lambda_j``.
* ``mult-rational`` -- map multipliers given directly as nonzero Gaussian
  rationals; ``y^m e_j`` resonates when ``mu^m = mu_j``.
* ``mult-base`` -- map multipliers ``mu_i = beta^(a_i) * e^(2*pi*i*b_i)``
  with rational exponents and phases over a formal real base ``beta > 1``
  that is never evaluated; all resonance queries reduce to exact rational
  arithmetic on the exponents and phases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Union

from .errors import HypothesisError, InternalInvariantError
from .linalg import int_det, primitive_integer_kernel
from .scalars import (
    GaussianRational,
    Scalar,
    exact_sqrt,
    format_scalar,
    sc_abs2,
    sc_im,
    sc_pow,
    sc_re,
    scalar_to_json,
)

Exponent = tuple[int, ...]


# -- eigenvalue data ----------------------------------------------------------


@dataclass(frozen=True)
class EigenSpec:
    """Exact eigenvalues of a diagonal linear part."""

    kind: str  # "additive" | "mult-rational" | "mult-base"
    n: int
    values: tuple[Scalar, ...] = ()  # additive / mult-rational
    exponents: tuple[Fraction, ...] = ()  # mult-base: a_i
    phases: tuple[Fraction, ...] = ()  # mult-base: b_i in [0, 1)

    @classmethod
    def additive(cls, values: Sequence) -> "EigenSpec":
        vals = tuple(_as_scalar(v) for v in values)
        return cls(kind="additive", n=len(vals), values=vals)

    @classmethod
    def multiplicative(cls, values: Sequence) -> "EigenSpec":
        vals = tuple(_as_scalar(v) for v in values)
        if any(v == 0 for v in vals):
            raise ValueError("map multipliers must be nonzero")
        return cls(kind="mult-rational", n=len(vals), values=vals)

    @classmethod
    def multiplicative_base(
        cls, exponents: Sequence, phases: Sequence | None = None
    ) -> "EigenSpec":
        exps = tuple(Fraction(a) for a in exponents)
        if phases is None:
            phs = (Fraction(0),) * len(exps)
        else:
            phs = tuple(Fraction(b) % 1 for b in phases)
        if len(phs) != len(exps):
            raise ValueError("exponent and phase tuples differ in length")
        return cls(kind="mult-base", n=len(exps), exponents=exps, phases=phs)

    def is_multiplicative(self) -> bool:
        return self.kind in ("mult-rational", "mult-base")

    def has_exact_values(self) -> bool:
        """True when the eigenvalues themselves live in the coefficient field."""
        return self.kind in ("additive", "mult-rational")

    def power(self, m: Exponent) -> Scalar:
        """The exact multiplier power mu^m."""
        if self.kind != "mult-rational":
            raise HypothesisError("exact multiplier powers need the mult-rational form")
        out: Scalar = Fraction(1)
        for mu, e in zip(self.values, m):
            if e:
                out = out * sc_pow(mu, e)
        return out

    def inner(self, m: Exponent) -> Scalar:
        """<m, lambda> for the additive kind."""
        if self.kind != "additive":
            raise HypothesisError("inner products need the additive form")
        out: Scalar = Fraction(0)
        for lam, e in zip(self.values, m):
            if e:
                out = out + lam * e
        return out

    def base_data(self) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        if self.kind != "mult-base":
            raise HypothesisError("base data only exists for the mult-base form")
        return self.exponents, self.phases

    def describe(self) -> str:
        if self.kind == "mult-base":
            mus = ", ".join(
                f"b^({a})" + (f"*e(2*pi*i*{b})" if b else "")
                for a, b in zip(self.exponents, self.phases)
            )
            return f"({mus})  [formal base b > 1]"
        return "(" + ", ".join(format_scalar(v) for v in self.values) + ")"


def _as_scalar(v) -> Scalar:
    if isinstance(v, GaussianRational):
        return v
    return Fraction(v)


# -- resonance tests ----------------------------------------------------------


def is_resonant_map(mu: EigenSpec, m: Exponent, j: Optional[int] = None) -> bool:
    """mu^m == mu_j, or mu^m == 1 when j is None (first-integral resonance)."""
    if not mu.is_multiplicative():
        raise HypothesisError("is_resonant_map needs a multiplicative eigen spec")
    m = tuple(m)
    if mu.kind == "mult-rational":
        target: Scalar = Fraction(1) if j is None else mu.values[j]
        return mu.power(m) == target
    a, b = mu.exponents, mu.phases
    ta = Fraction(0) if j is None else a[j]
    tb = Fraction(0) if j is None else b[j]
    da = sum(ai * e for ai, e in zip(a, m)) - ta
    db = (sum(bi * e for bi, e in zip(b, m)) - tb) % 1
    return da == 0 and db == 0


def is_resonant_field(lam: EigenSpec, m: Exponent, j: Optional[int] = None) -> bool:
    """<m, lambda> == lambda_j, or == 0 when j is None."""
    if lam.kind != "additive":
        raise HypothesisError("is_resonant_field needs an additive eigen spec")
    m = tuple(m)
    target: Scalar = Fraction(0) if j is None else lam.values[j]
    return lam.inner(m) == target


def transformation_resonant(spec: EigenSpec, m: Exponent, j: int) -> bool:
    """Resonance in the normalization sense for a monomial y^m e_j."""
    if spec.kind == "additive":
        return is_resonant_field(spec, m, j)
    return is_resonant_map(spec, m, j)


def lattice_resonant(spec: EigenSpec, m: Exponent) -> bool:
    """Resonance in the first-integral sense (mu^m = 1 resp. <m, lambda> = 0)."""
    if spec.kind == "additive":
        return is_resonant_field(spec, m, None)
    return is_resonant_map(spec, m, None)


def homological_divisor(spec: EigenSpec, m: Exponent, j: int) -> Scalar:
    """The exact divisor mu^m - mu_j (maps) or <m, lambda> - lambda_j (fields)."""
    if spec.kind == "additive":
        return spec.inner(m) - spec.values[j]
    if spec.kind == "mult-rational":
        return spec.power(m) - spec.values[j]
    raise HypothesisError(
        "homological divisors are not in the coefficient field for a formal base; "
        "supply mult-rational eigenvalues"
    )


# -- resonant lattice ---------------------------------------------------------


@dataclass(frozen=True)
class LatticeBasis:
    """Resonant exponents up to a degree bound, with rank and generators.

    ``rank`` is the rank over Q of every resonant exponent found with
    2 <= |m| <= bound.  Generators satisfy the defining resonance exactly and
    are chosen greedily in graded lexicographic order, preferring simple
    elements (entry gcd 1, after dividing out as much of the gcd as the
    resonance allows).  Multiplicative torsion can leave rays with no simple
    resonant element at all; such generators are listed in ``non_simple``.
    ``span_deficit`` is rank minus the rank of the generators (0 unless even
    the fallback could not span).
    """

    kind: str  # "map" | "field"
    n: int
    bound: int
    exponents: tuple[Exponent, ...]
    rank: int
    generators: tuple[Exponent, ...]
    span_deficit: int = 0
    non_simple: tuple[Exponent, ...] = ()

    def matrix(self) -> list[list[int]]:
        return [list(g) for g in self.generators]


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def iter_exponents(n: int, low: int, high: int):
    """All exponent tuples with low <= |m| <= high, in graded-lex order."""
    for s in range(low, high + 1):
        yield from _compositions(s, n)


class _IncrementalRank:
    def __init__(self):
        self.rows: list[list[Fraction]] = []

    def add(self, vec: Sequence[int]) -> bool:
        v = [Fraction(x) for x in vec]
        for row in self.rows:
            piv = next(i for i, x in enumerate(row) if x != 0)
            if v[piv] != 0:
                f = v[piv] / row[piv]
                v = [a - f * b for a, b in zip(v, row)]
        if all(x == 0 for x in v):
            return False
        self.rows.append(v)
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def enumerate_lattice(spec: EigenSpec, bound: int) -> LatticeBasis:
    """All resonant exponents with 2 <= |m| <= bound, their rank, and generators.

    Rank can only be under-reported when the bound is too small; the bound is
    recorded so every downstream claim is certified "at degree D".
    """
    if bound < 2:
        raise ValueError("enumeration bound must be >= 2")
    kind = "field" if spec.kind == "additive" else "map"
    found: list[Exponent] = []
    full = _IncrementalRank()
    candidates: list[Exponent] = []
    seen: set[Exponent] = set()
    for m in iter_exponents(spec.n, 2, bound):
        if not lattice_resonant(spec, m):
            continue
        found.append(m)
        full.add(m)
        cand = _generator_candidate(spec, m)
        if cand not in seen:
            seen.add(cand)
            candidates.append(cand)
    # greedy in graded-lex arrival order, simple candidates first
    gens: list[Exponent] = []
    gen_rank = _IncrementalRank()
    for simple_pass in (True, False):
        for cand in candidates:
            if _is_simple(cand) != simple_pass:
                continue
            if gen_rank.rank == full.rank:
                break
            if gen_rank.add(cand):
                gens.append(cand)
    return LatticeBasis(
        kind=kind,
        n=spec.n,
        bound=bound,
        exponents=tuple(found),
        rank=full.rank,
        generators=tuple(gens),
        span_deficit=full.rank - gen_rank.rank,
        non_simple=tuple(g for g in gens if not _is_simple(g)),
    )


def _is_simple(m: Exponent) -> bool:
    g = 0
    for e in m:
        g = gcd(g, e)
    return g == 1


def _generator_candidate(spec: EigenSpec, m: Exponent) -> Exponent:
    """Most-divided representative of m that still satisfies the resonance:
    m/d for the largest divisor d of the entry gcd keeping m/d resonant.
    For fields any d works, so the result is always simple; multiplicative
    torsion can force d < gcd."""
    g = 0
    for e in m:
        g = gcd(g, e)
    if g == 1:
        return m
    for d in sorted(_divisors(g), reverse=True):
        reduced = tuple(e // d for e in m)
        if d == 1 or lattice_resonant(spec, reduced):
            return reduced
    return m


def _divisors(g: int) -> list[int]:
    out = []
    d = 1
    while d * d <= g:
        if g % d == 0:
            out.append(d)
            out.append(g // d)
        d += 1
    return sorted(set(out))


# -- exact value forms for bounds --------------------------------------------


class RootValue:
    """A positive irrational square root of a rational, compared via squares."""

    __slots__ = ("square",)

    def __init__(self, square: Fraction):
        if square <= 0:
            raise ValueError("radicand must be positive")
        self.square = Fraction(square)

    def __mul__(self, other):
        if isinstance(other, RootValue):
            return sqrt_value(self.square * other.square)
        if isinstance(other, (int, Fraction)):
            if other < 0:
                raise ValueError("negative factor on a positive root")
            return sqrt_value(self.square * other * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return sqrt_value(self.square / (Fraction(other) ** 2))
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, RootValue):
            return self.square == other.square
        if isinstance(other, (int, Fraction)):
            return False  # never rational by construction
        return NotImplemented

    def __hash__(self):
        return hash(("RootValue", self.square))

    def __le__(self, other):
        return self.square <= _square_of(other)

    def __lt__(self, other):
        return self.square < _square_of(other)

    def __ge__(self, other):
        return self.square >= _square_of(other)

    def __gt__(self, other):
        return self.square > _square_of(other)

    def __str__(self):
        return f"sqrt({self.square})"

    def __repr__(self):
        return f"RootValue({self.square!r})"


ExactValue = Union[Fraction, RootValue]


def sqrt_value(q: Fraction) -> ExactValue:
    """Exact sqrt(q) for q >= 0: a Fraction when possible, else a RootValue."""
    q = Fraction(q)
    r = exact_sqrt(q)
    return r if r is not None else RootValue(q)


def _square_of(x) -> Fraction:
    if isinstance(x, RootValue):
        return x.square
    x = Fraction(x)
    if x < 0:
        raise ValueError("comparing a positive root against a negative number")
    return x * x


def value_le(a: ExactValue, b: ExactValue) -> bool:
    """a <= b for nonnegative exact values, decided on squares."""
    return _square_of(a) <= _square_of(b)


# -- small-divisor bounds ------------------------------------------------------


@dataclass(frozen=True)
class BoundTerm:
    """One candidate lower bound of the form beta^c * factor where the factor
    is (1 - beta^(-g)) for kind "unit-gap" or 2*sin(pi*d) for "phase-gap"."""

    beta_exp: Fraction
    kind: str
    param: Fraction

    def describe(self, base: str = "b") -> str:
        pre = f"{base}^({self.beta_exp})*" if self.beta_exp != 0 else ""
        if self.kind == "unit-gap":
            return f"{pre}(1 - {base}^(-{self.param}))"
        return f"{pre}2*sin(pi*{self.param})"


@dataclass(frozen=True)
class SymbolicBound:
    """min over candidate terms, over a formal or known rational base > 1."""

    terms: tuple[BoundTerm, ...]
    beta: Optional[Fraction] = None

    def describe(self) -> str:
        base = "b" if self.beta is None else f"({self.beta})"
        parts = [t.describe(base) for t in self.terms]
        body = parts[0] if len(parts) == 1 else "min(" + ", ".join(parts) + ")"
        if self.beta is None:
            return body + "  [b > 1 formal]"
        return body


BoundValue = Union[Fraction, RootValue, SymbolicBound]


@dataclass(frozen=True)
class SmallDivisorBound:
    """A positive lower bound on every nonzero homological divisor."""

    kind: str  # "map" | "field"
    value: BoundValue
    certificate: dict = field(default_factory=dict)

    def describe(self) -> str:
        if isinstance(self.value, SymbolicBound):
            return self.value.describe()
        return str(self.value)


def _factor_positive_rational(q: Fraction) -> dict[int, int]:
    """Prime -> exponent map of a positive rational (trial division)."""
    if q <= 0:
        raise ValueError("factorization needs a positive rational")
    out: dict[int, int] = {}

    def absorb(n: int, sign: int):
        d = 2
        while d * d <= n:
            while n % d == 0:
                out[d] = out.get(d, 0) + sign
                n //= d
            d += 1 if d == 2 else 2
        if n > 1:
            out[n] = out.get(n, 0) + sign

    absorb(q.numerator, 1)
    absorb(q.denominator, -1)
    return {p: e for p, e in out.items() if e != 0}


def _beta_power(beta_factors: dict[int, int], q: Fraction) -> Optional[ExactValue]:
    """beta^q exactly, when it is a rational or the root of one."""
    for scale, root in ((1, False), (2, True)):
        exps = {}
        ok = True
        for p, e in beta_factors.items():
            t = Fraction(e) * q * scale
            if t.denominator != 1:
                ok = False
                break
            exps[p] = int(t)
        if ok:
            val = Fraction(1)
            for p, e in exps.items():
                val *= Fraction(p) ** e
            return sqrt_value(val) if root else val
    return None


_PHASE_GAP_EXACT = {
    Fraction(1, 2): Fraction(2),  # 2 sin(pi/2)
    Fraction(1, 3): RootValue(Fraction(3)),
    Fraction(1, 4): RootValue(Fraction(2)),
    Fraction(1, 6): Fraction(1),
}


def _eval_term(term: BoundTerm, beta: Optional[Fraction]) -> Optional[ExactValue]:
    if beta is None:
        return None
    factors = _factor_positive_rational(beta)
    pre = _beta_power(factors, term.beta_exp)
    if pre is None:
        return None
    if term.kind == "unit-gap":
        inner = _beta_power(factors, -term.param)
        if not isinstance(inner, Fraction):
            return None
        return pre * (1 - inner)
    gamma = _PHASE_GAP_EXACT.get(term.param)
    if gamma is None:
        return None
    return pre * gamma


def _finish_bound(
    kind: str, terms: list[BoundTerm], beta: Optional[Fraction], certificate: dict
) -> SmallDivisorBound:
    values = [_eval_term(t, beta) for t in terms]
    if all(v is not None for v in values):
        best = values[0]
        for v in values[1:]:
            if value_le(v, best):
                best = v
        return SmallDivisorBound(kind=kind, value=best, certificate=certificate)
    sym = SymbolicBound(terms=tuple(terms), beta=beta)
    return SmallDivisorBound(kind=kind, value=sym, certificate=certificate)


# signs of (cos 2*pi*b, sin 2*pi*b) for the eighth-of-a-turn phases
_EIGHTH_SIGNS = {
    Fraction(0): (1, 0),
    Fraction(1, 8): (1, 1),
    Fraction(1, 4): (0, 1),
    Fraction(3, 8): (-1, 1),
    Fraction(1, 2): (-1, 0),
    Fraction(5, 8): (-1, -1),
    Fraction(3, 4): (0, -1),
    Fraction(7, 8): (1, -1),
}


def _phases_of_gaussian(mu: Scalar, r2: Fraction) -> Fraction:
    """The phase b in [0,1) with mu = |mu| e^(2 pi i b), when b is a multiple
    of 1/8 (the only rational phases a Gaussian rational can have)."""
    d = (mu * mu) / r2  # e^(4 pi i b), a Gaussian rational on the unit circle
    table = {
        (1, 0): (Fraction(0), Fraction(1, 2)),
        (-1, 0): (Fraction(1, 4), Fraction(3, 4)),
        (0, 1): (Fraction(1, 8), Fraction(5, 8)),
        (0, -1): (Fraction(3, 8), Fraction(7, 8)),
    }
    key = (sc_re(d), sc_im(d))
    if key not in table:
        raise HypothesisError(
            "eigenvalue phase is not a rational turn representable over the "
            "Gaussian rationals; supply the mult-base form instead"
        )
    cands = table[key]  # two phases half a turn apart

    def sign(x: Fraction) -> int:
        return (x > 0) - (x < 0)

    signs = (sign(sc_re(mu)), sign(sc_im(mu)))
    for b in cands:
        if _EIGHTH_SIGNS[b] == signs:
            return b
    raise InternalInvariantError(f"phase quadrant resolution failed for {mu}")


def _rational_to_base(
    mus: tuple[Scalar, ...]
) -> tuple[Fraction, tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Write exact multipliers as beta^(a_i) e^(2 pi i b_i) with a known
    rational base beta > 1.  Requires the moduli to be multiplicatively
    dependent of rank one, which the rank-(n-1) resonance hypothesis grants."""
    r2 = [sc_abs2(mu) for mu in mus]
    if all(x == 1 for x in r2):
        raise HypothesisError("all eigenvalue moduli equal 1")
    valuations = [_factor_positive_rational(x) if x != 1 else {} for x in r2]
    primes = sorted({p for v in valuations for p in v})
    vecs = [[v.get(p, 0) for p in primes] for v in valuations]
    pivot = next(v for v in vecs if any(v))
    g = 0
    for x in pivot:
        g = gcd(g, x)
    w = [x // g for x in pivot]
    coeffs = []
    for v in vecs:
        if not any(v):
            coeffs.append(Fraction(0))
            continue
        j = next(i for i, x in enumerate(w) if x != 0)
        c = Fraction(v[j], w[j])
        if any(Fraction(x) != c * y for x, y in zip(v, w)):
            raise HypothesisError(
                "eigenvalue moduli are not powers of a common base; the "
                "resonant rank hypothesis fails for this spectrum"
            )
        coeffs.append(c)
    beta = Fraction(1)
    for p, e in zip(primes, w):
        beta *= Fraction(p) ** e
    if beta < 1:
        beta = 1 / beta
        coeffs = [-c for c in coeffs]
    # R_i = |mu_i|^2 = beta^(c_i), so |mu_i| = beta^(c_i / 2)
    a = tuple(c / 2 for c in coeffs)
    b = tuple(_phases_of_gaussian(mu, ri) for mu, ri in zip(mus, r2))
    return beta, a, b


def _pivot_and_deltas(K: list[list[int]], n: int) -> tuple[int, int, list[int]]:
    """Choose the pivot coordinate and solve the modulus relations by Cramer.

    Returns (pivot index c, Delta, delta) with delta[c] = Delta and, for the
    one-line kernel relation, a_j * Delta = delta_j * a_c for every j.
    """
    for c in range(n - 1, -1, -1):
        M = [[row[j] for j in range(n) if j != c] for row in K]
        Delta = int_det(M)
        if Delta == 0:
            continue
        others = [j for j in range(n) if j != c]
        delta = [0] * n
        delta[c] = Delta
        rhs = [-row[c] for row in K]
        for pos, j in enumerate(others):
            Mj = [row[:] for row in M]
            for i in range(len(Mj)):
                Mj[i][pos] = rhs[i]
            delta[j] = int_det(Mj)
        return c, Delta, delta
    raise InternalInvariantError("no nonsingular generator minor found")


def small_divisor_bound_map(mu: EigenSpec, basis: LatticeBasis) -> SmallDivisorBound:
    """Constructive sigma > 0 with |mu^m - mu_j| >= sigma for every nonresonant
    pair, built from the resonant-lattice generators."""
    if not mu.is_multiplicative():
        raise HypothesisError("map bound needs multiplicative eigenvalues")
    if basis.kind != "map" or basis.rank != mu.n - 1 or len(basis.generators) != mu.n - 1:
        raise HypothesisError(
            f"map bound needs a rank n-1 = {mu.n - 1} lattice basis, got rank "
            f"{basis.rank} with {len(basis.generators)} generators"
        )
    if mu.kind == "mult-base":
        beta: Optional[Fraction] = None
        a, b = mu.exponents, mu.phases
        if all(x == 0 for x in a):
            raise HypothesisError("all eigenvalue moduli equal 1")
    else:
        beta, a, b = _rational_to_base(mu.values)
    K = basis.matrix()
    c, Delta, delta = _pivot_and_deltas(K, mu.n)
    if a[c] == 0:
        raise InternalInvariantError("pivot coordinate has unit modulus")
    e_alpha = a[c] / Delta
    for j in range(mu.n):
        if a[j] * Delta != delta[j] * a[c]:
            raise InternalInvariantError("modulus exponents violate the lattice relations")
    c_min = min(a)
    terms = [BoundTerm(beta_exp=c_min, kind="unit-gap", param=abs(e_alpha))]
    L = 1
    for ph in b:
        L = L * ph.denominator // gcd(L, ph.denominator)
    if L > 1:
        terms.append(BoundTerm(beta_exp=c_min, kind="phase-gap", param=Fraction(1, L)))
    certificate = {
        "pivot": c,
        "Delta": Delta,
        "delta": tuple(delta),
        "alpha_exp": e_alpha,  # alpha = beta^(alpha_exp) = |mu_pivot|^(1/Delta)
        "base": beta,
        "base_exponents": tuple(a),
        "phases": tuple(b),
        "phase_group_order": L,
        "min_exponent": c_min,
        "sigma1": terms[0],
        "sigma2": terms[1] if len(terms) > 1 else None,
    }
    return _finish_bound("map", terms, beta, certificate)


def small_divisor_bound_field(lam: EigenSpec, basis: LatticeBasis) -> SmallDivisorBound:
    """kappa > 0 with |<m, lambda> - lambda_j| >= kappa on nonresonant pairs,
    from the eigenvalue ratios forced by the resonant lattice."""
    if lam.kind != "additive":
        raise HypothesisError("field bound needs additive eigenvalues")
    n = lam.n
    if basis.kind != "field" or basis.rank != n - 1 or len(basis.generators) != n - 1:
        raise HypothesisError(
            f"field bound needs a rank n-1 = {n - 1} lattice basis, got rank "
            f"{basis.rank} with {len(basis.generators)} generators"
        )
    if all(v == 0 for v in lam.values):
        raise HypothesisError("zero eigenvalue tuple")
    K = basis.matrix()
    v = primitive_integer_kernel(K, n)
    c = max(j for j in range(n) if v[j] != 0)
    t = lam.values[c] / Fraction(v[c])
    for j in range(n):
        if lam.values[j] != t * v[j]:
            raise InternalInvariantError("eigenvalues do not satisfy the lattice relations")
    ratios = {}
    den_product = 1
    for j in range(n):
        if j == c:
            continue
        r = Fraction(v[j], v[c])
        ratios[j] = (r.numerator, r.denominator)
        den_product *= r.denominator
    kappa = sqrt_value(sc_abs2(lam.values[c])) / den_product
    certificate = {
        "pivot": c,
        "kernel": tuple(v),
        "ratios": ratios,
        "denominator_product": den_product,
        "pivot_eigenvalue": scalar_to_json(lam.values[c]),
    }
    return SmallDivisorBound(kind="field", value=kappa, certificate=certificate)


# -- verification ---------------------------------------------------------------


@dataclass(frozen=True)
class BoundVerification:
    passed: bool
    checked: int
    mode: str  # "exhaustive" | "certificate"
    min_gap: Optional[ExactValue] = None
    witness: Optional[tuple[Exponent, int]] = None
    failure: Optional[tuple[Exponent, int]] = None


def verify_bound(spec: EigenSpec, bound: SmallDivisorBound, D: int) -> BoundVerification:
    """Check every nonzero divisor with 2 <= |m| <= D against the bound.

    With exactly representable eigenvalues the minimum gap is found by
    exhaustive squared-modulus comparison.  For a formal base the proof's
    case analysis is replayed on the exponent/phase certificate instead;
    nothing is ever evaluated numerically.
    """
    if spec.kind == "mult-base" or isinstance(bound.value, SymbolicBound):
        return _verify_certificate(spec, bound, D)
    n = spec.n
    min_sq: Optional[Fraction] = None
    witness = None
    checked = 0
    for m in iter_exponents(n, 2, D):
        for j in range(n):
            div = homological_divisor(spec, m, j)
            if div == 0:
                continue
            checked += 1
            g2 = sc_abs2(div)
            if min_sq is None or g2 < min_sq:
                min_sq = g2
                witness = (m, j)
    if min_sq is None:
        return BoundVerification(passed=True, checked=0, mode="exhaustive")
    bound_sq = _square_of(bound.value)
    passed = min_sq >= bound_sq
    return BoundVerification(
        passed=passed,
        checked=checked,
        mode="exhaustive",
        min_gap=sqrt_value(min_sq),
        witness=witness,
        failure=None if passed else witness,
    )


def _verify_certificate(
    spec: EigenSpec, bound: SmallDivisorBound, D: int
) -> BoundVerification:
    cert = bound.certificate
    a = cert["base_exponents"]
    b = cert["phases"]
    e_alpha = cert["alpha_exp"]
    L = cert["phase_group_order"]
    has_phase_term = cert["sigma2"] is not None
    n = spec.n
    checked = 0
    for m in iter_exponents(n, 2, D):
        ma = sum(x * e for x, e in zip(a, m))
        mb = sum(x * e for x, e in zip(b, m)) % 1
        for j in range(n):
            da = ma - a[j]
            db = (mb - b[j]) % 1
            if da == 0 and db == 0:
                continue  # resonant
            checked += 1
            if da != 0:
                s = da / e_alpha
                if s.denominator != 1 or s == 0:
                    return BoundVerification(
                        passed=False, checked=checked, mode="certificate",
                        failure=(m, j),
                    )
            else:
                dist = min(db, 1 - db)
                if not has_phase_term or dist < Fraction(1, L):
                    return BoundVerification(
                        passed=False, checked=checked, mode="certificate",
                        failure=(m, j),
                    )
    return BoundVerification(passed=True, checked=checked, mode="certificate")
