"""Shared fixture builders: integrable systems constructed from series-core
primitives only, so solver outputs can be checked against exact expectations."""

from fractions import Fraction as F

from dulac.linalg import primitive_integer_kernel
from dulac.normalizer import MapSystem
from dulac.resonance import (
    EigenSpec,
    enumerate_lattice,
    iter_exponents,
    transformation_resonant,
)
from dulac.series import ScalarSeries, VectorSeries, compose, invert, unit_power


def normal_form_from_units(mu_vals, p_list, N):
    """G_j = mu_j y_j (1 + p_j), assembled exactly."""
    n = len(mu_vals)
    comps = []
    for j in range(n):
        unit = ScalarSeries.one(n, N) + p_list[j]
        comps.append(unit.mul(ScalarSeries.variable(n, j, N), N).scale(mu_vals[j]))
    return VectorSeries(comps)


def conjugate_map(mu_vals, G, phi, N):
    """F = Phi o G o Phi^(-1) with Phi = id + phi, as a MapSystem."""
    n = len(mu_vals)
    Phi = VectorSeries.identity(n, N) + phi
    Fmap = compose(Phi, compose(G, invert(Phi, N), N), N)
    linear = VectorSeries.diagonal_linear(mu_vals, N)
    nonlinear = (Fmap - linear).strip_low(2)
    return MapSystem(EigenSpec.multiplicative(mu_vals), nonlinear, N)


def two_dim_fixture(N=8):
    """The half/double map with p_2 = y1 y2 and p_1 = (1+y1 y2)^(-1) - 1,
    conjugated by Phi = (y1 + y2^2, y2)."""
    n = 2
    mu_vals = [F(1, 2), F(2)]
    u = ScalarSeries.monomial(n, N, (1, 1))
    p1 = unit_power(u, -1, N) - ScalarSeries.one(n, N)
    G = normal_form_from_units(mu_vals, [p1, u], N)
    phi = VectorSeries([ScalarSeries(n, N, {(0, 2): 1}), ScalarSeries.zero(n, N)])
    system = conjugate_map(mu_vals, G, phi, N)
    g = (G - VectorSeries.diagonal_linear(mu_vals, N)).strip_low(2)
    return system, phi, g


def three_dim_fixture(N=8, phi_terms=None):
    """Rank-2 three-dimensional fixture with rational stand-in multipliers
    (1/32, 4, 2) and psi = y1 y2^2 y3; exponents (-5/2, 1, 1/2)."""
    n = 3
    mu_vals = [F(1, 32), F(4), F(2)]
    psi = ScalarSeries.monomial(n, N, (1, 2, 1))
    ps = [
        unit_power(psi, F(-5, 2), N) - ScalarSeries.one(n, N),
        psi,
        unit_power(psi, F(1, 2), N) - ScalarSeries.one(n, N),
    ]
    G = normal_form_from_units(mu_vals, ps, N)
    if phi_terms is None:
        phi_terms = {0: {(0, 1, 1): F(1)}, 2: {(2, 0, 0): F(1, 3)}}
    comps = [ScalarSeries(n, N, phi_terms.get(j, {})) for j in range(n)]
    phi = VectorSeries(comps)
    system = conjugate_map(mu_vals, G, phi, N)
    g = (G - VectorSeries.diagonal_linear(mu_vals, N)).strip_low(2)
    return system, phi, g, ps


def random_integrable_case(rng, n, N=6):
    """A random planted case: rank n-1 multipliers, a normal form in the
    product shape built from resonant monomials, and a sparse nonresonant
    transformation.  Returns (system, phi, g_expected)."""
    while True:
        rho = F(rng.choice([2, 3, 5]))
        if n == 2:
            exps = [rng.randint(1, 3), -rng.randint(1, 3)]
        else:
            exps = [-rng.randint(1, 3), rng.randint(1, 2), rng.randint(1, 2)]
        rng.shuffle(exps)
        mu_vals = [rho**e for e in exps]
        mu = EigenSpec.multiplicative(mu_vals)
        basis = enumerate_lattice(mu, max(N, 6))
        if basis.rank == n - 1 and len(basis.generators) == n - 1:
            break
    v = primitive_integer_kernel(basis.matrix(), n)
    scale = rng.choice([F(1), F(1, 2), F(-1, 2), F(2)])
    lat_mons = [m for m in basis.exponents if sum(m) <= N - 1]
    w_terms = {}
    if lat_mons:
        for m in rng.sample(lat_mons, min(len(lat_mons), rng.randint(1, 2))):
            w_terms[m] = F(rng.randint(-3, 3), rng.randint(1, 2))
    w = ScalarSeries(n, N, w_terms)
    one = ScalarSeries.one(n, N)
    ps = [unit_power(w, v[j] * scale, N) - one for j in range(n)]
    G = normal_form_from_units(mu_vals, ps, N)
    pool = [
        (j, m)
        for m in iter_exponents(n, 2, N)
        for j in range(n)
        if not transformation_resonant(mu, m, j)
    ]
    phi_triples = []
    for (j, m) in rng.sample(pool, min(len(pool), rng.randint(1, 3))):
        phi_triples.append((j, m, F(rng.randint(-2, 2), rng.randint(1, 2))))
    phi = VectorSeries.from_terms(n, N, phi_triples)
    system = conjugate_map(mu_vals, G, phi, N)
    g = (G - VectorSeries.diagonal_linear(mu_vals, N)).strip_low(2)
    return system, phi, g


def random_sparse_series(rng, n, trunc, max_terms=5, gaussian=False):
    from dulac.scalars import gaussian as mk_gaussian

    terms = {}
    pool = list(iter_exponents(n, 0, trunc))
    for m in rng.sample(pool, min(len(pool), rng.randint(0, max_terms))):
        re = F(rng.randint(-4, 4), rng.randint(1, 3))
        if gaussian and rng.random() < 0.5:
            terms[m] = mk_gaussian(re, F(rng.randint(-3, 3), rng.randint(1, 2)))
        else:
            terms[m] = re
    return ScalarSeries(n, trunc, terms)


def random_tangent_identity(rng, n, trunc, max_terms=4):
    triples = []
    pool = [(j, m) for m in iter_exponents(n, 2, trunc) for j in range(n)]
    for (j, m) in rng.sample(pool, min(len(pool), rng.randint(1, max_terms))):
        triples.append((j, m, F(rng.randint(-3, 3), rng.randint(1, 2))))
    return VectorSeries.identity(n, trunc) + VectorSeries.from_terms(n, trunc, triples)
