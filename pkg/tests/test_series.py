from fractions import Fraction as F

import pytest

from dulac.scalars import gaussian
from dulac.series import (
    ScalarSeries,
    SeriesError,
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
    unit_power,
)


def S(n, trunc, terms):
    return ScalarSeries(n, trunc, terms)


class TestMul:
    def test_difference_of_squares(self):
        one = ScalarSeries.one(2, 4)
        xy = ScalarSeries.monomial(2, 4, (1, 1))
        assert (one + xy).mul(one - xy, 4) == one - ScalarSeries.monomial(2, 4, (2, 2))

    def test_identity_element(self):
        a = S(2, 5, {(1, 0): F(2, 3), (2, 2): -1})
        assert a.mul(ScalarSeries.one(2, 5)) == a

    def test_square_truncated(self):
        s = ScalarSeries.one(2, 2) + ScalarSeries.variable(2, 0, 2) + ScalarSeries.variable(2, 1, 2)
        expected = S(2, 2, {(0, 0): 1, (1, 0): 2, (0, 1): 2, (2, 0): 1, (1, 1): 2, (0, 2): 1})
        assert s.mul(s, 2) == expected

    def test_dimension_mismatch(self):
        with pytest.raises(SeriesError):
            ScalarSeries.one(2, 3).mul(ScalarSeries.one(3, 3))

    def test_truncation_drops_high_degrees(self):
        a = S(1, 3, {(2,): 1})
        assert a.mul(a, 3).is_zero()

    def test_gaussian_coefficients(self):
        i = gaussian(0, 1)
        a = S(1, 2, {(1,): i})
        assert a.mul(a, 2) == S(1, 2, {(2,): -1})


class TestCompose:
    def test_worked_example(self):
        outer = VectorSeries([S(2, 4, {(1, 0): 1, (0, 2): 1}), S(2, 4, {(0, 1): 1})])
        inner = VectorSeries([S(2, 4, {(1, 0): 2}), S(2, 4, {(0, 1): 1, (2, 0): 1})])
        got = compose(outer, inner, 4)
        assert got.components[0] == S(2, 4, {(1, 0): 2, (0, 2): 1, (2, 1): 2, (4, 0): 1})
        assert got.components[1] == S(2, 4, {(0, 1): 1, (2, 0): 1})

    def test_identity_both_sides(self):
        ident = VectorSeries.identity(2, 5)
        G = VectorSeries([S(2, 5, {(1, 0): 3, (2, 1): F(1, 2)}), S(2, 5, {(0, 1): 1, (0, 3): -2})])
        assert compose(G, ident) == G
        assert compose(ident, G) == G

    def test_constant_term_rejected(self):
        bad = VectorSeries([ScalarSeries.one(2, 3), ScalarSeries.zero(2, 3)])
        with pytest.raises(SeriesError):
            compose(VectorSeries.identity(2, 3), bad)

    def test_associative_up_to_truncation(self):
        import random

        from helpers import random_tangent_identity

        rng = random.Random(7)
        for _ in range(10):
            n = rng.choice([2, 3])
            Fv = random_tangent_identity(rng, n, 5)
            G = random_tangent_identity(rng, n, 5)
            H = random_tangent_identity(rng, n, 5)
            assert compose(compose(Fv, G, 5), H, 5) == compose(Fv, compose(G, H, 5), 5)

    def test_scalar_composition(self):
        V = S(2, 4, {(1, 1): 1})
        inner = VectorSeries([S(2, 4, {(1, 0): 1, (0, 2): 1}), S(2, 4, {(0, 1): 1})])
        assert compose_scalar(V, inner, 4) == S(2, 4, {(1, 1): 1, (0, 3): 1})


class TestInvert:
    def test_shift_inverse(self):
        phi = VectorSeries([S(2, 4, {(1, 0): 1, (0, 2): 1}), S(2, 4, {(0, 1): 1})])
        psi = invert(phi)
        assert psi.components[0] == S(2, 4, {(1, 0): 1, (0, 2): -1})
        assert compose(phi, psi) == VectorSeries.identity(2, 4)
        assert compose(psi, phi) == VectorSeries.identity(2, 4)

    def test_identity(self):
        ident = VectorSeries.identity(3, 4)
        assert invert(ident) == ident

    def test_back_substitution_example(self):
        phi = VectorSeries([S(2, 3, {(1, 0): 1, (1, 1): 1}), S(2, 3, {(0, 1): 1})])
        psi = invert(phi, 3)
        assert psi.components[0] == S(2, 3, {(1, 0): 1, (1, 1): -1, (1, 2): 1})

    def test_two_sided_on_random_inputs(self):
        import random

        from helpers import random_tangent_identity

        rng = random.Random(3)
        for _ in range(15):
            n = rng.choice([2, 3])
            phi = random_tangent_identity(rng, n, 6)
            psi = invert(phi, 6)
            ident = VectorSeries.identity(n, 6)
            assert compose(phi, psi, 6) == ident
            assert compose(psi, phi, 6) == ident

    def test_rejects_general_linear_part(self):
        bad = VectorSeries([S(2, 3, {(1, 0): 2}), S(2, 3, {(0, 1): 1})])
        with pytest.raises(SeriesError):
            invert(bad)


class TestJacobianDet:
    def test_worked_jacobian(self):
        Fv = VectorSeries([S(2, 4, {(1, 1): 1}), S(2, 4, {(0, 2): 1})])
        J = jacobian(Fv)
        assert J[0][0] == S(2, 3, {(0, 1): 1})
        assert J[0][1] == S(2, 3, {(1, 0): 1})
        assert J[1][0].is_zero()
        assert J[1][1] == S(2, 3, {(0, 1): 2})
        assert det_series(J) == S(2, 3, {(0, 2): 2})

    def test_jacobian_of_identity(self):
        J = jacobian(VectorSeries.identity(3, 4))
        for i in range(3):
            for j in range(3):
                assert J[i][j] == (ScalarSeries.one(3, 3) if i == j else ScalarSeries.zero(3, 3))

    def test_jacobian_of_linear_map(self):
        B = VectorSeries.diagonal_linear([F(1, 2), 3], 4)
        J = jacobian(B)
        assert J[0][0] == ScalarSeries.const(2, 3, F(1, 2))
        assert J[1][1] == ScalarSeries.const(2, 3, 3)

    def test_det_diagonal(self):
        u = ScalarSeries.variable(1, 0, 2)
        M = [
            [ScalarSeries.one(1, 2) + u, ScalarSeries.zero(1, 2)],
            [ScalarSeries.zero(1, 2), ScalarSeries.one(1, 2) - u],
        ]
        assert det_series(M, 2) == S(1, 2, {(0,): 1, (2,): -1})

    def test_det_matches_permutation_expansion(self):
        import itertools
        import random

        from helpers import random_sparse_series

        rng = random.Random(11)
        for _ in range(8):
            k = rng.choice([2, 3, 4])
            M = [[random_sparse_series(rng, 2, 3, max_terms=2) for _ in range(k)] for _ in range(k)]
            expected = ScalarSeries.zero(2, 3)
            for perm in itertools.permutations(range(k)):
                sign = 1
                for i in range(k):
                    for j in range(i + 1, k):
                        if perm[i] > perm[j]:
                            sign = -sign
                term = ScalarSeries.one(2, 3)
                for i in range(k):
                    term = term.mul(M[i][perm[i]], 3)
                expected = expected + (term if sign > 0 else -term)
            assert det_series(M, 3) == expected


class TestCross:
    def test_standard_basis(self):
        e1 = VectorSeries([ScalarSeries.one(3, 2), ScalarSeries.zero(3, 2), ScalarSeries.zero(3, 2)])
        e2 = VectorSeries([ScalarSeries.zero(3, 2), ScalarSeries.one(3, 2), ScalarSeries.zero(3, 2)])
        c = cross([e1, e2])
        assert c.components[0].is_zero() and c.components[1].is_zero()
        assert c.components[2] == ScalarSeries.one(3, 2)

    def test_planar_gradient(self):
        g = gradient(ScalarSeries.monomial(2, 4, (1, 1)))
        c = cross([g])
        assert c.components[0] == S(2, 3, {(1, 0): 1})
        assert c.components[1] == S(2, 3, {(0, 1): -1})

    def test_orthogonality_exact(self):
        import random

        from helpers import random_sparse_series

        rng = random.Random(5)
        for _ in range(10):
            n = rng.choice([2, 3, 4])
            vs = [
                VectorSeries([random_sparse_series(rng, n, 4, max_terms=3) for _ in range(n)])
                for _ in range(n - 1)
            ]
            c = cross(vs, 4)
            for v in vs:
                assert scalar_inner(c, v, 4).is_zero()

    def test_wrong_count(self):
        g = gradient(ScalarSeries.monomial(3, 3, (1, 1, 1)))
        with pytest.raises(SeriesError):
            cross([g])


class TestUnitPower:
    def test_square_root(self):
        t = ScalarSeries.variable(1, 0, 3)
        h = unit_power(t, F(1, 2), 2)
        assert h == S(1, 2, {(0,): 1, (1,): F(1, 2), (2,): F(-1, 8)})
        assert h.mul(h, 2) == S(1, 2, {(0,): 1, (1,): 1})

    def test_zero_exponent(self):
        t = ScalarSeries.variable(1, 0, 3)
        assert unit_power(t, 0, 3) == ScalarSeries.one(1, 3)

    def test_geometric_series(self):
        t = ScalarSeries.variable(1, 0, 3)
        inv = unit_power(t, -1, 3)
        assert inv == S(1, 3, {(0,): 1, (1,): -1, (2,): 1, (3,): -1})
        assert inv.mul(ScalarSeries.one(1, 3) + t, 3) == ScalarSeries.one(1, 3)

    def test_integer_power_matches_mul(self):
        u = S(2, 6, {(1, 0): F(1, 2), (1, 1): -2})
        base = ScalarSeries.one(2, 6) + u
        assert unit_power(u, 3, 6) == base.mul(base, 6).mul(base, 6)

    def test_exponent_addition(self):
        import random

        from helpers import random_sparse_series

        rng = random.Random(13)
        for _ in range(10):
            u = random_sparse_series(rng, 2, 5, max_terms=3)
            u = u - ScalarSeries.const(2, 5, u.constant_term())
            r1 = F(rng.randint(-4, 4), rng.randint(1, 3))
            r2 = F(rng.randint(-4, 4), rng.randint(1, 3))
            lhs = unit_power(u, r1 + r2, 5)
            rhs = unit_power(u, r1, 5).mul(unit_power(u, r2, 5), 5)
            assert lhs == rhs

    def test_constant_term_rejected(self):
        with pytest.raises(SeriesError):
            unit_power(ScalarSeries.one(1, 3), F(1, 2), 3)


class TestStructure:
    def test_no_explicit_zeros(self):
        s = S(2, 3, {(1, 0): 1}) - S(2, 3, {(1, 0): 1})
        assert s.coeffs == {}
        assert s.is_zero()

    def test_equality_is_structural(self):
        assert S(2, 3, {(1, 0): 1}) == S(2, 5, {(1, 0): 1})
        assert hash(S(2, 3, {(1, 0): 1})) == hash(S(2, 5, {(1, 0): 1}))

    def test_degree_cap_enforced(self):
        with pytest.raises(SeriesError):
            S(2, 2, {(2, 1): 1})

    def test_truncate_never_extends(self):
        s = S(2, 3, {(1, 0): 1})
        with pytest.raises(SeriesError):
            s.truncate(5)
        assert s.with_trunc(5).trunc == 5

    def test_mat_vec(self):
        M = [[ScalarSeries.one(2, 3), ScalarSeries.zero(2, 3)],
             [S(2, 3, {(1, 0): 1}), ScalarSeries.one(2, 3)]]
        X = VectorSeries([S(2, 3, {(0, 1): 1}), S(2, 3, {(1, 0): 2})])
        got = mat_vec(M, X, 3)
        assert got.components[0] == S(2, 3, {(0, 1): 1})
        assert got.components[1] == S(2, 3, {(1, 1): 1, (1, 0): 2})

    def test_eval_exact(self):
        s = S(2, 4, {(1, 1): F(1, 3), (0, 2): -1})
        assert s.eval((F(3), F(2))) == F(1, 3) * 6 - 4
