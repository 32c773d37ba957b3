import cmath
import math

import numpy as np
import pytest

from helpers import parabolic_automorphism
from lindyn import (
    Composition,
    DiskAutomorphism,
    MoebiusMap,
    PointProduct,
    Polynomial,
    Product,
    Reciprocal,
    VanishingWeightError,
    WeightedCompOp,
    certified_reciprocal,
    denjoy_wolff_by_iteration,
    obstruction_report,
    unit_disk_grid,
)

GRID = unit_disk_grid()
WORKED = DiskAutomorphism(0.0, -0.5)  # phi(z) = (z + 1/2) / (1 + z/2)


def random_automorphism(rng):
    mag = rng.uniform(0.05, 0.9)
    return DiskAutomorphism(rng.uniform(-np.pi, np.pi), mag * np.exp(1j * rng.uniform(0, 2 * np.pi)))


def random_nonvanishing_poly(rng, degree=2):
    tail = 0.3 * (rng.standard_normal(degree) + 1j * rng.standard_normal(degree))
    head = 1.0 + np.abs(tail).sum() + rng.uniform(0, 1)  # |w| >= 1 on the closed disk
    return Polynomial((head, *tail))


class TestMoebiusGroup:
    def test_degenerate_matrix_rejected(self):
        with pytest.raises(ValueError):
            MoebiusMap(1, 2, 2, 4)

    def test_halving_map_iterates(self):
        halving = MoebiusMap(0.5, 0, 0, 1)
        assert halving.iterate(3)(0.8) == pytest.approx(0.1, abs=1e-15)
        assert halving.iterate(0)(0.8) == pytest.approx(0.8)

    def test_alpha_on_boundary_rejected(self):
        with pytest.raises(ValueError):
            DiskAutomorphism(0.0, 1.0)

    def test_canonical_extraction_rejects_non_automorphisms(self):
        with pytest.raises(ValueError):
            DiskAutomorphism.from_moebius(MoebiusMap(2, 0, 0, 1))

    def test_worked_map_evaluates(self):
        z = 0.3 + 0.1j
        assert WORKED(z) == pytest.approx((z + 0.5) / (1 + 0.5 * z), abs=1e-15)

    def test_inverse_of_rotation(self):
        rot = DiskAutomorphism.rotation(0.7)
        assert rot.inverse().theta == pytest.approx(-0.7, abs=1e-12)
        assert rot.inverse().alpha == 0

    def test_inverse_solves_for_the_source(self):
        phi = DiskAutomorphism(0.0, 0.5)  # (z - 0.5) / (1 - 0.5 z)
        assert phi.inverse()(0.0) == pytest.approx(0.5, abs=1e-15)

    def test_compose_with_inverse_is_identity_on_grid(self):
        rng = np.random.default_rng(1)
        for _ in range(5):
            phi = random_automorphism(rng)
            for comp in (phi.compose(phi.inverse()), phi.inverse().compose(phi)):
                assert np.abs(comp(GRID) - GRID).max() <= 1e-12

    def test_associativity_on_grid(self):
        rng = np.random.default_rng(2)
        p, q, r = (random_automorphism(rng) for _ in range(3))
        left = p.compose(q).compose(r)
        right = p.compose(q.compose(r))
        assert np.abs(left(GRID) - right(GRID)).max() <= 1e-12

    def test_composition_matches_pointwise_evaluation(self):
        rng = np.random.default_rng(3)
        p, q = random_automorphism(rng), random_automorphism(rng)
        assert np.abs(p.compose(q)(GRID) - p(q(GRID))).max() <= 1e-12


class TestIterateAuto:
    def test_zero_gives_identity(self):
        assert WORKED.iterate(0).is_identity

    def test_rotation_angles_add(self):
        rot = DiskAutomorphism.rotation(0.7)
        assert rot.iterate(4).theta == pytest.approx(2.8, abs=1e-12)

    def test_hyperbolic_orbit_converges_to_denjoy_wolff(self):
        info = WORKED.fixed_points()
        assert abs(WORKED.iterate(50)(0j) - info.denjoy_wolff) <= 1e-8

    def test_exponent_addition_law(self):
        rng = np.random.default_rng(4)
        for _ in range(3):
            phi = random_automorphism(rng)
            lhs = phi.iterate(7)
            rhs = phi.iterate(3).compose(phi.iterate(4))
            assert np.abs(lhs(GRID) - rhs(GRID)).max() <= 1e-10

    def test_negative_exponent_inverts(self):
        phi = WORKED
        comp = phi.iterate(-2).compose(phi.iterate(2))
        assert np.abs(comp(GRID) - GRID).max() <= 1e-10


class TestFixedPoints:
    def test_rotation_is_elliptic_at_zero(self):
        info = DiskAutomorphism.rotation(0.9).fixed_points()
        assert info.kind == "elliptic"
        assert info.interior_fixed == 0
        assert info.denjoy_wolff == 0
        assert info.boundary_fixed == ()

    def test_identity_is_its_own_class(self):
        assert DiskAutomorphism(0.0, 0j).fixed_points().kind == "identity"

    def test_worked_hyperbolic_case(self):
        info = WORKED.fixed_points()
        assert info.kind == "hyperbolic"
        assert sorted((round(z.real) for z in info.boundary_fixed)) == [-1, 1]
        assert info.denjoy_wolff == pytest.approx(1.0, abs=1e-12)
        assert info.derivative_at_dw == pytest.approx(1 / 3, abs=1e-12)

    def test_solver_cross_checked_by_iteration(self):
        phi = DiskAutomorphism(0.0, 0.5)
        info = phi.fixed_points()
        assert info.kind == "hyperbolic"
        limit = denjoy_wolff_by_iteration(phi, tol=1e-10)
        assert abs(info.denjoy_wolff - limit) <= 1e-8

    def test_exact_parabolic_construction(self):
        phi = parabolic_automorphism(1.0, sigma=1.0)
        info = phi.fixed_points()
        assert info.kind == "parabolic"
        assert len(info.boundary_fixed) == 1
        assert info.denjoy_wolff == pytest.approx(1.0, abs=1e-9)

    def test_near_parabolic_inputs_are_flagged(self):
        theta = 0.2
        delta = 5e-13
        alpha = math.sqrt(1 - math.cos(theta / 2) ** 2 / (1 + delta / 4))
        info = DiskAutomorphism(theta, alpha).fixed_points()
        assert info.kind == "parabolic"
        assert info.near_parabolic

    def test_elliptic_interior_point(self):
        rng = np.random.default_rng(14)
        found = 0
        while found < 5:
            phi = random_automorphism(rng)
            info = phi.fixed_points()
            if info.kind != "elliptic":
                continue
            found += 1
            a = info.interior_fixed
            assert abs(a) < 1
            assert abs(phi(a) - a) <= 1e-10
            assert info.denjoy_wolff == a

    def test_boundary_points_have_unit_modulus(self):
        rng = np.random.default_rng(15)
        found = 0
        while found < 5:
            phi = random_automorphism(rng)
            info = phi.fixed_points()
            if info.kind != "hyperbolic":
                continue
            found += 1
            for z in info.boundary_fixed:
                assert abs(abs(z) - 1) <= 1e-9
                assert abs(phi(z) - z) <= 1e-9
            assert info.derivative_at_dw < 1


class TestDenjoyWolffConsistency:
    def test_twenty_non_elliptic_maps(self):
        rng = np.random.default_rng(16)
        maps = []
        while len(maps) < 14:
            phi = random_automorphism(rng)
            if phi.fixed_points().kind == "hyperbolic":
                maps.append(phi)
        for t in (0.5, 1.0, 2.0):
            for angle in (0.0, 2.1):
                maps.append(parabolic_automorphism(t, cmath.exp(1j * angle)))
        assert len(maps) == 20
        for phi in maps:
            solved = phi.fixed_points().denjoy_wolff
            iterated = denjoy_wolff_by_iteration(phi, tol=1e-8)
            assert abs(solved - iterated) <= 1e-8

    def test_elliptic_orbit_does_not_settle(self):
        with pytest.raises(RuntimeError):
            denjoy_wolff_by_iteration(DiskAutomorphism.rotation(0.9), tol=1e-10)


class TestAnalyticFns:
    def test_polynomial_is_ascending(self):
        assert Polynomial((2, 1))(0.5) == pytest.approx(2.5)

    def test_point_product_vanishes_at_roots(self):
        f = PointProduct((0.1, -0.2 + 0.3j))
        assert f(0.1) == 0
        assert f(-0.2 + 0.3j) == 0
        assert f(np.array([0.1, 0.0]))[0] == 0

    def test_composition_and_product(self):
        f = Product((Polynomial((0, 1)), Composition(Polynomial((1, 1)), MoebiusMap(0.5, 0, 0, 1))))
        # z * (1 + z/2)
        assert f(0.4) == pytest.approx(0.4 * 1.2, abs=1e-15)

    def test_certified_reciprocal_accepts_safe_weight(self):
        inv = certified_reciprocal(Polynomial((2, 1)), GRID)
        assert inv(0.0) == pytest.approx(0.5)

    def test_certified_reciprocal_reports_offending_point(self):
        with pytest.raises(VanishingWeightError) as err:
            certified_reciprocal(Polynomial((0, 1)), GRID)
        assert err.value.point == 0

    def test_grid_layout(self):
        assert GRID.size == 200
        assert GRID[0] == 0
        radii = np.round(np.abs(GRID[1:]), 12)
        assert set(radii.tolist()) == {0.3, 0.6, 0.9}


class TestWeightedCompOp:
    def test_trivial_weight_composes_symbol(self):
        C = WeightedCompOp(Polynomial((1,)), MoebiusMap(0.5, 0, 0, 1))
        f = Polynomial((0.3, -1, 2))
        out = C.iterate(2, f)
        assert np.abs(out(GRID) - f(GRID / 4)).max() <= 1e-12

    def test_weight_accumulates_along_orbit(self):
        C = WeightedCompOp(Polynomial((0, 1)), MoebiusMap(0.5, 0, 0, 1))
        out = C.iterate(2, Polynomial((1,)))  # z * (z/2)
        assert np.abs(out(GRID) - GRID**2 / 2).max() <= 1e-12

    def test_iterate_zero_is_identity(self):
        C = WeightedCompOp(Polynomial((2, 1)), WORKED)
        f = Polynomial((1, 2, 3))
        assert C.iterate(0, f) is f

    def test_product_formula_matches_nfold_application(self):
        rng = np.random.default_rng(23)
        for _ in range(5):
            phi = random_automorphism(rng)
            C = WeightedCompOp(random_nonvanishing_poly(rng), phi)
            f = Polynomial(tuple(0.5 * rng.standard_normal(3)))
            ladder = f
            for n in range(1, 11):
                ladder = C.apply(ladder)
                direct = C.iterate(n, f)
                assert np.abs(direct(GRID) - ladder(GRID)).max() <= 1e-9

    def test_non_self_map_symbol_rejected(self):
        with pytest.raises(ValueError):
            WeightedCompOp(Polynomial((1,)), MoebiusMap(1, 0.5, 0, 1))  # z + 0.5

    def test_non_automorphism_symbol_cannot_invert(self):
        C = WeightedCompOp(Polynomial((1,)), MoebiusMap(0.5, 0, 0, 1))
        with pytest.raises(TypeError):
            C.inverse()


class TestWcompInverse:
    def test_trivial_weight_rotation(self):
        C = WeightedCompOp(Polynomial((1,)), DiskAutomorphism.rotation(0.7))
        inv = C.inverse()
        assert inv.symbol.theta == pytest.approx(-0.7, abs=1e-12)
        assert np.abs(inv.weight(GRID) - 1).max() <= 1e-12

    def test_identity_on_grid(self):
        C = WeightedCompOp(Polynomial((2, 1)), DiskAutomorphism(0.0, 0.5))
        f = Polynomial((1, -0.4, 0.2))
        roundtrip = C.apply(C.inverse().apply(f))
        assert np.abs(roundtrip(GRID) - f(GRID)).max() <= 1e-10

    def test_randomized_identity(self):
        rng = np.random.default_rng(29)
        for _ in range(5):
            C = WeightedCompOp(random_nonvanishing_poly(rng), random_automorphism(rng))
            f = Polynomial(tuple(rng.standard_normal(4) * 0.5))
            inv = C.inverse()
            assert np.abs(C.apply(inv.apply(f))(GRID) - f(GRID)).max() <= 1e-10
            assert np.abs(inv.apply(C.apply(f))(GRID) - f(GRID)).max() <= 1e-10

    def test_vanishing_weight_refused_with_point(self):
        C = WeightedCompOp(Polynomial((0, 1)), DiskAutomorphism(0.0, 0.5))
        with pytest.raises(VanishingWeightError) as err:
            C.inverse()
        assert err.value.point == 0


class TestObstructionReports:
    def test_identity_symbol_unsupported(self):
        with pytest.raises(ValueError):
            obstruction_report(Polynomial((1,)), DiskAutomorphism(0.0, 0j))

    def test_elliptic_case_minus_z(self):
        rep = obstruction_report(Polynomial((1,)), DiskAutomorphism.rotation(math.pi), n_powers=50)
        assert rep.case == "elliptic"
        assert rep.fixed_point == 0
        assert len(rep.values) == 50
        assert rep.max_abs_value == 0.0
        assert rep.target_value == 1.0 and rep.gap == 1.0

    def test_randomized_elliptic_cases(self):
        rng = np.random.default_rng(31)
        found = 0
        while found < 5:
            phi = random_automorphism(rng)
            if phi.inverse().fixed_points().kind != "elliptic":
                continue
            found += 1
            rep = obstruction_report(random_nonvanishing_poly(rng), phi, n_powers=50)
            assert rep.case == "elliptic"
            assert rep.max_abs_value <= 1e-12

    def test_boundary_case_worked_example(self):
        rep = obstruction_report(Polynomial((2, 1)), WORKED, orbit_length=20)
        assert rep.case == "boundary"
        assert rep.symbol_class == "hyperbolic"
        assert len(rep.values) == 20
        assert rep.max_abs_value <= 1e-12
        # the inverse symbol's orbit drifts to its Denjoy-Wolff point at -1
        assert rep.denjoy_wolff == pytest.approx(-1.0, abs=1e-12)
        assert abs(rep.orbit_points[-1] - rep.denjoy_wolff) <= 1e-8
        assert "1..20" in rep.note

    def test_parabolic_boundary_case(self):
        rep = obstruction_report(Polynomial((2, 1)), parabolic_automorphism(1.0), orbit_length=15)
        assert rep.case == "boundary"
        assert rep.symbol_class == "parabolic"
        assert rep.max_abs_value <= 1e-12

    def test_weight_zero_case(self):
        rep = obstruction_report(Polynomial((0, 1)), WORKED, n_powers=30)
        assert rep.case == "weight-zero"
        assert rep.offending_point == 0
        assert rep.max_abs_value == 0.0
        assert rep.target_value == 1.0
