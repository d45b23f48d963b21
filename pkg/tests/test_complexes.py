import random

import pytest

from logres import complexes as cx
from logres import logform as lf
from oracles import random_form


def z1(n=2):
    return lf.monomial(lf.unit(n, 1))


class TestCone:
    def test_differential_formula(self):
        e = cx.ConeElement(0, lf.zero(2), z1())
        De = cx.cone_differential(e)
        assert De.alpha == z1()
        assert De.beta == -lf.term(1, (1, 0), (1,))

    def test_alpha_only(self):
        alpha = lf.term(3, (2, 1), (2,))
        De = cx.cone_differential(cx.ConeElement(2, alpha, lf.zero(2)))
        assert De.alpha == lf.d(alpha) and De.beta.is_zero()

    def test_d_squared_on_random_elements(self):
        rng = random.Random(4)
        for _ in range(500):
            n = rng.randint(1, 4)
            p = rng.randint(1, n)
            e = cx.ConeElement(p, random_form(rng, n, degree=p - 1), random_form(rng, n, degree=p))
            assert cx.cone_differential(cx.cone_differential(e)).is_zero()

    def test_homotopy(self):
        assert cx.cone_homotopy(cx.ConeElement(0, lf.zero(2), lf.zero(2))).is_zero()
        e = cx.ConeElement(1, z1(), lf.dlog(2, 2))
        assert cx.cone_homotopy(cx.cone_homotopy(e)).is_zero()

    def test_identity_exhaustive(self):
        report = cx.cone_identity_check(3, 2)
        assert report.passed and report.elements == 2 * 27 * 8

    def test_identity_with_branches(self):
        assert cx.cone_identity_check(2, 2, m=1).passed

    def test_foliated(self):
        report = cx.cone_identity_check(3, 1, m=3, foliation=[(1, -1, 0)])
        assert report.passed and report.foliation_rank == 1

    def test_foliation_needs_all_branches(self):
        with pytest.raises(ValueError):
            cx.cone_identity_check(3, 1, m=1, foliation=[(1, 0, 0)])

    def test_degree_validation(self):
        with pytest.raises(ValueError):
            cx.ConeElement(1, lf.dlog(1, 2), lf.zero(2))

    def test_unsigned_matrices_fail(self):
        check = cx.printed_convention_check()
        assert not check.d_squares_to_zero
        assert "z_1" in check.counterexample


class TestNormalLog:
    def test_hand_sized(self):
        dims = cx.graded_homology(2, (-1, 0), cx.allowed_indices((-1, 0), 1), lf.d)
        assert dims == (0, 0, 0)

    def test_exact_in_dimension_four(self):
        for t in (0, 1, 2):
            assert cx.normal_log_homology(cx.TruncationSpec(4, t, -1)).exact

    def test_control_has_constants(self):
        report = cx.normal_log_homology(cx.TruncationSpec(4, 1, 0))
        assert not report.exact
        assert report.nonzero[(0, 0, 0, 0)][0] == 1

    def test_all_branches(self):
        assert cx.normal_log_homology(cx.TruncationSpec(3, 2, -1), m=3).exact

    def test_needs_dimension_two(self):
        with pytest.raises(ValueError):
            cx.normal_log_homology(cx.TruncationSpec(1, 1, -1))


class TestPrincipalParts:
    @pytest.mark.parametrize("j", [1, 3])
    def test_exact_in_dimension_two(self, j):
        for t in (0, 1, 2):
            assert cx.principal_parts_exactness(cx.TruncationSpec(2, t), j).exact

    def test_twisted_differential_squares_to_zero(self):
        rng = random.Random(6)
        for j in (-2, 0, 1, 5):
            op = cx.twisted_differential(j, 3)
            for _ in range(50):
                f = random_form(rng, 3)
                assert op(op(f)).is_zero()

    def test_untwisted_rejected(self):
        with pytest.raises(ValueError):
            cx.principal_parts_exactness(cx.TruncationSpec(2, 1), 0)


def test_truncation_spec_validation():
    with pytest.raises(ValueError):
        cx.TruncationSpec(2, -1)
    assert len(list(cx.TruncationSpec(3, 1, -1).multidegrees())) == 4
