import random
from fractions import Fraction

import pytest

from logres.errors import DegenerateStructureError, NotSkewError
from logres.model import EXAMPLE_UPPER
from logres.skewlinalg import (
    SkewMatrix,
    complete_skew,
    determinant,
    identity,
    invert,
    lower_triangle_conflicts,
    matmul,
    pfaffian,
    rank,
    span_solve,
    to_fraction,
)
from oracles import det_leibniz, in_span_bruteforce, pfaffian_by_matchings, random_rational, random_skew, sympy_rank

# the example matrix with an inconsistent (4,3) entry, as stored in models/example.json
PRINTED_EXAMPLE = [
    [0, 1, 2, 4],
    [-1, 0, 3, 5],
    [-2, -3, 0, 6],
    [-4, -5, 1, 0],
]


def example():
    return SkewMatrix.from_upper(4, EXAMPLE_UPPER)


class TestCompletion:
    def test_example_overrides_printed_entry(self):
        B = complete_skew(PRINTED_EXAMPLE)
        assert B.entry(4, 3) == -6
        assert B == example()
        assert lower_triangle_conflicts(PRINTED_EXAMPLE) == [(4, 3)]

    def test_zero(self):
        B = complete_skew([[0] * 4 for _ in range(4)])
        assert all(x == 0 for row in B.entries for x in row)

    def test_idempotent(self):
        B = complete_skew(PRINTED_EXAMPLE)
        assert complete_skew(B.entries) == B

    def test_odd_size(self):
        with pytest.raises(ValueError):
            complete_skew([[0] * 3 for _ in range(3)])

    def test_constructor_rejects_non_skew(self):
        with pytest.raises(NotSkewError):
            SkewMatrix(PRINTED_EXAMPLE)


def test_floats_refused():
    with pytest.raises(TypeError):
        to_fraction(0.5)
    assert to_fraction(" 3/4 ") == Fraction(3, 4)


class TestPfaffian:
    def test_example(self):
        assert pfaffian(example()) == 8

    def test_standard(self):
        for n in (1, 2, 3):
            assert pfaffian(SkewMatrix.standard(n)) == 1

    def test_matches_matchings_and_determinant(self):
        rng = random.Random(1)
        for _ in range(100):
            B = random_skew(rng, rng.choice((2, 4, 6, 8)))
            pf = pfaffian(B)
            assert pf == pfaffian_by_matchings(B.entries)
            assert pf * pf == determinant(B.entries)

    def test_bareiss_against_leibniz(self):
        rng = random.Random(2)
        for _ in range(20):
            n = rng.randint(1, 5)
            M = [[random_rational(rng) for _ in range(n)] for _ in range(n)]
            assert determinant(M) == det_leibniz(M)


class TestInvert:
    def test_standard(self):
        J = SkewMatrix.standard(2)
        assert invert(J) == J.scaled(-1)

    def test_example(self):
        B = example()
        assert matmul(invert(B).entries, B.entries) == identity(4)

    def test_round_trip(self):
        rng = random.Random(3)
        for _ in range(30):
            B = random_skew(rng, rng.choice((2, 4, 6)))
            if pfaffian(B) == 0:
                continue
            assert invert(invert(B)) == B

    def test_singular(self):
        with pytest.raises(DegenerateStructureError):
            invert(SkewMatrix([[0, 0], [0, 0]]))


class TestSpanSolve:
    def test_example_relation(self):
        B = example()
        c = tuple(y - x for x, y in zip(B.row(1), B.row(2)))
        cert = span_solve(c, B.row(1), B.row(2))
        assert (cert.lam, cert.mu) == (-1, 1)

    def test_zero(self):
        B = example()
        cert = span_solve((0, 0, 0, 0), B.row(1), B.row(2))
        assert (cert.lam, cert.mu) == (0, 0)

    def test_outside_span(self):
        B = example()
        assert span_solve((1, 0, 0, 0), B.row(1), B.row(2)) is None

    def test_dependent_rows(self):
        r = (Fraction(1), Fraction(2), Fraction(0))
        cert = span_solve((2, 4, 0), r, tuple(2 * x for x in r))
        assert cert.combine(r, tuple(2 * x for x in r)) == (2, 4, 0)
        assert span_solve((1, 0, 0), r, r) is None

    def test_against_rank(self):
        rng = random.Random(4)
        for trial in range(300):
            n = rng.randint(2, 6)
            r1 = [random_rational(rng, 3, 2) for _ in range(n)]
            r2 = [random_rational(rng, 3, 2) for _ in range(n)]
            if trial % 2:
                lam, mu = random_rational(rng), random_rational(rng)
                c = [lam * x + mu * y for x, y in zip(r1, r2)]
            else:
                c = [rng.randint(-3, 3) for _ in range(n)]
            cert = span_solve(c, r1, r2)
            assert (cert is not None) == in_span_bruteforce(c, r1, r2)
            if cert is not None:
                assert cert.combine(r1, r2) == tuple(Fraction(x) for x in c)


def test_rank_against_sympy():
    rng = random.Random(5)
    for _ in range(50):
        rows = [[Fraction(rng.randint(-2, 2)) for _ in range(rng.randint(1, 5))]]
        rows += [[Fraction(rng.randint(-2, 2)) for _ in rows[0]] for _ in range(rng.randint(0, 4))]
        assert rank(rows) == sympy_rank(rows)
