"""Exact rational linear algebra for skew coefficient matrices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Sequence

from .errors import DegenerateStructureError, NotSkewError

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]


def to_fraction(value) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings; floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an integer, Fraction or 'p/q' string, got {type(value).__name__}")


def as_matrix(data: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(to_fraction(x) for x in row) for row in data)


@dataclass(frozen=True)
class SkewMatrix:
    """An even-size skew-symmetric rational matrix.

    ``entry`` and ``row`` take 1-based indices; ``entries`` is the raw tuple.
    """

    entries: Matrix

    def __post_init__(self):
        object.__setattr__(self, "entries", as_matrix(self.entries))
        n = len(self.entries)
        if any(len(r) != n for r in self.entries):
            raise ValueError("matrix is not square")
        if n % 2:
            raise ValueError(f"skew matrix must have even size, got {n}")
        for i in range(n):
            if self.entries[i][i] != 0:
                raise NotSkewError(f"diagonal entry ({i + 1},{i + 1}) is nonzero")
            for j in range(i + 1, n):
                if self.entries[i][j] != -self.entries[j][i]:
                    raise NotSkewError(
                        f"entries ({i + 1},{j + 1}) = {self.entries[i][j]} and "
                        f"({j + 1},{i + 1}) = {self.entries[j][i]} are not negatives"
                    )

    @property
    def size(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i - 1][j - 1]

    def row(self, i: int) -> Vector:
        return self.entries[i - 1]

    def column(self, j: int) -> Vector:
        return tuple(r[j - 1] for r in self.entries)

    def upper(self) -> list[Fraction]:
        """Entries above the diagonal, row by row."""
        n = self.size
        return [self.entries[i][j] for i in range(n) for j in range(i + 1, n)]

    def scaled(self, q) -> SkewMatrix:
        q = to_fraction(q)
        return SkewMatrix(tuple(tuple(q * x for x in r) for r in self.entries))

    @classmethod
    def from_upper(cls, n: int, upper: Sequence) -> SkewMatrix:
        """Build from the ``n(n-1)/2`` entries above the diagonal, row by row."""
        if len(upper) != n * (n - 1) // 2:
            raise ValueError(f"expected {n * (n - 1) // 2} upper entries, got {len(upper)}")
        rows = [[Fraction(0)] * n for _ in range(n)]
        it = iter(upper)
        for i in range(n):
            for j in range(i + 1, n):
                rows[i][j] = to_fraction(next(it))
        return complete_skew(rows)

    @classmethod
    def standard(cls, n: int) -> SkewMatrix:
        """Block-diagonal ``J`` with ``n`` blocks ``[[0, 1], [-1, 0]]``."""
        rows = [[0] * (2 * n) for _ in range(2 * n)]
        for b in range(n):
            rows[2 * b][2 * b + 1] = 1
            rows[2 * b + 1][2 * b] = -1
        return cls(rows)


def complete_skew(data: Sequence[Sequence]) -> SkewMatrix:
    """Skew completion from the upper triangle; the lower triangle is ignored."""
    n = len(data)
    if any(len(r) != n for r in data):
        raise ValueError("matrix is not square")
    if n % 2:
        raise ValueError(f"skew matrix must have even size, got {n}")
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = to_fraction(data[i][j])
            rows[i][j] = v
            rows[j][i] = -v
    return SkewMatrix(rows)


def lower_triangle_conflicts(data: Sequence[Sequence]) -> list[tuple[int, int]]:
    """1-based positions ``(i, j)``, ``i > j``, whose value is not ``-data[j][i]``."""
    n = len(data)
    bad = []
    for i in range(n):
        for j in range(i):
            if data[i][j] is None:
                continue
            if to_fraction(data[i][j]) != -to_fraction(data[j][i]):
                bad.append((i + 1, j + 1))
    return bad


def pfaffian(B: SkewMatrix) -> Fraction:
    """Pfaffian by expansion along the first remaining row."""
    entries = B.entries

    @lru_cache(maxsize=None)
    def pf(rest: tuple[int, ...]) -> Fraction:
        if not rest:
            return Fraction(1)
        first, others = rest[0], rest[1:]
        total = Fraction(0)
        for pos, k in enumerate(others):
            b = entries[first][k]
            if b:
                sign = -1 if pos & 1 else 1
                total += sign * b * pf(others[:pos] + others[pos + 1:])
        return total

    return pf(tuple(range(B.size)))


def determinant(data: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in as_matrix(data)]
    n = len(a)
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rref(data: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [list(r) for r in as_matrix(data)]
    rows = len(a)
    cols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(data: Sequence[Sequence]) -> int:
    if not data or not data[0]:
        return 0
    return len(rref(data)[1])


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    a, b = as_matrix(a), as_matrix(b)
    return tuple(
        tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in zip(*b))
        for row in a
    )


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def invert(B: SkewMatrix) -> SkewMatrix:
    """Exact inverse by Gauss-Jordan elimination."""
    n = B.size
    aug = [list(B.entries[i]) + list(identity(n)[i]) for i in range(n)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise DegenerateStructureError("matrix is singular (Pfaffian 0)")
    return SkewMatrix(tuple(tuple(r[n:]) for r in red))


@dataclass(frozen=True)
class SpanCertificate:
    """Witness that ``c = lam * r1 + mu * r2``."""

    lam: Fraction
    mu: Fraction

    def combine(self, r1: Sequence, r2: Sequence) -> Vector:
        return tuple(self.lam * x + self.mu * y for x, y in zip(r1, r2))


def _integral(v: Sequence[Fraction]) -> tuple[int, list[int]]:
    den = 1
    for x in v:
        den = lcm(den, x.denominator)
    return den, [x.numerator * (den // x.denominator) for x in v]


def span_solve(c: Sequence, r1: Sequence, r2: Sequence) -> SpanCertificate | None:
    """Solve ``c = lam r1 + mu r2`` over the rationals.

    The solution is unique when ``r1`` and ``r2`` are independent; otherwise
    the one with the free parameter set to zero is returned.
    """
    c, r1, r2 = (tuple(x if type(x) in (int, Fraction) else to_fraction(x) for x in v) for v in (c, r1, r2))
    if not len(c) == len(r1) == len(r2):
        raise ValueError("vectors must have equal length")
    # fast path: a nonzero 2x2 minor determines (lam, mu); work over integers
    (dc, C), (d1, R1), (d2, R2) = (_integral(v) for v in (c, r1, r2))
    for p in range(len(c)):
        for q in range(p + 1, len(c)):
            det = R1[p] * R2[q] - R1[q] * R2[p]
            if det:
                lnum = C[p] * R2[q] - C[q] * R2[p]
                mnum = R1[p] * C[q] - R1[q] * C[p]
                if any(det * z != lnum * x + mnum * y for x, y, z in zip(R1, R2, C)):
                    return None
                return SpanCertificate(Fraction(lnum * d1, det * dc), Fraction(mnum * d2, det * dc))
    system = [[x, y, z] for x, y, z in zip(r1, r2, c)]
    red, pivots = rref(system)
    if 2 in pivots:
        return None
    sol = [Fraction(0), Fraction(0)]
    for row_no, col in enumerate(pivots):
        sol[col] = red[row_no][2]
    cert = SpanCertificate(sol[0], sol[1])
    if cert.combine(r1, r2) != c:  # pragma: no cover - rref guarantees this
        raise AssertionError("span certificate does not reproduce the target")
    return cert


def solve(data: Sequence[Sequence], rhs: Sequence) -> Vector | None:
    """One solution of ``A x = rhs`` (free variables zero), or ``None``."""
    a = as_matrix(data)
    rhs = tuple(to_fraction(x) for x in rhs)
    cols = len(a[0]) if a else 0
    if not a:
        return () if not any(rhs) else None
    red, pivots = rref([list(r) + [b] for r, b in zip(a, rhs)])
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for row_no, col in enumerate(pivots):
        x[col] = red[row_no][cols]
    return tuple(x)
