"""Exact exterior calculus on Laurent-monomial log forms.

A form is a finite sum of terms ``c * z^a * eta_I`` where ``c`` is a rational,
``a`` an integer exponent vector of length ``N`` (negative entries allowed) and
``eta_I = eta_{i_1} ^ ... ^ eta_{i_k}`` a wedge of the log 1-forms
``eta_i = dz_i / z_i`` with ``i_1 < ... < i_k``.

Every coordinate is written in the dlog basis, including the ones that are not
branches of the divisor: ``dz_k = z^{e_k} eta_k``.  With this choice the
exterior derivative has the single monomial rule

    d(z^a eta_I) = sum_k a_k z^a eta_k ^ eta_I

and in particular never changes the exponent vector (the multidegree).

Coordinate and branch indices are 1-based throughout, matching the usual
mathematical labelling; exponent vectors are plain tuples, so coordinate ``k``
sits at position ``k - 1``.
"""

from __future__ import annotations

from bisect import bisect_left
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import DimensionError, InvalidResidueError

Exp = tuple[int, ...]
Idx = tuple[int, ...]
Rational = Fraction | int


class LogTerm(NamedTuple):
    coeff: Fraction
    exp: Exp
    idx: Idx


def _sort_key(key: tuple[Idx, Exp]) -> tuple:
    idx, exp = key
    return (len(idx), idx, exp)


class LogForm:
    """An immutable, canonically ordered sum of :class:`LogTerm`.

    Build instances with :func:`normalize` or the small constructors below;
    the initializer trusts its input.
    """

    __slots__ = ("n", "_data", "_hash")

    def __init__(self, n: int, data: Mapping[tuple[Idx, Exp], Fraction]):
        self.n = n
        self._data = {k: data[k] for k in sorted(data, key=_sort_key)}
        self._hash: int | None = None

    @property
    def terms(self) -> tuple[LogTerm, ...]:
        return tuple(LogTerm(c, exp, idx) for (idx, exp), c in self._data.items())

    def items(self):
        """Iterate over ``((idx, exp), coeff)`` pairs in canonical order."""
        return self._data.items()

    def __len__(self) -> int:
        return len(self._data)

    def __bool__(self) -> bool:
        return bool(self._data)

    def is_zero(self) -> bool:
        return not self._data

    def coefficient(self, idx: Iterable[int], exp: Sequence[int] | None = None) -> Fraction:
        exp = tuple(exp) if exp is not None else (0,) * self.n
        return self._data.get((tuple(idx), exp), Fraction(0))

    @property
    def degrees(self) -> frozenset[int]:
        return frozenset(len(idx) for idx, _ in self._data)

    @property
    def degree(self) -> int | None:
        """Form degree of a homogeneous form; ``None`` for the zero form."""
        degs = self.degrees
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"form has mixed degrees {sorted(degs)}")
        return next(iter(degs))

    def is_homogeneous(self) -> bool:
        return len(self.degrees) <= 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LogForm):
            return NotImplemented
        return self.n == other.n and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, tuple(self._data.items())))
        return self._hash

    def _check(self, other: LogForm) -> None:
        if self.n != other.n:
            raise DimensionError(f"ambient dimensions differ: {self.n} != {other.n}")

    def __add__(self, other: LogForm) -> LogForm:
        if not isinstance(other, LogForm):
            return NotImplemented
        self._check(other)
        acc = dict(self._data)
        for key, c in other._data.items():
            _accumulate(acc, key, c)
        return LogForm(self.n, acc)

    def __neg__(self) -> LogForm:
        return LogForm(self.n, {k: -c for k, c in self._data.items()})

    def __sub__(self, other: LogForm) -> LogForm:
        if not isinstance(other, LogForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, q: Rational) -> LogForm:
        if not isinstance(q, (int, Fraction)):
            return NotImplemented
        if q == 0:
            return zero(self.n)
        return LogForm(self.n, {k: c * q for k, c in self._data.items()})

    __rmul__ = __mul__

    def __xor__(self, other: LogForm) -> LogForm:
        return wedge(self, other)

    def times_monomial(self, exp: Sequence[int]) -> LogForm:
        """Multiply every term by ``z^exp``."""
        exp = tuple(exp)
        if len(exp) != self.n:
            raise DimensionError(f"exponent has length {len(exp)}, expected {self.n}")
        # a common shift keeps the canonical order
        out = LogForm(self.n, {})
        out._data = {(idx, _add_exp(e, exp)): c for (idx, e), c in self._data.items()}
        return out

    def __repr__(self) -> str:
        return f"LogForm(n={self.n}, {self})"

    def __str__(self) -> str:
        if not self._data:
            return "0"
        parts = []
        for (idx, exp), c in self._data.items():
            mono = "" if not any(exp) else "z^(" + ",".join(map(str, exp)) + ")"
            wedge_part = "eta_{" + ",".join(map(str, idx)) + "}" if idx else ""
            body = " ".join(p for p in (mono, wedge_part) if p)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c} {body}")
        return " + ".join(parts).replace("+ -", "- ")


def _accumulate(acc: dict, key: tuple[Idx, Exp], c: Fraction) -> None:
    if key not in acc:
        if c:
            acc[key] = c
        return
    total = acc[key] + c
    if total:
        acc[key] = total
    else:
        del acc[key]


def _integer_coefficients(form: LogForm) -> tuple[int, list]:
    """Common denominator and the integer numerators over it."""
    den = 1
    for c in form._data.values():
        den = lcm(den, c.denominator)
    return den, [(key, c.numerator * (den // c.denominator)) for key, c in form._data.items()]


def _from_integer_coefficients(n: int, den: int, acc: Mapping[tuple[Idx, Exp], int]) -> LogForm:
    return LogForm(n, {key: Fraction(v, den) for key, v in acc.items() if v})


def _add_exp(a: Exp, b: Exp) -> Exp:
    return tuple(x + y for x, y in zip(a, b))


def _check_idx(idx: Idx, n: int) -> None:
    if any(not 1 <= i <= n for i in idx):
        raise DimensionError(f"index set {idx} out of range 1..{n}")
    if any(idx[p] >= idx[p + 1] for p in range(len(idx) - 1)):
        raise ValueError(f"index set {idx} is not strictly increasing")


def normalize(raw: Iterable, n: int | None = None) -> LogForm:
    """Merge like terms, drop zeros and put the result in canonical order.

    ``raw`` holds ``(coeff, exp, idx)`` triples (or :class:`LogTerm`).  ``n`` is
    needed only when ``raw`` is empty.
    """
    acc: dict[tuple[Idx, Exp], Fraction] = {}
    for coeff, exp, idx in raw:
        exp = tuple(int(e) for e in exp)
        idx = tuple(idx)
        if n is None:
            n = len(exp)
        elif len(exp) != n:
            raise DimensionError(f"term exponent has length {len(exp)}, expected {n}")
        _check_idx(idx, n)
        _accumulate(acc, (idx, exp), Fraction(coeff))
    if n is None:
        raise DimensionError("cannot infer the ambient dimension of an empty term list")
    return LogForm(n, acc)


def zero(n: int) -> LogForm:
    return LogForm(n, {})


def unit(n: int, k: int) -> Exp:
    """The exponent vector ``e_k``."""
    if not 1 <= k <= n:
        raise DimensionError(f"coordinate {k} out of range 1..{n}")
    return tuple(1 if p == k - 1 else 0 for p in range(n))


def term(coeff: Rational, exp: Sequence[int], idx: Iterable[int] = ()) -> LogForm:
    """A single-term form, with ``idx`` given in any order (sign applied)."""
    idx = list(idx)
    exp = tuple(exp)
    n = len(exp)
    sign = 1
    # bubble sort to track the permutation sign
    for a in range(len(idx)):
        for b in range(len(idx) - 1 - a):
            if idx[b] > idx[b + 1]:
                idx[b], idx[b + 1] = idx[b + 1], idx[b]
                sign = -sign
    if len(set(idx)) != len(idx):
        return zero(n)
    return normalize([(sign * Fraction(coeff), exp, tuple(idx))], n)


def constant(q: Rational, n: int) -> LogForm:
    return term(q, (0,) * n)


def monomial(exp: Sequence[int], coeff: Rational = 1) -> LogForm:
    """The 0-form ``coeff * z^exp``."""
    return term(coeff, exp)


def dlog(i: int, n: int) -> LogForm:
    """``eta_i = dz_i / z_i``."""
    return term(1, (0,) * n, (i,))


def dz(k: int, n: int) -> LogForm:
    """``dz_k = z_k eta_k`` in the dlog basis."""
    return term(1, unit(n, k), (k,))


def shuffle_sign(a: Idx, b: Idx) -> int:
    """Sign of the permutation sorting the concatenation ``a + b``.

    Both inputs are strictly increasing and disjoint.
    """
    inversions = 0
    for x in a:
        for y in b:
            if x > y:
                inversions += 1
    return -1 if inversions & 1 else 1


def _merge(a: Idx, b: Idx) -> Idx:
    return tuple(sorted(a + b))


def wedge(a: LogForm, b: LogForm) -> LogForm:
    a._check(b)
    den_a, nums_a = _integer_coefficients(a)
    den_b, nums_b = _integer_coefficients(b)
    acc: dict[tuple[Idx, Exp], int] = {}
    for (ia, ea), na in nums_a:
        sa = set(ia)
        for (ib, eb), nb in nums_b:
            if sa.intersection(ib):
                continue
            key = (_merge(ia, ib), _add_exp(ea, eb))
            acc[key] = acc.get(key, 0) + shuffle_sign(ia, ib) * na * nb
    return _from_integer_coefficients(a.n, den_a * den_b, acc)


def wedge_all(forms: Sequence[LogForm], n: int) -> LogForm:
    out = constant(1, n)
    for f in forms:
        out = wedge(out, f)
    return out


def _d_numerators(form: LogForm) -> tuple[int, dict[tuple[Idx, Exp], int]]:
    den, nums = _integer_coefficients(form)
    acc: dict[tuple[Idx, Exp], int] = {}
    for (idx, exp), num in nums:
        members = set(idx)
        for k0, a_k in enumerate(exp):
            k = k0 + 1
            if not a_k or k in members:
                continue
            pos = bisect_left(idx, k)
            key = (idx[:pos] + (k,) + idx[pos:], exp)
            acc[key] = acc.get(key, 0) + (-a_k if pos & 1 else a_k) * num
    return den, acc


def exterior_derivative(form: LogForm) -> LogForm:
    den, acc = _d_numerators(form)
    return _from_integer_coefficients(form.n, den, acc)


def is_closed(form: LogForm) -> bool:
    """``d form == 0``, without materializing the derivative."""
    return not any(_d_numerators(form)[1].values())


d = exterior_derivative


def is_log_along(form: LogForm, i: int) -> bool:
    """True iff the form has at worst a logarithmic pole along ``z_i = 0``."""
    if not 1 <= i <= form.n:
        raise DimensionError(f"coordinate {i} out of range 1..{form.n}")
    return all(exp[i - 1] >= 0 for _, exp in form._data)


def residue(form: LogForm, i: int) -> LogForm:
    """Poincare residue along ``z_i = 0``.

    Each term is rewritten with ``eta_i`` in the last wedge slot,
    ``form = alpha ^ eta_i + beta``, and ``alpha`` restricted to ``z_i = 0`` is
    returned.  Moving ``eta_i`` from position ``p`` of a ``k``-element index set
    costs ``(-1)^(k - p)``.  Terms with ``exp_i > 0`` vanish on restriction.
    """
    if not is_log_along(form, i):
        raise InvalidResidueError(f"form has a non-logarithmic pole along z_{i} = 0")
    acc: dict[tuple[Idx, Exp], Fraction] = {}
    for (idx, exp), c in form._data.items():
        if i not in idx or exp[i - 1] != 0:
            continue
        p = idx.index(i) + 1
        sign = -1 if (len(idx) - p) & 1 else 1
        new_idx = tuple(x for x in idx if x != i)
        _accumulate(acc, (new_idx, exp), sign * c)
    return LogForm(form.n, acc)


def biresidue(phi: LogForm, i: int, j: int) -> Fraction:
    """Iterated residue ``Res_i Res_j phi`` of a 2-form, as a rational number."""
    if i == j:
        raise ValueError("biresidue needs two distinct branches")
    res = residue(residue(phi, j), i)
    value = Fraction(0)
    for (idx, exp), c in res.items():
        if idx or any(exp):
            raise ValueError(f"iterated residue along ({i}, {j}) is not a constant: {res}")
        value += c
    return value


def multidegree_split(form: LogForm) -> dict[Exp, LogForm]:
    parts: dict[Exp, dict] = {}
    for (idx, exp), c in form._data.items():
        parts.setdefault(exp, {})[(idx, exp)] = c
    return {exp: LogForm(form.n, data) for exp, data in sorted(parts.items())}


def is_honest(form: LogForm, m: int) -> bool:
    """Check that the form is pole-free along the non-branch coordinates ``k > m``.

    In the dlog basis that means ``exp_k >= 1`` when ``k`` occurs in the wedge
    index and ``exp_k >= 0`` otherwise.
    """
    for (idx, exp), _ in form._data.items():
        for k in range(m + 1, form.n + 1):
            if exp[k - 1] < (1 if k in idx else 0):
                return False
    return True


def basis_one_form(k: int, n: int, m: int) -> LogForm:
    """The local frame element: ``dlog z_k`` for a branch ``k <= m``, ``dz_k`` otherwise."""
    return dlog(k, n) if k <= m else dz(k, n)


def from_matrix(rows: Sequence[Sequence[Rational]], m: int | None = None) -> LogForm:
    """The 2-form ``sum_{i<j} b_ij eta~_i ^ eta~_j`` of a coefficient matrix.

    ``eta~_k`` is :func:`basis_one_form`, so coordinates beyond the first ``m``
    enter as honest ``dz_k``.  ``m`` defaults to all coordinates.
    """
    n = len(rows)
    if m is None:
        m = n
    raw = []
    for i, j in combinations(range(1, n + 1), 2):
        b = Fraction(rows[i - 1][j - 1])
        if b:
            exp = tuple(
                (1 if (p + 1 in (i, j) and p + 1 > m) else 0) for p in range(n)
            )
            raw.append((b, exp, (i, j)))
    return normalize(raw, n)


def interior_log_vector(form: LogForm, k: int) -> LogForm:
    """Contract with the log vector field ``z_k d/dz_k`` (dual to ``eta_k``)."""
    acc: dict[tuple[Idx, Exp], Fraction] = {}
    for (idx, exp), c in form._data.items():
        if k not in idx:
            continue
        p = idx.index(k)
        sign = -1 if p & 1 else 1
        _accumulate(acc, (idx[:p] + idx[p + 1:], exp), sign * c)
    return LogForm(form.n, acc)


def basis_forms(n: int, exp: Sequence[int], degree: int, allowed: Iterable[int] | None = None):
    """All ``z^exp eta_I`` with ``|I| = degree`` and ``I`` drawn from ``allowed``."""
    exp = tuple(exp)
    pool = sorted(allowed) if allowed is not None else list(range(1, n + 1))
    return [LogForm(n, {(I, exp): Fraction(1)}) for I in combinations(pool, degree)]
