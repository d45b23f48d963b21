"""Finite, exact checks of the exactness statements for principal-parts and normal log complexes.

The principal-parts complex with trivialized line bundle is modelled as the
mapping cone of the identity on the (log) de Rham complex: degree ``i`` is
``Omega^{i-1} + Omega^i`` with

    D(alpha, beta) = (d alpha + beta, -d beta),    h(alpha, beta) = (0, alpha),

so that ``hD + Dh = id``.  The matrix printed without signs,
``D = [[d, id], [0, d]]`` with ``h = [[0, id], [0, 0]]``, does not square to
zero; :func:`printed_convention_check` exhibits this.

Homology is computed one multidegree at a time, which is legitimate because
the exterior derivative never changes the exponent vector in the dlog basis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import logform as lf
from .errors import ConsistencyError
from .skewlinalg import rank, rref

Exp = tuple[int, ...]
Operator = Callable[[lf.LogForm], lf.LogForm]


@dataclass(frozen=True)
class ConeElement:
    degree: int
    alpha: lf.LogForm
    beta: lf.LogForm

    def __post_init__(self):
        if self.alpha.n != self.beta.n:
            raise ValueError("alpha and beta live in different dimensions")
        for name, form, want in (("alpha", self.alpha, self.degree - 1), ("beta", self.beta, self.degree)):
            if form and form.degree != want:
                raise ValueError(f"{name} must have form degree {want}, got {form.degree}")

    def __add__(self, other: ConeElement) -> ConeElement:
        if self.degree != other.degree:
            raise ValueError("cannot add cone elements of different degree")
        return ConeElement(self.degree, self.alpha + other.alpha, self.beta + other.beta)

    def is_zero(self) -> bool:
        return self.alpha.is_zero() and self.beta.is_zero()


def cone_differential(e: ConeElement, d: Operator = lf.exterior_derivative) -> ConeElement:
    return ConeElement(e.degree + 1, d(e.alpha) + e.beta, -d(e.beta))


def cone_homotopy(e: ConeElement) -> ConeElement:
    return ConeElement(e.degree - 1, lf.zero(e.alpha.n), e.alpha)


@dataclass
class ConeCheck:
    N: int
    t: int
    m: int
    foliation_rank: int
    elements: int = 0
    d_squared_failures: int = 0
    homotopy_failures: int = 0
    h_squared_failures: int = 0

    @property
    def passed(self) -> bool:
        return not (self.d_squared_failures or self.homotopy_failures or self.h_squared_failures)


def _exponent_box(ranges: Sequence[Iterable[int]]) -> Iterable[Exp]:
    return itertools.product(*ranges)


def allowed_indices(exp: Sequence[int], m: int) -> list[int]:
    """Wedge indices usable at this multidegree: every branch, and ``k > m`` only if ``exp_k >= 1``."""
    return [k for k in range(1, len(exp) + 1) if k <= m or exp[k - 1] >= 1]


def _admissible(exp: Sequence[int], m: int) -> bool:
    return all(exp[k] >= 0 for k in range(m, len(exp)))


class Foliation:
    """Quotient of the log 1-forms by a span of constant closed 1-forms.

    Representatives of the quotient use the non-pivot ``eta_k`` of the rref of
    the spanning vectors; ``reduce`` rewrites any form in those representatives.
    """

    def __init__(self, n: int, vectors: Sequence[Sequence] = ()):
        self.n = n
        red, pivots = rref(vectors) if vectors else ([], [])
        self.rank = len(pivots)
        self.pivots = [p + 1 for p in pivots]
        self.free = [k for k in range(1, n + 1) if k not in self.pivots]
        self._subst: dict[int, lf.LogForm] = {}
        for row_no, p in enumerate(self.pivots):
            row = red[row_no]
            sub = lf.zero(n)
            for k in self.free:
                if row[k - 1]:
                    sub = sub + lf.dlog(k, n) * (-row[k - 1])
            self._subst[p] = sub

    def reduce(self, form: lf.LogForm) -> lf.LogForm:
        if not self._subst:
            return form
        out = lf.zero(self.n)
        for (idx, exp), c in form.items():
            piece = lf.constant(c, self.n).times_monomial(exp)
            for k in idx:
                factor = self._subst.get(k, lf.dlog(k, self.n))
                piece = lf.wedge(piece, factor)
            out = out + piece
        return out

    def differential(self, form: lf.LogForm) -> lf.LogForm:
        return self.reduce(lf.exterior_derivative(form))


def cone_identity_check(N: int, t: int, m: int = 0, foliation: Sequence[Sequence] = ()) -> ConeCheck:
    """Check ``D^2 = 0``, ``hD + Dh = id`` and ``h^2 = 0`` on every basis element.

    Basis: ``z^a eta_I`` with ``0 <= a_k <= t`` in the polynomial sense; for
    ``k > m`` the index ``k`` carries ``dz_k``, so its internal exponent is
    ``a_k + 1``.  A nonempty ``foliation`` (only with ``m = N``) replaces the
    log de Rham complex by its quotient.
    """
    if foliation and m != N:
        raise ValueError("foliations are modelled only when every coordinate is a branch")
    fol = Foliation(N, [list(map(Fraction, v)) for v in foliation])
    d = fol.differential
    report = ConeCheck(N, t, m, fol.rank)
    for a in _exponent_box([range(t + 1)] * N):
        for p in range(len(fol.free) + 1):
            for I in itertools.combinations(fol.free, p):
                exp = tuple(x + (1 if (k in I and k > m) else 0) for k, x in enumerate(a, start=1))
                form = lf.LogForm(N, {(I, exp): Fraction(1)})
                empty = lf.zero(N)
                for e in (ConeElement(p + 1, form, empty), ConeElement(p, empty, form)):
                    report.elements += 1
                    De = cone_differential(e, d)
                    if not cone_differential(De, d).is_zero():
                        report.d_squared_failures += 1
                    if cone_homotopy(De) + cone_differential(cone_homotopy(e), d) != e:
                        report.homotopy_failures += 1
                    if not cone_homotopy(cone_homotopy(e)).is_zero():
                        report.h_squared_failures += 1
    return report


@dataclass(frozen=True)
class PrintedConventionCheck:
    d_squares_to_zero: bool
    homotopy_identity_holds: bool
    counterexample: str


def printed_convention_check(N: int = 2) -> PrintedConventionCheck:
    """Evaluate the unsigned matrices ``[[d, id], [0, d]]`` and ``[[0, id], [0, 0]]`` literally."""
    n = N
    beta = lf.monomial(lf.unit(n, 1))  # z_1 in the beta slot
    alpha = lf.zero(n)

    def D(x, y):
        return lf.d(x) + y, lf.d(y)

    def h(x, y):
        return y, lf.zero(n)

    dd = D(*D(alpha, beta))
    lhs = tuple(u + v for u, v in zip(h(*D(alpha, beta)), D(*h(alpha, beta))))
    return PrintedConventionCheck(
        d_squares_to_zero=all(f.is_zero() for f in dd),
        homotopy_identity_holds=lhs == (alpha, beta),
        counterexample=f"(alpha, beta) = (0, z_1): D^2 = ({dd[0]}, {dd[1]}), hD + Dh = ({lhs[0]}, {lhs[1]})",
    )


@dataclass(frozen=True)
class TruncationSpec:
    N: int
    t: int
    constraint: int | None = None  # fixed exponent on coordinate 1

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be at least 1")
        if self.t < 0:
            raise ValueError("truncation t must be nonnegative")

    def multidegrees(self) -> Iterable[Exp]:
        first = [self.constraint] if self.constraint is not None else range(self.t + 1)
        return _exponent_box([first] + [range(self.t + 1)] * (self.N - 1))


@dataclass
class ComplexCheckReport:
    name: str
    N: int
    t: int
    parameters: dict
    dims: dict[Exp, tuple[int, ...]] = field(default_factory=dict)

    @property
    def nonzero(self) -> dict[Exp, tuple[int, ...]]:
        return {e: h for e, h in self.dims.items() if any(h)}

    @property
    def exact(self) -> bool:
        return not self.nonzero


def _coordinates(form: lf.LogForm, index: dict[tuple[int, ...], int], exp: Exp) -> list[Fraction]:
    vec = [Fraction(0)] * len(index)
    for (idx, e), c in form.items():
        if e != exp or idx not in index:
            raise ConsistencyError(f"operator left the graded piece: term {idx} {e}")
        vec[index[idx]] = c
    return vec


def graded_homology(n: int, exp: Exp, allowed: Sequence[int], op: Operator) -> tuple[int, ...]:
    """Homology dimensions of ``op`` on ``span{z^exp eta_I : I subset allowed}``, degree by degree."""
    top = len(allowed)
    bases = [list(itertools.combinations(allowed, p)) for p in range(top + 1)]
    ranks = []
    for p in range(top):
        target = {I: k for k, I in enumerate(bases[p + 1])}
        cols = [
            _coordinates(op(lf.LogForm(n, {(I, exp): Fraction(1)})), target, exp)
            for I in bases[p]
        ]
        ranks.append(rank(cols) if cols else 0)
    ranks.append(0)
    dims = []
    for p in range(top + 1):
        incoming = ranks[p - 1] if p > 0 else 0
        dims.append(len(bases[p]) - ranks[p] - incoming)
    return tuple(dims) + (0,) * (n - top)


def normal_log_homology(spec: TruncationSpec, m: int = 1) -> ComplexCheckReport:
    """Homology of the normal log complex along ``z_1 = 0``.

    Terms are ``z^a eta_I`` with ``a_1`` fixed by ``spec.constraint`` (``-1``
    for the twist by the normal bundle) and ``0 <= a_k <= t`` otherwise.
    """
    if spec.N < 2:
        raise ValueError("the normal log complex needs N >= 2")
    if not 1 <= m <= spec.N:
        raise ValueError("coordinate 1 must be a branch: need 1 <= m <= N")
    report = ComplexCheckReport("normal-log", spec.N, spec.t, {"m": m, "a1": spec.constraint})
    for exp in spec.multidegrees():
        if not _admissible(exp, m):
            continue
        report.dims[exp] = graded_homology(spec.N, exp, allowed_indices(exp, m), lf.exterior_derivative)
    return report


def twisted_differential(j: int, n: int) -> Operator:
    """``omega -> d omega + j dlog(z_1) ^ omega``."""
    gamma = lf.dlog(1, n) * j

    def op(form: lf.LogForm) -> lf.LogForm:
        return lf.exterior_derivative(form) + lf.wedge(gamma, form)

    return op


def principal_parts_exactness(spec: TruncationSpec, j: int, m: int = 1) -> ComplexCheckReport:
    if j <= 0:
        raise ValueError(f"principal parts complexes are exact only for j > 0, got j = {j}")
    if not 1 <= m <= spec.N:
        raise ValueError("coordinate 1 must be a branch: need 1 <= m <= N")
    op = twisted_differential(j, spec.N)
    report = ComplexCheckReport("principal-parts", spec.N, spec.t, {"j": j, "m": m})
    for exp in spec.multidegrees():
        if not _admissible(exp, m):
            continue
        report.dims[exp] = graded_homology(spec.N, exp, allowed_indices(exp, m), op)
    return report
