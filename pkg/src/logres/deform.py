"""Monomial first-order deformations ``z^a d/dz_i ^ d/dz_j``.

Contraction with ``Phi`` turns the bivector into the log-plus 2-form

    omega = z^(a - e_i - e_j) rho_i ^ rho_j,    rho_k = sum_l b_kl eta_l,

and the bivector is a Poisson cocycle iff ``omega`` is closed.  When every
coordinate is a branch (``m = N``) the rows are constant, so
``d omega = z^c gamma_c ^ rho_i ^ rho_j`` with ``c = a - e_i - e_j`` and
``gamma_c = sum_k c_k eta_k``; closedness then says ``c`` lies in the span of
rows ``i`` and ``j``.  That shortcut is always checked against the direct
exterior derivative.

Exactness is decided inside the multidegree ``c`` (``d`` preserves it).  The
log-plus 1-forms of multidegree ``c`` are the images ``z^c rho_k`` of vector
fields ``z^(c + e_k) d/dz_k``, so they exist only for ``k`` with
``c + e_k >= 0``.  Since ``rho_i ^ rho_j = gamma_c ^ beta_0`` when closed, a
primitive exists iff some ``beta_0 + t gamma_c`` lies in the span of those
``rho_k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from . import logform as lf
from .errors import ConsistencyError, ModelError
from .model import Model
from .skewlinalg import SpanCertificate, span_solve

DEFAULT_MAX_DEGREE = 6

Exp = tuple[int, ...]


@dataclass(frozen=True)
class DeformationCandidate:
    i: int
    j: int
    a: Exp
    closed: bool
    exact: bool | None  # None: not evaluated
    certificate: SpanCertificate | None

    @property
    def degree(self) -> int:
        return sum(self.a)


def exponents_up_to(n: int, coords: Iterable[int], max_degree: int, min_degree: int = 0) -> list[Exp]:
    """All ``a >= 0`` supported on ``coords`` with ``min_degree <= |a| <= max_degree``.

    Ordered by total degree, then lexicographically descending in the exponent
    vector (so ``e_3 + e_4`` precedes ``2 e_4``).
    """
    coords = sorted(coords)
    out: list[Exp] = []
    for total in range(max(min_degree, 0), max_degree + 1):
        level = []
        for combo in combinations_with_replacement(coords, total):
            a = [0] * n
            for k in combo:
                a[k - 1] += 1
            level.append(tuple(a))
        out.extend(sorted(level, reverse=True))
    return out


def _check_pair(model: Model, i: int, j: int) -> None:
    if not i < j:
        raise ModelError(f"pair must satisfy i < j, got ({i}, {j})")
    model.check_branch(i)
    model.check_branch(j)


def _check_exp(model: Model, a: Sequence[int]) -> Exp:
    a = tuple(int(x) for x in a)
    if len(a) != model.N:
        raise ModelError(f"exponent vector has length {len(a)}, expected {model.N}")
    if any(x < 0 for x in a):
        raise ModelError(f"exponent vector {a} has negative entries")
    return a


def _pair_form(model: Model, i: int, j: int) -> lf.LogForm:
    form = model.pair_form(i, j)
    if form.is_zero():  # pragma: no cover - impossible for nonsingular B
        raise ConsistencyError(f"rho_{i} ^ rho_{j} vanishes for a nondegenerate structure")
    return form


def offset(model: Model, i: int, j: int, a: Sequence[int]) -> Exp:
    """``c = a - e_i - e_j``."""
    return tuple(x - (1 if k in (i, j) else 0) for k, x in enumerate(a, start=1))


def candidate_form(model: Model, i: int, j: int, a: Sequence[int]) -> lf.LogForm:
    _check_pair(model, i, j)
    a = _check_exp(model, a)
    return _pair_form(model, i, j).times_monomial(offset(model, i, j, a))


def is_closed(model: Model, i: int, j: int, a: Sequence[int]) -> tuple[bool, SpanCertificate | None]:
    """Closedness of the candidate, with a span certificate when ``m = N``.

    Raises :class:`ConsistencyError` if the span criterion and the direct
    exterior derivative disagree.
    """
    form = candidate_form(model, i, j, a)
    direct = lf.is_closed(form)
    if model.m != model.N:
        return direct, None
    cert = span_solve(offset(model, i, j, a), model.B.row(i), model.B.row(j))
    if (cert is not None) != direct:
        raise ConsistencyError(
            f"span criterion ({cert is not None}) and direct d ({direct}) disagree "
            f"for pair ({i}, {j}), a = {tuple(a)}"
        )
    return direct, cert


def _solve_for_t(equations: list[tuple[Fraction, Fraction]]) -> bool:
    """Is there a ``t`` with ``coef * t + const = 0`` for every pair?"""
    t = None
    for coef, const in equations:
        if coef:
            t = -const / coef
            break
    return all(coef * (t or 0) + const == 0 for coef, const in equations)


def is_exact(model: Model, i: int, j: int, a: Sequence[int]) -> bool | None:
    """Exactness of a closed candidate in the log-plus complex.

    Returns ``None`` when some coordinates are not branches: the rows then
    carry monomial factors and the multidegree argument no longer applies.
    """
    closed, cert = is_closed(model, i, j, a)
    if not closed:
        raise ValueError("exactness is only defined for closed candidates")
    if model.m != model.N:
        return None
    c = offset(model, i, j, a)
    if not any(c):
        return False
    lam, mu = cert.lam, cert.mu
    # beta_0 and gamma_c in the rho-basis, restricted to coordinates (i, j)
    if mu != 0:
        beta0 = (-1 / mu, Fraction(0))
    else:
        beta0 = (Fraction(0), 1 / lam)
    gamma = (lam, mu)
    equations = []
    for slot, k in enumerate((i, j)):
        if c[k - 1] + 1 < 0 or any(c[p] < 0 for p in range(model.N) if p != k - 1):
            equations.append((gamma[slot], beta0[slot]))
    return _solve_for_t(equations)


def evaluate(model: Model, i: int, j: int, a: Sequence[int]) -> DeformationCandidate:
    a = _check_exp(model, a)
    closed, cert = is_closed(model, i, j, a)
    exact = is_exact(model, i, j, a) if closed else None
    return DeformationCandidate(i, j, a, closed, exact, cert)


def search(model: Model, max_degree: int = DEFAULT_MAX_DEGREE) -> list[DeformationCandidate]:
    """Closed candidates with ``a`` supported off the pair and ``1 <= |a| <= max_degree``."""
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    found = []
    for i in range(1, model.m + 1):
        for j in range(i + 1, model.m + 1):
            others = [k for k in range(1, model.N + 1) if k not in (i, j)]
            for a in exponents_up_to(model.N, others, max_degree, min_degree=1):
                closed, cert = is_closed(model, i, j, a)
                if closed:
                    found.append(DeformationCandidate(i, j, a, True, is_exact(model, i, j, a), cert))
    return found


@dataclass(frozen=True)
class ColumnRelation:
    """``coeff_i k_i + coeff_j k_j + sum_l units_l e_l = 0`` over the columns ``k`` of B."""

    i: int
    j: int
    coeff_i: Fraction
    coeff_j: Fraction
    units: tuple[Fraction, ...]
    holds: bool
    integral: bool

    def __str__(self) -> str:
        return render_relation(self)


def column_relation(model: Model, cand: DeformationCandidate) -> ColumnRelation:
    """Rewrite the span certificate as a relation among columns and unit vectors.

    ``a - e_i - e_j = lam row_i + mu row_j`` and ``row_k = -k_k``, giving
    ``-lam k_i - mu k_j + (e_i + e_j) - a = 0``.
    """
    if not cand.closed or cand.certificate is None:
        raise ValueError("column relation needs a closed candidate with a span certificate")
    i, j = cand.i, cand.j
    coeff_i, coeff_j = -cand.certificate.lam, -cand.certificate.mu
    units = tuple(Fraction(-x) for x in offset(model, i, j, cand.a))
    ki, kj = model.B.column(i), model.B.column(j)
    total = [coeff_i * x + coeff_j * y + u for x, y, u in zip(ki, kj, units)]
    holds = not any(total)
    integral = all(v.denominator == 1 for v in (coeff_i, coeff_j, *units))
    return ColumnRelation(i, j, coeff_i, coeff_j, units, holds, integral)


def _coef_str(q: Fraction, symbol: str, first: bool) -> str:
    sign = "-" if q < 0 else "+"
    mag = abs(q)
    body = symbol if mag == 1 else f"{mag} {symbol}"
    if first:
        return body if sign == "+" else f"-{body}"
    return f"{sign} {body}"


def render_relation(rel: ColumnRelation) -> str:
    pieces: list[str] = []
    for q, k in ((rel.coeff_i, rel.i), (rel.coeff_j, rel.j)):
        if q:
            pieces.append(_coef_str(q, f"k_{k}", not pieces))
    for sign in (1, -1):
        group = [(abs(u), l) for l, u in enumerate(rel.units, start=1) if u * sign > 0]
        if not group:
            continue
        inner = " + ".join(f"e_{l}" if q == 1 else f"{q} e_{l}" for q, l in group)
        inner = f"({inner})" if len(group) > 1 else inner
        if not pieces:
            pieces.append(inner if sign > 0 else f"-{inner}")
        else:
            pieces.append(("+ " if sign > 0 else "- ") + inner)
    return (" ".join(pieces) if pieces else "0") + " = 0"
