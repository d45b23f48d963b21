"""Residual / special classification of double and triple loci.

For branches ``i < j`` the biresidue ``c_ij = Res_i Res_j Phi`` equals
``b_ij``.  The codimension-2 stratum ``{z_i = z_j = 0}`` is *residual* when
``c_ij != 0``.  Along a triple point with third branch ``l`` the stratum is
*special* there when

    (c_jl + c_li) / c_ij  is a nonnegative integer,

and the pair is special when this happens at every triple point it meets.
The strong-unobstructedness criterion holds when no pair is non-residual,
free of triple points, or special.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import deform
from . import logform as lf
from .errors import ModelError
from .model import Model

NON_RESIDUAL = "non-residual"
NO_TRIPLE_POINTS = "no-triple-points"
SPECIAL = "special"


def is_natural(q: Fraction | None) -> bool:
    """Nonnegative integer test; 0 counts."""
    return q is not None and q.denominator == 1 and q >= 0


@dataclass(frozen=True)
class TripleReport:
    pair: tuple[int, int]
    third: int
    ratio: Fraction | None
    special: bool
    # the same test with c_ji in the denominator, i.e. with the ratio negated
    special_alt_convention: bool


@dataclass(frozen=True)
class PairReport:
    pair: tuple[int, int]
    c: Fraction
    residual: bool
    meets_triple_locus: bool
    special: bool | None  # None when not residual
    triples: tuple[TripleReport, ...] = ()


@dataclass(frozen=True)
class Verdict:
    criterion_holds: bool
    witnesses: tuple[tuple[tuple[int, int], str], ...] = field(default_factory=tuple)


def biresidues(model: Model) -> dict[tuple[int, int], Fraction]:
    """``c_ij`` for all ordered pairs of distinct branches."""
    phi = model.phi
    return {
        (i, j): lf.biresidue(phi, i, j)
        for i in range(1, model.m + 1)
        for j in range(1, model.m + 1)
        if i != j
    }


def triple_ratio(c: dict[tuple[int, int], Fraction], i: int, j: int, l: int) -> Fraction | None:
    if c[(i, j)] == 0:
        return None
    return (c[(j, l)] + c[(l, i)]) / c[(i, j)]


def classify_triple(c: dict, i: int, j: int, l: int) -> TripleReport:
    ratio = triple_ratio(c, i, j, l)
    alt = None if ratio is None else -ratio
    return TripleReport((i, j), l, ratio, is_natural(ratio), is_natural(alt))


def classify_pair(model: Model, i: int, j: int, _c: dict | None = None) -> PairReport:
    model.check_branch(i)
    model.check_branch(j)
    if not i < j:
        raise ModelError(f"pair must satisfy i < j, got ({i}, {j})")
    c = _c if _c is not None else biresidues(model)
    cij = c[(i, j)]
    residual = cij != 0
    meets = model.m >= 3
    triples: tuple[TripleReport, ...] = ()
    special = None
    if residual:
        triples = tuple(
            classify_triple(c, i, j, l) for l in range(1, model.m + 1) if l not in (i, j)
        )
        special = bool(triples) and all(t.special for t in triples)
    return PairReport((i, j), cij, residual, meets, special, triples)


def classify_all(model: Model) -> list[PairReport]:
    c = biresidues(model)
    return [
        classify_pair(model, i, j, c)
        for i in range(1, model.m + 1)
        for j in range(i + 1, model.m + 1)
    ]


def verdict(model: Model, reports: list[PairReport] | None = None) -> Verdict:
    if reports is None:
        reports = classify_all(model)
    witnesses = []
    for rep in reports:
        if not rep.residual:
            witnesses.append((rep.pair, NON_RESIDUAL))
        elif not rep.meets_triple_locus:
            witnesses.append((rep.pair, NO_TRIPLE_POINTS))
        elif rep.special:
            witnesses.append((rep.pair, SPECIAL))
    return Verdict(not witnesses, tuple(witnesses))


@dataclass(frozen=True)
class G2Diagnostic:
    """Kernel of the zeroth differential on ``g / z_i z_j`` for monomial ``g = z^b``.

    ``kernel`` comes from closedness of ``z^b phi_i phi_j``.  ``psi2`` holds the
    coefficients of ``psi_2 = -dlog(z_i z_j) + (rho_i - rho_j) / c_ij`` when
    they are constant (``None`` otherwise).  ``by_convention`` lists the
    solutions of ``dlog g = s psi_2`` for ``s = +1`` and ``s = -1``.
    """

    pair: tuple[int, int]
    max_degree: int
    kernel: tuple[tuple[int, ...], ...]
    psi2: tuple[Fraction, ...] | None
    by_convention: dict[str, tuple[tuple[int, ...], ...]]
    matching_conventions: tuple[str, ...]

    @property
    def mismatch(self) -> dict[str, bool]:
        return {s: sols != self.kernel for s, sols in self.by_convention.items()}


def psi2_coefficients(model: Model, i: int, j: int) -> tuple[Fraction, ...] | None:
    cij = model.B.entry(i, j)
    n = model.N
    psi2 = (model.rho(i) - model.rho(j)) * (1 / cij) - lf.dlog(i, n) - lf.dlog(j, n)
    coeffs = [Fraction(0)] * n
    for (idx, exp), q in psi2.items():
        if any(exp):
            return None
        coeffs[idx[0] - 1] += q
    return tuple(coeffs)


def g2_kernel_diagnostic(model: Model, i: int, j: int, max_degree: int) -> G2Diagnostic:
    model.check_branch(i)
    model.check_branch(j)
    if not i < j:
        raise ModelError(f"pair must satisfy i < j, got ({i}, {j})")
    if model.B.entry(i, j) == 0:
        raise ModelError(f"pair ({i}, {j}) is non-residual; the diagnostic needs c_ij != 0")
    others = [k for k in range(1, model.N + 1) if k not in (i, j)]
    kernel = tuple(
        b
        for b in deform.exponents_up_to(model.N, others, max_degree)
        if deform.is_closed(model, i, j, b)[0]
    )
    psi2 = psi2_coefficients(model, i, j)
    by_convention: dict[str, tuple] = {}
    for name, s in (("+", 1), ("-", -1)):
        sols: tuple = ()
        if psi2 is not None:
            b = [s * q for q in psi2]
            if all(is_natural(x) for x in b) and sum(b) <= max_degree:
                sols = (tuple(int(x) for x in b),)
        by_convention[name] = sols
    matching = tuple(s for s, sols in by_convention.items() if sols == kernel)
    return G2Diagnostic((i, j), max_degree, kernel, psi2, by_convention, matching)
