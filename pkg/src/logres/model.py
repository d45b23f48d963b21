"""Local normal form of a log-symplectic structure.

Near a point where ``m`` branches ``z_1 ... z_m = 0`` of the polar divisor
meet, the 2-form is ``Phi = sum_{i<j} b_ij eta~_i ^ eta~_j`` for a constant
skew matrix ``B``; ``eta~_k`` is ``dlog z_k`` for ``k <= m`` and ``dz_k``
otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import logform as lf
from .errors import DegenerateStructureError, ModelError
from .skewlinalg import SkewMatrix, complete_skew, pfaffian


@dataclass(frozen=True)
class Model:
    B: SkewMatrix
    m: int
    pf: Fraction = field(init=False, repr=False, compare=False)
    _pair_forms: dict = field(init=False, repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.B, SkewMatrix):
            object.__setattr__(self, "B", SkewMatrix(self.B))
        if not 0 <= self.m <= self.N:
            raise ModelError(f"branch count m = {self.m} must lie in 0..{self.N}")
        pf = pfaffian(self.B)
        if pf == 0:
            raise DegenerateStructureError("Pfaffian of the coefficient matrix is 0")
        object.__setattr__(self, "pf", pf)

    @property
    def N(self) -> int:
        return self.B.size

    @property
    def n(self) -> int:
        return self.B.size // 2

    @cached_property
    def phi(self) -> lf.LogForm:
        return lf.from_matrix(self.B.entries, self.m)

    def rho(self, i: int) -> lf.LogForm:
        """Contraction of ``Phi`` with ``z_i d/dz_i``: ``sum_k b_ik eta~_k`` (times ``z_i`` off the divisor)."""
        self.check_coordinate(i)
        return lf.interior_log_vector(self.phi, i)

    def pair_form(self, i: int, j: int) -> lf.LogForm:
        """``rho_i ^ rho_j``, memoized per model."""
        key = (i, j)
        if key not in self._pair_forms:
            self._pair_forms[key] = lf.wedge(self.rho(i), self.rho(j))
        return self._pair_forms[key]

    def check_branch(self, i: int) -> None:
        if not 1 <= i <= self.m:
            raise ModelError(f"branch index {i} out of range 1..{self.m}")

    def check_coordinate(self, i: int) -> None:
        if not 1 <= i <= self.N:
            raise ModelError(f"coordinate index {i} out of range 1..{self.N}")

    def scaled(self, q) -> Model:
        return Model(self.B.scaled(q), self.m)

    @classmethod
    def from_upper(cls, n: int, upper: Sequence, m: int | None = None) -> Model:
        B = SkewMatrix.from_upper(n, upper)
        return cls(B, n if m is None else m)

    @classmethod
    def from_matrix(cls, data: Sequence[Sequence], m: int | None = None) -> Model:
        """Skew-complete ``data`` from its upper triangle."""
        B = complete_skew(data)
        return cls(B, B.size if m is None else m)

    @classmethod
    def standard(cls, n: int) -> Model:
        """The standard symplectic form on ``C^{2n}`` with no log branches."""
        return cls(SkewMatrix.standard(n), 0)


EXAMPLE_UPPER = (1, 2, 4, 3, 5, 6)


def example_model() -> Model:
    """The 4-dimensional toric example with b_12..b_34 = 1, 2, 4, 3, 5, 6."""
    return Model.from_upper(4, EXAMPLE_UPPER)
