"""Poisson bivectors, the anchor, and the Koszul bracket on differential forms.

Conventions (all fixed by exact checks in the test-suite):

* ``pi(a, b)`` is the contraction ``pi -| (a ^ b)`` so that
  ``{x1, x2} = 1`` for ``pi = d_1 ^ d_2``;
* the anchor contracts the first slot: ``anchor(df) = {f, .}``;
* ``tilde_pi(w1, w2) = pi -| (w1 ^ w2) - (pi -| w1) ^ w2 - w1 ^ (pi -| w2)``,
  i.e. the per-term sign in the expansion over 1-form factors is
  ``(-1)^(k+i+j-1)``;
* the bracket of forms satisfies
  ``{w1, w2} = (-1)^(|w1|+1) (d tilde_pi(w1, w2) - tilde_pi(d w1, w2)
  - (-1)^|w1| tilde_pi(w1, d w2))``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .exterior import (
    DifferentialForm,
    Polyvector,
    exterior_derivative,
    interior_product,
    lie_derivative,
    schouten_bracket,
)
from .symcore import DimensionMismatch, Polynomial, add_into, mono_mul

d = exterior_derivative


@dataclass(frozen=True)
class PoissonStructure:
    """A bivector on R^n, with its Schouten square computed once."""

    bivector: Polyvector
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not isinstance(self.bivector, Polyvector):
            raise TypeError("bivector must be a Polyvector")
        if self.bivector.degrees() - {2}:
            raise ValueError("bivector must have pure degree 2")

    @property
    def dim(self) -> int:
        return self.bivector.dim

    @cached_property
    def schouten_square(self) -> Polyvector:
        return schouten_bracket(self.bivector, self.bivector)

    @property
    def is_poisson(self) -> bool:
        return self.schouten_square.is_zero()

    @cached_property
    def matrix(self) -> List[List[Polynomial]]:
        """``matrix[i-1][j-1] = pi^{ij} = pi(dx_i, dx_j)``."""
        n = self.dim
        zero = Polynomial.zero(n)
        M = [[zero] * n for _ in range(n)]
        for idx, p in self.bivector.components().items():
            i, j = idx
            M[i - 1][j - 1] = p
            M[j - 1][i - 1] = -p
        return M

    def entry(self, i: int, j: int) -> Polynomial:
        return self.matrix[i - 1][j - 1]

    @cached_property
    def decomposition(self) -> List[Tuple[Polyvector, Polyvector]]:
        """Pairs (X_k, Y_k) of vector fields with ``pi = sum X_k ^ Y_k``."""
        n = self.dim
        pairs = []
        for (i, j), p in sorted(self.bivector.components().items()):
            pairs.append((Polyvector.basis(n, (i,), p), Polyvector.basis(n, (j,))))
        return pairs

    @classmethod
    def from_json(cls, data: Union[str, dict], name: str = "") -> "PoissonStructure":
        from .parsing import parse_polynomial

        if isinstance(data, str):
            data = json.loads(data)
        n = int(data["dim"])
        if n < 1:
            raise ValueError("dim must be positive")
        out = Polyvector.zero(n)
        for entry in data["bivector"]:
            i, j = int(entry["i"]), int(entry["j"])
            c = parse_polynomial(str(entry["c"]), n)
            out = out + Polyvector.basis(n, (i, j), c)
        return cls(out, name=name or str(data.get("name", "")))

    @classmethod
    def load(cls, path) -> "PoissonStructure":
        path = Path(path)
        with path.open(encoding="utf-8") as fh:
            return cls.from_json(json.load(fh), name=path.stem)

    def to_json(self) -> dict:
        from .parsing import render_canonical

        entries = [
            {"i": i, "j": j, "c": render_canonical(p)}
            for (i, j), p in sorted(self.bivector.components().items())
        ]
        return {"dim": self.dim, "bivector": entries}


def _check_dim(S: PoissonStructure, *values) -> None:
    for v in values:
        if v.dim != S.dim:
            raise DimensionMismatch(f"dimension {v.dim} vs Poisson structure {S.dim}")


def _require_degree(w: DifferentialForm, k: int, what: str) -> None:
    if w.degrees() - {k}:
        raise ValueError(f"{what} must have pure degree {k}")


def function_bracket(S: PoissonStructure, f: Polynomial, g: Polynomial) -> Polynomial:
    """``{f, g} = pi(df, dg) = sum pi^{ij} d_i f d_j g``."""
    _check_dim(S, f, g)
    out = Polynomial.zero(S.dim)
    for i, row in enumerate(S.matrix, start=1):
        dfi = f.diff(i)
        if not dfi:
            continue
        for j, pij in enumerate(row, start=1):
            if pij:
                out = out + pij * dfi * g.diff(j)
    return out


def pairing(S: PoissonStructure, a: DifferentialForm, b: DifferentialForm) -> Polynomial:
    """``pi(a, b)`` for 1-forms."""
    _check_dim(S, a, b)
    out = Polynomial.zero(S.dim)
    ca = a.components()
    cb = b.components()
    for (i,), p in ca.items():
        for (j,), q in cb.items():
            pij = S.entry(i, j)
            if pij:
                out = out + pij * p * q
    return out


def anchor(S: PoissonStructure, a: DifferentialForm) -> Polyvector:
    """``pi#(a)`` with ``pi#(df) = {f, .}``."""
    _check_dim(S, a)
    _require_degree(a, 1, "anchor argument")
    out = Polyvector.zero(S.dim)
    for (i,), p in a.components().items():
        for j, pij in enumerate(S.matrix[i - 1], start=1):
            if pij:
                out = out + Polyvector.basis(S.dim, (j,), p * pij)
    return out


def koszul_bracket_1(S: PoissonStructure, a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    """Bracket of two 1-forms: ``-d pi(a,b) + L_{pi# a} b - L_{pi# b} a``."""
    _check_dim(S, a, b)
    _require_degree(a, 1, "first argument")
    _require_degree(b, 1, "second argument")
    return (
        -d(DifferentialForm.function(pairing(S, a, b)))
        + lie_derivative(anchor(S, a), b)
        - lie_derivative(anchor(S, b), a)
    )


# -- extension to all forms ----------------------------------------------------
#
# A monomial term c * x^m dx_I is treated as the wedge word  x^m ^ dx_i1 ^ ...
# of "letters" (0-forms and 1-forms); the bracket is expanded through the
# two Leibniz rules down to brackets of letters.


def _letters(mono, idx, dim) -> List[DifferentialForm]:
    out = []
    if any(mono):
        out.append(DifferentialForm._raw(dim, {(mono, ()): Fraction(1)}))
    for i in idx:
        out.append(DifferentialForm._raw(dim, {((0,) * dim, (i,)): Fraction(1)}))
    return out


def _letter_degree(w: DifferentialForm) -> int:
    return next(iter(w.degrees()))


def _letter_bracket(S: PoissonStructure, a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    da, db = _letter_degree(a), _letter_degree(b)
    if da == 1 and db == 1:
        return koszul_bracket_1(S, a, b)
    if da == 1 and db == 0:
        return DifferentialForm.function(pairing(S, a, d(b)))
    if da == 0 and db == 1:
        return -DifferentialForm.function(pairing(S, b, d(a)))
    return DifferentialForm.zero(S.dim)


def _wedge_all(ws: Sequence[DifferentialForm], dim: int) -> DifferentialForm:
    out = DifferentialForm.function(Polynomial.constant(dim, 1))
    for w in ws:
        out = out.wedge(w)
    return out


def bracket_of_words(S: PoissonStructure, A: Sequence[DifferentialForm],
                     B: Sequence[DifferentialForm]) -> DifferentialForm:
    """Bracket of ``A[0] ^ A[1] ^ ...`` with ``B[0] ^ ...`` for 0-/1-form letters.

    The letters may be arbitrary homogeneous 0- or 1-forms; this is the route
    used to check that the result does not depend on how a form is factored.
    """
    dim = S.dim
    if not A or not B:
        return DifferentialForm.zero(dim)
    if len(B) > 1:
        b1, rest = B[0], B[1:]
        dA = sum(_letter_degree(a) for a in A) - 1
        db1 = _letter_degree(b1) - 1
        sign = -1 if (dA * (db1 + 1)) & 1 else 1
        first = bracket_of_words(S, A, [b1]).wedge(_wedge_all(rest, dim))
        second = b1.wedge(bracket_of_words(S, A, rest))
        return first + second * sign
    if len(A) > 1:
        a1, rest = A[0], A[1:]
        db = _letter_degree(B[0]) - 1
        d_rest = sum(_letter_degree(a) for a in rest) - 1
        sign = -1 if (db * (d_rest + 1)) & 1 else 1
        first = bracket_of_words(S, [a1], B).wedge(_wedge_all(rest, dim)) * sign
        second = a1.wedge(bracket_of_words(S, rest, B))
        return first + second
    return _letter_bracket(S, A[0], B[0])


def koszul_bracket(S: PoissonStructure, w1: DifferentialForm, w2: DifferentialForm) -> DifferentialForm:
    """The graded bracket of arbitrary forms (result degree |w1| + |w2| - 1)."""
    _check_dim(S, w1, w2)
    dim = S.dim
    out: Dict = {}
    for (m1, i1), c1 in w1.terms.items():
        A = _letters(m1, i1, dim)
        for (m2, i2), c2 in w2.terms.items():
            B = _letters(m2, i2, dim)
            if not A or not B:
                continue  # a constant function brackets to zero
            for key, c in bracket_of_words(S, A, B).terms.items():
                add_into(out, key, c * c1 * c2)
    return DifferentialForm._raw(dim, out)


# -- tilde pi ------------------------------------------------------------------


def tilde_pi(S: PoissonStructure, w1: DifferentialForm, w2: DifferentialForm) -> DifferentialForm:
    """Sum over 1-form factors of w1 = a_1^..^a_k, w2 = b_1^..^b_l:

    ``sum_{i,j} (-1)^(k+i+j-1) pi(a_i, b_j) a_1..^a_i^..a_k ^ b_1..^b_j^..b_l``.
    """
    _check_dim(S, w1, w2)
    dim = S.dim
    out: Dict = {}
    for (m1, I), c1 in w1.terms.items():
        k = len(I)
        if not k:
            continue
        for (m2, J), c2 in w2.terms.items():
            l = len(J)
            if not l:
                continue
            m12 = mono_mul(m1, m2)
            c12 = c1 * c2
            for p in range(k):
                restI = I[:p] + I[p + 1:]
                for q in range(l):
                    pij = S.entry(I[p], J[q])
                    if not pij:
                        continue
                    restJ = J[:q] + J[q + 1:]
                    if set(restI) & set(restJ):
                        continue
                    # i = p+1, j = q+1  ->  (-1)^(k+i+j-1) = (-1)^(k+p+q+1)
                    sign = -1 if (k + p + q + 1) & 1 else 1
                    inv = sum(1 for a in restI for b in restJ if a > b)
                    if inv & 1:
                        sign = -sign
                    idx = tuple(sorted(restI + restJ))
                    for mp, cp in pij.terms.items():
                        add_into(out, (mono_mul(m12, mp), idx), sign * c12 * cp)
    return DifferentialForm._raw(dim, out)


def tilde_pi_contraction(S: PoissonStructure, w1: DifferentialForm, w2: DifferentialForm) -> DifferentialForm:
    """``pi -| (w1 ^ w2) - (pi -| w1) ^ w2 - w1 ^ (pi -| w2)``."""
    _check_dim(S, w1, w2)
    P = S.bivector
    return (
        interior_product(P, w1.wedge(w2))
        - interior_product(P, w1).wedge(w2)
        - w1.wedge(interior_product(P, w2))
    )


def _parity_split(w: DifferentialForm) -> Tuple[DifferentialForm, DifferentialForm]:
    even = DifferentialForm._raw(w.dim, {k: c for k, c in w.terms.items() if not len(k[1]) & 1})
    odd = DifferentialForm._raw(w.dim, {k: c for k, c in w.terms.items() if len(k[1]) & 1})
    return even, odd


def nikonov_bracket(S: PoissonStructure, w1: DifferentialForm, w2: DifferentialForm) -> DifferentialForm:
    """The bracket rebuilt from tilde_pi and d (no Leibniz recursion)."""
    _check_dim(S, w1, w2)
    out = DifferentialForm.zero(S.dim)
    for sgn1, part in zip((1, -1), _parity_split(w1)):
        if not part:
            continue
        # sgn1 = (-1)^|w1| on this homogeneous-parity piece
        body = (
            d(tilde_pi(S, part, w2))
            - tilde_pi(S, d(part), w2)
            - tilde_pi(S, part, d(w2)) * sgn1
        )
        out = out + body * (-sgn1)
    return out


def schouten_square(S: PoissonStructure) -> Polyvector:
    return S.schouten_square


def jacobiator(S: PoissonStructure, w1: DifferentialForm, w2: DifferentialForm,
               w3: DifferentialForm) -> DifferentialForm:
    """Graded Jacobiator with shifted degrees d_i = |w_i| - 1 (homogeneous inputs)."""
    _check_dim(S, w1, w2, w3)
    if not (w1 and w2 and w3):
        return DifferentialForm.zero(S.dim)
    d1, d2, d3 = (w.degree() - 1 for w in (w1, w2, w3))
    br = lambda a, b: koszul_bracket(S, a, b)  # noqa: E731
    s = lambda e: -1 if e & 1 else 1  # noqa: E731
    return (
        br(br(w1, w2), w3) * s(d1 * d3)
        + br(br(w2, w3), w1) * s(d2 * d1)
        + br(br(w3, w1), w2) * s(d3 * d2)
    )


@dataclass(frozen=True)
class BracketReport:
    """Outcome of a randomized identity check."""

    check: str
    seed: int
    trials: int
    passed: bool
    counterexample: Optional[str] = None
    params: Tuple[Tuple[str, object], ...] = ()

    def __post_init__(self):
        if not self.passed and not self.counterexample:
            raise ValueError("a failing report needs a counterexample")

    def as_dict(self) -> dict:
        out = {"check": self.check, "seed": self.seed, "trials": self.trials, "pass": self.passed}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out
