"""Coderivations on the coalgebra of suspended forms and the formality map.

Letter-level conventions (``|a|`` is the form degree of ``a``)::

    d~ s(a)          = -s(da)
    i~_X s(a)        = -s(i_X a)
    L~_X s(a)        =  s(L_X a)
    m(s(a) ^ s(b))   = (-1)^|a| s(a ^ b)
    pi~~(s(a)^s(b))  = (-1)^|a| s(pi~(a, b))
    s{}(s(a)^s(b))   =  s({a, b})

Bidegrees are ``(change of suspended degree, change of length)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence, Tuple

from .coalgebra import (
    Coderivation,
    Component,
    ComponentFamily,
    LinearMap,
    Word,
    bar_transform,
    component_commutator,
    cup_product,
)
from .exterior import (
    DifferentialForm,
    Polyvector,
    exterior_derivative,
    interior_product,
    lie_derivative,
)
from .poisson import PoissonStructure, koszul_bracket, tilde_pi
from .symcore import DimensionMismatch


class NotClosed(ValueError):
    """A homotopy stage received a form that is not closed."""


# -- letter components ------------------------------------------------------------


def _sgn(e: int) -> int:
    return -1 if e & 1 else 1


def d_component() -> Component:
    return Component(1, lambda a: -Word.suspend(exterior_derivative(a[0].form())), 1, "d~")


def iota_component(X: Polyvector) -> Component:
    _require_vector_field(X)
    return Component(1, lambda a: -Word.suspend(interior_product(X, a[0].form())), -1, "i~")


def lie_component(X: Polyvector) -> Component:
    _require_vector_field(X)
    return Component(1, lambda a: Word.suspend(lie_derivative(X, a[0].form())), 0, "L~")


def m_component() -> Component:
    def fn(ab):
        a, b = ab
        return Word.suspend(a.form().wedge(b.form())) * _sgn(len(a.idx))

    return Component(2, fn, 1, "m")


def pi_component(S: PoissonStructure) -> Component:
    """``pi~~`` evaluated directly from `tilde_pi`."""

    def fn(ab):
        a, b = ab
        return Word.suspend(tilde_pi(S, a.form(), b.form())) * _sgn(len(a.idx))

    return Component(2, fn, -1, "pi~~")


def pi_component_cup(S: PoissonStructure, decomposition=None) -> Component:
    """``pi~~ = sum_k i~_{X_k} u i~_{Y_k}`` for ``pi = sum_k X_k ^ Y_k``."""
    pairs = decomposition if decomposition is not None else S.decomposition
    total: Optional[Component] = None
    for X, Y in pairs:
        term = cup_product(iota_component(X), iota_component(Y))
        total = term if total is None else total + term
    if total is None:
        return Component(2, lambda ab: Word.zero(S.dim), -1, "pi~~")
    total.name = "pi~~"
    return total


def bracket_component(S: PoissonStructure) -> Component:
    def fn(ab):
        a, b = ab
        return Word.suspend(koszul_bracket(S, a.form(), b.form()))

    return Component(2, fn, 0, "s{}")


def bracket_component_cup(S: PoissonStructure) -> Component:
    """``sum_k (i~_{X_k} u L~_{Y_k} - L~_{X_k} u i~_{Y_k})``."""
    total: Optional[Component] = None
    for X, Y in S.decomposition:
        term = cup_product(iota_component(X), lie_component(Y)) - cup_product(
            lie_component(X), iota_component(Y)
        )
        total = term if total is None else total + term
    if total is None:
        return Component(2, lambda ab: Word.zero(S.dim), 0, "s{}")
    total.name = "s{}"
    return total


def _require_vector_field(X: Polyvector) -> None:
    if not isinstance(X, Polyvector) or (X.terms and X.degrees() != {1}):
        raise TypeError("expected a vector field (a 1-vector)")


# -- operators ----------------------------------------------------------------------


@dataclass(frozen=True)
class OperatorKind:
    """Which coderivation to build, with its payload."""

    tag: str
    payload: object = None

    TAGS = ("D", "L_X", "I_X", "M", "Pi", "BracketExt")

    def __post_init__(self):
        if self.tag not in self.TAGS:
            raise ValueError(f"unknown operator {self.tag!r}; expected one of {self.TAGS}")
        needs = {"L_X": Polyvector, "I_X": Polyvector, "Pi": PoissonStructure,
                 "BracketExt": PoissonStructure}
        if self.tag in needs and not isinstance(self.payload, needs[self.tag]):
            raise TypeError(f"{self.tag} needs a {needs[self.tag].__name__} payload")


def make_coderivation(kind: OperatorKind, dim: Optional[int] = None) -> Coderivation:
    """Extend the letter component named by ``kind`` to a coderivation."""
    payload = kind.payload
    if dim is not None and payload is not None and payload.dim != dim:
        raise DimensionMismatch(f"payload of dimension {payload.dim}, session dimension {dim}")
    if kind.tag == "D":
        comp, bd = d_component(), (1, 0)
    elif kind.tag == "L_X":
        comp, bd = lie_component(payload), (0, 0)
    elif kind.tag == "I_X":
        comp, bd = iota_component(payload), (-1, 0)
    elif kind.tag == "M":
        comp, bd = m_component(), (1, -1)
    elif kind.tag == "Pi":
        comp, bd = pi_component(payload), (-1, -1)
    else:
        comp, bd = bracket_component(payload), (0, -1)
    return Coderivation(ComponentFamily([comp]), name=kind.tag, bidegree=bd)


def D_op() -> Coderivation:
    return make_coderivation(OperatorKind("D"))


def Pi_op(S: PoissonStructure) -> Coderivation:
    return make_coderivation(OperatorKind("Pi", S))


def B_op(S: PoissonStructure) -> Coderivation:
    return make_coderivation(OperatorKind("BracketExt", S))


def exp_nilpotent(C: LinearMap, w: Word, sign: int = 1) -> Word:
    """``e^(sign C) w`` for a map that strictly lowers word length."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if C.bidegree is None or C.bidegree[1] >= 0:
        raise ValueError("exp_nilpotent needs a map that strictly lowers word length")
    out = w
    term = w
    j = 0
    while term:
        j += 1
        term = C(term)
        out = out + term * Fraction(sign ** j, factorial(j))
    return out


def exp_map(C: LinearMap, sign: int = 1) -> LinearMap:
    """``e^(sign C)`` as a linear map (bidegree undefined: it mixes lengths)."""
    if C.bidegree is None or C.bidegree[1] >= 0:
        raise ValueError("exp_map needs a map that strictly lowers word length")
    return LinearMap(lambda key, dim: exp_nilpotent(C, Word(dim, {key: Fraction(1)}), sign),
                     None, f"exp({'' if sign > 0 else '-'}{C.name})")


# -- defect reports ---------------------------------------------------------------------


@dataclass(frozen=True)
class DefectReport:
    word: str
    lhs: str
    rhs: str
    difference: str
    zero: bool

    @classmethod
    def build(cls, w: Word, lhs: Word, rhs: Word) -> "DefectReport":
        diff = lhs - rhs
        return cls(w.render(), lhs.render(), rhs.render(), diff.render(), diff.is_zero())

    def as_dict(self) -> dict:
        return {"word": self.word, "lhs": self.lhs, "rhs": self.rhs,
                "difference": self.difference, "zero": self.zero}


def _check_word(S: PoissonStructure, w: Word) -> None:
    if w.dim != S.dim:
        raise DimensionMismatch(f"word of dimension {w.dim}, structure of dimension {S.dim}")


def main_theorem_sides(S: PoissonStructure, w: Word, variant: str = "skewed") -> Tuple[Word, Word]:
    """Both sides of the conjugation identity on ``w``.

    ``plain``:  ``e^Pi D e^Pi``  against ``D + B``;
    ``conjugate``: ``e^Pi D e^-Pi`` against ``D + B``;
    ``skewed``: ``e^barPi barD e^-barPi`` against ``barD + barB``.
    """
    _check_word(S, w)
    D, Pi, B = D_op(), Pi_op(S), B_op(S)
    if variant == "plain":
        lhs = exp_nilpotent(Pi, D(exp_nilpotent(Pi, w, 1)), 1)
        rhs = D(w) + B(w)
    elif variant == "conjugate":
        lhs = exp_nilpotent(Pi, D(exp_nilpotent(Pi, w, -1)), 1)
        rhs = D(w) + B(w)
    elif variant == "skewed":
        Pib, Db, Bb = bar_transform(Pi), bar_transform(D), bar_transform(B)
        lhs = exp_nilpotent(Pib, Db(exp_nilpotent(Pib, w, -1)), 1)
        rhs = Db(w) + Bb(w)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return lhs, rhs


def main_theorem_defect(S: PoissonStructure, w: Word, variant: str = "skewed") -> DefectReport:
    lhs, rhs = main_theorem_sides(S, w, variant)
    return DefectReport.build(w, lhs, rhs)


def formality_defect(S: PoissonStructure, closed_forms: Sequence[DifferentialForm]) -> DefectReport:
    """``(D + B) e^-Pi`` on ``s(a_1) ^ ... ^ s(a_n)`` for closed ``a_i``."""
    _require_closed(closed_forms)
    w = Word.wedge_of(closed_forms)
    _check_word(S, w)
    lhs = (D_op() + B_op(S))(exp_nilpotent(Pi_op(S), w, -1))
    return DefectReport.build(w, lhs, Word.zero(S.dim))


def linfty_defect(family: ComponentFamily, w: Word) -> DefectReport:
    """``{l, l}(w)`` for ``l`` extended from ``family`` (zero iff an L-infinity structure).

    ``{l, l}`` is the sum over ordered component pairs of the extended
    ``{phi, psi} = (-1)^(|phi||psi|') [phi, psi]``.
    """
    comps = list(family)
    out = Word.zero(w.dim)
    for phi in comps:
        for psi in comps:
            c = component_commutator(phi, psi).scaled(_sgn(phi.degree * (1 - psi.arity)))
            out = out + Coderivation(ComponentFamily([c]))(w)
    return DefectReport.build(w, out, Word.zero(w.dim))


def dgla_family(S: PoissonStructure) -> ComponentFamily:
    return ComponentFamily([d_component(), bracket_component(S)])


# -- homotopy stages ---------------------------------------------------------------------


def _require_closed(forms: Sequence[DifferentialForm]) -> None:
    for k, a in enumerate(forms, start=1):
        da = exterior_derivative(a)
        if da:
            from .parsing import render_canonical

            raise NotClosed(f"argument {k} is not closed: its exterior derivative is {render_canonical(da)}")


def _homogeneous_degree(a: DifferentialForm) -> int:
    degs = a.degrees()
    if len(degs) > 1:
        raise ValueError("homotopy stages take homogeneous forms")
    return degs.pop() if degs else 0


def _stage_from_exp(S: PoissonStructure, forms: Sequence[DifferentialForm]) -> DifferentialForm:
    w = Word.wedge_of(forms)
    return exp_nilpotent(Pi_op(S), w, -1).length_part(1).desuspend() if w else DifferentialForm.zero(S.dim)


def f2(S: PoissonStructure, a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    """Second stage: ``(-1)^(|a|+1) pi~(a, b)`` on closed forms."""
    _require_closed([a, b])
    p = _homogeneous_degree(a)
    return tilde_pi(S, a, b) * _sgn(p + 1)


def f3(S: PoissonStructure, a: DifferentialForm, b: DifferentialForm, c: DifferentialForm) -> DifferentialForm:
    """Third stage, the length-1 part of ``e^-Pi (s a ^ s b ^ s c)`` desuspended."""
    _require_closed([a, b, c])
    for x in (a, b, c):
        _homogeneous_degree(x)
    return _stage_from_exp(S, [a, b, c])


def f3_unsigned(S: PoissonStructure, a: DifferentialForm, b: DifferentialForm,
               c: DifferentialForm) -> DifferentialForm:
    """``sum over sigma of 1/2 pi~(pi~(x_s1, x_s2), x_s3)`` with no signs at all."""
    from itertools import permutations

    xs = (a, b, c)
    out = DifferentialForm.zero(S.dim)
    for p in permutations(range(3)):
        out = out + tilde_pi(S, tilde_pi(S, xs[p[0]], xs[p[1]]), xs[p[2]])
    return out * Fraction(1, 2)


def f3_symmetrized(S: PoissonStructure, a: DifferentialForm, b: DifferentialForm,
                   c: DifferentialForm) -> DifferentialForm:
    """``sum over sigma of 1/2 pi~(pi~(x_s1, x_s2), x_s3)`` with Koszul signs.

    Each ordering is weighted by the sign of moving the suspended arguments
    into place and by the suspension signs of the two nested ``pi~``.
    """
    from itertools import permutations

    forms = [a, b, c]
    degs = [_homogeneous_degree(x) for x in forms]
    out = DifferentialForm.zero(S.dim)
    for perm in permutations(range(3)):
        sign = 1
        order = list(perm)
        for i in range(3):
            for j in range(2 - i):
                if order[j] > order[j + 1]:
                    # transposition of suspended letters
                    sign *= _sgn((degs[order[j]] - 1) * (degs[order[j + 1]] - 1) + 1)
                    order[j], order[j + 1] = order[j + 1], order[j]
        x, y, z = (forms[i] for i in perm)
        px = degs[perm[0]]
        inner = tilde_pi(S, x, y)
        pin = px + degs[perm[1]] - 2
        term = tilde_pi(S, inner, z) * (sign * _sgn(px + pin))
        out = out + term
    return out * Fraction(1, 4)


def pi3(S: PoissonStructure, a: DifferentialForm, b: DifferentialForm, c: DifferentialForm,
        signed: bool = True) -> DifferentialForm:
    """The trilinear map whose coboundary is ``f3`` on closed forms.

    With ``p, q, r`` the form degrees::

        pi3 = -(-1)^p {pi~(a,b), c} - (-1)^(qr+q+r+p) {pi~(a,c), b}
              - (-1)^((p-1)(q+r)+q) {pi~(b,c), a}

    ``signed=False`` evaluates the same three terms with the bare signs
    ``1, (-1)^(qr), (-1)^(p(q+r))`` instead.
    """
    p, q, r = (_homogeneous_degree(x) for x in (a, b, c))
    t_ab = koszul_bracket(S, tilde_pi(S, a, b), c)
    t_ac = koszul_bracket(S, tilde_pi(S, a, c), b)
    t_bc = koszul_bracket(S, tilde_pi(S, b, c), a)
    if not signed:
        return t_ab + t_ac * _sgn(q * r) + t_bc * _sgn(p * (q + r))
    return -(t_ab * _sgn(p) + t_ac * _sgn(q * r + q + r + p) + t_bc * _sgn((p - 1) * (q + r) + q))


def pi3_from_exp(S: PoissonStructure, a: DifferentialForm, b: DifferentialForm,
                 c: DifferentialForm) -> DifferentialForm:
    """``B`` on the length-2 part of ``e^-Pi (s a ^ s b ^ s c)``, desuspended."""
    two = exp_nilpotent(Pi_op(S), Word.wedge_of([a, b, c]), -1).length_part(2)
    return B_op(S)(two).desuspend()


def homotopy_stage(S: PoissonStructure, stage: str, forms: Sequence[DifferentialForm]) -> DifferentialForm:
    if stage == "f2":
        return f2(S, *forms)
    if stage == "f3":
        return f3(S, *forms)
    if stage == "pi3":
        return pi3(S, *forms)
    raise ValueError(f"unknown stage {stage!r}")
