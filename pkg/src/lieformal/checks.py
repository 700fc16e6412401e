"""Seeded random generators and the identity suites behind ``lieformal verify``."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import formality as fm
from .coalgebra import (
    Coderivation,
    Component,
    Letter,
    Word,
    bar_coderivation_defect,
    bar_transform,
    bigraded_commutator,
    coassociativity_defect,
    coderivation_defect,
    component_commutator,
    cup_product,
    extend_component,
    letter_key,
    modified_commutator,
    permutation_extension,
    total_commutator,
)
from .exterior import (
    DifferentialForm,
    Polyvector,
    exterior_derivative,
    lie_derivative,
    schouten_bracket,
    vector_field,
)
from .parsing import render_canonical
from .poisson import (
    BracketReport,
    PoissonStructure,
    anchor,
    bracket_of_words,
    function_bracket,
    jacobiator,
    koszul_bracket,
    koszul_bracket_1,
    nikonov_bracket,
    pairing,
    tilde_pi,
    tilde_pi_contraction,
)
from .symcore import Polynomial

d = exterior_derivative


class RandomSource:
    """All randomness of a run, drawn from one seeded generator."""

    def __init__(self, seed: int = 0, max_poly_degree: int = 2):
        self.rng = random.Random(seed)
        self.max_poly_degree = max_poly_degree

    def coeff(self) -> Fraction:
        c = 0
        while c == 0:
            c = self.rng.randint(-3, 3)
        return Fraction(c)

    def monomial(self, n: int, max_degree: Optional[int] = None) -> Tuple[int, ...]:
        top = self.max_poly_degree if max_degree is None else max_degree
        m = [0] * n
        for _ in range(self.rng.randint(0, top)):
            m[self.rng.randrange(n)] += 1
        return tuple(m)

    def poly(self, n: int, nterms: int = 2) -> Polynomial:
        return Polynomial(n, {self.monomial(n): self.coeff() for _ in range(nterms)})

    def nonzero_poly(self, n: int) -> Polynomial:
        while True:
            p = self.poly(n)
            if p:
                return p

    def indices(self, n: int, k: int) -> Tuple[int, ...]:
        return tuple(sorted(self.rng.sample(range(1, n + 1), k)))

    def form(self, n: int, k: int, nterms: int = 2) -> DifferentialForm:
        w = DifferentialForm.zero(n)
        for _ in range(nterms):
            w = w + DifferentialForm.basis(n, self.indices(n, k), self.poly(n))
        return w

    def closed_form(self, n: int, k: int) -> DifferentialForm:
        """A nonzero closed k-form: a constant, or d of a random (k-1)-form plus a constant form."""
        if k == 0:
            return DifferentialForm.function(Polynomial.constant(n, self.coeff()))
        while True:
            w = d(self.form(n, k - 1))
            if self.rng.random() < 0.3:
                w = w + DifferentialForm.basis(n, self.indices(n, k), self.coeff())
            if w:
                return w

    def vector_field(self, n: int) -> Polyvector:
        return vector_field([self.poly(n) for _ in range(n)])

    def form_degree(self, n: int) -> int:
        # 1-forms carry most of the interesting brackets
        weights = [2, 4, 2, 1, 1][: n + 1]
        return self.rng.choices(range(n + 1), weights=weights)[0]

    def letter(self, n: int) -> Letter:
        return Letter(self.monomial(n), self.indices(n, self.form_degree(n)))

    def letters(self, n: int, k: int) -> Tuple[Letter, ...]:
        return tuple(sorted((self.letter(n) for _ in range(k)), key=letter_key))

    def word(self, n: int, length: int) -> Word:
        """A nonzero basis word of the given length, times a small coefficient."""
        while True:
            w = Word.from_letters([self.letter(n) for _ in range(length)], self.coeff())
            if w:
                return w

    def choice(self, seq):
        return self.rng.choice(seq)

    def randint(self, a: int, b: int) -> int:
        return self.rng.randint(a, b)


def _r(x) -> str:
    return render_canonical(x)


def _fail(what: str, **parts) -> str:
    body = "; ".join(f"{k} = {_r(v) if not isinstance(v, str) else v}" for k, v in parts.items())
    return f"{what}: {body}"


Suite = Callable[[PoissonStructure, RandomSource, int, int], Optional[str]]

# -- poisson suites -----------------------------------------------------------------


def check_jacobi(S, src, trials, max_len):
    n = S.dim
    pattern = [(1, 1, 1), (1, 1, 2), (1, 2, 2), (0, 1, 2), (2, 2, 2)]
    for t in range(trials):
        ks = [min(k, n) for k in pattern[t % len(pattern)]]
        ws = [src.form(n, k) for k in ks]
        J = jacobiator(S, *ws)
        if J:
            return _fail("jacobiator nonzero", w1=ws[0], w2=ws[1], w3=ws[2], jacobiator=J)
    return None


def check_module_rule(S, src, trials, max_len):
    n = S.dim
    for _ in range(trials):
        a, b, f = src.form(n, 1), src.form(n, 1), src.poly(n)
        lhs = koszul_bracket_1(S, a, b * f)
        rhs = koszul_bracket_1(S, a, b) * f + b * lie_derivative(anchor(S, a), DifferentialForm.function(f)).to_polynomial()
        if lhs != rhs:
            return _fail("module rule", alpha=a, beta=b, f=f, difference=lhs - rhs)
        f2, g2 = src.poly(n), src.poly(n)
        lhs = koszul_bracket(S, d(DifferentialForm.function(f2)), d(DifferentialForm.function(g2)))
        rhs = d(DifferentialForm.function(function_bracket(S, f2, g2)))
        if lhs != rhs:
            return _fail("{df,dg} = d{f,g}", f=f2, g=g2, difference=lhs - rhs)
    return None


def check_anchor_hom(S, src, trials, max_len):
    n = S.dim
    for _ in range(trials):
        a, b = src.form(n, 1), src.form(n, 1)
        lhs = schouten_bracket(anchor(S, a), anchor(S, b))
        rhs = anchor(S, koszul_bracket(S, a, b))
        if lhs != rhs:
            return _fail("anchor homomorphism", alpha=a, beta=b, difference=lhs - rhs)
        f = src.poly(n)
        g = src.poly(n)
        X = anchor(S, d(DifferentialForm.function(f)))
        if lie_derivative(X, DifferentialForm.function(g)).to_polynomial() != function_bracket(S, f, g):
            return _fail("anchor of df is {f, .}", f=f, g=g)
    return None


def _letter_split(src: RandomSource, n: int, k: int) -> List[DifferentialForm]:
    return [DifferentialForm.basis(n, (i,), src.poly(n)) for i in src.indices(n, k)]


def check_well_defined(S, src, trials, max_len):
    n = S.dim
    for _ in range(trials):
        A = _letter_split(src, n, src.randint(1, min(2, n)))
        k = min(2, n)
        B = _letter_split(src, n, k)
        f = src.poly(n)
        B1 = [B[0] * f] + B[1:]
        B2 = B[:-1] + [B[-1] * f]
        lhs = bracket_of_words(S, A, B1)
        rhs = bracket_of_words(S, A, B2)
        if lhs != rhs:
            return _fail("bracket depends on the factorization", f=f, difference=lhs - rhs)
        # a function letter in front versus folded into the next letter
        g = DifferentialForm.function(src.nonzero_poly(n))
        lhs = bracket_of_words(S, A, [g] + B)
        rhs = bracket_of_words(S, A, [B[0] * g.to_polynomial()] + B[1:])
        if lhs != rhs:
            return _fail("function letter not absorbed", g=g, difference=lhs - rhs)
    return None


def check_d_derivation(S, src, trials, max_len):
    n = S.dim
    for _ in range(trials):
        k1, k2 = src.randint(0, n), src.randint(0, n)
        a, b = src.form(n, k1), src.form(n, k2)
        lhs = d(koszul_bracket(S, a, b))
        rhs = koszul_bracket(S, d(a), b) + koszul_bracket(S, a, d(b)) * (-1 if (k1 - 1) & 1 else 1)
        if lhs != rhs:
            return _fail("d is not a derivation", w1=a, w2=b, difference=lhs - rhs)
    return None


def check_nikonov(S, src, trials, max_len):
    n = S.dim
    for _ in range(trials):
        k1, k2 = src.randint(0, n), src.randint(0, n)
        a, b = src.form(n, k1), src.form(n, k2)
        K, N = koszul_bracket(S, a, b), nikonov_bracket(S, a, b)
        if K != N:
            return _fail("recursive bracket differs from the tilde-pi formula", w1=a, w2=b, difference=K - N)
        a, b = src.closed_form(n, k1), src.closed_form(n, k2)
        lhs = koszul_bracket(S, a, b)
        rhs = d(tilde_pi(S, a, b)) * (1 if k1 & 1 else -1)
        if lhs != rhs:
            return _fail("bracket of closed forms", w1=a, w2=b, difference=lhs - rhs)
    return None


def check_tilde_pi_dual(S, src, trials, max_len):
    n = S.dim
    for _ in range(trials):
        k1, k2 = src.randint(0, n), src.randint(0, n)
        a, b = src.form(n, k1), src.form(n, k2)
        T, C = tilde_pi(S, a, b), tilde_pi_contraction(S, a, b)
        if T != C:
            return _fail("sum formula differs from contraction", w1=a, w2=b, difference=T - C)
        a, b = src.form(n, 1), src.form(n, 1)
        if tilde_pi(S, a, b).to_polynomial() != pairing(S, a, b):
            return _fail("tilde pi differs from pi on 1-forms", w1=a, w2=b)
    return None


# -- coalgebra suites ----------------------------------------------------------------------


def _component_pool(S: PoissonStructure, src: RandomSource) -> List[Component]:
    n = S.dim
    X, Y = src.vector_field(n), src.vector_field(n)
    i_x = fm.iota_component(X)
    return [
        fm.d_component(),
        i_x,
        fm.lie_component(Y),
        fm.m_component(),
        fm.pi_component(S),
        fm.bracket_component(S),
        cup_product(cup_product(i_x, fm.lie_component(Y)), fm.d_component()),
    ]


def _as_coderivation(f: Component) -> Coderivation:
    return Coderivation(f, bidegree=(f.degree, 1 - f.arity))


def check_coalgebra(S, src, trials, max_len):
    n = S.dim
    for t in range(trials):
        pool = _component_pool(S, src)
        w = src.word(n, 1 + t % max_len)
        left, right = coassociativity_defect(w)
        if left != right:
            return _fail("comultiplication is not coassociative", word=w.render())
        f, g = src.choice(pool), src.choice(pool)
        F, G = _as_coderivation(f), _as_coderivation(g)
        for key in w.terms:
            if extend_component(f, key, n) != permutation_extension(f, key, n):
                return _fail("extension differs from the permutation sum", map=f.name, word=w.render())
        if not coderivation_defect(F, w).is_zero():
            return _fail("coderivation diagram fails", map=f.name, word=w.render())
        if not bar_coderivation_defect(F, w).is_zero():
            return _fail("bar map is not a coderivation of the bar comultiplication", map=f.name, word=w.render())
        lhs = Coderivation(component_commutator(f, g))(w)
        rhs = bigraded_commutator(F, G)(w)
        if lhs != rhs:
            return _fail("commutator of extensions", maps=f"{f.name}, {g.name}", word=w.render(),
                         difference=(lhs - rhs).render())
        lhs = total_commutator(bar_transform(F), bar_transform(G))(w)
        rhs = bar_transform(modified_commutator(F, G))(w)
        if lhs != rhs:
            return _fail("bar does not intertwine the commutators", maps=f"{f.name}, {g.name}",
                         word=w.render())
        # cup product: graded commutativity
        u, v = src.choice(pool[:3]), src.choice(pool[:3])
        L = src.letters(n, 2)
        sign = -1 if (u.degree * v.degree) & 1 else 1
        if cup_product(u, v).on_letters(L) != cup_product(v, u).on_letters(L) * sign:
            return _fail("cup product not graded commutative", maps=f"{u.name}, {v.name}")
    return None


def _derivations(S: PoissonStructure, src: RandomSource) -> List[Component]:
    n = S.dim
    return [fm.d_component(), fm.iota_component(src.vector_field(n)),
            fm.lie_component(src.vector_field(n))]


def cup_leibniz_defect(delta: Component, phi: Component, psi: Component,
                       letters: Tuple[Letter, ...]) -> Word:
    """``[delta, phi u psi] - (-1)^|delta| ([delta, phi] u psi + (-1)^(|delta||phi|) phi u [delta, psi])``."""
    br = component_commutator
    lhs = br(delta, cup_product(phi, psi)).on_letters(letters)
    a = cup_product(br(delta, phi), psi).on_letters(letters)
    b = cup_product(phi, br(delta, psi)).on_letters(letters)
    s1 = -1 if delta.degree & 1 else 1
    s2 = -1 if (delta.degree * phi.degree) & 1 else 1
    return lhs - (a + b * s2) * s1


def cup_four_term_defect(alpha: Component, beta: Component, gamma: Component, delta: Component,
                         letters: Tuple[Letter, ...]) -> Word:
    """``[a u b, X] - ((-1)^(|b||X|) [a, X] u b - a u [b, X])`` with ``X = c u d``."""
    br = component_commutator
    X = cup_product(gamma, delta)
    lhs = br(cup_product(alpha, beta), X).on_letters(letters)
    u = cup_product(alpha, br(beta, X)).on_letters(letters)
    v = cup_product(br(alpha, X), beta).on_letters(letters)
    s = -1 if (beta.degree * X.degree) & 1 else 1
    return lhs - (v * s - u)


def check_cup(S, src, trials, max_len):
    n = S.dim
    for _ in range(trials):
        ders = _derivations(S, src)
        delta, phi, psi = (src.choice(ders) for _ in range(3))
        L = src.letters(n, 2)
        if cup_leibniz_defect(delta, phi, psi, L):
            return _fail("cup Leibniz rule", maps=f"{delta.name}, {phi.name}, {psi.name}")
        a, b, c, e = (src.choice(_derivations(S, src)) for _ in range(4))
        if cup_four_term_defect(a, b, c, e, src.letters(n, 3)):
            return _fail("cup four-term expansion", maps=f"{a.name}, {b.name}, {c.name}, {e.name}")
    return None


def cartan_defects(X: Polyvector, Y: Polyvector, w: Word) -> Dict[str, Word]:
    """Each Cartan identity evaluated on ``w`` as (lhs - rhs)."""
    mk = fm.make_coderivation
    K = fm.OperatorKind
    D = mk(K("D"))
    LX, LY = mk(K("L_X", X)), mk(K("L_X", Y))
    IX, IY = mk(K("I_X", X)), mk(K("I_X", Y))
    XY = schouten_bracket(X, Y)
    br = bigraded_commutator
    return {
        "[L_X,L_Y] = L_[X,Y]": br(LX, LY)(w) - mk(K("L_X", XY))(w),
        "[I_X,I_Y] = 0": br(IX, IY)(w),
        "[L_X,I_Y] = I_[X,Y]": br(LX, IY)(w) - mk(K("I_X", XY))(w),
        "[D,L_X] = 0": br(D, LX)(w),
        "[D,I_X] = L_X": br(D, IX)(w) - LX(w),
        "D^2 = 0": D(D(w)),
    }


def check_cartan(S, src, trials, max_len):
    n = S.dim
    for t in range(trials):
        X, Y = src.vector_field(n), src.vector_field(n)
        w = src.word(n, 1 + t % max_len)
        for name, defect in cartan_defects(X, Y, w).items():
            if defect:
                return _fail(f"Cartan identity {name}", X=X, Y=Y, word=w.render(),
                             difference=defect.render())
    return None


def degree_component() -> Component:
    """``s(a) -> |a| s(a)``, from the degree-counting derivation of forms."""
    return Component(1, lambda a: Word.suspend(a[0].form()) * len(a[0].idx), 0, "N~")


def check_m_central(S, src, trials, max_len):
    n = S.dim
    mk = fm.make_coderivation
    K = fm.OperatorKind
    M = mk(K("M"))
    for t in range(trials):
        X = src.vector_field(n)
        w = src.word(n, 1 + t % max_len)
        others = {"I_X": mk(K("I_X", X)), "L_X": mk(K("L_X", X)), "D": mk(K("D")),
                  "N": Coderivation(degree_component(), bidegree=(0, 0))}
        for name, A in others.items():
            defect = bigraded_commutator(M, A)(w)
            if defect:
                return _fail(f"[M, {name}] nonzero", X=X, word=w.render(), difference=defect.render())
    return None


def check_lemma_pi_d(S, src, trials, max_len):
    n = S.dim
    P, P_cup = fm.pi_component(S), fm.pi_component_cup(S)
    B, B_cup = fm.bracket_component(S), fm.bracket_component_cup(S)
    C = component_commutator(P, fm.d_component())
    for _ in range(trials):
        L = src.letters(n, 2)
        if P.on_letters(L) != P_cup.on_letters(L):
            return _fail("pi~~ from cups differs from tilde pi", letters=" ^ ".join(a.render() for a in L))
        if C.on_letters(L) != B.on_letters(L):
            return _fail("[pi~~, d~] differs from s{}", letters=" ^ ".join(a.render() for a in L),
                         difference=(C.on_letters(L) - B.on_letters(L)).render())
        if B_cup.on_letters(L) != B.on_letters(L):
            return _fail("cup formula for s{} fails", letters=" ^ ".join(a.render() for a in L))
    return None


# -- formality suites ---------------------------------------------------------------------


def check_main_theorem(S, src, trials, max_len):
    n = S.dim
    for t in range(trials):
        w = src.word(n, max_len - t % max_len)
        for variant in ("skewed", "plain"):
            rep = fm.main_theorem_defect(S, w, variant)
            if not rep.zero:
                return f"main theorem ({variant}) defect on {rep.word}: {rep.difference}"
    return None


def check_homotopy(S, src, trials, max_len):
    n = S.dim
    top = min(n, 3)
    for t in range(trials):
        a, b, c = (src.closed_form(n, src.randint(0, top)) for _ in range(3))
        lhs = d(fm.f2(S, a, b))
        if lhs != koszul_bracket(S, a, b):
            return _fail("d f2 differs from the bracket", a=a, b=b)
        F3 = fm.f3(S, a, b, c)
        P3 = fm.pi3(S, a, b, c)
        if d(F3) != P3:
            return _fail("d f3 differs from pi3", a=a, b=b, c=c, difference=d(F3) - P3)
        forms = [a, b, c][: 1 + t % min(3, max_len)]
        rep = fm.formality_defect(S, forms)
        if not rep.zero:
            return f"(D + B) e^-Pi nonzero on {rep.word}: {rep.difference}"
    return None


def check_linfty(S, src, trials, max_len):
    n = S.dim
    fam = fm.dgla_family(S)
    for t in range(trials):
        w = src.word(n, max_len - t % max_len)
        rep = fm.linfty_defect(fam, w)
        if not rep.zero:
            return f"{{l, l}} nonzero on {rep.word}: {rep.difference}"
    return None


SUITES: Dict[str, Suite] = {
    "jacobi": check_jacobi,
    "module-rule": check_module_rule,
    "anchor-hom": check_anchor_hom,
    "d-derivation": check_d_derivation,
    "well-defined": check_well_defined,
    "nikonov": check_nikonov,
    "tilde-pi-dual": check_tilde_pi_dual,
    "coalgebra": check_coalgebra,
    "cup": check_cup,
    "cartan": check_cartan,
    "m-central": check_m_central,
    "lemma-pi-d": check_lemma_pi_d,
    "main-theorem": check_main_theorem,
    "homotopy": check_homotopy,
    "linfty": check_linfty,
}


def run_check(name: str, S: PoissonStructure, trials: int = 50, seed: int = 0,
              max_word_length: int = 3, max_poly_degree: int = 2) -> BracketReport:
    if name not in SUITES:
        raise KeyError(f"unknown check {name!r}")
    if trials < 1:
        raise ValueError("trials must be positive")
    if not 1 <= max_word_length <= 4:
        raise ValueError("max word length must be in 1..4")
    if max_poly_degree < 0:
        raise ValueError("max poly degree must be nonnegative")
    src = RandomSource(seed, max_poly_degree)
    bad = SUITES[name](S, src, trials, max_word_length)
    params = (("max_word_length", max_word_length), ("max_poly_degree", max_poly_degree))
    return BracketReport(name, seed, trials, bad is None, bad, params)
