from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from lieformal import fixture
from lieformal import formality as fm
from lieformal.checks import (
    RandomSource,
    _as_coderivation,
    _component_pool,
    cup_four_term_defect,
    cup_leibniz_defect,
)
from lieformal.coalgebra import (
    Coderivation,
    Component,
    ComponentFamily,
    Letter,
    LinearMap,
    Tensor,
    Word,
    bar_coderivation_defect,
    bar_transform,
    bigraded_commutator,
    coassociativity_defect,
    coderivation_defect,
    component_commutator,
    comultiplication,
    cup_product,
    extend_component,
    modified_commutator,
    normalize_letters,
    permutation_extension,
    swap_sign,
    tensor_apply,
    total_commutator,
    unshuffle_sign,
    word_degree,
)
from lieformal.parsing import parse_form
from lieformal.symcore import DimensionMismatch

N = 3


def letter(idx, mono=(0, 0, 0)):
    return Letter(tuple(mono), tuple(idx))


a1, a2, a3 = letter((1,)), letter((2,)), letter((3,))  # suspended degree 0
b12 = letter((1, 2))  # suspended degree 1
f0 = letter((), (1, 0, 0))  # s(x1), suspended degree -1


def W(*letters, c=1):
    return Word.from_letters(letters, c)


def sign(k):
    return -1 if k & 1 else 1


# -- words -------------------------------------------------------------------------------


def test_transposing_degree_zero_letters_costs_a_sign():
    assert normalize_letters([a2, a1]) == (-1, (a1, a2))
    assert W(a2, a1) == -W(a1, a2)


def test_transposing_odd_letters_is_free():
    c = letter((1, 3))
    assert swap_sign(b12, c) == 1
    assert W(c, b12) == W(b12, c)
    assert normalize_letters([c, b12])[0] == 1


def test_repeated_letters():
    assert W(a1, a1).is_zero()  # even suspended degree
    assert W(f0, f0) != 0  # odd suspended degree
    assert not W(b12, b12).is_zero()


def test_empty_word_rejected():
    with pytest.raises(ValueError):
        Word.from_letters([])


def test_mixed_dimensions_rejected():
    with pytest.raises(DimensionMismatch):
        Word.from_letters([a1, Letter((0, 0), (1,))])


def test_normalization_is_idempotent():
    src = RandomSource(1)
    for _ in range(30):
        letters = [src.letter(N) for _ in range(4)]
        norm = normalize_letters(letters)
        if norm is None:
            continue
        assert normalize_letters(norm[1]) == (1, norm[1])


def test_word_degree_and_suspension():
    w = Word.suspend(parse_form("x1 dx1^dx2 + dx3", 3))
    assert w.lengths() == {1}
    assert w.desuspend() == parse_form("x1 dx1^dx2 + dx3", 3)
    assert word_degree((b12, a1, f0)) == 0


def test_wedge_of_forms():
    w = Word.wedge_of([parse_form("dx1 + dx2", 3), parse_form("dx1", 3)])
    assert w == W(a2, a1)


# -- comultiplication -------------------------------------------------------------------------


def test_comultiplication_of_two_letters():
    t = comultiplication(W(a1, a2))
    assert t.terms == {((a1,), (a2,)): Fraction(1), ((a2,), (a1,)): Fraction(-1)}
    kl = comultiplication(W(a1, a2), kl_sign=True)
    assert kl.terms == {((a1,), (a2,)): Fraction(-1), ((a2,), (a1,)): Fraction(1)}


def test_length_one_is_primitive():
    assert comultiplication(W(b12)).is_zero()


def _scale_by_length(w: Word, fn):
    return Word(w.dim, {k: c * fn(len(k)) for k, c in w.terms.items()})


def _T(n):
    return sign(n * (n - 1) // 2)


def test_kl_signed_comultiplication_is_conjugate_of_standard():
    src = RandomSource(2)
    for L in range(1, 5):
        w = src.word(N, L)
        kl = comultiplication(w, kl_sign=True)
        conj = comultiplication(_scale_by_length(w, _T))
        conj = Tensor(N, {(k1, k2): c * _T(len(k1)) * _T(len(k2)) for (k1, k2), c in conj.terms.items()})
        assert kl == conj


def test_kl_signed_comultiplication_breaks_the_coderivation_rule():
    # with the (-1)^{kl} factor the extension of m is not a coderivation
    M = _as_coderivation(fm.m_component())
    w = W(a1, a2, a3)
    t = comultiplication(w, kl_sign=True)
    lhs = comultiplication(M(w), kl_sign=True)
    rhs = tensor_apply(t, M, None) + tensor_apply(
        t, None, M, lambda k1: sign(word_degree(k1) + len(k1)))
    assert lhs != rhs
    assert coderivation_defect(M, w).is_zero()


@pytest.mark.parametrize("seed", range(5))
def test_coassociativity_length_four(seed):
    w = RandomSource(seed).word(N, 4)
    left, right = coassociativity_defect(w)
    assert left == right and left


def test_unshuffle_sign_counts_transpositions():
    word = (a1, b12, a2)
    # moving a2 to the front passes b12 (degrees 0,1: sign -1) and a1 (sign -1)
    assert unshuffle_sign(word, (2,)) == 1
    assert unshuffle_sign(word, (1,)) == swap_sign(b12, a1)


# -- extension of components -------------------------------------------------------------------


def test_f1_extension_is_a_signed_sum():
    dcomp = fm.d_component()
    x1dx2 = letter((2,), (1, 0, 0))
    w = W(x1dx2, a3)
    # D(s(x1 dx2) ^ s(dx3)) = d~s(x1 dx2) ^ s(dx3); d~ s(dx3) = 0
    expected = Word.suspend(-parse_form("dx1^dx2", 3)).wedge(W(a3))
    assert Coderivation(dcomp, bidegree=(1, 0))(w) == expected


def test_f2_on_length_two_is_f2():
    m = fm.m_component()
    assert Coderivation(m)(W(a1, a2)) == m(W(a1, a2))


def test_f2_on_length_three_matches_permutation_oracle():
    m = fm.m_component()
    for w in (W(a1, a2, a3), W(a1, b12, f0)):
        for key in w.terms:
            assert extend_component(m, key, N) == permutation_extension(m, key, N)


def test_extension_restricts_to_the_component():
    src = RandomSource(3)
    S = fixture("so3")
    for comp in _component_pool(S, src):
        w = src.word(N, comp.arity)
        assert Coderivation(comp)(w).length_part(1) == comp(w)


@pytest.mark.parametrize("seed", range(6))
def test_coderivation_diagram(seed):
    src = RandomSource(seed)
    S = fixture("so3")
    for comp in _component_pool(S, src):
        D = _as_coderivation(comp)
        for L in range(1, 5):
            w = src.word(N, L)
            assert coderivation_defect(D, w).is_zero()
            assert bar_coderivation_defect(D, w).is_zero()


def test_commutator_of_coderivations_is_a_coderivation():
    src = RandomSource(7)
    S = fixture("quadratic")
    pool = _component_pool(S, src)
    for f, g in combinations(pool[:6], 2):
        C = bigraded_commutator(_as_coderivation(f), _as_coderivation(g))
        w = src.word(N, 3)
        assert coderivation_defect(C, w).is_zero()


@pytest.mark.parametrize("seed", range(4))
def test_extension_of_commutator(seed):
    src = RandomSource(seed)
    S = fixture("so3")
    pool = _component_pool(S, src)
    for f in pool:
        for g in pool:
            w = src.word(N, src.randint(1, 4))
            lhs = Coderivation(component_commutator(f, g))(w)
            rhs = bigraded_commutator(_as_coderivation(f), _as_coderivation(g))(w)
            assert lhs == rhs, (f.name, g.name)


def test_identity_component_commutator():
    ident = Component(1, lambda a: Word.from_letters(a), 0, "id")
    m = fm.m_component()
    c = component_commutator(ident, m)
    w = W(a1, b12)
    # id(m(w)) - m(2 w)
    assert c(w) == -m(w)


def test_cartan_pair_on_letters():
    src = RandomSource(9)
    X = src.vector_field(N)
    comm = component_commutator(fm.d_component(), fm.iota_component(X))
    L = fm.lie_component(X)
    for _ in range(10):
        x = src.letters(N, 1)
        assert comm.on_letters(x) == L.on_letters(x)


# -- bar deformation ---------------------------------------------------------------------------


def test_bar_of_degree_zero_map_is_itself():
    src = RandomSource(10)
    LX = _as_coderivation(fm.lie_component(src.vector_field(N)))
    w = src.word(N, 3)
    assert bar_transform(LX)(w) == LX(w)


def test_bar_needs_bidegree():
    with pytest.raises(ValueError):
        bar_transform(LinearMap(lambda k, d: Word(d, {k: Fraction(1)})))


def test_bar_intertwines_commutators():
    src = RandomSource(11)
    S = fixture("so3")
    pool = _component_pool(S, src)
    for f in pool:
        for g in pool:
            F, G = _as_coderivation(f), _as_coderivation(g)
            w = src.word(N, 3)
            lhs = total_commutator(bar_transform(F), bar_transform(G))(w)
            assert lhs == bar_transform(modified_commutator(F, G))(w)


def test_bar_square_of_dgla_family(so3, nonpoisson):
    w = Word.wedge_of([parse_form(f"dx{i}", 3) for i in (1, 2, 3)])
    for S, vanishes in ((so3, True), (nonpoisson, False)):
        Db, Bb = bar_transform(fm.D_op()), bar_transform(fm.B_op(S))
        lbar = Db + Bb
        sq = lbar(lbar(w))
        assert sq.is_zero() == vanishes
        assert fm.linfty_defect(fm.dgla_family(S), w).zero == vanishes


# -- cup product -----------------------------------------------------------------------------


def test_cup_of_contractions_on_two_letters(r2):
    from lieformal.parsing import parse_polyvector

    X, Y = parse_polyvector("@1", 2), parse_polyvector("@2", 2)
    cup = cup_product(fm.iota_component(X), fm.iota_component(Y))
    pair = (Letter((0, 0), (1,)), Letter((0, 0), (2,)))
    # (-1)^|a| s pi~(dx1, dx2) with |a| = 1 and pi~(dx1, dx2) = 1
    assert cup.on_letters(pair) == -Word.suspend(parse_form("1", 2))
    assert fm.pi_component(r2).on_letters(pair) == cup.on_letters(pair)


def test_cup_graded_commutative():
    src = RandomSource(12)
    for _ in range(20):
        X, Y = src.vector_field(N), src.vector_field(N)
        comps = [fm.d_component(), fm.iota_component(X), fm.lie_component(Y), fm.m_component()]
        u, v = src.choice(comps), src.choice(comps)
        L = src.letters(N, u.arity + v.arity)
        s = sign(u.degree * v.degree + (u.arity - 1) * (v.arity - 1))
        assert cup_product(u, v).on_letters(L) == cup_product(v, u).on_letters(L) * s


def test_cup_with_zero():
    zero = Component(1, lambda a: Word.zero(N), 1, "0")
    src = RandomSource(13)
    i_x = fm.iota_component(src.vector_field(N))
    assert cup_product(zero, i_x).on_letters(src.letters(N, 2)).is_zero()


def test_cup_derivation_rule():
    src = RandomSource(14)
    for _ in range(25):
        ders = [fm.d_component(), fm.iota_component(src.vector_field(N)),
                fm.lie_component(src.vector_field(N))]
        delta, phi, psi = (src.choice(ders) for _ in range(3))
        assert cup_leibniz_defect(delta, phi, psi, src.letters(N, 2)).is_zero()


def test_cup_derivation_rule_needs_the_overall_sign():
    # without the (-1)^|delta| prefactor the rule fails for odd delta
    from lieformal.parsing import parse_polyvector

    delta = fm.iota_component(parse_polyvector("x2 @1", 3))
    phi = fm.lie_component(parse_polyvector("x3 @2", 3))
    psi = fm.lie_component(parse_polyvector("x1 @3", 3))
    L = (letter((1, 2), (0, 1, 0)), letter((2, 3), (0, 0, 1)))
    lhs = component_commutator(delta, cup_product(phi, psi)).on_letters(L)
    rhs = (cup_product(component_commutator(delta, phi), psi)
           + cup_product(phi, component_commutator(delta, psi))).on_letters(L)
    assert rhs and lhs == -rhs


def test_cup_four_term_expansion():
    src = RandomSource(15)
    for _ in range(15):
        ders = [fm.d_component(), fm.iota_component(src.vector_field(N)),
                fm.lie_component(src.vector_field(N))]
        comps = [src.choice(ders) for _ in range(4)]
        assert cup_four_term_defect(*comps, src.letters(N, 3)).is_zero()


def test_cup_is_associative_up_to_a_sign():
    src = RandomSource(16)
    for _ in range(15):
        ders = [fm.d_component(), fm.iota_component(src.vector_field(N)),
                fm.lie_component(src.vector_field(N))]
        f, g, h = (src.choice(ders) for _ in range(3))
        L = src.letters(N, 3)
        left = cup_product(cup_product(f, g), h).on_letters(L)
        right = cup_product(f, cup_product(g, h)).on_letters(L)
        assert left == right * -sign(f.degree)


def test_comultiplication_respects_word_normalization():
    # moving f0 to the front passes b12 and a1
    assert W(f0, a1, b12) == W(a1, b12, f0) * swap_sign(f0, a1) * swap_sign(f0, b12)
    t1 = comultiplication(W(a1, b12, f0))
    t2 = comultiplication(W(f0, a1, b12))
    s = swap_sign(f0, a1) * swap_sign(f0, b12)
    assert Tensor(N, {k: c * s for k, c in t1.terms.items()}) == t2
