"""The free cocommutative coalgebra on suspended differential forms.

Elements are finite sums of wedge words ``s(a_1) ^ ... ^ s(a_n)`` whose
letters are suspended basis forms ``s(x^m dx_I)`` of degree ``|I| - 1``.
Transposing two adjacent letters costs ``(-1)^(|a||b| + 1)``; this one rule
(`swap_sign`) is the sign oracle for normalization, comultiplication,
coderivation extension, commutators and the cup product.

Maps carry a bidegree ``(first, second)``: the change of the total
suspended degree and the change of word length.  Only parities enter signs.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Callable, Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from .exterior import DifferentialForm
from .symcore import DimensionMismatch, Monomial, Scalar, add_into, as_fraction, grlex_key


class Letter(NamedTuple):
    """A suspended basis form ``s(x^mono dx_idx)``."""

    mono: Monomial
    idx: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.idx) - 1

    def form(self) -> DifferentialForm:
        return DifferentialForm._raw(len(self.mono), {(self.mono, self.idx): Fraction(1)})

    def render(self) -> str:
        from .parsing import render_letter

        return render_letter(self.mono, self.idx)


def letter_key(a: Letter):
    return (len(a.idx), a.idx, grlex_key(a.mono))


def swap_sign(a: Letter, b: Letter) -> int:
    """Sign of exchanging two adjacent letters: ``(-1)^(|a||b| + 1)``."""
    return -1 if ((len(a.idx) - 1) * (len(b.idx) - 1) + 1) & 1 else 1


def _sign(e: int) -> int:
    return -1 if e & 1 else 1


def normalize_letters(letters: Sequence[Letter]) -> Optional[Tuple[int, Tuple[Letter, ...]]]:
    """Sort letters canonically; return ``(sign, word)`` or None if the word vanishes."""
    word = list(letters)
    sign = 1
    for i in range(1, len(word)):
        j = i
        while j > 0 and letter_key(word[j - 1]) > letter_key(word[j]):
            sign *= swap_sign(word[j - 1], word[j])
            word[j - 1], word[j] = word[j], word[j - 1]
            j -= 1
    for a, b in zip(word, word[1:]):
        # a ^ a = -(-1)^{|a||a|} a ^ a vanishes for letters of even degree
        if a == b and not (len(a.idx) - 1) & 1:
            return None
    return sign, tuple(word)


def unshuffle_sign(word: Sequence[Letter], chosen: Sequence[int]) -> int:
    """Sign of moving ``word[chosen]`` (in order) to the front."""
    chosen_set = set(chosen)
    sign = 1
    for i in chosen:
        for j in range(i):
            if j not in chosen_set:
                sign *= swap_sign(word[i], word[j])
    return sign


WordKey = Tuple[Letter, ...]


class Word:
    """A finite sum of canonically ordered wedge words with rational coefficients."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Optional[Dict[WordKey, Fraction]] = None):
        self.dim = dim
        self.terms: Dict[WordKey, Fraction] = terms if terms is not None else {}

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> "Word":
        return cls(dim, {})

    @classmethod
    def from_letters(cls, letters: Sequence[Letter], coeff: Scalar = 1, dim: Optional[int] = None) -> "Word":
        """``coeff * a_1 ^ ... ^ a_n`` in canonical form; empty words are rejected."""
        letters = list(letters)
        if not letters:
            raise ValueError("the coalgebra has no unit: a word needs at least one letter")
        dims = {len(a.mono) for a in letters}
        if len(dims) > 1 or (dim is not None and dims != {dim}):
            raise DimensionMismatch("letters of different dimensions")
        dim = dims.pop()
        norm = normalize_letters(letters)
        c = as_fraction(coeff)
        if norm is None or not c:
            return cls.zero(dim)
        sign, key = norm
        return cls(dim, {key: sign * c})

    @classmethod
    def suspend(cls, w: DifferentialForm) -> "Word":
        """``s(w)`` as a sum of length-1 words."""
        return cls(w.dim, {(Letter(m, idx),): c for (m, idx), c in w.terms.items()})

    @classmethod
    def wedge_of(cls, forms: Sequence[DifferentialForm]) -> "Word":
        """``s(w_1) ^ ... ^ s(w_n)``."""
        forms = list(forms)
        if not forms:
            raise ValueError("need at least one form")
        out = cls.suspend(forms[0])
        for w in forms[1:]:
            out = out.wedge(cls.suspend(w))
        return out

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def items(self) -> Iterator[Tuple[WordKey, Fraction]]:
        return iter(self.terms.items())

    def lengths(self) -> set:
        return {len(k) for k in self.terms}

    def length_part(self, n: int) -> "Word":
        return Word(self.dim, {k: c for k, c in self.terms.items() if len(k) == n})

    def desuspend(self) -> DifferentialForm:
        """The form ``w`` with ``s(w)`` equal to this sum of single letters."""
        out: Dict = {}
        for key, c in self.terms.items():
            if len(key) != 1:
                raise ValueError("desuspend needs a sum of length-1 words")
            a = key[0]
            add_into(out, (a.mono, a.idx), c)
        return DifferentialForm._raw(self.dim, out)

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, Word):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    __hash__ = None

    def __repr__(self) -> str:
        return f"Word({self.render()!r})"

    def render(self) -> str:
        from .parsing import join_terms, render_scaled

        pieces = [
            render_scaled(c, " ^ ".join(a.render() for a in key))
            for key, c in sorted(self.terms.items(), key=lambda t: _word_sort_key(t[0]))
        ]
        return join_terms(pieces)

    # -- linear structure ----------------------------------------------------

    def _check(self, other: "Word") -> None:
        if not isinstance(other, Word):
            raise TypeError(f"expected Word, got {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionMismatch(f"dimension {self.dim} vs {other.dim}")

    def __add__(self, other: "Word") -> "Word":
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            add_into(out, k, c)
        return Word(self.dim, out)

    __radd__ = __add__

    def __neg__(self) -> "Word":
        return Word(self.dim, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "Word") -> "Word":
        return self + (-other)

    def __mul__(self, c) -> "Word":
        if not isinstance(c, (int, Fraction)):
            return NotImplemented
        c = as_fraction(c)
        if not c:
            return Word.zero(self.dim)
        return Word(self.dim, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def wedge(self, other: "Word") -> "Word":
        self._check(other)
        out: Dict[WordKey, Fraction] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                _accumulate(out, k1 + k2, c1 * c2)
        return Word(self.dim, out)


def _word_sort_key(key: WordKey):
    return (len(key), [letter_key(a) for a in key])


def _accumulate(out: Dict[WordKey, Fraction], letters: Sequence[Letter], c: Fraction) -> None:
    norm = normalize_letters(letters)
    if norm is not None:
        add_into(out, norm[1], norm[0] * c)


def word_degree(key: WordKey) -> int:
    """First degree of a basis word: the sum of suspended letter degrees."""
    return sum(len(a.idx) - 1 for a in key)


# -- tensors and comultiplication ----------------------------------------------


class Tensor:
    """A finite sum of ``word (x) word`` with rational coefficients."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Optional[Dict[Tuple[WordKey, WordKey], Fraction]] = None):
        self.dim = dim
        self.terms = terms if terms is not None else {}

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    __hash__ = None

    def __add__(self, other: "Tensor") -> "Tensor":
        out = dict(self.terms)
        for k, c in other.terms.items():
            add_into(out, k, c)
        return Tensor(self.dim, out)

    def __neg__(self) -> "Tensor":
        return Tensor(self.dim, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "Tensor") -> "Tensor":
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.terms

    def render(self) -> str:
        from .parsing import join_terms, render_scaled

        def side(key):
            return " ^ ".join(a.render() for a in key)

        pieces = [
            render_scaled(c, f"{side(k1)} (x) {side(k2)}")
            for (k1, k2), c in sorted(
                self.terms.items(), key=lambda t: (_word_sort_key(t[0][0]), _word_sort_key(t[0][1]))
            )
        ]
        return join_terms(pieces)

    def __repr__(self) -> str:
        return f"Tensor({self.render()!r})"


def comultiplication(w: Word, kl_sign: bool = False) -> Tensor:
    """``sum over (k,l)-unshuffles of  sign * a_I (x) a_J`` with k, l >= 1.

    Length-1 words are primitive (the coalgebra has no counit).  With
    ``kl_sign=True`` every (k, l) block is further multiplied by
    ``(-1)^(kl)``; that variant is isomorphic to the default one through
    ``T = (-1)^(n(n-1)/2)`` on length-n words, but only the default one
    makes extended component maps coderivations.
    """
    out: Dict[Tuple[WordKey, WordKey], Fraction] = {}
    for key, c in w.terms.items():
        n = len(key)
        for k in range(1, n):
            extra = _sign(k * (n - k)) if kl_sign else 1
            for I in combinations(range(n), k):
                J = [j for j in range(n) if j not in I]
                s = unshuffle_sign(key, I) * extra
                left = tuple(key[i] for i in I)
                right = tuple(key[j] for j in J)
                add_into(out, (left, right), s * c)
    return Tensor(w.dim, out)


def tensor_apply(tensor: Tensor, left: Optional["LinearMap"], right: Optional["LinearMap"],
                 sign_fn: Optional[Callable[[WordKey], int]] = None) -> Tensor:
    """``(left (x) 1) t`` or ``(1 (x) right) t``, with an optional sign per left factor."""
    out: Dict[Tuple[WordKey, WordKey], Fraction] = {}
    dim = tensor.dim
    for (k1, k2), c in tensor.terms.items():
        s = sign_fn(k1) if sign_fn else 1
        if left is not None:
            img = left(Word(dim, {k1: Fraction(1)}))
            for k, v in img.terms.items():
                add_into(out, (k, k2), s * c * v)
        if right is not None:
            img = right(Word(dim, {k2: Fraction(1)}))
            for k, v in img.terms.items():
                add_into(out, (k1, k), s * c * v)
    return Tensor(dim, out)


def tensor_map(tensor: Tensor, f: "LinearMap", g: "LinearMap") -> Tensor:
    """``(f (x) g) t`` for maps of even total parity (no Koszul sign)."""
    out: Dict[Tuple[WordKey, WordKey], Fraction] = {}
    dim = tensor.dim
    for (k1, k2), c in tensor.terms.items():
        a = f(Word(dim, {k1: Fraction(1)}))
        b = g(Word(dim, {k2: Fraction(1)}))
        for ka, va in a.terms.items():
            for kb, vb in b.terms.items():
                add_into(out, (ka, kb), c * va * vb)
    return Tensor(dim, out)


# -- linear maps -------------------------------------------------------------------

Bidegree = Tuple[int, int]


class LinearMap:
    """A linear endomorphism of the coalgebra, evaluated basis word by basis word."""

    def __init__(self, fn: Callable[[WordKey, int], Word], bidegree: Optional[Bidegree] = None,
                 name: str = ""):
        self._fn = fn
        self.bidegree = bidegree
        self.name = name

    def __call__(self, w: Word) -> Word:
        out: Dict[WordKey, Fraction] = {}
        for key, c in w.terms.items():
            for k, v in self._fn(key, w.dim).terms.items():
                add_into(out, k, c * v)
        return Word(w.dim, out)

    def apply_key(self, key: WordKey, dim: int) -> Word:
        return self._fn(key, dim)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name or '?'} bidegree={self.bidegree}>"

    def _require_bidegree(self) -> Bidegree:
        if self.bidegree is None:
            raise ValueError(f"map {self.name or '?'} has no declared bidegree")
        return self.bidegree

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        bd = None
        if self.bidegree is not None and other.bidegree is not None:
            bd = (self.bidegree[0] + other.bidegree[0], self.bidegree[1] + other.bidegree[1])
        return LinearMap(lambda key, dim: self(other.apply_key(key, dim)), bd,
                         f"({self.name} o {other.name})")

    def __add__(self, other: "LinearMap") -> "LinearMap":
        bd = self.bidegree if self.bidegree == other.bidegree else None
        return LinearMap(lambda key, dim: self.apply_key(key, dim) + other.apply_key(key, dim),
                         bd, f"({self.name} + {other.name})")

    def scaled(self, c: Scalar) -> "LinearMap":
        c = as_fraction(c)
        return LinearMap(lambda key, dim: self.apply_key(key, dim) * c, self.bidegree,
                         f"{c}*{self.name}")

    def __neg__(self) -> "LinearMap":
        return self.scaled(-1)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return self + (-other)


def identity_map() -> LinearMap:
    return LinearMap(lambda key, dim: Word(dim, {key: Fraction(1)}), (0, 0), "1")


def bigraded_commutator(A: LinearMap, B: LinearMap) -> LinearMap:
    """``[A, B] = AB - (-1)^(|A||B| + |A|'|B|') BA``."""
    a, ap = A._require_bidegree()
    b, bp = B._require_bidegree()
    s = _sign(a * b + ap * bp)
    out = A @ B - (B @ A).scaled(s)
    out.name = f"[{A.name}, {B.name}]"
    return out


def modified_commutator(A: LinearMap, B: LinearMap) -> LinearMap:
    """``{A, B} = (-1)^(|A||B|') [A, B]``: graded in the total degree."""
    a, _ = A._require_bidegree()
    _, bp = B._require_bidegree()
    out = bigraded_commutator(A, B).scaled(_sign(a * bp))
    out.name = f"{{{A.name}, {B.name}}}"
    return out


def total_commutator(A: LinearMap, B: LinearMap) -> LinearMap:
    """``[A, B]_tot = AB - (-1)^(t_A t_B) BA`` with t the total degree."""
    a, ap = A._require_bidegree()
    b, bp = B._require_bidegree()
    out = A @ B - (B @ A).scaled(_sign((a + ap) * (b + bp)))
    out.name = f"[{A.name}, {B.name}]_tot"
    return out


def bar_transform(D: LinearMap) -> LinearMap:
    """The skewed map ``bar D(w) = (-1)^(|D| * length(w)) D(w)``."""
    first, second = D._require_bidegree()
    parity = first & 1

    def fn(key, dim):
        img = D.apply_key(key, dim)
        return img * -1 if parity and len(key) & 1 else img

    return LinearMap(fn, (first, second), f"bar({D.name})")


def bar_comultiplication(w: Word) -> Tensor:
    """``bar nabla(w) = (-1)^(|w_(1)| |w_(2)|') w_(1) (x) w_(2)``."""
    t = comultiplication(w)
    return Tensor(t.dim, {
        (k1, k2): c * _sign(word_degree(k1) * len(k2)) for (k1, k2), c in t.terms.items()
    })


# -- components and coderivations ----------------------------------------------------


class Component:
    """A multilinear map ``Lambda^k -> Lambda^1`` given on basis letters.

    ``fn`` takes a tuple of k letters (in canonical order) and returns a Word
    (a sum of single letters).  ``degree`` is the change of suspended degree.
    """

    def __init__(self, arity: int, fn: Callable[[Tuple[Letter, ...]], Word], degree: int,
                 name: str = "", cache: bool = True):
        if arity < 1:
            raise ValueError("arity must be at least 1")
        self.arity = arity
        self.degree = degree
        self.name = name
        self._fn = lru_cache(maxsize=None)(fn) if cache else fn

    def on_letters(self, letters: Tuple[Letter, ...]) -> Word:
        return self._fn(tuple(letters))

    def __call__(self, w: Word) -> Word:
        """Evaluate on the length-``arity`` part of ``w`` (other lengths give 0)."""
        out: Dict[WordKey, Fraction] = {}
        for key, c in w.terms.items():
            if len(key) != self.arity:
                continue
            for k, v in self._fn(key).terms.items():
                add_into(out, k, c * v)
        return Word(w.dim, out)

    def __repr__(self) -> str:
        return f"<Component {self.name or '?'} arity={self.arity} degree={self.degree}>"

    def scaled(self, c: Scalar) -> "Component":
        c = as_fraction(c)
        return Component(self.arity, lambda a: self._fn(a) * c, self.degree, f"{c}*{self.name}")

    def __add__(self, other: "Component") -> "Component":
        if other.arity != self.arity or other.degree != self.degree:
            raise ValueError("can only add components of equal arity and degree")
        return Component(self.arity, lambda a: self._fn(a) + other._fn(a), self.degree,
                         f"({self.name} + {other.name})")

    def __neg__(self) -> "Component":
        return self.scaled(-1)

    def __sub__(self, other: "Component") -> "Component":
        return self + (-other)


class ComponentFamily:
    """Components ``f_k`` indexed by arity."""

    def __init__(self, components: Iterable[Component]):
        self.components: Dict[int, List[Component]] = {}
        for c in components:
            self.components.setdefault(c.arity, []).append(c)

    def __iter__(self) -> Iterator[Component]:
        for k in sorted(self.components):
            yield from self.components[k]

    def bidegree(self) -> Optional[Bidegree]:
        comps = list(self)
        if len(comps) == 1:
            c = comps[0]
            return (c.degree, 1 - c.arity)
        return None


def extend_component(f: Component, key: WordKey, dim: int) -> Word:
    """The coderivation extending ``f`` evaluated on one basis word.

    ``F(a_1^..^a_n) = sum over k-element I of  sign(I) f(a_I) ^ a_J``; the
    k = n term returns ``f`` itself on ``Lambda^k``.
    """
    n = len(key)
    k = f.arity
    out: Dict[WordKey, Fraction] = {}
    if k > n:
        return Word(dim, out)
    for I in combinations(range(n), k):
        chosen = tuple(key[i] for i in I)
        img = f.on_letters(chosen)
        if not img:
            continue
        s = unshuffle_sign(key, I)
        rest = tuple(key[j] for j in range(n) if j not in I)
        for head, c in img.terms.items():
            _accumulate(out, head + rest, s * c)
    return Word(dim, out)


class Coderivation(LinearMap):
    """The coderivation determined by a family of components."""

    def __init__(self, family, name: str = "", bidegree: Optional[Bidegree] = None):
        if isinstance(family, Component):
            family = ComponentFamily([family])
        self.family = family
        comps = list(family)

        def fn(key, dim):
            out = Word.zero(dim)
            for f in comps:
                out = out + extend_component(f, key, dim)
            return out

        super().__init__(fn, bidegree if bidegree is not None else family.bidegree(),
                         name or "+".join(c.name for c in comps))


def extend_coderivation(family) -> Coderivation:
    return Coderivation(family)


def component_commutator(phi: Component, psi: Component) -> Component:
    """The component whose extension is ``[Phi, Psi]`` for single-component families.

    ``[phi, psi](w) = sum_I sign phi(psi(a_I) ^ a_J)
    - (-1)^e sum_I sign psi(phi(a_I) ^ a_J)``, ``e = |phi||psi| + (k-1)(l-1)``.
    """
    k, l = phi.arity, psi.arity
    eps = _sign(phi.degree * psi.degree + (k - 1) * (l - 1))

    def inner(outer: Component, inner_c: Component, letters: Tuple[Letter, ...], dim: int) -> Word:
        out: Dict[WordKey, Fraction] = {}
        n = len(letters)
        for I in combinations(range(n), inner_c.arity):
            chosen = tuple(letters[i] for i in I)
            img = inner_c.on_letters(chosen)
            if not img:
                continue
            s = unshuffle_sign(letters, I)
            rest = tuple(letters[j] for j in range(n) if j not in I)
            for head, c in img.terms.items():
                norm = normalize_letters(head + rest)
                if norm is None:
                    continue
                sgn, word = norm
                for kk, v in outer.on_letters(word).terms.items():
                    add_into(out, kk, s * sgn * c * v)
        return Word(dim, out)

    def fn(letters):
        dim = len(letters[0].mono)
        return inner(phi, psi, letters, dim) - inner(psi, phi, letters, dim) * eps

    return Component(k + l - 1, fn, phi.degree + psi.degree, f"[{phi.name}, {psi.name}]")


def product_of_letters(a: Word, b: Word) -> Word:
    """``s(alpha) . s(beta) = s(alpha ^ beta)`` on sums of single letters."""
    return Word.suspend(a.desuspend().wedge(b.desuspend()))


def cup_product(phi: Component, psi: Component) -> Component:
    """``phi cup psi`` on ``Lambda^(k+l)``.

    Over (k, l)-unshuffles with sign
    ``sign(I) (-1)^((|psi|+1) sum_I |a_i| + (k-1)(l-1) + |phi|)``.
    """
    k, l = phi.arity, psi.arity
    const = (k - 1) * (l - 1) + phi.degree

    def fn(letters):
        dim = len(letters[0].mono)
        n = len(letters)
        out = Word.zero(dim)
        for I in combinations(range(n), k):
            chosen = tuple(letters[i] for i in I)
            a = phi.on_letters(chosen)
            if not a:
                continue
            J = [j for j in range(n) if j not in I]
            b = psi.on_letters(tuple(letters[j] for j in J))
            if not b:
                continue
            e = (psi.degree + 1) * sum(x.degree for x in chosen) + const
            s = unshuffle_sign(letters, I) * _sign(e)
            out = out + product_of_letters(a, b) * s
        return out

    return Component(k + l, fn, phi.degree + psi.degree + 1, f"({phi.name} u {psi.name})")


def coderivation_defect(D: LinearMap, w: Word) -> Tensor:
    """``nabla D w - (D (x) 1) nabla w - (-1)^(|D||w1| + |D|'|w1|') (1 (x) D) nabla w``."""
    first, second = D._require_bidegree()
    t = comultiplication(w)
    lhs = comultiplication(D(w))
    rhs = tensor_apply(t, D, None) + tensor_apply(
        t, None, D, lambda k1: _sign(first * word_degree(k1) + second * len(k1))
    )
    return lhs - rhs


def bar_coderivation_defect(D: LinearMap, w: Word) -> Tensor:
    """The graded co-Leibniz rule of ``bar D`` for ``bar nabla`` (total-degree signs)."""
    first, second = D._require_bidegree()
    Db = bar_transform(D)
    t = bar_comultiplication(w)
    lhs = bar_comultiplication(Db(w))
    rhs = tensor_apply(t, Db, None) + tensor_apply(
        t, None, Db, lambda k1: _sign((first + second) * (word_degree(k1) + len(k1)))
    )
    return lhs - rhs


def apply_tensor_left(t: Tensor, f: LinearMap) -> Tensor:
    return tensor_apply(t, f, None)


def coassociativity_defect(w: Word) -> Tuple[Dict, Dict]:
    """Return ``((nabla (x) 1) nabla w, (1 (x) nabla) nabla w)`` as triple-tensor dicts."""
    t = comultiplication(w)
    left: Dict = {}
    right: Dict = {}
    dim = w.dim
    for (k1, k2), c in t.terms.items():
        for (a, b), v in comultiplication(Word(dim, {k1: Fraction(1)})).terms.items():
            add_into(left, (a, b, k2), c * v)
        for (a, b), v in comultiplication(Word(dim, {k2: Fraction(1)})).terms.items():
            add_into(right, (k1, a, b), c * v)
    return left, right


def permutation_extension(f: Component, key: WordKey, dim: int) -> Word:
    """Literal ``sum over all permutations / (k!(n-k)!)`` form of the extension.

    Independent of `extend_component`; used as its oracle.
    """
    from itertools import permutations

    n = len(key)
    k = f.arity
    out: Dict[WordKey, Fraction] = {}
    if k > n:
        return Word(dim, out)
    scale = Fraction(1, factorial(k) * factorial(n - k))
    for perm in permutations(range(n)):
        # sign of the permutation by bubble-sorting with the letter swap rule
        order = list(perm)
        s = 1
        for i in range(n):
            for j in range(n - 1 - i):
                if order[j] > order[j + 1]:
                    s *= swap_sign(key[order[j]], key[order[j + 1]])
                    order[j], order[j + 1] = order[j + 1], order[j]
        permuted = [key[i] for i in perm]
        norm = normalize_letters(permuted[:k])
        if norm is None:
            continue
        s2, head = norm
        img = f.on_letters(head)
        for h, c in img.terms.items():
            _accumulate(out, h + tuple(permuted[k:]), s * s2 * c * scale)
    return Word(dim, out)
