"""Differential forms and polyvector fields on R^n with polynomial coefficients.

Both kinds are stored the same way: a map ``(monomial, indices) -> Fraction``
where ``indices`` is a strictly increasing tuple of 1-based coordinate
indices naming ``dx_I`` (forms) or ``d_I = d/dx_i1 ^ ...`` (polyvectors).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .symcore import (
    DimensionMismatch,
    Monomial,
    Polynomial,
    Scalar,
    add_into,
    as_fraction,
    grlex_key,
    mono_mul,
)

Indices = Tuple[int, ...]
TermKey = Tuple[Monomial, Indices]


def sort_indices(idx: Iterable[int]) -> Optional[Tuple[int, Indices]]:
    """Sort a wedge index list; return ``(sign, sorted)`` or None if it repeats."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return None
    sign = 1
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                sign = -sign
    return sign, tuple(sorted(idx))


def merge_indices(I: Indices, J: Indices) -> Optional[Tuple[int, Indices]]:
    """Sign and index set of ``e_I ^ e_J`` for sorted I, J; None on overlap."""
    if not I:
        return 1, J
    if not J:
        return 1, I
    inversions = 0
    for a in I:
        for b in J:
            if a == b:
                return None
            if a > b:
                inversions += 1
    return (-1 if inversions & 1 else 1), tuple(sorted(I + J))


class _Multivector:
    """Shared storage and linear algebra for forms and polyvectors."""

    __slots__ = ("dim", "terms", "_hash")
    kind = ""

    def __init__(self, dim: int, terms: Mapping[TermKey, Scalar] | None = None):
        if dim < 1:
            raise ValueError("dimension must be positive")
        clean: Dict[TermKey, Fraction] = {}
        for (m, idx), c in (terms or {}).items():
            m = tuple(m)
            if len(m) != dim:
                raise ValueError(f"bad monomial {m} for dimension {dim}")
            if any(not 1 <= i <= dim for i in idx):
                raise IndexError(f"basis index out of range in {idx}")
            s = sort_indices(idx)
            if s is None:
                continue
            sign, idx = s
            add_into(clean, (m, idx), sign * as_fraction(c))
        self.dim = dim
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, dim: int, terms: Dict[TermKey, Fraction]):
        obj = object.__new__(cls)
        obj.dim = dim
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, dim: int):
        return cls._raw(dim, {})

    @classmethod
    def basis(cls, dim: int, idx: Iterable[int], coeff: Polynomial | Scalar = 1):
        """``coeff * e_{i1} ^ e_{i2} ^ ...`` with the sign of sorting absorbed."""
        idx = tuple(idx)
        if any(not 1 <= i <= dim for i in idx):
            raise IndexError(f"basis index out of range in {idx}")
        s = sort_indices(idx)
        if s is None:
            return cls.zero(dim)
        sign, idx = s
        if not isinstance(coeff, Polynomial):
            coeff = Polynomial.constant(dim, coeff)
        elif coeff.dim != dim:
            raise DimensionMismatch(f"dimension {dim} vs {coeff.dim}")
        return cls._raw(dim, {(m, idx): sign * c for m, c in coeff.terms.items()})

    @classmethod
    def from_coefficients(cls, dim: int, coeffs: Mapping[Indices, Polynomial]):
        out = cls.zero(dim)
        for idx, p in coeffs.items():
            out = out + cls.basis(dim, idx, p)
        return out

    @classmethod
    def function(cls, p: Polynomial):
        return cls._raw(p.dim, {(m, ()): c for m, c in p.terms.items()})

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degrees(self) -> set:
        return {len(idx) for _, idx in self.terms}

    def degree(self) -> int:
        """The pure degree; raises if the value is inhomogeneous. Zero has degree -1."""
        ds = self.degrees()
        if not ds:
            return -1
        if len(ds) > 1:
            raise ValueError(f"inhomogeneous value with degrees {sorted(ds)}")
        return ds.pop()

    def homogeneous(self, k: int):
        return type(self)._raw(
            self.dim, {key: c for key, c in self.terms.items() if len(key[1]) == k}
        )

    def components(self) -> Dict[Indices, Polynomial]:
        """Group terms by basis element: ``{indices: coefficient polynomial}``."""
        out: Dict[Indices, Dict[Monomial, Fraction]] = {}
        for (m, idx), c in self.terms.items():
            out.setdefault(idx, {})[m] = c
        return {idx: Polynomial._raw(self.dim, t) for idx, t in out.items()}

    def coefficient(self, idx: Iterable[int]) -> Polynomial:
        s = sort_indices(idx)
        if s is None:
            return Polynomial.zero(self.dim)
        sign, idx = s
        return Polynomial._raw(
            self.dim, {m: sign * c for (m, j), c in self.terms.items() if j == idx}
        )

    def to_polynomial(self) -> Polynomial:
        if any(idx for _, idx in self.terms):
            raise ValueError("value has positive degree")
        return Polynomial._raw(self.dim, {m: c for (m, _), c in self.terms.items()})

    def sorted_terms(self) -> list:
        return sorted(
            self.terms.items(),
            key=lambda t: (len(t[0][1]), t[0][1], grlex_key(t[0][0])),
        )

    def max_poly_degree(self) -> int:
        return max((sum(m) for m, _ in self.terms), default=-1)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.terms
        if type(other) is not type(self):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.kind, self.dim, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        from .parsing import render_canonical

        return f"{type(self).__name__}({render_canonical(self)!r}, dim={self.dim})"

    # -- linear structure --------------------------------------------------

    def _check(self, other) -> None:
        if type(other) is not type(self):
            raise DimensionMismatch(
                f"cannot combine {type(self).__name__} with {type(other).__name__}"
            )
        if other.dim != self.dim:
            raise DimensionMismatch(f"dimension {self.dim} vs {other.dim}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            add_into(out, k, c)
        return type(self)._raw(self.dim, out)

    def __radd__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        return NotImplemented

    def __neg__(self):
        return type(self)._raw(self.dim, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Multiplication by a scalar or by a function (Polynomial)."""
        if isinstance(other, (int, Fraction)):
            c = as_fraction(other)
            if not c:
                return type(self).zero(self.dim)
            return type(self)._raw(self.dim, {k: v * c for k, v in self.terms.items()})
        if isinstance(other, Polynomial):
            if other.dim != self.dim:
                raise DimensionMismatch(f"dimension {self.dim} vs {other.dim}")
            out: Dict[TermKey, Fraction] = {}
            for (m, idx), c in self.terms.items():
                for m2, c2 in other.terms.items():
                    add_into(out, (mono_mul(m, m2), idx), c * c2)
            return type(self)._raw(self.dim, out)
        return NotImplemented

    __rmul__ = __mul__

    def wedge(self, other):
        self._check(other)
        out: Dict[TermKey, Fraction] = {}
        for (m1, i1), c1 in self.terms.items():
            for (m2, i2), c2 in other.terms.items():
                mi = merge_indices(i1, i2)
                if mi is None:
                    continue
                sign, idx = mi
                add_into(out, (mono_mul(m1, m2), idx), sign * c1 * c2)
        return type(self)._raw(self.dim, out)

    __xor__ = wedge


class DifferentialForm(_Multivector):
    """A (possibly inhomogeneous) differential form with polynomial coefficients."""

    __slots__ = ()
    kind = "form"


class Polyvector(_Multivector):
    """A (possibly inhomogeneous) polyvector field with polynomial coefficients."""

    __slots__ = ()
    kind = "vector"


def wedge(a, b):
    return a.wedge(b)


def exterior_derivative(w: DifferentialForm) -> DifferentialForm:
    dim = w.dim
    out: Dict[TermKey, Fraction] = {}
    for (m, idx), c in w.terms.items():
        for j in range(1, dim + 1):
            e = m[j - 1]
            if not e or j in idx:
                continue
            m2 = m[: j - 1] + (e - 1,) + m[j:]
            # dx_j moves past the indices smaller than j
            pos = sum(1 for i in idx if i < j)
            sign = -1 if pos & 1 else 1
            add_into(out, (m2, tuple(sorted(idx + (j,)))), sign * c * e)
    return DifferentialForm._raw(dim, out)


d = exterior_derivative


def _contract_basis(j: int, idx: Indices) -> Optional[Tuple[int, Indices]]:
    """``i_{d_j} dx_idx`` as (sign, remaining indices), or None."""
    for p, i in enumerate(idx):
        if i == j:
            return (-1 if p & 1 else 1), idx[:p] + idx[p + 1:]
        if i > j:
            return None
    return None


def _contract_vector_term(m1: Monomial, j: int, c1: Fraction,
                          w_terms: Mapping[TermKey, Fraction],
                          out: Dict[TermKey, Fraction]) -> None:
    for (m2, idx), c2 in w_terms.items():
        r = _contract_basis(j, idx)
        if r is None:
            continue
        sign, rest = r
        add_into(out, (mono_mul(m1, m2), rest), sign * c1 * c2)


def interior_product(P: Polyvector, w: DifferentialForm) -> DifferentialForm:
    """Contract ``w`` with ``P``.

    For a k-vector term ``g d_j1 ^ ... ^ d_jk`` the slots are contracted in
    order, ``i_{d_jk} ... i_{d_j1}``, so that ``(d_1 ^ d_2) -| dx1 ^ dx2 = 1``.
    """
    if not isinstance(P, Polyvector) or not isinstance(w, DifferentialForm):
        raise TypeError("interior_product(Polyvector, DifferentialForm)")
    if P.dim != w.dim:
        raise DimensionMismatch(f"dimension {P.dim} vs {w.dim}")
    out: Dict[TermKey, Fraction] = {}
    for (mp, jdx), cp in P.terms.items():
        cur: Dict[TermKey, Fraction] = dict(w.terms)
        for j in jdx:
            nxt: Dict[TermKey, Fraction] = {}
            _contract_vector_term((0,) * w.dim, j, Fraction(1), cur, nxt)
            cur = nxt
            if not cur:
                break
        for (m, idx), c in cur.items():
            add_into(out, (mono_mul(mp, m), idx), cp * c)
    return DifferentialForm._raw(w.dim, out)


def lie_derivative(X: Polyvector, w: DifferentialForm) -> DifferentialForm:
    """Lie derivative along a vector field, by Cartan's formula."""
    if X.degrees() - {1}:
        raise ValueError("lie_derivative needs a vector field (pure degree 1)")
    return exterior_derivative(interior_product(X, w)) + interior_product(
        X, exterior_derivative(w)
    )


def apply_vector_field(X: Polyvector, f: Polynomial) -> Polynomial:
    """``X(f)`` for a vector field X."""
    return interior_product(X, exterior_derivative(DifferentialForm.function(f))).to_polynomial()


def _right_xi_derivative(P: Polyvector, i: int) -> Polyvector:
    """Right derivative of P by the odd coordinate d_i (move d_i to the end, drop it)."""
    out: Dict[TermKey, Fraction] = {}
    for (m, idx), c in P.terms.items():
        if i not in idx:
            continue
        p = idx.index(i)
        sign = -1 if (len(idx) - 1 - p) & 1 else 1
        add_into(out, (m, idx[:p] + idx[p + 1:]), sign * c)
    return Polyvector._raw(P.dim, out)


def _coord_derivative(P: Polyvector, i: int) -> Polyvector:
    out: Dict[TermKey, Fraction] = {}
    k = i - 1
    for (m, idx), c in P.terms.items():
        e = m[k]
        if e:
            add_into(out, (m[:k] + (e - 1,) + m[k + 1:], idx), c * e)
    return Polyvector._raw(P.dim, out)


def _schouten_homogeneous(P: Polyvector, p: int, Q: Polyvector, q: int) -> Polyvector:
    sign = -1 if ((p - 1) * (q - 1)) & 1 else 1
    out = Polyvector.zero(P.dim)
    for i in range(1, P.dim + 1):
        out = out + _right_xi_derivative(P, i).wedge(_coord_derivative(Q, i))
        out = out - _right_xi_derivative(Q, i).wedge(_coord_derivative(P, i)) * sign
    return out


def schouten_bracket(P: Polyvector, Q: Polyvector) -> Polyvector:
    """Schouten-Nijenhuis bracket; the commutator on vector fields.

    Uses ``[P, Q] = sum_i P<-d_i ^ dQ/dx_i - (-1)^{(p-1)(q-1)} Q<-d_i ^ dP/dx_i``
    where ``<-d_i`` is the right derivative in the odd variable ``d_i``.
    """
    if not isinstance(P, Polyvector) or not isinstance(Q, Polyvector):
        raise TypeError("schouten_bracket(Polyvector, Polyvector)")
    if P.dim != Q.dim:
        raise DimensionMismatch(f"dimension {P.dim} vs {Q.dim}")
    out = Polyvector.zero(P.dim)
    for p in sorted(P.degrees()):
        for q in sorted(Q.degrees()):
            out = out + _schouten_homogeneous(P.homogeneous(p), p, Q.homogeneous(q), q)
    return out


def vector_field(components: Iterable[Polynomial]) -> Polyvector:
    comps = list(components)
    dim = comps[0].dim
    return Polyvector.from_coefficients(dim, {(i + 1,): c for i, c in enumerate(comps)})


def one_form(components: Iterable[Polynomial]) -> DifferentialForm:
    comps = list(components)
    dim = comps[0].dim
    return DifferentialForm.from_coefficients(dim, {(i + 1,): c for i, c in enumerate(comps)})
