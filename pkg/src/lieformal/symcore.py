"""Exact sparse multivariate polynomials over the rationals.

Coordinates are named ``x1 .. xn``; every public method that takes a
coordinate index uses that 1-based numbering.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction]


class DimensionMismatch(ValueError):
    """Operands live on spaces of different dimension (or kind)."""


def as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


def grlex_key(m: Monomial):
    """Sort key putting monomials in descending graded-lex order."""
    return (-sum(m), tuple(-e for e in m))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def add_into(acc: Dict, key, c: Fraction) -> None:
    """Accumulate ``c`` at ``key``, deleting the entry if it cancels."""
    v = acc.get(key)
    if v is None:
        if c:
            acc[key] = c
    else:
        v += c
        if v:
            acc[key] = v
        else:
            del acc[key]


class Polynomial:
    """An immutable polynomial with exact rational coefficients."""

    __slots__ = ("dim", "terms", "_hash")

    def __init__(self, dim: int, terms: Mapping[Monomial, Scalar] | None = None):
        if dim < 1:
            raise ValueError("dimension must be positive")
        clean: Dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != dim or any(e < 0 for e in m):
                raise ValueError(f"bad monomial {m} for dimension {dim}")
            add_into(clean, m, as_fraction(c))
        self.dim = dim
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, dim: int, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        p = object.__new__(cls)
        p.dim = dim
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, dim: int) -> "Polynomial":
        return cls._raw(dim, {})

    @classmethod
    def constant(cls, dim: int, c: Scalar) -> "Polynomial":
        c = as_fraction(c)
        return cls._raw(dim, {(0,) * dim: c} if c else {})

    @classmethod
    def variable(cls, dim: int, i: int) -> "Polynomial":
        if not 1 <= i <= dim:
            raise IndexError(f"coordinate x{i} out of range for dimension {dim}")
        m = [0] * dim
        m[i - 1] = 1
        return cls._raw(dim, {tuple(m): Fraction(1)})

    @classmethod
    def monomial(cls, m: Monomial, c: Scalar = 1) -> "Polynomial":
        return cls(len(m), {m: c})

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.dim, Fraction(0))

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]))

    def __iter__(self) -> Iterator[Tuple[Monomial, Fraction]]:
        return iter(self.sorted_terms())

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.dim, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        from .parsing import render_canonical

        return f"Polynomial({render_canonical(self)!r}, dim={self.dim})"

    # -- ring operations -------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.dim != self.dim:
                raise DimensionMismatch(f"dimension {self.dim} vs {other.dim}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.dim, other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other) -> "Polynomial":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            add_into(out, m, c)
        return Polynomial._raw(self.dim, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.dim, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            c = as_fraction(other)
            if not c:
                return Polynomial.zero(self.dim)
            return Polynomial._raw(self.dim, {m: v * c for m, v in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        other = self._coerce(other)
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                add_into(out, mono_mul(m1, m2), c1 * c2)
        return Polynomial._raw(self.dim, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = Polynomial.constant(self.dim, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def diff(self, i: int) -> "Polynomial":
        """Partial derivative with respect to ``x_i``."""
        if not 1 <= i <= self.dim:
            raise IndexError(f"coordinate x{i} out of range for dimension {self.dim}")
        k = i - 1
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            e = m[k]
            if e:
                m2 = m[:k] + (e - 1,) + m[k + 1:]
                add_into(out, m2, c * e)
        return Polynomial._raw(self.dim, out)

    def gradient(self) -> list:
        return [self.diff(i) for i in range(1, self.dim + 1)]


def poly_sum(dim: int, polys: Iterable[Polynomial]) -> Polynomial:
    out: Dict[Monomial, Fraction] = {}
    for p in polys:
        for m, c in p.terms.items():
            add_into(out, m, c)
    return Polynomial._raw(dim, out)
