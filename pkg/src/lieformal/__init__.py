"""Exact Poisson calculus on polynomial differential forms over R^n.

Koszul brackets of forms, the tilde-pi operator, the free coalgebra of
suspended forms with its coderivations, and the explicit L-infinity
formality map built from ``e^-Pi``.
"""

from pathlib import Path

from .coalgebra import Coderivation, Component, ComponentFamily, Letter, Word, comultiplication, cup_product
from .exterior import (
    DifferentialForm,
    Polyvector,
    exterior_derivative,
    interior_product,
    lie_derivative,
    schouten_bracket,
)
from .parsing import ParseError, parse_expression, render_canonical
from .poisson import (
    BracketReport,
    PoissonStructure,
    koszul_bracket,
    nikonov_bracket,
    schouten_square,
    tilde_pi,
)
from .symcore import DimensionMismatch, Polynomial

FIXTURES = Path(__file__).parent / "fixtures"


def fixture(name: str) -> PoissonStructure:
    """One of the bundled structures: r2-symplectic, r4-symplectic, so3, quadratic, non-poisson."""
    path = FIXTURES / f"{name}.json"
    if not path.exists():
        raise KeyError(f"no fixture named {name!r}")
    return PoissonStructure.load(path)


__all__ = [
    "BracketReport", "Coderivation", "Component", "ComponentFamily", "DifferentialForm",
    "DimensionMismatch", "FIXTURES", "Letter", "ParseError", "PoissonStructure", "Polynomial",
    "Polyvector", "Word", "comultiplication", "cup_product", "exterior_derivative", "fixture",
    "interior_product", "koszul_bracket", "lie_derivative", "nikonov_bracket", "parse_expression",
    "render_canonical", "schouten_bracket", "schouten_square", "tilde_pi",
]
