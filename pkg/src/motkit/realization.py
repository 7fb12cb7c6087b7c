"""Graded matrix realizations of structure algebras.

A realization sends each basis symbol to a square matrix acting on a direct
sum of graded slots; the reference projectors are the block-diagonal Künneth
targets (identity on one slot, zero elsewhere).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .algebra_core import StructureAlgebra, UnsupportedSymbolError
from .matrices import Matrix
from .reports import Check, VerificationReport, failed, passed, unknown
from .scalars import FreeElement


@dataclass(frozen=True, eq=False)
class GradedRealization:
    """Images of basis symbols as matrices on a graded direct sum.

    `slots` lists (degree, rank) pairs with strictly increasing degrees;
    rank 0 slots are legal. Every image must be square of the total rank.
    """

    slots: tuple[tuple[int, int], ...]
    images: Mapping[str, Matrix]

    def __post_init__(self):
        slots = tuple((int(d), int(r)) for d, r in self.slots)
        degrees = [d for d, _ in slots]
        if degrees != sorted(set(degrees)):
            raise ValueError("slot degrees must be strictly increasing")
        if any(r < 0 for _, r in slots):
            raise ValueError("slot ranks must be nonnegative")
        object.__setattr__(self, "slots", slots)
        object.__setattr__(self, "images", dict(self.images))
        n = self.dimension
        for symbol, mat in self.images.items():
            if mat.shape != (n, n):
                raise ValueError(f"image of {symbol!r} has shape {mat.shape}, expected {(n, n)}")

    @property
    def dimension(self) -> int:
        return sum(r for _, r in self.slots)

    def image(self, symbol: str) -> Matrix:
        try:
            return self.images[symbol]
        except KeyError:
            raise UnsupportedSymbolError(f"no image declared for {symbol!r}") from None


def kunneth_target(slots: Sequence[tuple[int, int]], degree: int) -> Matrix:
    """Identity on the slot of the given degree, zero elsewhere.

    A degree with no slot yields the zero matrix.
    """
    blocks = [Matrix.identity(r) if d == degree else Matrix.zeros(r, r)
              for d, r in slots]
    return Matrix.block_diag(blocks)


def realize(element: FreeElement, realization: GradedRealization) -> Matrix:
    """Linear extension of the symbol images."""
    n = realization.dimension
    acc = Matrix.zeros(n, n)
    for symbol, coeff in element.fractions():
        acc = acc + realization.image(symbol).scaled(coeff)
    return acc


def check_homomorphism(realization: GradedRealization,
                       algebra: StructureAlgebra) -> VerificationReport:
    """image(a∘b) = image(a)·image(b) over all basis pairs.

    Pairs with undefined products are reported UNKNOWN and skipped. Also
    asserts the unit maps to the identity matrix.
    """
    for symbol in algebra.basis:
        realization.image(symbol)  # fail fast on missing images
    checks: list[Check] = []
    unit_img = realization.image(algebra.unit)
    ident = Matrix.identity(realization.dimension)
    name = f"unit[{algebra.unit}] == identity"
    checks.append(passed(name) if unit_img == ident else failed(name, str(unit_img), str(ident)))
    for a in algebra.basis:
        for b in algebra.basis:
            prod = algebra.product(a, b)
            name = f"hom[{a},{b}]"
            if prod is None:
                checks.append(unknown(name, [(a, b)]))
                continue
            lhs = realize(prod, realization)
            rhs = realization.image(a) * realization.image(b)
            checks.append(passed(name) if lhs == rhs else failed(name, str(lhs), str(rhs)))
    return VerificationReport(f"homomorphism:{algebra.name}", tuple(checks))
