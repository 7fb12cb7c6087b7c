"""The incidence-correspondence algebra on the Hilbert square of a surface
with a distinguished degree-one point class, plus the cohomological check of
its middle projector against an intersection lattice.

The product table is deliberately partial: the sixteen products among the
four plain generators are declared, their transposes are derived through the
anti-involution, and every mixed plain/transposed product stays undefined.
Verification reports those as UNKNOWN rather than guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra_core import StructureAlgebra
from .matrices import Matrix, SingularMatrixError
from .projector_systems import ProjectorSystem
from .reports import Check, VerificationReport, failed, passed
from .scalars import FreeElement, ZZ

# Generators, with their geometric shapes:
#   G1  incidence cut down by the distinguished surface on the first factor
#   G2  point x space         G3  surface x surface       G4  ray x divisor
#   delta the identity correspondence; Xt the transpose of X
_BASIS = ("delta", "G1", "G2", "G3", "G4", "G1t", "G2t", "G3t", "G4t")

_PLAIN_TABLE: dict[tuple[str, str], dict[str, int]] = {
    ("G1", "G1"): {"G1": 1, "G2": 2, "G3": 2},
    ("G1", "G2"): {"G2": 2},
    ("G1", "G3"): {"G3": 2},
    ("G1", "G4"): {},
    ("G2", "G1"): {"G2": 2},
    ("G2", "G2"): {"G2": 1},
    ("G2", "G3"): {},
    ("G2", "G4"): {},
    ("G3", "G1"): {"G3": 2},
    ("G3", "G2"): {},
    ("G3", "G3"): {"G3": 1},
    ("G3", "G4"): {},
    ("G4", "G1"): {},
    ("G4", "G2"): {},
    ("G4", "G3"): {},
    ("G4", "G4"): {"G4": -1},
}

_INVOLUTION = {
    "delta": "delta",
    "G1": "G1t", "G2": "G2t", "G3": "G3t", "G4": "G4t",
    "G1t": "G1", "G2t": "G2", "G3t": "G3", "G4t": "G4",
}

# Pure-tensor shapes (first factor, second factor) for the product-cycle
# generators. G1 and G1t are not product cycles and have no shape here.
# Class tokens: o point, F whole space, S surface, E ray, d divisor.
_PURE_FORMS = {
    "G2": ("o", "F"), "G3": ("S", "S"), "G4": ("E", "d"),
    "G2t": ("F", "o"), "G3t": ("S", "S"), "G4t": ("d", "E"),
}

# Nonzero intersection numbers among the class tokens; every other pairing
# is zero for dimension reasons.
_INTERSECTION_DEGREES = {
    frozenset(("F", "o")): 1,
    frozenset(("S",)): 1,       # S.S
    frozenset(("d", "E")): -1,
}


def _intersection_degree(a: str, b: str) -> int:
    return _INTERSECTION_DEGREES.get(frozenset((a, b)), 0)


def s2_algebra() -> StructureAlgebra:
    """The nine-symbol algebra over Z with its partial product table.

    Transposed entries are derived from the plain sixteen through
    t(a∘b) = t(b)∘t(a); that derivation is the only source of the
    transposed-side table.
    """
    products: dict[tuple[str, str], FreeElement] = {}
    for (a, b), terms in _PLAIN_TABLE.items():
        products[(a, b)] = FreeElement(ZZ, terms)
    for (a, b), terms in _PLAIN_TABLE.items():
        mirrored = {_INVOLUTION[s]: c for s, c in terms.items()}
        products[(_INVOLUTION[b], _INVOLUTION[a])] = FreeElement(ZZ, mirrored)
    return StructureAlgebra("hilb2", ZZ, _BASIS, "delta", products, _INVOLUTION)


def s2_projectors() -> ProjectorSystem:
    """The five-term candidate decomposition in degrees 0, 2, 4, 6, 8.

    The edge projectors are explicit; their transposes are obtained through
    the involution, and the middle one is the completeness complement.
    """
    algebra = s2_algebra()
    p0 = algebra.element("G2")
    p2 = FreeElement(ZZ, {"G1": 1, "G2": -2, "G3": -2, "G4": -1})
    p8 = algebra.transpose(p0)
    p6 = algebra.transpose(p2)
    p4 = algebra.unit_element() - p0 - p2 - p6 - p8
    return ProjectorSystem(algebra, {0: p0, 2: p2, 4: p4, 6: p6, 8: p8}, "hilb2")


def cross_check_pure_tensors() -> VerificationReport:
    """Recompute every table entry between product cycles independently.

    For product cycles, (c×r)∘(a×b) = deg(b.c) * (a×r) with deg read off the
    declared intersection numbers. Comparison is at the level of shapes, so a
    result may legitimately land on a symbol whose shape coincides with
    another's.
    """
    algebra = s2_algebra()
    checks: list[Check] = []
    for a, b in algebra.defined_pairs():
        if a not in _PURE_FORMS or b not in _PURE_FORMS:
            continue
        first_left, first_right = _PURE_FORMS[a]
        second_left, second_right = _PURE_FORMS[b]
        coeff = _intersection_degree(second_right, first_left)
        computed = (coeff, (second_left, first_right)) if coeff else None

        value = algebra.product(a, b)
        terms = list(value.fractions())
        if not terms:
            actual = None
        elif len(terms) == 1 and terms[0][0] in _PURE_FORMS:
            symbol, c = terms[0]
            actual = (c, _PURE_FORMS[symbol])
        else:
            actual = ("unrepresentable", str(value))

        name = f"tensor[{a},{b}]"
        if computed == actual:
            checks.append(passed(name))
        else:
            checks.append(failed(name, str(computed), str(actual)))
    return VerificationReport("pure-tensor-cross-check", tuple(checks))


def _u_gram() -> Matrix:
    return Matrix([[0, 1], [1, 0]])


def _e8_minus_gram() -> Matrix:
    # chain 1-2-3-4-5-6-7 with node 8 hanging off node 3, negated
    edges = {(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (3, 8)}
    rows = []
    for i in range(1, 9):
        row = []
        for j in range(1, 9):
            if i == j:
                row.append(-2)
            elif (min(i, j), max(i, j)) in edges:
                row.append(1)
            else:
                row.append(0)
        rows.append(row)
    return Matrix(rows)


_BUILTIN_GRAMS = {
    "U": _u_gram,
    "E8minus": _e8_minus_gram,
    "K3": lambda: Matrix.block_diag(
        [_u_gram(), _u_gram(), _u_gram(), _e8_minus_gram(), _e8_minus_gram()]),
}


@dataclass(frozen=True)
class LatticeGram:
    """A symmetric integral intersection matrix."""

    gram: Matrix

    def __post_init__(self):
        if not self.gram.is_square:
            raise ValueError("gram matrix must be square")
        if not self.gram.is_symmetric():
            raise ValueError("gram matrix must be symmetric")
        for row in self.gram.rows():
            for x in row:
                if x.denominator != 1:
                    raise ValueError("gram entries must be integers")

    @property
    def rank(self) -> int:
        return self.gram.nrows

    def extended(self) -> Matrix:
        """Adjoin the divisor class, of self-pairing -1."""
        return Matrix.block_diag([self.gram, Matrix([[-1]])])


def k3_gram(choice="K3") -> LatticeGram:
    """A built-in lattice by name, or a custom symmetric integer matrix."""
    if isinstance(choice, str):
        if choice not in _BUILTIN_GRAMS:
            raise ValueError(
                f"unknown lattice {choice!r}: expected one of {sorted(_BUILTIN_GRAMS)}")
        return LatticeGram(_BUILTIN_GRAMS[choice]())
    if isinstance(choice, Matrix):
        return LatticeGram(choice)
    return LatticeGram(Matrix(choice))


def pi2_cohomology_check(lattice: LatticeGram) -> VerificationReport:
    """Verify the middle-degree projector class acts as the identity.

    Dual bases are taken against the extended Gram (lattice plus the
    divisor class of square -1); the candidate operator sends z to
    sum_i <z, a_i^dual> a_i + <z, d^dual> d. Exact inverse, no tolerance.
    """
    checks: list[Check] = []
    gram = lattice.gram
    r = lattice.rank
    try:
        inverse = gram.inverse()
    except SingularMatrixError:
        return VerificationReport(
            "pi2-cohomology",
            (failed("gram-invertible", "singular", "invertible"),))
    checks.append(passed("gram-invertible"))

    ident_r = Matrix.identity(r)
    name = "inverse-exact"
    product = inverse * gram
    checks.append(passed(name) if product == ident_r
                  else failed(name, str(product), str(ident_r)))

    extended = lattice.extended()
    n = r + 1
    # dual vectors against the extended pairing: rows of the inverse for the
    # lattice part, -1 on the divisor coordinate
    duals = [[inverse.entry(i, j) if j < r else Fraction(0) for j in range(n)]
             for i in range(r)]
    duals.append([Fraction(0)] * r + [Fraction(-1)])

    operator_rows = []
    for k in range(n):
        pairing_row = extended.rows()[k]
        operator_rows.append([
            sum(pairing_row[t] * duals[i][t] for t in range(n))
            for i in range(n)
        ])
    operator = Matrix(operator_rows)

    ident_n = Matrix.identity(n)
    name = "pi2-identity-on-h2"
    checks.append(passed(name) if operator == ident_n
                  else failed(name, str(operator), str(ident_n)))
    name = "pi2-idempotent"
    squared = operator * operator
    checks.append(passed(name) if squared == operator
                  else failed(name, str(squared), str(operator)))
    return VerificationReport("pi2-cohomology", tuple(checks))
