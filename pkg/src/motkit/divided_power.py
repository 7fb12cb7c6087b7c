"""Truncated divided-power algebras, realized two independent ways.

Route one is a closed-form structure-constant table on basis symbols
g0..gn (g0 the unit). Route two models g_r as the operator
raise^r lower^r / r! on integer polynomials truncated at degree n, where
raise is multiplication by x and lower is d/dx; products are recovered by
solving the triangular system of eigenvalue patterns. The two routes agreeing
is a core correctness check, so they share no code.

Also here: normal ordering of lower^l raise^m, the graded idempotents
obtained from the inverse binomial transform, and their matrix realization.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial, perm
from typing import Mapping

from .algebra_core import StructureAlgebra
from .matrices import Matrix
from .projector_systems import ProjectorSystem
from .realization import GradedRealization
from .reports import Check, failed, passed
from .scalars import ExactScalar, FreeElement, NotDivisibleError, ZZ

RAISE = "R"
LOWER = "L"

Word = tuple[str, ...]


@dataclass(frozen=True)
class TruncatedPolynomial:
    """Integer polynomial with coefficients indexed 0..bound.

    Raising past the bound truncates: the top coefficient is dropped.
    """

    coeffs: tuple[int, ...]
    bound: int

    def __post_init__(self):
        if self.bound < 0:
            raise ValueError("bound must be nonnegative")
        padded = tuple(self.coeffs) + (0,) * (self.bound + 1 - len(self.coeffs))
        if len(padded) != self.bound + 1:
            raise ValueError(f"{len(self.coeffs)} coefficients exceed bound {self.bound}")
        object.__setattr__(self, "coeffs", padded)

    @staticmethod
    def monomial(degree: int, bound: int) -> "TruncatedPolynomial":
        coeffs = [0] * (bound + 1)
        if 0 <= degree <= bound:
            coeffs[degree] = 1
        return TruncatedPolynomial(tuple(coeffs), bound)

    @staticmethod
    def zero(bound: int) -> "TruncatedPolynomial":
        return TruncatedPolynomial((), bound)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "TruncatedPolynomial") -> "TruncatedPolynomial":
        if self.bound != other.bound:
            raise ValueError("bound mismatch")
        return TruncatedPolynomial(
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.bound)

    def scaled(self, factor: int) -> "TruncatedPolynomial":
        return TruncatedPolynomial(tuple(factor * c for c in self.coeffs), self.bound)

    def __str__(self) -> str:
        terms = [f"{c}*x^{m}" for m, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"


def _apply_letter(letter: str, poly: TruncatedPolynomial) -> TruncatedPolynomial:
    n = poly.bound
    if letter == RAISE:
        return TruncatedPolynomial((0,) + poly.coeffs[:n], n)
    if letter == LOWER:
        lowered = tuple((m + 1) * poly.coeffs[m + 1] for m in range(n)) + (0,)
        return TruncatedPolynomial(lowered, n)
    raise ValueError(f"bad letter {letter!r}")


def apply_word(word: Word, poly: TruncatedPolynomial) -> TruncatedPolynomial:
    """Apply a word of raise/lower letters, rightmost letter first."""
    for letter in reversed(word):
        poly = _apply_letter(letter, poly)
    return poly


def raise_lower_word(r: int) -> Word:
    return (RAISE,) * r + (LOWER,) * r


def normal_order(l: int, m: int) -> dict[Word, int]:
    """Rewrite lower^l raise^m as a sum of raise-first words.

    Returns {raise^(m-i) lower^(l-i): C(l,i) * m(m-1)...(m-i+1)} for
    0 <= i <= l, omitting vanished terms (perm(m, i) = 0 once i > m).
    """
    if l < 0 or m < 0:
        raise ValueError("exponents must be nonnegative")
    out: dict[Word, int] = {}
    for i in range(l + 1):
        coeff = comb(l, i) * perm(m, i)
        if coeff:
            out[(RAISE,) * (m - i) + (LOWER,) * (l - i)] = coeff
    return out


def apply_word_sum(words: Mapping[Word, int],
                   poly: TruncatedPolynomial) -> TruncatedPolynomial:
    acc = TruncatedPolynomial.zero(poly.bound)
    for word, coeff in words.items():
        acc = acc + apply_word(word, poly).scaled(coeff)
    return acc


def _product_coefficient(r: int, rp: int, target: int) -> int:
    # multinomial (r + rp - i)! / (i! (r-i)! (rp-i)!) with i = r + rp - target
    i = r + rp - target
    return factorial(target) // (factorial(i) * factorial(r - i) * factorial(rp - i))


def divided_power_algebra(n: int) -> StructureAlgebra:
    """Closed-form table on g0..gn over Z; g_l = 0 beyond the truncation."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    basis = tuple(f"g{r}" for r in range(n + 1))
    products: dict[tuple[str, str], FreeElement] = {}
    for r in range(1, n + 1):
        for rp in range(1, n + 1):
            terms = {}
            for i in range(min(r, rp) + 1):
                target = r + rp - i
                if target <= n:
                    terms[f"g{target}"] = _product_coefficient(r, rp, target)
            products[(f"g{r}", f"g{rp}")] = FreeElement(ZZ, terms)
    return StructureAlgebra(f"divided-power-{n}", ZZ, basis, "g0", products)


def structure_constants_oracle(n: int) -> StructureAlgebra:
    """Recompute the table from the operator model alone.

    For each pair, compose the words raise^r lower^r and raise^rp lower^rp on
    every monomial x^m (m <= n), divide the diagonal action by r! * rp!
    exactly, then solve the triangular system expressing the eigenvalue
    pattern in the g-basis. Shares no constants with the closed form.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    basis = tuple(f"g{r}" for r in range(n + 1))
    products: dict[tuple[str, str], FreeElement] = {}
    for r in range(1, n + 1):
        for rp in range(1, n + 1):
            word = raise_lower_word(r) + raise_lower_word(rp)
            scale = factorial(r) * factorial(rp)
            eigen: list[int] = []
            for m in range(n + 1):
                image = apply_word(word, TruncatedPolynomial.monomial(m, n))
                for j, coeff in enumerate(image.coeffs):
                    if j != m and coeff:
                        raise ArithmeticError(
                            f"operator model acted non-diagonally on x^{m}")
                value = image.coeffs[m]
                if value % scale:
                    raise NotDivisibleError(f"x^{m}", ExactScalar.of(value), scale)
                eigen.append(value // scale)
            # eigenvalue of g_l on x^m is C(m, l); the system is unitriangular
            solved: list[int] = []
            for m in range(n + 1):
                solved.append(eigen[m] - sum(solved[l] * comb(m, l) for l in range(m)))
            terms = {f"g{l}": c for l, c in enumerate(solved) if c}
            products[(f"g{r}", f"g{rp}")] = FreeElement(ZZ, terms)
    return StructureAlgebra(f"divided-power-oracle-{n}", ZZ, basis, "g0", products)


def _degree_of_level(level: int, grading: str) -> int:
    if grading == "curve":
        return level
    if grading == "k3":
        # surface-type grading: levels sit in even degrees, odd projectors vanish
        return 2 * level
    raise ValueError(f"bad grading {grading!r}: expected 'curve' or 'k3'")


def kunneth_idempotents(n: int, grading: str = "curve") -> ProjectorSystem:
    """The inverse binomial transform of the g-basis.

    e_m = sum over r >= m of (-1)^(r-m) C(r, m) g_r inverts the eigenvalue
    matrix C(m, r), so e_m acts as the rank-one projector onto level m.
    Coefficients are integers; the system lives over Z.
    """
    algebra = divided_power_algebra(n)
    projectors: dict[int, FreeElement] = {}
    for m in range(n + 1):
        terms = {f"g{r}": (-1) ** (r - m) * comb(r, m) for r in range(m, n + 1)}
        projectors[_degree_of_level(m, grading)] = FreeElement(ZZ, terms)
    return ProjectorSystem(algebra, projectors, f"divided-power-{n}-{grading}")


def factorial_commutator_check(r: int, n: int) -> Check:
    """raise^r lower^r acts on x^m as the scalar r! * C(m, r), for m <= n."""
    word = raise_lower_word(r)
    scale = factorial(r)
    name = f"raise^{r} lower^{r} == {r}! * diag(C(m,{r}))"
    for m in range(n + 1):
        expected = TruncatedPolynomial.monomial(m, n).scaled(scale * comb(m, r))
        actual = apply_word(word, TruncatedPolynomial.monomial(m, n))
        if actual != expected:
            return failed(f"{name} @ x^{m}", str(actual), str(expected))
    return passed(name)


def divided_power_realization(n: int, grading: str = "curve",
                              ranks: Mapping[int, int] | None = None) -> GradedRealization:
    """Block realization: g_r acts on the level-m slot as C(m, r) * identity."""
    ranks = dict(ranks or {})
    slots = []
    for m in range(n + 1):
        degree = _degree_of_level(m, grading)
        slots.append((degree, ranks.get(degree, 1)))
    images = {}
    for r in range(n + 1):
        blocks = [Matrix.identity(rank).scaled(comb(m, r))
                  for m, (_, rank) in enumerate(slots)]
        images[f"g{r}"] = Matrix.block_diag(blocks)
    return GradedRealization(tuple(slots), images)
