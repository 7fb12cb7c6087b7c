"""Structure-constant algebras with partially known product tables.

A table may leave basis pairs undefined. Operations that hit an undefined
pair report exactly which pairs were missing instead of guessing a value, so
every downstream check carries a ternary PASS/FAIL/UNKNOWN outcome.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iter_product
from typing import Iterable, Mapping, Sequence

from .reports import Check, Verdict, VerificationReport, failed, passed, unknown
from .scalars import CoefficientRing, FreeElement

_FORBIDDEN_SYMBOL_CHARS = set("* \t\n")


class UnsupportedSymbolError(ValueError):
    """An element mentions a symbol outside the algebra's basis."""


class InvolutionAbsentError(ValueError):
    """A transpose was requested on an algebra with no involution."""


class UnknownProductError(Exception):
    """A computation needed products the table does not define."""

    def __init__(self, missing: Iterable[tuple[str, str]]):
        self.missing = tuple(missing)
        pairs = ", ".join(f"({a},{b})" for a, b in self.missing)
        super().__init__(f"undetermined products: {pairs}")


@dataclass(frozen=True)
class CompositionResult:
    """Either a computed element or the exact list of missing basis pairs.

    No partial values: if anything was missing, `value` is None.
    """

    value: FreeElement | None
    missing: tuple[tuple[str, str], ...] = ()

    @property
    def known(self) -> bool:
        return self.value is not None

    def require(self) -> FreeElement:
        if self.value is None:
            raise UnknownProductError(self.missing)
        return self.value


class StructureAlgebra:
    """Finite-basis algebra given by an explicit, possibly partial, table.

    The unit's products are implicit and always defined. An optional
    involution (an involutive bijection on the basis fixing the unit) models
    transposition of correspondences.
    """

    __slots__ = ("_name", "_ring", "_basis", "_unit", "_products", "_involution")

    def __init__(self, name: str, ring: CoefficientRing, basis: Sequence[str],
                 unit: str, products: Mapping[tuple[str, str], FreeElement],
                 involution: Mapping[str, str] | None = None):
        basis = tuple(basis)
        if not basis:
            raise ValueError("basis must be nonempty")
        if len(set(basis)) != len(basis):
            raise ValueError("basis symbols must be distinct")
        for symbol in basis:
            if not symbol or _FORBIDDEN_SYMBOL_CHARS & set(symbol):
                raise ValueError(f"bad basis symbol {symbol!r}")
        if unit not in basis:
            raise ValueError(f"unit {unit!r} not in basis")

        table: dict[tuple[str, str], FreeElement] = {}
        for (a, b), value in products.items():
            if a not in basis or b not in basis:
                raise ValueError(f"product key ({a!r},{b!r}) mentions unknown symbols")
            ring.merged(value.ring)
            bad = set(value.support()) - set(basis)
            if bad:
                raise ValueError(f"product ({a},{b}) mentions unknown symbols {sorted(bad)}")
            if a == unit or b == unit:
                expected = FreeElement.basis(b if a == unit else a, ring)
                if value != expected:
                    raise ValueError(f"explicit unit product ({a},{b}) contradicts the unit law")
                continue  # unit products stay implicit
            table[(a, b)] = value

        if involution is not None:
            involution = dict(involution)
            if set(involution) != set(basis):
                raise ValueError("involution must be defined on exactly the basis")
            for symbol, image in involution.items():
                if image not in basis or involution[image] != symbol:
                    raise ValueError(f"involution is not involutive at {symbol!r}")
            if involution[unit] != unit:
                raise ValueError("involution must fix the unit")

        self._name = name
        self._ring = ring
        self._basis = basis
        self._unit = unit
        self._products = table
        self._involution = involution

    @property
    def name(self) -> str:
        return self._name

    @property
    def ring(self) -> CoefficientRing:
        return self._ring

    @property
    def basis(self) -> tuple[str, ...]:
        return self._basis

    @property
    def unit(self) -> str:
        return self._unit

    @property
    def has_involution(self) -> bool:
        return self._involution is not None

    @property
    def involution_map(self) -> dict[str, str] | None:
        return dict(self._involution) if self._involution is not None else None

    def element(self, symbol: str) -> FreeElement:
        if symbol not in self._basis:
            raise UnsupportedSymbolError(f"{symbol!r} not in basis of {self._name}")
        return FreeElement.basis(symbol, self._ring)

    def unit_element(self) -> FreeElement:
        return FreeElement.basis(self._unit, self._ring)

    def zero(self) -> FreeElement:
        return FreeElement.zero(self._ring)

    def product(self, a: str, b: str) -> FreeElement | None:
        """Table lookup for a basis pair; None means undefined."""
        if a not in self._basis or b not in self._basis:
            raise UnsupportedSymbolError(f"({a!r},{b!r}) not in basis of {self._name}")
        if a == self._unit:
            return FreeElement.basis(b, self._ring)
        if b == self._unit:
            return FreeElement.basis(a, self._ring)
        return self._products.get((a, b))

    def defined_pairs(self) -> tuple[tuple[str, str], ...]:
        """Stored non-unit pairs, sorted."""
        return tuple(sorted(self._products))

    def is_fully_defined(self) -> bool:
        non_unit = [s for s in self._basis if s != self._unit]
        return all((a, b) in self._products for a in non_unit for b in non_unit)

    def check_supported(self, element: FreeElement) -> None:
        self._ring.merged(element.ring)
        bad = set(element.support()) - set(self._basis)
        if bad:
            raise UnsupportedSymbolError(
                f"element mentions symbols {sorted(bad)} outside basis of {self._name}")

    def compose(self, x: FreeElement, y: FreeElement) -> CompositionResult:
        """Bilinear extension of the table.

        If any needed pair is undefined the result is Unknown and lists every
        missing pair; no partial value is returned.
        """
        self.check_supported(x)
        self.check_supported(y)
        missing = sorted(
            (a, b)
            for a in x.support() for b in y.support()
            if self.product(a, b) is None
        )
        if missing:
            return CompositionResult(None, tuple(missing))
        acc = self.zero()
        for a, ca in x.fractions():
            for b, cb in y.fractions():
                acc = acc + self.product(a, b).scaled(ca * cb)
        return CompositionResult(acc, ())

    def transpose_symbol(self, symbol: str) -> str:
        if self._involution is None:
            raise InvolutionAbsentError(f"{self._name} has no involution")
        if symbol not in self._basis:
            raise UnsupportedSymbolError(f"{symbol!r} not in basis of {self._name}")
        return self._involution[symbol]

    def transpose(self, x: FreeElement) -> FreeElement:
        """Symbol-wise transpose; linear, always defined when an involution is."""
        if self._involution is None:
            raise InvolutionAbsentError(f"{self._name} has no involution")
        self.check_supported(x)
        return FreeElement(self._ring,
                           {self._involution[s]: c for s, c in x.fractions()})


def compose(x: FreeElement, y: FreeElement, algebra: StructureAlgebra) -> CompositionResult:
    return algebra.compose(x, y)


def transpose(x: FreeElement, algebra: StructureAlgebra) -> FreeElement:
    return algebra.transpose(x)


def _resolve_symbols(algebra: StructureAlgebra,
                     restrict: Sequence[str] | None) -> tuple[str, ...]:
    if restrict is None:
        return algebra.basis
    symbols = tuple(restrict)
    bad = set(symbols) - set(algebra.basis)
    if bad:
        raise UnsupportedSymbolError(f"restriction mentions unknown symbols {sorted(bad)}")
    return symbols


def check_associativity(algebra: StructureAlgebra,
                        restrict: Sequence[str] | None = None) -> VerificationReport:
    """Brute-force (a∘b)∘c = a∘(b∘c) over all basis triples.

    Triples that need an undefined product are reported UNKNOWN, not failed.
    Passing triples are counted, not listed.
    """
    symbols = _resolve_symbols(algebra, restrict)
    checks: list[Check] = []
    n_pass = 0
    for a, b, c in iter_product(symbols, repeat=3):
        ea, eb, ec = (algebra.element(s) for s in (a, b, c))
        missing: set[tuple[str, str]] = set()
        left = right = None
        ab = algebra.compose(ea, eb)
        if ab.known:
            left_res = algebra.compose(ab.value, ec)
            missing.update(left_res.missing)
            left = left_res.value
        else:
            missing.update(ab.missing)
        bc = algebra.compose(eb, ec)
        if bc.known:
            right_res = algebra.compose(ea, bc.value)
            missing.update(right_res.missing)
            right = right_res.value
        else:
            missing.update(bc.missing)
        name = f"assoc({a},{b},{c})"
        if missing:
            checks.append(unknown(name, sorted(missing)))
        elif left != right:
            checks.append(failed(name, str(left), str(right)))
        else:
            n_pass += 1
    stats = {"triples": len(symbols) ** 3, "unlisted_pass": n_pass}
    return VerificationReport(f"associativity:{algebra.name}", tuple(checks), stats)


def check_commutativity(algebra: StructureAlgebra,
                        restrict: Sequence[str] | None = None) -> VerificationReport:
    """a∘b = b∘a over unordered basis pairs where at least one order is defined."""
    symbols = [s for s in _resolve_symbols(algebra, restrict) if s != algebra.unit]
    checks: list[Check] = []
    n_pass = 0
    n_pairs = 0
    for i, a in enumerate(symbols):
        for b in symbols[i:]:
            ab = algebra.product(a, b)
            ba = algebra.product(b, a)
            if ab is None and ba is None:
                continue
            n_pairs += 1
            name = f"comm({a},{b})"
            if ab is None or ba is None:
                gap = (a, b) if ab is None else (b, a)
                checks.append(unknown(name, [gap]))
            elif ab != ba:
                checks.append(failed(name, str(ab), str(ba)))
            else:
                n_pass += 1
    stats = {"pairs": n_pairs, "unlisted_pass": n_pass}
    return VerificationReport(f"commutativity:{algebra.name}", tuple(checks), stats)


def check_transpose_antiautomorphism(algebra: StructureAlgebra) -> VerificationReport:
    """t(a∘b) = t(b)∘t(a) over every defined pair whose mirror is also defined."""
    if not algebra.has_involution:
        raise InvolutionAbsentError(f"{algebra.name} has no involution")
    checks: list[Check] = []
    n_pass = 0
    pairs = algebra.defined_pairs()
    for a, b in pairs:
        value = algebra.product(a, b)
        ta, tb = algebra.transpose_symbol(a), algebra.transpose_symbol(b)
        mirror = algebra.product(tb, ta)
        name = f"antiauto({a},{b})"
        if mirror is None:
            checks.append(unknown(name, [(tb, ta)]))
        elif algebra.transpose(value) != mirror:
            checks.append(failed(name, str(algebra.transpose(value)), str(mirror)))
        else:
            n_pass += 1
    stats = {"pairs": len(pairs), "unlisted_pass": n_pass}
    return VerificationReport(f"transpose:{algebra.name}", tuple(checks), stats)


def decompose_by_system(element: FreeElement, system) -> dict[int, FreeElement]:
    """Graded components g∘ϖⁱ of an element against a projector system.

    For a verified system the components sum back to the element. Unknown
    products propagate as UnknownProductError.
    """
    algebra: StructureAlgebra = system.algebra
    algebra.check_supported(element)
    components: dict[int, FreeElement] = {}
    missing: set[tuple[str, str]] = set()
    for degree in sorted(system.projectors):
        result = algebra.compose(element, system.projectors[degree])
        if result.known:
            components[degree] = result.value
        else:
            missing.update(result.missing)
    if missing:
        raise UnknownProductError(sorted(missing))
    return components
