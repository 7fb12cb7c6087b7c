"""Complete orthogonal projector systems and constructions on them.

A system assigns one element per degree; absent degrees mean the zero
projector. Verification checks the axioms (sum to unit, pairwise orthogonal,
idempotent) and, when a realization is supplied, that each projector maps to
the Künneth target of its degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .algebra_core import StructureAlgebra
from .realization import GradedRealization, kunneth_target, realize
from .reports import Check, VerificationReport, failed, passed, unknown
from .scalars import (CoefficientRing, FreeElement, NotDivisibleError, ZZ,
                      exact_divide)

TENSOR_SEPARATOR = "⊗"


class SystemPreconditionError(Exception):
    """A construction required a verified system and got a failing one."""

    def __init__(self, label: str, report: VerificationReport):
        self.label = label
        self.report = report
        super().__init__(f"system {label!r} has failing identities")


@dataclass(frozen=True, eq=False)
class ProjectorSystem:
    """A labelled family of candidate projectors, keyed by degree."""

    algebra: StructureAlgebra
    projectors: Mapping[int, FreeElement]
    label: str

    def __post_init__(self):
        clean: dict[int, FreeElement] = {}
        for degree in sorted(self.projectors):
            if not isinstance(degree, int) or degree < 0:
                raise ValueError(f"bad degree {degree!r}")
            element = self.projectors[degree]
            self.algebra.check_supported(element)
            clean[degree] = element
        object.__setattr__(self, "projectors", clean)

    def degrees(self) -> tuple[int, ...]:
        return tuple(self.projectors)


def verify_system(system: ProjectorSystem,
                  realization: GradedRealization | None = None) -> VerificationReport:
    """Check the projector axioms, every identity listed individually.

    Completeness is exact over the declared ring. Identities that need
    undefined products come back UNKNOWN with the missing pairs named.
    """
    algebra = system.algebra
    checks: list[Check] = []
    degrees = sorted(system.projectors)

    total = FreeElement.zero(algebra.ring)
    for degree in degrees:
        total = total + system.projectors[degree]
    unit = algebra.unit_element()
    name = "complete"
    checks.append(passed(name) if total == unit else failed(name, str(total), str(unit)))

    for i in degrees:
        p = system.projectors[i]
        result = algebra.compose(p, p)
        name = f"idem[{i}]"
        if not result.known:
            checks.append(unknown(name, result.missing))
        elif result.value != p:
            checks.append(failed(name, str(result.value), str(p)))
        else:
            checks.append(passed(name))

    zero = algebra.zero()
    for i in degrees:
        for j in degrees:
            if i == j:
                continue
            result = algebra.compose(system.projectors[i], system.projectors[j])
            name = f"orth[{i},{j}]"
            if not result.known:
                checks.append(unknown(name, result.missing))
            elif result.value != zero:
                checks.append(failed(name, str(result.value), "0"))
            else:
                checks.append(passed(name))

    if realization is not None:
        for i in degrees:
            image = realize(system.projectors[i], realization)
            target = kunneth_target(realization.slots, i)
            name = f"target[{i}]"
            checks.append(passed(name) if image == target
                          else failed(name, str(image), str(target)))

    return VerificationReport(system.label, tuple(checks))


def tensor_symbol(a: str, b: str) -> str:
    return f"{a}{TENSOR_SEPARATOR}{b}"


def tensor_algebras(left: StructureAlgebra, right: StructureAlgebra) -> StructureAlgebra:
    """Product algebra on pairwise tensor symbols.

    A tensor pair's product is defined exactly when both factor products are;
    the involution (if both factors carry one) acts factorwise.
    """
    ring = left.ring.merged(right.ring)
    basis = tuple(tensor_symbol(a, b) for a in left.basis for b in right.basis)
    unit = tensor_symbol(left.unit, right.unit)

    products: dict[tuple[str, str], FreeElement] = {}
    for a1 in left.basis:
        for b1 in right.basis:
            s1 = tensor_symbol(a1, b1)
            if s1 == unit:
                continue
            for a2 in left.basis:
                for b2 in right.basis:
                    s2 = tensor_symbol(a2, b2)
                    if s2 == unit:
                        continue
                    p_left = left.product(a1, a2)
                    p_right = right.product(b1, b2)
                    if p_left is None or p_right is None:
                        continue
                    terms: dict[str, object] = {}
                    for sa, ca in p_left.fractions():
                        for sb, cb in p_right.fractions():
                            key = tensor_symbol(sa, sb)
                            terms[key] = terms.get(key, 0) + ca * cb
                    products[(s1, s2)] = FreeElement(ring, terms)

    involution = None
    if left.has_involution and right.has_involution:
        involution = {
            tensor_symbol(a, b): tensor_symbol(left.transpose_symbol(a),
                                               right.transpose_symbol(b))
            for a in left.basis for b in right.basis
        }

    name = f"{left.name}{TENSOR_SEPARATOR}{right.name}"
    return StructureAlgebra(name, ring, basis, unit, products, involution)


def tensor_elements(x: FreeElement, y: FreeElement,
                    ring: CoefficientRing) -> FreeElement:
    terms: dict[str, object] = {}
    for sa, ca in x.fractions():
        for sb, cb in y.fractions():
            key = tensor_symbol(sa, sb)
            terms[key] = terms.get(key, 0) + ca * cb
    return FreeElement(ring, terms)


def tensor_systems(left: ProjectorSystem, right: ProjectorSystem) -> ProjectorSystem:
    """Tensor of two systems with degrees convolved: the degree-i projector
    is the sum of p⊗q pieces over p + q = i.

    Both inputs must verify with no failing identity (UNKNOWNs are allowed).
    """
    for system in (left, right):
        report = verify_system(system)
        if report.has_failures:
            raise SystemPreconditionError(system.label, report)
    algebra = tensor_algebras(left.algebra, right.algebra)
    ring = algebra.ring
    projectors: dict[int, FreeElement] = {}
    for p, ep in left.projectors.items():
        for q, eq in right.projectors.items():
            piece = tensor_elements(ep, eq, ring)
            degree = p + q
            if degree in projectors:
                projectors[degree] = projectors[degree] + piece
            else:
                projectors[degree] = piece
    label = f"{left.label}{TENSOR_SEPARATOR}{right.label}"
    return ProjectorSystem(algebra, projectors, label)


def trivial_algebra(ring: CoefficientRing = ZZ) -> StructureAlgebra:
    """Rank one: the unit alone. Trivially fully defined."""
    return StructureAlgebra("trivial", ring, ("u",), "u", {})


def trivial_system(ring: CoefficientRing = ZZ) -> ProjectorSystem:
    algebra = trivial_algebra(ring)
    return ProjectorSystem(algebra, {0: algebra.unit_element()}, "trivial")


def split_unit_algebra(ring: CoefficientRing = ZZ) -> StructureAlgebra:
    """Two-dimensional model with one nontrivial idempotent w."""
    basis = ("d", "w")
    products = {("w", "w"): FreeElement(ring, {"w": 1})}
    return StructureAlgebra("split-unit", ring, basis, "d", products)


def split_unit_system(ring: CoefficientRing = ZZ) -> ProjectorSystem:
    algebra = split_unit_algebra(ring)
    w = algebra.element("w")
    complement = algebra.unit_element() - w
    return ProjectorSystem(algebra, {0: w, 1: complement}, "split-unit")


def stabilize_system(system: ProjectorSystem) -> ProjectorSystem:
    """Tensor with the trivial rank-one system; degrees are unchanged."""
    return tensor_systems(system, trivial_system(system.algebra.ring))


def _apply_transport(transport: Mapping[str, FreeElement],
                     element: FreeElement, target: StructureAlgebra) -> FreeElement:
    acc = target.zero()
    for symbol, coeff in element.fractions():
        acc = acc + transport[symbol].scaled(coeff)
    return acc


def _validate_transport(transport: Mapping[str, FreeElement],
                        source: StructureAlgebra, target: StructureAlgebra) -> None:
    if set(transport) != set(source.basis):
        raise ValueError("transport must be defined on exactly the source basis")
    for image in transport.values():
        target.check_supported(image)


def scaled_transport_check(transport: Mapping[str, FreeElement], scale: int,
                           source: StructureAlgebra,
                           target: StructureAlgebra) -> VerificationReport:
    """Check T(a)∘T(b) = scale·T(a∘b) on all source pairs with defined products.

    scale = 1 is the plain homomorphism case.
    """
    _validate_transport(transport, source, target)
    checks: list[Check] = []
    for a in source.basis:
        for b in source.basis:
            prod = source.product(a, b)
            name = f"transport[{a},{b}]"
            if prod is None:
                checks.append(unknown(name, [(a, b)]))
                continue
            lhs = target.compose(transport[a], transport[b])
            rhs = _apply_transport(transport, prod, target).scaled(scale)
            if not lhs.known:
                checks.append(unknown(name, lhs.missing))
            elif lhs.value != rhs:
                checks.append(failed(name, str(lhs.value), str(rhs)))
            else:
                checks.append(passed(name))
    return VerificationReport(f"transport:{source.name}->{target.name}", tuple(checks))


def pushforward_construct(system: ProjectorSystem,
                          transport: Mapping[str, FreeElement], scale: int,
                          target: StructureAlgebra) -> ProjectorSystem:
    """Candidate system on the target: map each projector, divide by scale.

    Requires T(unit) = scale·unit. Division failures (NotDivisibleError)
    propagate; the caller re-verifies the result.
    """
    source = system.algebra
    _validate_transport(transport, source, target)
    unit_image = _apply_transport(transport, source.unit_element(), target)
    expected = target.unit_element().scaled(scale)
    if unit_image != expected:
        raise ValueError(
            f"transport sends the unit to {unit_image}, expected {expected}")
    projectors = {
        degree: exact_divide(_apply_transport(transport, element, target), scale)
        for degree, element in system.projectors.items()
    }
    return ProjectorSystem(target, projectors, f"pushforward:{system.label}")
