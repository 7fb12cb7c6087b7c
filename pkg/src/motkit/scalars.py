"""Exact coefficient arithmetic and free-module elements.

Coefficients are reduced fractions constrained to a declared coefficient ring
(Z, Z with finitely many primes inverted, or Q), so integral and rational
computations share one code path and divisibility questions stay decidable.
No floating point anywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Sequence, Union


class RingMismatchError(ValueError):
    """Operands belong to different coefficient rings."""


class NotDivisibleError(ArithmeticError):
    """Exact division would push a coefficient outside its ring."""

    def __init__(self, symbol: str, coefficient: "ExactScalar", divisor: int):
        self.symbol = symbol
        self.coefficient = coefficient
        self.divisor = divisor
        super().__init__(
            f"coefficient {coefficient} of {symbol!r} is not divisible "
            f"by {divisor} over {coefficient.ring}"
        )


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=None)
def _prime_factors(n: int) -> frozenset[int]:
    # denominators stay tiny in practice; trial division is plenty
    out = set()
    f = 2
    while f * f <= n:
        while n % f == 0:
            out.add(f)
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.add(n)
    return frozenset(out)


@dataclass(frozen=True)
class CoefficientRing:
    """Z, Z with a finite set of primes inverted, or all of Q.

    Membership test: p/q (reduced) lies in the ring iff every prime factor of
    q is inverted, or the ring is rational.
    """

    inverted_primes: frozenset[int] = frozenset()
    rational: bool = False

    def __post_init__(self):
        primes = frozenset() if self.rational else frozenset(self.inverted_primes)
        object.__setattr__(self, "inverted_primes", primes)
        for p in primes:
            if not isinstance(p, int) or not _is_prime(p):
                raise ValueError(f"inverted element {p!r} is not a prime")

    @staticmethod
    def integers() -> "CoefficientRing":
        return CoefficientRing()

    @staticmethod
    def rationals() -> "CoefficientRing":
        return CoefficientRing(rational=True)

    @staticmethod
    def with_inverted(*primes: int) -> "CoefficientRing":
        return CoefficientRing(inverted_primes=frozenset(primes))

    def admits(self, value: Fraction) -> bool:
        if self.rational:
            return True
        return _prime_factors(value.denominator) <= self.inverted_primes

    def merged(self, other: "CoefficientRing") -> "CoefficientRing":
        if self != other:
            raise RingMismatchError(f"ring mismatch: {self} vs {other}")
        return self

    def __str__(self) -> str:
        if self.rational:
            return "Q"
        if not self.inverted_primes:
            return "Z"
        return "Z[%s]" % ",".join(f"1/{p}" for p in sorted(self.inverted_primes))

    def to_json(self) -> Union[str, dict]:
        if self.rational:
            return "Q"
        if not self.inverted_primes:
            return {}
        return {"invert": sorted(self.inverted_primes)}

    @staticmethod
    def from_json(obj) -> "CoefficientRing":
        if obj == "Q":
            return CoefficientRing.rationals()
        if isinstance(obj, dict):
            extra = set(obj) - {"invert"}
            if extra:
                raise ValueError(f"unexpected ring keys {sorted(extra)}")
            primes = obj.get("invert", [])
            if not isinstance(primes, list):
                raise ValueError("'invert' must be a list of primes")
            return CoefficientRing.with_inverted(*primes)
        raise ValueError(f"bad ring spec {obj!r}: expected \"Q\" or an object")


ZZ = CoefficientRing.integers()
QQ = CoefficientRing.rationals()

_SCALAR_RE = re.compile(r"^-?\d+(?:/[1-9]\d*)?$")


@dataclass(frozen=True)
class ExactScalar:
    """A reduced fraction tagged with the ring it must lie in."""

    value: Fraction
    ring: CoefficientRing = ZZ

    def __post_init__(self):
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))
        if not self.ring.admits(self.value):
            raise ValueError(f"{self.value} does not lie in {self.ring}")

    @staticmethod
    def of(numerator: int, denominator: int = 1, *, ring: CoefficientRing = ZZ) -> "ExactScalar":
        return ExactScalar(Fraction(numerator, denominator), ring)

    @staticmethod
    def from_string(text: str, ring: CoefficientRing = ZZ) -> "ExactScalar":
        """Parse "p" or "p/q". The string must be in lowest terms with q > 0."""
        if not isinstance(text, str) or not _SCALAR_RE.match(text):
            raise ValueError(f"bad scalar literal {text!r}: expected 'p' or 'p/q'")
        value = Fraction(text)
        if _format_fraction(value) != text:
            raise ValueError(f"scalar literal {text!r} is not in lowest terms")
        return ExactScalar(value, ring)

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def _coerce(self, other) -> "ExactScalar":
        if isinstance(other, ExactScalar):
            self.ring.merged(other.ring)
            return other
        if isinstance(other, int):
            return ExactScalar(Fraction(other), self.ring)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ExactScalar(self.value + other.value, self.ring)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ExactScalar(self.value - other.value, self.ring)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ExactScalar(self.value * other.value, self.ring)

    __rmul__ = __mul__

    def __neg__(self):
        return ExactScalar(-self.value, self.ring)

    def __str__(self) -> str:
        return _format_fraction(self.value)


def _format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class FreeElement:
    """Finite formal linear combination of named basis symbols.

    Canonical form: zero coefficients absent, terms iterated sorted by symbol.
    Equality is syntactic on the canonical form. Instances are immutable.
    """

    __slots__ = ("_ring", "_terms")

    def __init__(self, ring: CoefficientRing,
                 terms: Mapping[str, Union[int, Fraction, ExactScalar]] = {}):
        clean: dict[str, Fraction] = {}
        for symbol in sorted(terms):
            if not isinstance(symbol, str) or not symbol:
                raise ValueError(f"bad basis symbol {symbol!r}")
            coeff = terms[symbol]
            if isinstance(coeff, ExactScalar):
                ring.merged(coeff.ring)
                coeff = coeff.value
            coeff = Fraction(coeff)
            if not ring.admits(coeff):
                raise ValueError(f"coefficient {coeff} of {symbol!r} not in {ring}")
            if coeff:
                clean[symbol] = coeff
        self._ring = ring
        self._terms = clean

    @staticmethod
    def zero(ring: CoefficientRing) -> "FreeElement":
        return FreeElement(ring)

    @staticmethod
    def basis(symbol: str, ring: CoefficientRing) -> "FreeElement":
        return FreeElement(ring, {symbol: 1})

    @property
    def ring(self) -> CoefficientRing:
        return self._ring

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def support(self) -> tuple[str, ...]:
        return tuple(self._terms)

    def coefficient(self, symbol: str) -> ExactScalar:
        return ExactScalar(self._terms.get(symbol, Fraction(0)), self._ring)

    def items(self) -> Iterator[tuple[str, ExactScalar]]:
        for symbol, coeff in self._terms.items():
            yield symbol, ExactScalar(coeff, self._ring)

    def fractions(self) -> Iterator[tuple[str, Fraction]]:
        yield from self._terms.items()

    def _key(self):
        return (self._ring, tuple(self._terms.items()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __add__(self, other: "FreeElement") -> "FreeElement":
        if not isinstance(other, FreeElement):
            return NotImplemented
        self._ring.merged(other._ring)
        merged = dict(self._terms)
        for symbol, coeff in other._terms.items():
            merged[symbol] = merged.get(symbol, Fraction(0)) + coeff
        return FreeElement(self._ring, merged)

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "FreeElement":
        return FreeElement(self._ring, {s: -c for s, c in self._terms.items()})

    def scaled(self, factor: Union[int, Fraction, ExactScalar]) -> "FreeElement":
        if isinstance(factor, ExactScalar):
            self._ring.merged(factor.ring)
            factor = factor.value
        factor = Fraction(factor)
        return FreeElement(self._ring, {s: c * factor for s, c in self._terms.items()})

    def __rmul__(self, factor):
        if isinstance(factor, (int, Fraction)):
            return self.scaled(factor)
        return NotImplemented

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for symbol, coeff in self._terms.items():
            mag = abs(coeff)
            body = symbol if mag == 1 else f"{_format_fraction(mag)} {symbol}"
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"{' + ' if coeff > 0 else ' - '}{body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"FreeElement({self})"


def linear_combine(coefficients: Sequence[Union[int, Fraction, ExactScalar]],
                   elements: Sequence[FreeElement],
                   *, ring: CoefficientRing | None = None) -> FreeElement:
    """Sum of coefficient * element, in canonical form.

    Sequences must have equal length; all elements must share one ring.
    """
    if len(coefficients) != len(elements):
        raise ValueError(
            f"length mismatch: {len(coefficients)} coefficients, {len(elements)} elements")
    if ring is None:
        if not elements:
            raise ValueError("cannot infer ring from empty input")
        ring = elements[0].ring
    acc = FreeElement.zero(ring)
    for coeff, element in zip(coefficients, elements):
        ring.merged(element.ring)
        acc = acc + element.scaled(coeff)
    return acc


def exact_divide(element: FreeElement, divisor: int) -> FreeElement:
    """Divide every coefficient by an integer, staying inside the ring.

    Raises NotDivisibleError naming the first offending symbol. Never rounds.
    """
    if not isinstance(divisor, int) or divisor == 0:
        raise ValueError(f"divisor must be a nonzero integer, got {divisor!r}")
    ring = element.ring
    out: dict[str, Fraction] = {}
    for symbol, coeff in element.fractions():
        candidate = coeff / divisor
        if not ring.admits(candidate):
            raise NotDivisibleError(symbol, ExactScalar(coeff, ring), divisor)
        out[symbol] = candidate
    return FreeElement(ring, out)
