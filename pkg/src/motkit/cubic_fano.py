"""Incidence calculus on the variety of lines of a cubic hypersurface.

Zero-cycles on the variety of lines F, 1-cycles on the ambient cubic X, and
the middle-dimensional cycles connecting them are modeled as a sorted term
language with two transfer operators (phi: curves to middle cycles, psi:
points to curves) and the incidence operator istar = phi after psi. A small
rewrite system encodes the known intersection relations; exhaustive rewriting
plus degree bookkeeping derives the three-generator composition algebra on
{identity, point-times-everything, incidence-squared} from the rules alone.
The hard-coded algebra table, its projector system over Z[1/2], and a matrix
realization are kept as independent code paths so the derivation can be
checked against them.

Termination: on a single product-free monomial every core rule strictly
decreases (#istar + #mul, #hyperplane-constants) lexicographically, and a
rewrite step replaces one monomial of the expression's semantic linear form
by finitely many smaller ones, so the multiset ordering bounds the core
steps; between them the distribution rules terminate on their own (each one
strictly shrinks a polynomial weight of the tree). The engine still enforces
a step budget and raises rather than looping.

Confluence is not assumed: it is tested empirically by normalizing a fixed
expression corpus under many randomized rule schedules and comparing the
collected linear forms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Mapping, Sequence

from .algebra_core import StructureAlgebra
from .matrices import Matrix
from .projector_systems import ProjectorSystem
from .realization import GradedRealization
from .scalars import CoefficientRing, FreeElement, exact_divide


class SortError(ValueError):
    """An expression was built or used against the sort discipline."""


class DerivationError(Exception):
    """A derivation produced something outside the expected normal forms."""


class RewriteLimitError(RuntimeError):
    """The step budget ran out before a normal form was reached."""


# ---------------------------------------------------------------------------
# polynomial scalars

Monomial = tuple[str, ...]


@dataclass(frozen=True)
class SPoly:
    """Integer polynomial in named formal scalars (symbolic degrees etc.).

    Canonical form: monomials are sorted variable tuples, terms are sorted,
    zero coefficients absent.
    """

    terms: tuple[tuple[Monomial, int], ...] = ()

    def __post_init__(self):
        clean: dict[Monomial, int] = {}
        for mono, coeff in self.terms:
            mono = tuple(sorted(mono))
            if any(not isinstance(v, str) or not v for v in mono):
                raise ValueError(f"bad variable in monomial {mono!r}")
            if not isinstance(coeff, int):
                raise ValueError(f"non-integer coefficient {coeff!r}")
            clean[mono] = clean.get(mono, 0) + coeff
        normalized = tuple(sorted((m, c) for m, c in clean.items() if c))
        object.__setattr__(self, "terms", normalized)

    @staticmethod
    def const(n: int) -> "SPoly":
        return SPoly((((), n),))

    @staticmethod
    def var(name: str) -> "SPoly":
        return SPoly((((name,), 1),))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def as_int(self) -> int | None:
        """The constant value, or None if any variable survives."""
        if self.is_zero:
            return 0
        if len(self.terms) == 1 and self.terms[0][0] == ():
            return self.terms[0][1]
        return None

    def __add__(self, other: "SPoly") -> "SPoly":
        return SPoly(self.terms + other.terms)

    def __sub__(self, other: "SPoly") -> "SPoly":
        return self + (-other)

    def __neg__(self) -> "SPoly":
        return SPoly(tuple((m, -c) for m, c in self.terms))

    def __mul__(self, other: "SPoly") -> "SPoly":
        out = []
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                out.append((m1 + m2, c1 * c2))
        return SPoly(tuple(out))

    def scaled(self, factor: int) -> "SPoly":
        return SPoly(tuple((m, factor * c) for m, c in self.terms))

    def divide_by_var(self, name: str) -> "SPoly":
        """Remove one factor of a variable from every monomial."""
        out = []
        for mono, coeff in self.terms:
            if name not in mono:
                raise DerivationError(
                    f"{self} is not divisible by {name}: monomial {_format_monomial(mono) or '1'}")
            reduced = list(mono)
            reduced.remove(name)
            out.append((tuple(reduced), coeff))
        return SPoly(tuple(out))

    def substitute(self, name: str, value: int) -> "SPoly":
        out = []
        for mono, coeff in self.terms:
            power = sum(1 for v in mono if v == name)
            rest = tuple(v for v in mono if v != name)
            out.append((rest, coeff * value ** power))
        return SPoly(tuple(out))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, coeff in self.terms:
            body = _format_monomial(mono)
            if not body:
                text = str(abs(coeff))
            elif abs(coeff) == 1:
                text = body
            else:
                text = f"{abs(coeff)} {body}"
            if not parts:
                parts.append(text if coeff > 0 else f"-{text}")
            else:
                parts.append(f"{' + ' if coeff > 0 else ' - '}{text}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"SPoly({self})"


def _format_monomial(mono: Monomial) -> str:
    pieces = []
    for name in sorted(set(mono)):
        power = mono.count(name)
        pieces.append(name if power == 1 else f"{name}^{power}")
    return " ".join(pieces)


def _as_spoly(value) -> SPoly:
    if isinstance(value, SPoly):
        return value
    if isinstance(value, int):
        return SPoly.const(value)
    raise ValueError(f"expected an integer or SPoly, got {value!r}")


# ---------------------------------------------------------------------------
# sorted term language

class Sort(Enum):
    POINT = "point"    # 0-cycles on the variety of lines
    MIDDLE = "middle"  # its middle-dimensional cycles (transfer images)
    CURVE = "curve"    # 1-cycles on the ambient cubic


class CycleExpr:
    """Base class for expression nodes; all nodes are immutable."""

    __slots__ = ()


@dataclass(frozen=True)
class OPoint(CycleExpr):
    """The distinguished degree-1 point class."""


@dataclass(frozen=True)
class HCurve(CycleExpr):
    """The hyperplane-power curve class; degree 3 on a cubic."""


@dataclass(frozen=True)
class Var(CycleExpr):
    """A formal variable with a declared symbolic degree."""

    name: str
    var_sort: Sort
    degree: SPoly

    def __post_init__(self):
        if self.var_sort is Sort.MIDDLE:
            raise SortError("variables must be point- or curve-sorted")
        object.__setattr__(self, "degree", _as_spoly(self.degree))


@dataclass(frozen=True)
class Phi(CycleExpr):
    """Transfer of a curve class to a middle cycle."""

    arg: CycleExpr

    def __post_init__(self):
        _require_sort(self.arg, Sort.CURVE, "phi")


@dataclass(frozen=True)
class Psi(CycleExpr):
    """Transfer of a point class to a curve on the ambient cubic."""

    arg: CycleExpr

    def __post_init__(self):
        _require_sort(self.arg, Sort.POINT, "psi")


@dataclass(frozen=True)
class IStar(CycleExpr):
    """The incidence operator; rewrites to phi after psi."""

    arg: CycleExpr

    def __post_init__(self):
        _require_sort(self.arg, Sort.POINT, "istar")


@dataclass(frozen=True)
class Mul(CycleExpr):
    """Intersection of two middle cycles, yielding a point class."""

    left: CycleExpr
    right: CycleExpr

    def __post_init__(self):
        _require_sort(self.left, Sort.MIDDLE, "mul")
        _require_sort(self.right, Sort.MIDDLE, "mul")


@dataclass(frozen=True)
class Add(CycleExpr):
    left: CycleExpr
    right: CycleExpr

    def __post_init__(self):
        if sort_of(self.left) is not sort_of(self.right):
            raise SortError(
                f"cannot add {sort_of(self.left).value} to {sort_of(self.right).value}")


@dataclass(frozen=True)
class Scale(CycleExpr):
    coeff: SPoly
    arg: CycleExpr

    def __post_init__(self):
        object.__setattr__(self, "coeff", _as_spoly(self.coeff))


def sort_of(expr: CycleExpr) -> Sort:
    if isinstance(expr, OPoint):
        return Sort.POINT
    if isinstance(expr, HCurve):
        return Sort.CURVE
    if isinstance(expr, Var):
        return expr.var_sort
    if isinstance(expr, Phi):
        return Sort.MIDDLE
    if isinstance(expr, Psi):
        return Sort.CURVE
    if isinstance(expr, IStar):
        return Sort.MIDDLE
    if isinstance(expr, Mul):
        return Sort.POINT
    if isinstance(expr, (Add, Scale)):
        return sort_of(expr.left if isinstance(expr, Add) else expr.arg)
    raise SortError(f"not a cycle expression: {expr!r}")


def _require_sort(expr: CycleExpr, expected: Sort, where: str) -> None:
    actual = sort_of(expr)
    if actual is not expected:
        raise SortError(f"{where} needs a {expected.value} argument, got {actual.value}")


def deg_of(expr: CycleExpr) -> SPoly:
    """Symbolic degree of a point or curve expression.

    The product rule (5 times the factor degrees) is forced by the
    psi-of-product relation plus deg(psi(p)) = deg(p); middle cycles that are
    not transfer images carry no degree.
    """
    if isinstance(expr, OPoint):
        return SPoly.const(1)
    if isinstance(expr, HCurve):
        return SPoly.const(3)
    if isinstance(expr, Var):
        return expr.degree
    if isinstance(expr, Psi):
        return deg_of(expr.arg)
    if isinstance(expr, Mul):
        return (_middle_deg(expr.left) * _middle_deg(expr.right)).scaled(5)
    if isinstance(expr, Add):
        return deg_of(expr.left) + deg_of(expr.right)
    if isinstance(expr, Scale):
        return expr.coeff * deg_of(expr.arg)
    raise SortError(f"no degree for a {sort_of(expr).value} expression")


def _middle_deg(expr: CycleExpr) -> SPoly:
    if isinstance(expr, Phi):
        return deg_of(expr.arg)
    if isinstance(expr, IStar):
        return deg_of(expr.arg)
    if isinstance(expr, Add):
        return _middle_deg(expr.left) + _middle_deg(expr.right)
    if isinstance(expr, Scale):
        return expr.coeff * _middle_deg(expr.arg)
    raise SortError(f"middle cycle {render(expr)} is not a transfer image")


def render(expr: CycleExpr) -> str:
    if isinstance(expr, OPoint):
        return "o"
    if isinstance(expr, HCurve):
        return "h"
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Phi):
        return f"phi({render(expr.arg)})"
    if isinstance(expr, Psi):
        return f"psi({render(expr.arg)})"
    if isinstance(expr, IStar):
        return f"istar({render(expr.arg)})"
    if isinstance(expr, Mul):
        return f"({render(expr.left)} . {render(expr.right)})"
    if isinstance(expr, Add):
        return f"({render(expr.left)} + {render(expr.right)})"
    if isinstance(expr, Scale):
        coeff = str(expr.coeff)
        if len(expr.coeff.terms) > 1 or coeff.startswith("-"):
            coeff = f"({coeff})"
        return f"{coeff}*{render(expr.arg)}"
    raise SortError(f"not a cycle expression: {expr!r}")


def _children(expr: CycleExpr) -> tuple[CycleExpr, ...]:
    if isinstance(expr, (Phi, Psi, IStar, Scale)):
        return (expr.arg,)
    if isinstance(expr, (Mul, Add)):
        return (expr.left, expr.right)
    return ()


def _with_children(expr: CycleExpr, children: Sequence[CycleExpr]) -> CycleExpr:
    if isinstance(expr, Phi):
        return Phi(children[0])
    if isinstance(expr, Psi):
        return Psi(children[0])
    if isinstance(expr, IStar):
        return IStar(children[0])
    if isinstance(expr, Scale):
        return Scale(expr.coeff, children[0])
    if isinstance(expr, Mul):
        return Mul(children[0], children[1])
    if isinstance(expr, Add):
        return Add(children[0], children[1])
    return expr


Path = tuple[int, ...]


def subterm_at(expr: CycleExpr, path: Path) -> CycleExpr:
    for index in path:
        expr = _children(expr)[index]
    return expr


def replace_at(expr: CycleExpr, path: Path, replacement: CycleExpr) -> CycleExpr:
    if not path:
        return replacement
    children = list(_children(expr))
    children[path[0]] = replace_at(children[path[0]], path[1:], replacement)
    return _with_children(expr, children)


# ---------------------------------------------------------------------------
# linear forms (canonical collected shape; no rewriting involved)

def _linearize(expr: CycleExpr) -> list[tuple[CycleExpr, SPoly]]:
    if isinstance(expr, Add):
        return _linearize(expr.left) + _linearize(expr.right)
    if isinstance(expr, Scale):
        return [(t, expr.coeff * c) for t, c in _linearize(expr.arg)]
    if isinstance(expr, (Phi, Psi, IStar)):
        rebuilt = []
        for t, c in _linearize(expr.arg):
            rebuilt.append((_with_children(expr, (t,)), c))
        return rebuilt
    if isinstance(expr, Mul):
        out = []
        for tl, cl in _linearize(expr.left):
            for tr, cr in _linearize(expr.right):
                if render(tr) < render(tl):
                    tl2, tr2 = tr, tl
                else:
                    tl2, tr2 = tl, tr
                out.append((Mul(tl2, tr2), cl * cr))
        return out
    return [(expr, SPoly.const(1))]


@dataclass(frozen=True)
class LinearForm:
    """Canonical linear combination of product-free monomial terms.

    Built by semantic distribution only; intersection operands are put in a
    fixed order so syntactically different but equal trees collect alike.
    """

    pairs: tuple[tuple[CycleExpr, SPoly], ...]

    @staticmethod
    def collect(expr: CycleExpr) -> "LinearForm":
        acc: dict[CycleExpr, SPoly] = {}
        for term, coeff in _linearize(expr):
            acc[term] = acc.get(term, SPoly()) + coeff
        cleaned = [(t, c) for t, c in acc.items() if not c.is_zero]
        cleaned.sort(key=lambda pair: render(pair[0]))
        return LinearForm(tuple(cleaned))

    @property
    def is_zero(self) -> bool:
        return not self.pairs

    def coefficient(self, term: CycleExpr) -> SPoly:
        for t, c in self.pairs:
            if t == term:
                return c
        return SPoly()

    def __str__(self) -> str:
        if not self.pairs:
            return "0"
        parts = []
        for term, coeff in self.pairs:
            text = f"{coeff}*{render(term)}" if str(coeff) != "1" else render(term)
            parts.append(text)
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# rewrite rules

@dataclass(frozen=True)
class RewriteRule:
    name: str
    _match: Callable[[CycleExpr], bool] = field(repr=False)
    _build: Callable[[CycleExpr], CycleExpr] = field(repr=False)

    def applies(self, node: CycleExpr) -> bool:
        return self._match(node)

    def apply(self, node: CycleExpr) -> CycleExpr:
        return self._build(node)


def _is_incidence_of_point(node: CycleExpr) -> bool:
    return (isinstance(node, Phi) and isinstance(node.arg, Psi)
            and isinstance(node.arg.arg, OPoint))


def _match_project_product(node: CycleExpr) -> bool:
    return (isinstance(node, Psi) and isinstance(node.arg, Mul)
            and isinstance(node.arg.left, Phi) and isinstance(node.arg.right, Phi))


def _build_project_product(node: CycleExpr) -> CycleExpr:
    a = node.arg.left.arg
    b = node.arg.right.arg
    da, db = deg_of(a), deg_of(b)
    return Add(
        Add(Scale(da.scaled(-2), b), Scale(db.scaled(-2), a)),
        Scale((da * db).scaled(3), HCurve()),
    )


def default_rules(point_square: SPoly | int = 5) -> tuple[RewriteRule, ...]:
    """The rule set, core relations first, distribution after.

    point_square is the coefficient in the distinguished-point
    self-intersection relation; pass a symbolic value to rederive with the
    constant left open.
    """
    c = _as_spoly(point_square)
    return (
        RewriteRule(
            "expand-incidence",
            lambda n: isinstance(n, IStar),
            lambda n: Phi(Psi(n.arg))),
        RewriteRule(
            "project-product",
            _match_project_product,
            _build_project_product),
        RewriteRule(
            "point-self-intersection",
            lambda n: (isinstance(n, Mul) and _is_incidence_of_point(n.left)
                       and _is_incidence_of_point(n.right)),
            lambda n: Scale(c, OPoint())),
        RewriteRule(
            "expand-hyperplane",
            lambda n: isinstance(n, HCurve),
            lambda n: Scale(SPoly.const(3), Psi(OPoint()))),
        RewriteRule(
            "split-phi",
            lambda n: isinstance(n, Phi) and isinstance(n.arg, Add),
            lambda n: Add(Phi(n.arg.left), Phi(n.arg.right))),
        RewriteRule(
            "scale-phi",
            lambda n: isinstance(n, Phi) and isinstance(n.arg, Scale),
            lambda n: Scale(n.arg.coeff, Phi(n.arg.arg))),
        RewriteRule(
            "split-psi",
            lambda n: isinstance(n, Psi) and isinstance(n.arg, Add),
            lambda n: Add(Psi(n.arg.left), Psi(n.arg.right))),
        RewriteRule(
            "scale-psi",
            lambda n: isinstance(n, Psi) and isinstance(n.arg, Scale),
            lambda n: Scale(n.arg.coeff, Psi(n.arg.arg))),
        RewriteRule(
            "split-mul-left",
            lambda n: isinstance(n, Mul) and isinstance(n.left, Add),
            lambda n: Add(Mul(n.left.left, n.right), Mul(n.left.right, n.right))),
        RewriteRule(
            "split-mul-right",
            lambda n: isinstance(n, Mul) and isinstance(n.right, Add),
            lambda n: Add(Mul(n.left, n.right.left), Mul(n.left, n.right.right))),
        RewriteRule(
            "scale-mul-left",
            lambda n: isinstance(n, Mul) and isinstance(n.left, Scale),
            lambda n: Scale(n.left.coeff, Mul(n.left.arg, n.right))),
        RewriteRule(
            "scale-mul-right",
            lambda n: isinstance(n, Mul) and isinstance(n.right, Scale),
            lambda n: Scale(n.right.coeff, Mul(n.left, n.right.arg))),
        RewriteRule(
            "merge-scale",
            lambda n: isinstance(n, Scale) and isinstance(n.arg, Scale),
            lambda n: Scale(n.coeff * n.arg.coeff, n.arg.arg)),
        RewriteRule(
            "split-scale",
            lambda n: isinstance(n, Scale) and isinstance(n.arg, Add),
            lambda n: Add(Scale(n.coeff, n.arg.left), Scale(n.coeff, n.arg.right))),
    )


def find_redexes(expr: CycleExpr,
                 rules: Sequence[RewriteRule]) -> tuple[tuple[Path, RewriteRule], ...]:
    """All (position, rule) pairs, preorder positions, rule order within."""
    found: list[tuple[Path, RewriteRule]] = []

    def walk(node: CycleExpr, path: Path) -> None:
        for rule in rules:
            if rule.applies(node):
                found.append((path, rule))
        for index, child in enumerate(_children(node)):
            walk(child, path + (index,))

    walk(expr, ())
    return tuple(found)


@dataclass(frozen=True)
class TraceStep:
    step: int
    rule: str
    path: Path
    before: str
    after: str

    def to_json(self) -> dict:
        return {"step": self.step, "rule": self.rule, "path": list(self.path),
                "before": self.before, "after": self.after}


@dataclass(frozen=True)
class NormalizeResult:
    form: LinearForm
    tree: CycleExpr
    steps: tuple[TraceStep, ...]


def normalize(expr: CycleExpr, *, rules: Sequence[RewriteRule] | None = None,
              rng: random.Random | None = None, max_steps: int = 2000,
              want_trace: bool = False) -> NormalizeResult:
    """Rewrite to a normal form, then collect into a canonical linear form.

    Deterministic strategy (rng None) always contracts the first redex in
    preorder; a given rng picks uniformly among all redexes, which is how
    confluence is probed.
    """
    if rules is None:
        rules = default_rules()
    steps: list[TraceStep] = []
    for count in range(max_steps):
        redexes = find_redexes(expr, rules)
        if not redexes:
            return NormalizeResult(LinearForm.collect(expr), expr, tuple(steps))
        path, rule = redexes[0] if rng is None else redexes[rng.randrange(len(redexes))]
        node = subterm_at(expr, path)
        replacement = rule.apply(node)
        if want_trace:
            steps.append(TraceStep(count, rule.name, path, render(node),
                                   render(replacement)))
        expr = replace_at(expr, path, replacement)
    raise RewriteLimitError(f"no normal form after {max_steps} steps")


def rewrite_corpus() -> tuple[tuple[str, CycleExpr], ...]:
    """Fixed expressions used for the randomized confluence checks."""
    o = OPoint()
    tau = Var("tau", Sort.POINT, SPoly.var("t"))
    tau0 = Var("tau0", Sort.POINT, SPoly.const(0))
    a = Var("a", Sort.CURVE, SPoly.var("da"))
    b = Var("b", Sort.CURVE, SPoly.var("db"))
    a0 = Var("a0", Sort.CURVE, SPoly.const(0))
    b0 = Var("b0", Sort.CURVE, SPoly.const(0))
    return (
        ("project-general", Psi(Mul(Phi(a), Phi(b)))),
        ("project-degree-zero", Psi(Mul(Phi(a0), Phi(b0)))),
        ("project-repeated", Psi(Mul(Phi(a), Phi(a)))),
        ("incidence-square", Mul(IStar(o), IStar(o))),
        ("project-incidence-square", Psi(Mul(IStar(o), IStar(o)))),
        ("incidence-pair", Mul(IStar(o), IStar(tau))),
        ("project-torsion-pair", Psi(Mul(IStar(o), IStar(tau0)))),
        ("double-incidence", Mul(IStar(o), IStar(Mul(IStar(o), IStar(tau))))),
        ("hyperplane-under-phi", Mul(Phi(HCurve()), IStar(o))),
        ("linear-mix", Psi(Mul(Phi(Add(a, Scale(2, Psi(o)))), Phi(b)))),
        ("incidence-linear", Mul(IStar(Add(o, Scale(-1, tau))), IStar(o))),
    )


# ---------------------------------------------------------------------------
# derivation of the composition algebra

_TAU = Var("tau", Sort.POINT, SPoly.var("t"))

# normal-form landmarks for reading off the algebra relations
_P_ACTION_TERM = Mul(Phi(Psi(OPoint())), Phi(Psi(_TAU)))


def _act(symbol: str, argument: CycleExpr) -> CycleExpr:
    if symbol == "delta":
        return argument
    if symbol == "w0":
        return Scale(deg_of(argument), OPoint())
    if symbol == "P":
        return Mul(IStar(OPoint()), IStar(argument))
    raise ValueError(f"no action for symbol {symbol!r}")


def _extract_relation(form: LinearForm) -> dict[str, SPoly]:
    """Read a composed action off its normal form.

    The derivation's normal forms live in the span of {point class, incidence
    pairing applied to the argument, the argument itself}; anything else
    means the rules were insufficient, which is an error, not a guess.
    """
    out: dict[str, SPoly] = {}
    for term, coeff in form.pairs:
        if term == OPoint():
            out["w0"] = coeff.divide_by_var("t")
        elif term == _TAU:
            out["delta"] = coeff
        elif term == _P_ACTION_TERM:
            out["P"] = coeff
        else:
            raise DerivationError(f"unrecognized normal-form term {render(term)}")
    return out


_GENERATOR_PAIRS = (("w0", "w0"), ("w0", "P"), ("P", "w0"), ("P", "P"))


@dataclass(frozen=True)
class DeriveResult:
    """Relations among the generators, derived from the rewrite rules alone.

    relations maps an ordered generator pair to the coefficients of its
    composition in the {delta, w0, P} basis; traces (when requested) hold the
    rewrite steps behind each pair.
    """

    dimension: int
    point_square: SPoly
    relations: Mapping[tuple[str, str], Mapping[str, SPoly]]
    traces: Mapping[tuple[str, str], tuple[TraceStep, ...]]

    def table(self, ring: CoefficientRing) -> dict[tuple[str, str], FreeElement]:
        """The relations as structure constants; requires constant coefficients."""
        out: dict[tuple[str, str], FreeElement] = {}
        for pair, coeffs in self.relations.items():
            terms: dict[str, int] = {}
            for symbol, poly in coeffs.items():
                value = poly.as_int()
                if value is None:
                    raise DerivationError(
                        f"coefficient of {symbol} in {pair} is symbolic: {poly}")
                terms[symbol] = value
            out[pair] = FreeElement(ring, terms)
        return out

    def relation_lines(self) -> tuple[str, ...]:
        lines = []
        for (a, b), coeffs in sorted(self.relations.items()):
            parts = [f"({poly}) {symbol}" for symbol, poly in sorted(coeffs.items())]
            rhs = " + ".join(parts) if parts else "0"
            lines.append(f"{a} o {b} = {rhs}")
        return tuple(lines)


def derive_relations(dimension: int = 3, *, point_square: SPoly | int = 5,
                     want_trace: bool = False) -> DeriveResult:
    """Compose the generator actions on a formal point class and normalize.

    Every relation comes out of the rewrite rules plus degree bookkeeping;
    the hard-coded table never feeds in.
    """
    _validate_dimension(dimension)
    rules = default_rules(point_square)
    relations: dict[tuple[str, str], dict[str, SPoly]] = {}
    traces: dict[tuple[str, str], tuple[TraceStep, ...]] = {}
    for pair in _GENERATOR_PAIRS:
        outer, inner = pair
        expr = _act(outer, _act(inner, _TAU))
        result = normalize(expr, rules=rules, want_trace=want_trace)
        relations[pair] = _extract_relation(result.form)
        if want_trace:
            traces[pair] = result.steps
    return DeriveResult(dimension, _as_spoly(point_square), relations, traces)


def derive_P_square(dimension: int = 3) -> FreeElement:
    """The composition of the incidence generator with itself, as an element."""
    derived = derive_relations(dimension)
    return derived.table(CUBIC_RING)[("P", "P")]


# ---------------------------------------------------------------------------
# the algebra, projectors, and realization (independent of the derivation)

CUBIC_RING = CoefficientRing.with_inverted(2)

_CUBIC_TABLE = {
    ("w0", "w0"): {"w0": 1},
    ("w0", "P"): {"w0": 5},
    ("P", "w0"): {"w0": 5},
    ("P", "P"): {"w0": 35, "P": -2},
}


def _validate_dimension(dimension: int) -> None:
    if dimension not in (3, 4):
        raise ValueError(f"dimension must be 3 or 4, got {dimension!r}")


def cubic_degrees(dimension: int) -> tuple[int, int, int]:
    """Grading labels carried by the three projectors."""
    _validate_dimension(dimension)
    return (0, dimension - 2, 2 * dimension - 4)


def cubic_algebra(dimension: int, ring: CoefficientRing | None = None) -> StructureAlgebra:
    """Hard-coded three-generator table; the derivation must reproduce it."""
    _validate_dimension(dimension)
    ring = CUBIC_RING if ring is None else ring
    products = {pair: FreeElement(ring, terms) for pair, terms in _CUBIC_TABLE.items()}
    return StructureAlgebra(f"cubic{dimension}", ring, ("delta", "w0", "P"),
                            "delta", products)


def cubic_projectors(dimension: int, ring: CoefficientRing | None = None) -> ProjectorSystem:
    """Degrees {0, d-2, 2d-4}; the middle projector needs 2 invertible.

    Over a ring without 1/2 the construction raises NotDivisibleError, which
    is the point of the integrality restriction.
    """
    algebra = cubic_algebra(dimension, ring)
    low, mid, top = cubic_degrees(dimension)
    w0 = algebra.element("w0")
    half_difference = exact_divide(w0.scaled(5) - algebra.element("P"), 2)
    rest = algebra.unit_element() - w0 - half_difference
    return ProjectorSystem(algebra, {low: w0, mid: half_difference, top: rest},
                           f"cubic{dimension}")


def cubic_realization(dimension: int,
                      ranks: Mapping[int, int] | None = None) -> GradedRealization:
    """Scalar blocks: identity everywhere for the unit, (1,0,0) pattern for
    the point generator, (5,-2,0) for the incidence generator."""
    degrees = cubic_degrees(dimension)
    ranks = dict(ranks or {})
    slots = tuple((degree, ranks.get(degree, 1)) for degree in degrees)

    def blocks(values: Sequence[int]) -> Matrix:
        return Matrix.block_diag([Matrix.identity(rank).scaled(value)
                                  for (_, rank), value in zip(slots, values)])

    images = {
        "delta": blocks((1, 1, 1)),
        "w0": blocks((1, 0, 0)),
        "P": blocks((5, -2, 0)),
    }
    return GradedRealization(slots, images)
