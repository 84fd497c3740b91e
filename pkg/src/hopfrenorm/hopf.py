"""The free commutative Hopf algebra on catalog generators.

Monomials are sorted tuples of generator names (``()`` is the unit); elements
are finite maps from monomials to exact rationals.  Coproduct and antipode on
generators come from the admissible-subgraph structure of the catalog graphs
and extend multiplicatively.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Iterator, Mapping, Union

from .errors import IncompleteCatalogError
from .graphs import GraphCatalog, admissible_subgraphs, contract, loop_number

Monomial = tuple[str, ...]
UNIT: Monomial = ()
Scalar = Union[int, Fraction]


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(sorted(a + b))


def _fmt_coef(c: Fraction, body: str) -> str:
    if body == "1":
        return str(c)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{c}*{body}"


def format_monomial(m: Monomial) -> str:
    if not m:
        return "1"
    parts = []
    for name in sorted(set(m)):
        k = m.count(name)
        parts.append(f"x[{name}]" + (f"^{k}" if k > 1 else ""))
    return "*".join(parts)


class HopfElement:
    """Finite Q-linear combination of monomials; no zero coefficients stored."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Scalar] | Iterable[tuple[Monomial, Scalar]] = ()) -> None:
        acc: dict[Monomial, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            key = tuple(sorted(m))
            acc[key] = acc.get(key, Fraction(0)) + Fraction(c)
        self.terms: dict[Monomial, Fraction] = {m: c for m, c in acc.items() if c}

    @classmethod
    def unit(cls) -> HopfElement:
        return cls({UNIT: 1})

    @classmethod
    def generator(cls, name: str) -> HopfElement:
        return cls({(name,): 1})

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(sorted(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = HopfElement({UNIT: other})
        if not isinstance(other, HopfElement):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: HopfElement) -> HopfElement:
        return HopfElement(list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> HopfElement:
        return HopfElement({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: HopfElement) -> HopfElement:
        return self + (-other)

    def __mul__(self, other: HopfElement | Scalar) -> HopfElement:
        if isinstance(other, (int, Fraction)):
            return HopfElement({m: c * other for m, c in self.terms.items()})
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return HopfElement(out)

    def __rmul__(self, other: Scalar) -> HopfElement:
        return self * other

    def __pow__(self, k: int) -> HopfElement:
        out = HopfElement.unit()
        for _ in range(k):
            out = out * self
        return out

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(sorted(m)), Fraction(0))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(_fmt_coef(c, format_monomial(m)) for m, c in self).replace("+ -", "- ")


class TensorElement:
    """Element of the k-fold tensor power of H, keyed by tuples of monomials."""

    __slots__ = ("terms", "arity")

    def __init__(self, terms: Mapping[tuple[Monomial, ...], Scalar] | Iterable, arity: int = 2) -> None:
        self.arity = arity
        acc: dict[tuple[Monomial, ...], Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, c in items:
            if len(key) != arity:
                raise ValueError(f"tensor key {key!r} has arity {len(key)}, expected {arity}")
            k = tuple(tuple(sorted(m)) for m in key)
            acc[k] = acc.get(k, Fraction(0)) + Fraction(c)
        self.terms: dict[tuple[Monomial, ...], Fraction] = {k: c for k, c in acc.items() if c}

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: TensorElement) -> TensorElement:
        return TensorElement(list(self.terms.items()) + list(other.terms.items()), self.arity)

    def __mul__(self, other: TensorElement | Scalar) -> TensorElement:
        if isinstance(other, (int, Fraction)):
            return TensorElement({k: c * other for k, c in self.terms.items()}, self.arity)
        out: dict[tuple[Monomial, ...], Fraction] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(mono_mul(a, b) for a, b in zip(k1, k2))
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return TensorElement(out, self.arity)

    def coefficient(self, *key: Monomial) -> Fraction:
        return self.terms.get(tuple(tuple(sorted(m)) for m in key), Fraction(0))

    def apply(self, slot: int, f: Callable[[Monomial], HopfElement | TensorElement]) -> TensorElement:
        """Apply a linear map on one tensor slot (HopfElement or TensorElement valued)."""
        out: list = []
        arity = None
        for key, c in self.terms.items():
            img = f(key[slot])
            if isinstance(img, HopfElement):
                for m, d in img.terms.items():
                    out.append((key[:slot] + (m,) + key[slot + 1:], c * d))
                arity = self.arity
            else:
                for sub, d in img.terms.items():
                    out.append((key[:slot] + sub + key[slot + 1:], c * d))
                arity = self.arity + img.arity - 1
        return TensorElement(out, arity if arity is not None else self.arity)

    def multiply(self) -> HopfElement:
        """The multiplication map m: H^{(x)k} -> H."""
        out: list[tuple[Monomial, Fraction]] = []
        for key, c in self.terms.items():
            m: Monomial = UNIT
            for part in key:
                m = mono_mul(m, part)
            out.append((m, c))
        return HopfElement(out)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key, c in self:
            body = " (x) ".join(format_monomial(m) for m in key)
            parts.append(f"{c}*[{body}]" if c != 1 else f"[{body}]")
        return " + ".join(parts)


class HopfAlgebra:
    """Hopf algebra of Feynman graphs over a contraction-closed graph catalog."""

    def __init__(self, catalog: GraphCatalog) -> None:
        self.catalog = catalog

    # -- basics --------------------------------------------------------------
    def gen(self, name: str) -> HopfElement:
        self.catalog.graph(name)
        return HopfElement.generator(name)

    def unit(self) -> HopfElement:
        return HopfElement.unit()

    def generators(self, max_degree: int | None = None) -> list[str]:
        names = self.catalog.names()
        if max_degree is None:
            return names
        return [n for n in names if self.degree_of(n) <= max_degree]

    def degree_of(self, name: str) -> int:
        return self.catalog.degree(name)

    def degree(self, m: Monomial) -> int:
        return sum(self.degree_of(n) for n in m)

    def product(self, x: HopfElement, y: HopfElement) -> HopfElement:
        return x * y

    def counit(self, x: HopfElement) -> Fraction:
        return x.coefficient(UNIT)

    # -- coproduct -----------------------------------------------------------
    @lru_cache(maxsize=None)
    def reduced_coproduct_terms(self, name: str) -> tuple[tuple[Monomial, Monomial, Fraction], ...]:
        """Proper terms (x_gamma, x_{Gamma//gamma}, multiplicity) of Delta x_name.

        Embeddings with the same (subgraph, quotient) generator pair are merged
        into one integer coefficient.
        """
        g = self.catalog.graph(name)
        acc: dict[tuple[Monomial, Monomial], Fraction] = {}
        for emb in admissible_subgraphs(g):
            left = tuple(sorted(self.catalog.resolve(sub) for sub in emb.subgraphs()))
            quotient = contract(g, emb)
            if quotient.is_empty or loop_number(quotient) == 0:
                right: Monomial = UNIT
            else:
                right = (self.catalog.resolve(quotient),)
            acc[(left, right)] = acc.get((left, right), Fraction(0)) + 1
        return tuple(sorted((l, r, c) for (l, r), c in acc.items()))

    @lru_cache(maxsize=None)
    def _gen_coproduct(self, name: str) -> TensorElement:
        terms: list = [((UNIT, (name,)), 1), (((name,), UNIT), 1)]
        terms.extend(((l, r), c) for l, r, c in self.reduced_coproduct_terms(name))
        return TensorElement(terms)

    def _mono_coproduct(self, m: Monomial) -> TensorElement:
        out = TensorElement({(UNIT, UNIT): 1})
        for name in m:
            out = out * self._gen_coproduct(name)
        return out

    def coproduct(self, x: HopfElement) -> TensorElement:
        out = TensorElement({})
        for m, c in x.terms.items():
            out = out + self._mono_coproduct(m) * c
        return out

    def coproduct_monomial(self, m: Monomial) -> TensorElement:
        return self._mono_coproduct(tuple(sorted(m)))

    # -- antipode ------------------------------------------------------------
    @lru_cache(maxsize=None)
    def _gen_antipode(self, name: str) -> HopfElement:
        out = -HopfElement.generator(name)
        for left, right, c in self.reduced_coproduct_terms(name):
            out = out - self._mono_antipode(left) * HopfElement({right: c})
        return out

    def _mono_antipode(self, m: Monomial) -> HopfElement:
        out = HopfElement.unit()
        for name in m:
            out = out * self._gen_antipode(name)
        return out

    def antipode(self, x: HopfElement) -> HopfElement:
        out = HopfElement()
        for m, c in x.terms.items():
            out = out + self._mono_antipode(m) * c
        return out

    # -- grading -------------------------------------------------------------
    def grading_operator(self, x: HopfElement) -> HopfElement:
        """Y: multiply each monomial by its loop degree."""
        return HopfElement({m: c * self.degree(m) for m, c in x.terms.items()})

    def homogeneous_parts(self, x: HopfElement) -> dict[int, HopfElement]:
        parts: dict[int, dict[Monomial, Fraction]] = {}
        for m, c in x.terms.items():
            parts.setdefault(self.degree(m), {})[m] = c
        return {d: HopfElement(t) for d, t in sorted(parts.items())}

    # -- pre-Lie insertion ---------------------------------------------------
    def pairing_coefficient(self, x: HopfElement, left: str, right: str) -> Fraction:
        """m(delta_left (x) delta_right)(Delta x)."""
        return self.coproduct(x).coefficient((left,), (right,))

    def insertion_product(self, g1: str, g2: str) -> HopfElement:
        target = self.degree_of(g1) + self.degree_of(g2)
        if target > self.catalog.degree_bound:
            raise IncompleteCatalogError(
                f"insertion {g1} * {g2} needs degree {target}, catalog is bounded at {self.catalog.degree_bound}"
            )
        out = HopfElement()
        for name in self.catalog.names_of_degree(target):
            c = self.pairing_coefficient(HopfElement.generator(name), g1, g2)
            if c:
                out = out + HopfElement.generator(name) * c
        return out

    def generator_bracket(self, g1: str, g2: str) -> HopfElement:
        return self.insertion_product(g1, g2) - self.insertion_product(g2, g1)

    # -- tensor helpers used by the axiom checks ------------------------------
    def id_tensor_coproduct(self, t: TensorElement, slot: int) -> TensorElement:
        return t.apply(slot, self.coproduct_monomial)

    def antipode_slot(self, t: TensorElement, slot: int) -> TensorElement:
        return t.apply(slot, lambda m: self._mono_antipode(tuple(m)))

    def counit_slot(self, t: TensorElement, slot: int) -> TensorElement:
        def eps(m: Monomial) -> HopfElement:
            return HopfElement.unit() if not m else HopfElement()

        # collapse the eps slot: 1_H marks a factor of one, then multiply out
        applied = t.apply(slot, eps)
        keys = [(k[:slot] + k[slot + 1:], c) for k, c in applied.terms.items()]
        return TensorElement(keys, t.arity - 1)

    @cached_property
    def max_degree(self) -> int:
        return self.catalog.degree_bound
