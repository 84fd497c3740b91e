"""Linear maps H -> A: characters, infinitesimal characters, convolution and the
Birkhoff decomposition.

Every map is evaluated lazily on monomials and memoized.  Characters and
infinitesimal characters are stored by their generator values only; their
values on products are always recomputed (multiplicatively, or by the
derivation rule), so the homomorphism property holds by construction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import CoverageError, DomainError, RecursionOrderError
from .hopf import UNIT, HopfAlgebra, HopfElement, Monomial
from .series import (
    DEFAULT_POLE_CAP,
    DEFAULT_TRUNCATION,
    MS,
    LaurentSeries,
    RotaBaxterStructure,
)


class LinearMap:
    """A linear map H -> A given by a function on monomials."""

    kind = "linear"

    def __init__(
        self,
        H: HopfAlgebra,
        fn: Callable[[Monomial], LaurentSeries],
        order: int = DEFAULT_TRUNCATION,
        pole_cap: int = DEFAULT_POLE_CAP,
        degree: int | None = None,
    ) -> None:
        self.H = H
        self._fn = fn
        self.order = order
        self.pole_cap = pole_cap
        self.degree = H.max_degree if degree is None else degree
        self._cache: dict[Monomial, LaurentSeries] = {}

    def zero_series(self) -> LaurentSeries:
        return LaurentSeries.zero(self.order, self.pole_cap)

    def one_series(self) -> LaurentSeries:
        return LaurentSeries.constant(1, self.order, self.pole_cap)

    def on_monomial(self, m: Monomial) -> LaurentSeries:
        m = tuple(sorted(m))
        hit = self._cache.get(m)
        if hit is None:
            hit = self._fn(m)
            self._cache[m] = hit
        return hit

    def __call__(self, x: HopfElement | str) -> LaurentSeries:
        if isinstance(x, str):
            return self.on_monomial((x,))
        return evaluate(self, x)

    def generators(self) -> list[str]:
        return self.H.generators(self.degree)


class Character(LinearMap):
    """Algebra map H -> A, determined by its values on generators."""

    kind = "character"

    def __init__(
        self,
        H: HopfAlgebra,
        values: Mapping[str, LaurentSeries],
        order: int | None = None,
        pole_cap: int | None = None,
        degree: int | None = None,
    ) -> None:
        vals = dict(values)
        if order is None:
            order = min((v.order for v in vals.values()), default=DEFAULT_TRUNCATION)
        if pole_cap is None:
            pole_cap = min((v.pole_cap for v in vals.values()), default=DEFAULT_POLE_CAP)
        if degree is None:
            degree = _covered_degree(H, vals)
        super().__init__(H, self._monomial_value, order, pole_cap, degree)
        self.values = {n: vals[n] for n in H.generators() if n in vals}

    def _value(self, name: str) -> LaurentSeries:
        try:
            return self.values[name]
        except KeyError:
            raise CoverageError(f"character has no value for generator {name!r}") from None

    def _monomial_value(self, m: Monomial) -> LaurentSeries:
        if not m:
            return self.one_series()
        out = self._value(m[0])
        for name in m[1:]:
            out = out * self._value(name)
        return out

    def map_values(self, f: Callable[[str, LaurentSeries], LaurentSeries]) -> Character:
        return Character(self.H, {n: f(n, v) for n, v in self.values.items()},
                         self.order, self.pole_cap, self.degree)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Character):
            return NotImplemented
        return _same_values(self, other)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        body = ", ".join(f"{n}: {v}" for n, v in self.values.items())
        return f"Character({{{body}}})"


class InfinitesimalCharacter(LinearMap):
    """Derivation-like map: zero on 1 and on products of two or more generators."""

    kind = "infinitesimal"

    def __init__(
        self,
        H: HopfAlgebra,
        values: Mapping[str, LaurentSeries],
        order: int | None = None,
        pole_cap: int | None = None,
        degree: int | None = None,
    ) -> None:
        vals = dict(values)
        if order is None:
            order = min((v.order for v in vals.values()), default=DEFAULT_TRUNCATION)
        if pole_cap is None:
            pole_cap = min((v.pole_cap for v in vals.values()), default=DEFAULT_POLE_CAP)
        if degree is None:
            degree = _covered_degree(H, vals)
        super().__init__(H, self._monomial_value, order, pole_cap, degree)
        self.values = {n: vals[n] for n in H.generators() if n in vals}

    def _monomial_value(self, m: Monomial) -> LaurentSeries:
        if len(m) != 1:
            return self.zero_series()
        try:
            return self.values[m[0]]
        except KeyError:
            raise CoverageError(f"infinitesimal character has no value for generator {m[0]!r}") from None

    def map_values(self, f: Callable[[str, LaurentSeries], LaurentSeries]) -> InfinitesimalCharacter:
        return InfinitesimalCharacter(self.H, {n: f(n, v) for n, v in self.values.items()},
                                      self.order, self.pole_cap, self.degree)

    def __add__(self, other: InfinitesimalCharacter) -> InfinitesimalCharacter:
        return _combine(self, other, lambda a, b: a + b)

    def __sub__(self, other: InfinitesimalCharacter) -> InfinitesimalCharacter:
        return _combine(self, other, lambda a, b: a - b)

    def __neg__(self) -> InfinitesimalCharacter:
        return self.map_values(lambda _, v: -v)

    def scaled(self, c: Fraction | int) -> InfinitesimalCharacter:
        return self.map_values(lambda _, v: v * c)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InfinitesimalCharacter):
            return NotImplemented
        return _same_values(self, other)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        body = ", ".join(f"{n}: {v}" for n, v in self.values.items())
        return f"InfinitesimalCharacter({{{body}}})"


def _covered_degree(H: HopfAlgebra, values: Mapping[str, object]) -> int:
    d = 0
    while d < H.max_degree and all(n in values for n in H.catalog.names_of_degree(d + 1)):
        d += 1
    return d


def _same_values(a: LinearMap, b: LinearMap) -> bool:
    names = set(a.generators()) | set(b.generators())
    return all(a.on_monomial((n,)) == b.on_monomial((n,)) for n in names)


def _combine(a: InfinitesimalCharacter, b: InfinitesimalCharacter,
             op: Callable[[LaurentSeries, LaurentSeries], LaurentSeries]) -> InfinitesimalCharacter:
    degree = min(a.degree, b.degree)
    names = a.H.generators(degree)
    return InfinitesimalCharacter(a.H, {n: op(a(n), b(n)) for n in names},
                                  min(a.order, b.order), min(a.pole_cap, b.pole_cap), degree)


# -- construction helpers ----------------------------------------------------------

def counit_character(H: HopfAlgebra, order: int = DEFAULT_TRUNCATION,
                     pole_cap: int = DEFAULT_POLE_CAP) -> Character:
    """The convolution unit epsilon: 1 -> 1, every generator -> 0."""
    zero = LaurentSeries.zero(order, pole_cap)
    return Character(H, {n: zero for n in H.generators()}, order, pole_cap)


def zero_infinitesimal(H: HopfAlgebra, order: int = DEFAULT_TRUNCATION,
                       pole_cap: int = DEFAULT_POLE_CAP) -> InfinitesimalCharacter:
    zero = LaurentSeries.zero(order, pole_cap)
    return InfinitesimalCharacter(H, {n: zero for n in H.generators()}, order, pole_cap)


def delta(H: HopfAlgebra, name: str, value: LaurentSeries | None = None) -> InfinitesimalCharacter:
    """Kronecker delta on a generator, optionally scaled by a series."""
    H.catalog.graph(name)
    one = LaurentSeries.constant(1) if value is None else value
    zero = LaurentSeries.zero(one.order, one.pole_cap)
    return InfinitesimalCharacter(H, {n: (one if n == name else zero) for n in H.generators()})


def restrict_character(f: LinearMap, degree: int | None = None) -> Character:
    """Read a (known multiplicative) map off its generator values."""
    d = f.degree if degree is None else degree
    return Character(f.H, {n: f.on_monomial((n,)) for n in f.H.generators(d)}, f.order, f.pole_cap, d)


def restrict_infinitesimal(f: LinearMap, degree: int | None = None) -> InfinitesimalCharacter:
    d = f.degree if degree is None else degree
    return InfinitesimalCharacter(f.H, {n: f.on_monomial((n,)) for n in f.H.generators(d)},
                                  f.order, f.pole_cap, d)


# -- operations --------------------------------------------------------------------

def evaluate(chi: LinearMap, x: HopfElement) -> LaurentSeries:
    out = chi.zero_series()
    for m, c in x.terms.items():
        top = max((chi.H.degree_of(n) for n in m), default=0)
        if top > chi.degree:
            raise CoverageError(f"map covers generators up to degree {chi.degree}; {m} needs degree {top}")
        out = out + chi.on_monomial(m) * c
    return out


def convolve(a: LinearMap, b: LinearMap) -> LinearMap:
    """(a * b)(x) = m(a (x) b)(Delta x) as a lazy linear map."""
    H = a.H

    def fn(m: Monomial) -> LaurentSeries:
        out = LaurentSeries.zero(min(a.order, b.order), min(a.pole_cap, b.pole_cap))
        for (left, right), c in H.coproduct_monomial(m).terms.items():
            out = out + a.on_monomial(left) * b.on_monomial(right) * c
        return out

    return LinearMap(H, fn, min(a.order, b.order), min(a.pole_cap, b.pole_cap), min(a.degree, b.degree))


def convolution(a: LinearMap, b: LinearMap) -> LinearMap:
    """Convolution product; Character * Character stays a Character."""
    prod = convolve(a, b)
    if isinstance(a, Character) and isinstance(b, Character):
        return restrict_character(prod)
    return prod


def lie_bracket(a: InfinitesimalCharacter, b: InfinitesimalCharacter) -> InfinitesimalCharacter:
    """Convolution commutator a*b - b*a, read off on generators."""
    ab = convolve(a, b)
    ba = convolve(b, a)
    degree = min(a.degree, b.degree)
    return InfinitesimalCharacter(
        a.H, {n: ab.on_monomial((n,)) - ba.on_monomial((n,)) for n in a.H.generators(degree)},
        min(a.order, b.order), min(a.pole_cap, b.pole_cap), degree,
    )


def compose_antipode(f: LinearMap) -> LinearMap:
    H = f.H
    return LinearMap(H, lambda m: evaluate(f, H.antipode(HopfElement({m: 1}))), f.order, f.pole_cap, f.degree)


def inverse(gamma: Character) -> Character:
    """Convolution inverse gamma o S."""
    return restrict_character(compose_antipode(gamma))


def grade(f: LinearMap) -> LinearMap:
    """f o Y: multiply the value on a degree-n monomial by n."""
    H = f.H
    return LinearMap(H, lambda m: f.on_monomial(m) * H.degree(m), f.order, f.pole_cap, f.degree)


def ungrade(f: LinearMap) -> LinearMap:
    """f o Y^{-1}; needs f(1) = 0."""
    H = f.H

    def fn(m: Monomial) -> LaurentSeries:
        if not m:
            if f.on_monomial(UNIT) != 0:
                raise DomainError("Y^-1 is undefined on a map that is nonzero on 1")
            return f.zero_series()
        return f.on_monomial(m) * Fraction(1, H.degree(m))

    return LinearMap(H, fn, f.order, f.pole_cap, f.degree)


def map_series(f: LinearMap, op: Callable[[LaurentSeries], LaurentSeries], order: int | None = None) -> LinearMap:
    """Compose with a linear operator on A (e.g. d/dz) monomial by monomial."""
    return LinearMap(f.H, lambda m: op(f.on_monomial(m)), f.order if order is None else order,
                     f.pole_cap, f.degree)


def add_maps(*terms: tuple[Fraction | int, LinearMap]) -> LinearMap:
    H = terms[0][1].H
    order = min(t.order for _, t in terms)
    cap = min(t.pole_cap for _, t in terms)

    def fn(m: Monomial) -> LaurentSeries:
        out = LaurentSeries.zero(order, cap)
        for c, t in terms:
            out = out + t.on_monomial(m) * c
        return out

    return LinearMap(H, fn, order, cap, min(t.degree for _, t in terms))


def is_holomorphic(gamma: Character) -> bool:
    return all(v.is_holomorphic() for v in gamma.values.values())


# -- Birkhoff decomposition ----------------------------------------------------------

def bogoliubov_prepare(gamma: Character, counterterms: Mapping[str, LaurentSeries], name: str) -> LaurentSeries:
    """gamma(x) + sum over proper subgraphs of gamma_-(x_sub) * gamma(x_quotient)."""
    H = gamma.H
    out = gamma(name)
    for left, right, c in H.reduced_coproduct_terms(name):
        sub = gamma.one_series()
        for g in left:
            if g not in counterterms:
                raise RecursionOrderError(f"counterterm for {g!r} needed before {name!r}")
            sub = sub * counterterms[g]
        out = out + sub * gamma.on_monomial(right) * c
    return out


def birkhoff(gamma: Character, rb: RotaBaxterStructure = MS) -> tuple[Character, Character]:
    """Return (gamma_minus, gamma_plus) with gamma = gamma_minus^{*-1} * gamma_plus.

    Degree by degree: gamma_-(x) = -P(Rbar(x)), gamma_+(x) = (id - P)(Rbar(x)).
    """
    H = gamma.H
    minus: dict[str, LaurentSeries] = {}
    plus: dict[str, LaurentSeries] = {}
    for name in gamma.generators():
        prepared = bogoliubov_prepare(gamma, minus, name)
        projected = rb(prepared)
        minus[name] = -projected
        plus[name] = prepared - projected
    return (Character(H, minus, gamma.order, gamma.pole_cap, gamma.degree),
            Character(H, plus, gamma.order, gamma.pole_cap, gamma.degree))


def check_coverage(maps: Iterable[LinearMap], degree: int) -> None:
    for f in maps:
        if f.degree < degree:
            raise CoverageError(f"map covers degree {f.degree}, {degree} required")
