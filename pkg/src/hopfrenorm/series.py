"""Truncated Laurent series in z with coefficients in Q[l], l = log t.

A series knows its coefficients exactly for every power of z up to its
``order``; higher powers are unknown.  Pole orders are capped so that runaway
products fail loudly.  The module also provides Rota-Baxter operators: the
minimal-subtraction pole projector (weight 1) and term-wise integration
(weight 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

from .errors import DomainError, ParseError, PrecisionError, ResourceLimitError

DEFAULT_TRUNCATION = 6
DEFAULT_POLE_CAP = 6

Scalar = Union[int, Fraction]
CoeffPoly = tuple[Fraction, ...]
ZERO_POLY: CoeffPoly = ()


# -- Q[l] helpers ---------------------------------------------------------------

def poly(coeffs: Iterable[Scalar | str]) -> CoeffPoly:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def poly_add(a: CoeffPoly, b: CoeffPoly) -> CoeffPoly:
    n = max(len(a), len(b))
    return poly((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def poly_mul(a: CoeffPoly, b: CoeffPoly) -> CoeffPoly:
    if not a or not b:
        return ZERO_POLY
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly(out)


def poly_scale(a: CoeffPoly, c: Scalar) -> CoeffPoly:
    return poly(x * c for x in a)


def poly_dl(a: CoeffPoly) -> CoeffPoly:
    return poly(i * a[i] for i in range(1, len(a)))


def poly_str(a: CoeffPoly, var: str = "l") -> str:
    parts = []
    for i, c in enumerate(a):
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


# -- series -------------------------------------------------------------------

class LaurentSeries:
    """Exact truncated Laurent series.

    ``terms`` maps z-powers to Q[l] coefficient tuples.  Terms above ``order``
    are discarded on construction.  Equality compares all coefficients up to
    the smaller of the two orders.
    """

    __slots__ = ("terms", "order", "pole_cap")

    def __init__(
        self,
        terms: Mapping[int, Iterable[Scalar | str]] | None = None,
        order: int = DEFAULT_TRUNCATION,
        pole_cap: int = DEFAULT_POLE_CAP,
    ) -> None:
        if order < 0:
            raise PrecisionError(f"truncation order {order} < 0: constant term no longer known")
        clean: dict[int, CoeffPoly] = {}
        for k, c in (terms or {}).items():
            k = int(k)
            p = poly(c)
            if p and k <= order:
                clean[k] = poly_add(clean.get(k, ZERO_POLY), p)
                if not clean[k]:
                    del clean[k]
        if clean and -min(clean) > pole_cap:
            raise ResourceLimitError(f"pole order {-min(clean)} exceeds cap {pole_cap}")
        self.terms = dict(sorted(clean.items()))
        self.order = order
        self.pole_cap = pole_cap

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, order: int = DEFAULT_TRUNCATION, pole_cap: int = DEFAULT_POLE_CAP) -> LaurentSeries:
        return cls({}, order, pole_cap)

    @classmethod
    def constant(cls, c: Scalar, order: int = DEFAULT_TRUNCATION, pole_cap: int = DEFAULT_POLE_CAP) -> LaurentSeries:
        return cls({0: (c,)}, order, pole_cap)

    @classmethod
    def monomial(cls, power: int, coeff: Iterable[Scalar] | Scalar = 1,
                 order: int = DEFAULT_TRUNCATION, pole_cap: int = DEFAULT_POLE_CAP) -> LaurentSeries:
        if isinstance(coeff, (int, Fraction)):
            coeff = (coeff,)
        return cls({power: tuple(coeff)}, order, pole_cap)

    def like(self, terms: Mapping[int, CoeffPoly], order: int | None = None) -> LaurentSeries:
        return LaurentSeries(terms, self.order if order is None else order, self.pole_cap)

    # -- inspection -----------------------------------------------------------
    def coefficient(self, power: int) -> CoeffPoly:
        if power > self.order:
            raise PrecisionError(f"z^{power} is beyond truncation order {self.order}")
        return self.terms.get(power, ZERO_POLY)

    def valuation(self) -> int:
        """Lowest power with a nonzero coefficient, or order + 1 for zero."""
        return min(self.terms) if self.terms else self.order + 1

    @property
    def pole_order(self) -> int:
        return max(0, -self.valuation())

    def is_zero(self) -> bool:
        return not self.terms

    def is_holomorphic(self) -> bool:
        return all(k >= 0 for k in self.terms)

    def is_pure_pole(self) -> bool:
        return all(k < 0 for k in self.terms)

    def is_ell_free(self) -> bool:
        return all(len(p) <= 1 for p in self.terms.values())

    def ell_degree(self) -> int:
        return max((len(p) - 1 for p in self.terms.values()), default=-1)

    def residue(self) -> CoeffPoly:
        return self.terms.get(-1, ZERO_POLY)

    def __iter__(self) -> Iterator[tuple[int, CoeffPoly]]:
        return iter(self.terms.items())

    # -- ring operations ------------------------------------------------------
    def _coerce(self, other: LaurentSeries | Scalar) -> LaurentSeries:
        if isinstance(other, LaurentSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentSeries.constant(other, self.order, self.pole_cap)
        return NotImplemented

    def __add__(self, other: LaurentSeries | Scalar) -> LaurentSeries:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        order = min(self.order, other.order)
        terms = dict(self.terms)
        for k, p in other.terms.items():
            terms[k] = poly_add(terms.get(k, ZERO_POLY), p)
        return LaurentSeries(terms, order, min(self.pole_cap, other.pole_cap))

    __radd__ = __add__

    def __neg__(self) -> LaurentSeries:
        return self.like({k: poly_scale(p, -1) for k, p in self.terms.items()})

    def __sub__(self, other: LaurentSeries | Scalar) -> LaurentSeries:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> LaurentSeries:
        return (-self) + other

    def __mul__(self, other: LaurentSeries | Scalar) -> LaurentSeries:
        if isinstance(other, (int, Fraction)):
            return self.like({k: poly_scale(p, other) for k, p in self.terms.items()})
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        order = min(self.order + other.valuation(), other.order + self.valuation())
        cap = min(self.pole_cap, other.pole_cap)
        lowest = self.valuation() + other.valuation()
        if self.terms and other.terms and -lowest > cap:
            raise ResourceLimitError(f"product pole order {-lowest} exceeds cap {cap}")
        if order < 0:
            raise PrecisionError(f"product truncation order {order} < 0; raise the truncation order")
        out: dict[int, CoeffPoly] = {}
        for i, p in self.terms.items():
            for j, q in other.terms.items():
                if i + j <= order:
                    out[i + j] = poly_add(out.get(i + j, ZERO_POLY), poly_mul(p, q))
        return LaurentSeries(out, order, cap)

    __rmul__ = __mul__

    def scale(self, c: Scalar | CoeffPoly) -> LaurentSeries:
        if isinstance(c, tuple):
            return self.like({k: poly_mul(p, c) for k, p in self.terms.items()})
        return self * c

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentSeries.constant(other, self.order, self.pole_cap)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        n = min(self.order, other.order)
        keys = {k for k in self.terms if k <= n} | {k for k in other.terms if k <= n}
        return all(self.terms.get(k, ZERO_POLY) == other.terms.get(k, ZERO_POLY) for k in keys)

    __hash__ = None  # type: ignore[assignment]

    # -- calculus ---------------------------------------------------------------
    def dz(self) -> LaurentSeries:
        """Term-wise z-derivative; loses one order of precision."""
        if self.order - 1 < 0:
            raise PrecisionError("z-derivative needs truncation order >= 1")
        return self.like({k - 1: poly_scale(p, k) for k, p in self.terms.items() if k}, self.order - 1)

    def dl(self) -> LaurentSeries:
        """Term-wise derivative in l = log t (t d/dt at the coefficient level)."""
        return self.like({k: poly_dl(p) for k, p in self.terms.items()})

    def at_ell_zero(self) -> LaurentSeries:
        return self.like({k: p[:1] for k, p in self.terms.items()})

    def pole_part(self) -> LaurentSeries:
        return self.like({k: p for k, p in self.terms.items() if k < 0})

    def regular_part(self) -> LaurentSeries:
        return self.like({k: p for k, p in self.terms.items() if k >= 0})

    def times_exp_zl(self, n: int) -> LaurentSeries:
        """Multiply by exp(n z l) = t^{n z}, exact up to the z-truncation."""
        if n == 0:
            return self
        out: dict[int, CoeffPoly] = {}
        for k, p in self.terms.items():
            for j in range(0, self.order - k + 1):
                factor = (Fraction(0),) * j + (Fraction(n ** j, math.factorial(j)),)
                out[k + j] = poly_add(out.get(k + j, ZERO_POLY), poly_mul(p, factor))
        return self.like(out)

    def times_exp_l(self, n: int, ell_degree: int | None = None) -> LaurentSeries:
        """Multiply by exp(n l) = t^n, expanded in l up to ``ell_degree``
        (default: the z-truncation order)."""
        if n == 0:
            return self
        deg = self.order if ell_degree is None else ell_degree
        factor = tuple(Fraction(n ** j, math.factorial(j)) for j in range(deg + 1))
        return self.scale(factor)

    # -- formatting -------------------------------------------------------------
    def __repr__(self) -> str:
        return f"LaurentSeries({self})"

    def __str__(self) -> str:
        parts = []
        for k, p in self.terms.items():
            coef = poly_str(p)
            if len([c for c in p if c]) > 1:
                coef = f"({coef})"
            if k == 0:
                parts.append(coef)
            else:
                zpart = "z" if k == 1 else f"z^{k}"
                parts.append(zpart if coef == "1" else "-" + zpart if coef == "-1" else f"{coef}*{zpart}")
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        return f"{body} + O(z^{self.order + 1})"

    def to_decimal_str(self, digits: int = 6) -> str:
        """Approximate rendering for humans; never used in structured output."""
        parts = []
        for k, p in self.terms.items():
            coef = " + ".join(
                f"{float(c):.{digits}g}" + ("" if i == 0 else f"*l^{i}") for i, c in enumerate(p) if c
            )
            parts.append(f"({coef})*z^{k}")
        return " + ".join(parts) if parts else "0"


def to_literal(x: LaurentSeries) -> list:
    """Series literal: ``[[z_power, ["q0", "q1", ...]], ...]`` with exact rationals."""
    return [[k, [str(c) for c in p]] for k, p in x.terms.items()]


def from_literal(entries: Sequence, order: int = DEFAULT_TRUNCATION, pole_cap: int = DEFAULT_POLE_CAP) -> LaurentSeries:
    if not isinstance(entries, list):
        raise ParseError(f"series literal must be a list, got {type(entries).__name__}")
    terms: dict[int, CoeffPoly] = {}
    for entry in entries:
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], int)
                and not isinstance(entry[0], bool) and isinstance(entry[1], list)):
            raise ParseError(f"malformed series entry {entry!r}; expected [z_power, [q0, q1, ...]]")
        try:
            coeffs = poly(Fraction(c) if isinstance(c, (str, int)) and not isinstance(c, bool) else _bad(c)
                          for c in entry[1])
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational in series entry {entry!r}: {exc}") from exc
        if entry[0] in terms:
            raise ParseError(f"z-power {entry[0]} repeated in series literal")
        terms[entry[0]] = coeffs
    return LaurentSeries(terms, order, pole_cap)


def _bad(c: object) -> Fraction:
    raise ValueError(f"{c!r} is not an exact rational string")


# -- Rota-Baxter operators -------------------------------------------------------

@dataclass(frozen=True)
class RotaBaxterStructure:
    """A linear operator on Laurent series together with its Rota-Baxter weight.

    Identity: P(x)P(y) + w P(xy) = P(x P(y)) + P(P(x) y).  Targets are
    commutative, so the order of factors inside P is immaterial.
    """

    operator: Callable[[LaurentSeries], LaurentSeries]
    weight: Fraction
    name: str = "P"

    def __call__(self, x: LaurentSeries) -> LaurentSeries:
        return self.operator(x)

    def complement(self) -> RotaBaxterStructure:
        """w*id - P, again Rota-Baxter of weight w (id - P for the MS projector)."""
        w = self.weight
        return RotaBaxterStructure(lambda x: x * w - self.operator(x), w, f"{w}*id-{self.name}")


def ms_projector(x: LaurentSeries) -> LaurentSeries:
    """Minimal subtraction: keep strictly negative z-powers."""
    return x.pole_part()


def integration_operator(f: LaurentSeries) -> LaurentSeries:
    """Antiderivative from 0: z^k -> z^{k+1}/(k+1).  Gains one order of precision."""
    if not f.is_holomorphic():
        raise DomainError("integration operator is only defined on series without a pole part")
    return f.like({k + 1: poly_scale(p, Fraction(1, k + 1)) for k, p in f.terms.items()}, f.order + 1)


MS = RotaBaxterStructure(ms_projector, Fraction(1), "MS")
INTEGRATION = RotaBaxterStructure(integration_operator, Fraction(0), "I")


def rb_identity_residual(P: RotaBaxterStructure, x: LaurentSeries, y: LaurentSeries) -> LaurentSeries:
    """P(x)P(y) + w P(xy) - P(x P(y)) - P(P(x) y); zero iff the identity holds."""
    return P(x) * P(y) + P(x * y) * P.weight - P(x * P(y)) - P(P(x) * y)
