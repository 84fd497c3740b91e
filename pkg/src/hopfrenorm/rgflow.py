"""Scaling actions, the R-tilde correspondence, connection pullbacks, flatness,
beta-function extraction and the equisingularity test.

Conventions: the scale t enters through l = log t in the Q[l] coefficients.
t^{zY} multiplies a degree-n value by exp(n z l); t^Y multiplies it by
exp(n l).  Quantities carrying a t^Y prefactor are reported at t = 1, where
d/dt acts as the grading operator Y.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .characters import (
    Character,
    InfinitesimalCharacter,
    LinearMap,
    birkhoff,
    convolve,
    counit_character,
    grade,
    inverse,
    lie_bracket,
    map_series,
    restrict_character,
    restrict_infinitesimal,
    ungrade,
)
from .errors import DomainError, NotRenormalizableError
from .series import MS, LaurentSeries


class ScaleMode(str, Enum):
    NONE = "none"
    TY = "tY"
    TZY = "tzY"


@dataclass(frozen=True)
class ScaledCharacter:
    """``base`` acted on by t^Y or t^{zY}; ``character`` holds the scaled values."""

    base: Character
    mode: ScaleMode
    character: Character


@dataclass(frozen=True)
class ConnectionPullback:
    """Components (a, b) of the pullback a dz + b dt/t along t^Y gamma, at t = 1."""

    a: InfinitesimalCharacter
    b: InfinitesimalCharacter
    evaluated_at_t1: bool = True


@dataclass(frozen=True)
class BetaValue:
    per_generator: dict[str, Fraction]
    total_degree1: Fraction = field(default=Fraction(0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BetaValue):
            return NotImplemented
        return self.per_generator == other.per_generator and self.total_degree1 == other.total_degree1


def scale_action(gamma: Character, mode: ScaleMode | str) -> ScaledCharacter:
    mode = ScaleMode(mode)
    H = gamma.H
    if mode is ScaleMode.NONE:
        scaled = gamma
    elif mode is ScaleMode.TZY:
        scaled = gamma.map_values(lambda n, v: v.times_exp_zl(H.degree_of(n)))
    else:
        scaled = gamma.map_values(lambda n, v: v.times_exp_l(H.degree_of(n)))
    return ScaledCharacter(gamma, mode, scaled)


def r_tilde(gamma: Character) -> InfinitesimalCharacter:
    """gamma^{*-1} * (gamma o Y)."""
    return restrict_infinitesimal(convolve(inverse(gamma), grade(gamma)))


def time_ordered_expansional(alpha: LinearMap) -> Character:
    """Inverse of ``r_tilde``: epsilon + sum_n T_n with T_1 = Y^-1(alpha) and
    T_{n+1} = Y^-1(T_n * alpha).  T_n vanishes below degree n."""
    if alpha.on_monomial(()) != 0:
        raise DomainError("time-ordered expansional needs alpha(1) = 0")
    H = alpha.H
    eps = counit_character(H, alpha.order, alpha.pole_cap)
    terms: list[LinearMap] = []
    term = ungrade(alpha)
    for _ in range(alpha.degree):
        terms.append(term)
        term = ungrade(convolve(term, alpha))
    values = {}
    for name in H.generators(alpha.degree):
        v = eps(name)
        for t in terms[: H.degree_of(name)]:
            v = v + t.on_monomial((name,))
        values[name] = v
    return Character(H, values, alpha.order, alpha.pole_cap, alpha.degree)


def connection_pullback(gamma: Character) -> ConnectionPullback:
    """a = gamma^{*-1} * d_z gamma, b = r_tilde(gamma); t^Y prefactor implicit in the grading."""
    if gamma.order < 1:
        raise DomainError("connection pullback needs z-truncation order >= 1")
    dz_gamma = map_series(gamma, LaurentSeries.dz, gamma.order - 1)
    a = restrict_infinitesimal(convolve(inverse(gamma), dz_gamma))
    return ConnectionPullback(a, r_tilde(gamma), True)


def flatness_residual(p: ConnectionPullback) -> InfinitesimalCharacter:
    """[a, b] - (Y a - d_z b); zero iff the pullback is flat."""
    H = p.a.H
    ya = p.a.map_values(lambda n, v: v * H.degree_of(n))
    dzb = p.b.map_values(lambda _, v: v.dz())
    return lie_bracket(p.a, p.b) - (ya - dzb)


def _degree1_total(H, per: dict[str, Fraction]) -> Fraction:
    return sum((v for n, v in per.items() if H.degree_of(n) == 1), Fraction(0))


def _linear_ell_coeff(series: LaurentSeries, power: int) -> Fraction:
    p = series.coefficient(power)
    return p[1] if len(p) > 1 else Fraction(0)


def beta_limit(gamma: Character) -> BetaValue:
    """d/dt at t = 1 of lim_{z->0} gamma^{*-1} * t^{zY} gamma, per generator.

    Refuses families that are not equisingular, or whose ratio keeps a pole.
    """
    if not is_equisingular(gamma):
        raise NotRenormalizableError("family is not equisingular; the beta-function limit is undefined")
    scaled = scale_action(gamma, ScaleMode.TZY).character
    ratio = restrict_character(convolve(inverse(gamma), scaled))
    per: dict[str, Fraction] = {}
    for name, v in ratio.values.items():
        if not v.pole_part().is_zero():
            raise NotRenormalizableError(f"gamma^-1 * t^zY gamma keeps a pole at {name!r}: {v.pole_part()}")
        per[name] = _linear_ell_coeff(v, 0)
    return BetaValue(per, _degree1_total(gamma.H, per))


def beta_residue(gamma: Character) -> BetaValue:
    """Coefficient of z^-1 (at l = 0) of b = r_tilde(gamma), per generator."""
    b = r_tilde(gamma)
    per = {}
    for name, v in b.values.items():
        res = v.at_ell_zero().residue()
        per[name] = res[0] if res else Fraction(0)
    return BetaValue(per, _degree1_total(gamma.H, per))


def beta_total(b: BetaValue) -> Fraction:
    return b.total_degree1


def is_equisingular(gamma: Character) -> bool:
    """Counterterms of the t^{zY} family are independent of l."""
    family = scale_action(gamma, ScaleMode.TZY).character
    minus, _ = birkhoff(family, MS)
    return all(v.is_ell_free() for v in minus.values.values())


def has_simple_poles(b: InfinitesimalCharacter) -> bool:
    return all(v.pole_order <= 1 for v in b.values.values())
