"""Synthetic regularized characters used for demos and bundled data.

A dim-reg-style toy is Te(beta/z): its R-tilde is the pure simple pole beta/z,
so its t^{zY} family has l-free counterterms.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .characters import Character, InfinitesimalCharacter, convolution
from .hopf import HopfAlgebra
from .rgflow import time_ordered_expansional
from .series import DEFAULT_POLE_CAP, DEFAULT_TRUNCATION, LaurentSeries


def dimreg_toy(
    H: HopfAlgebra,
    beta: Mapping[str, Fraction | int],
    order: int = DEFAULT_TRUNCATION,
    pole_cap: int = DEFAULT_POLE_CAP,
) -> Character:
    alpha = InfinitesimalCharacter(
        H,
        {n: LaurentSeries.monomial(-1, Fraction(beta.get(n, 0)), order, pole_cap) for n in H.generators()},
        order,
        pole_cap,
    )
    return time_ordered_expansional(alpha)


def holomorphic_character(
    H: HopfAlgebra,
    coefficients: Mapping[str, Mapping[int, Fraction | int]],
    order: int = DEFAULT_TRUNCATION,
    pole_cap: int = DEFAULT_POLE_CAP,
) -> Character:
    """Character with value sum_k c_k z^k (k >= 0) on each generator."""
    values = {}
    for n in H.generators():
        terms = {k: (Fraction(c),) for k, c in coefficients.get(n, {}).items()}
        if any(k < 0 for k in terms):
            raise ValueError(f"holomorphic character given a pole at {n!r}")
        values[n] = LaurentSeries(terms, order, pole_cap)
    return Character(H, values, order, pole_cap)


def twisted(gamma: Character, psi: Character) -> Character:
    return convolution(gamma, psi)
