"""Gauge action of holomorphic characters and scheme comparison."""

from __future__ import annotations

from dataclasses import dataclass, field

from .characters import (
    Character,
    LinearMap,
    birkhoff,
    convolution,
    convolve,
    inverse,
    is_holomorphic,
    restrict_infinitesimal,
)
from .errors import DomainError
from .rgflow import ConnectionPullback, beta_residue, connection_pullback, is_equisingular


@dataclass
class GaugeVerdict:
    equivalent: bool
    counterterm_match: bool
    witness: Character | None = None
    beta_match: bool | None = None  # None: not applicable (a scheme is not equisingular)
    diffs: dict[str, str] = field(default_factory=dict)


def _require_holomorphic(psi: Character) -> None:
    if not is_holomorphic(psi):
        bad = [n for n, v in psi.values.items() if not v.is_holomorphic()]
        raise DomainError(f"gauge character must be holomorphic; poles at {bad}")


def gauge_transform(gamma: Character, psi: Character) -> Character:
    """gamma * psi for psi in G(A_+)."""
    _require_holomorphic(psi)
    return convolution(gamma, psi)


def counterterms_equal(gamma: Character, gamma2: Character) -> bool:
    m1, _ = birkhoff(gamma)
    m2, _ = birkhoff(gamma2)
    return m1 == m2


def compare_schemes(gamma: Character, gamma2: Character) -> GaugeVerdict:
    """Decide whether gamma2 = gamma * psi for a holomorphic psi.

    When the counterterms agree the witness gamma^{*-1} * gamma2 is computed and
    certified holomorphic; beta_match compares the beta-function on the one-loop
    generators and is None unless both schemes are equisingular.
    """
    if gamma.H.catalog is not gamma2.H.catalog and gamma.H.catalog.names() != gamma2.H.catalog.names():
        raise DomainError("schemes are defined over different catalogs")
    m1, _ = birkhoff(gamma)
    m2, _ = birkhoff(gamma2)
    diffs = {n: str(m2(n) - m1(n)) for n in m1.values if m1(n) != m2(n)}
    match = not diffs
    witness = None
    equivalent = False
    if match:
        witness = convolution(inverse(gamma), gamma2)
        if is_holomorphic(witness) and convolution(gamma, witness) == gamma2:
            equivalent = True
        else:
            diffs = {n: f"witness pole part {v.pole_part()}" for n, v in witness.values.items()
                     if not v.is_holomorphic()}
    beta_match = None
    if is_equisingular(gamma) and is_equisingular(gamma2):
        b1, b2 = beta_residue(gamma), beta_residue(gamma2)
        H = gamma.H
        beta_match = all(b1.per_generator[n] == b2.per_generator[n]
                         for n in b1.per_generator if H.degree_of(n) == 1)
    return GaugeVerdict(equivalent, match, witness, beta_match, diffs)


def conjugate(f: LinearMap, psi: Character, psi_inv: Character | None = None) -> LinearMap:
    """psi^{*-1} * f * psi."""
    if psi_inv is None:
        psi_inv = inverse(psi)
    return convolve(convolve(psi_inv, f), psi)


def pullback_gauge_action(p: ConnectionPullback, psi: Character) -> ConnectionPullback:
    """D psi + psi^{*-1} * (a, b) * psi, componentwise."""
    _require_holomorphic(psi)
    dpsi = connection_pullback(psi)
    psi_inv = inverse(psi)
    a = dpsi.a + restrict_infinitesimal(conjugate(p.a, psi, psi_inv), min(p.a.degree, psi.degree))
    b = dpsi.b + restrict_infinitesimal(conjugate(p.b, psi, psi_inv), min(p.b.degree, psi.degree))
    return ConnectionPullback(a, b, p.evaluated_at_t1)
