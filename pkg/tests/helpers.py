"""Random generators and independent oracles shared by the test modules."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import networkx as nx

from hopfrenorm.characters import Character, InfinitesimalCharacter
from hopfrenorm.hopf import HopfAlgebra, HopfElement
from hopfrenorm.io import data_path, load_catalog
from hopfrenorm.series import LaurentSeries
from hopfrenorm.toys import dimreg_toy

ORDER = 6


def catalog(name: str):
    return load_catalog([data_path(name)])


def algebra(name: str) -> HopfAlgebra:
    return HopfAlgebra(catalog(name))


def rand_q(rng: random.Random, lo: int = -5, hi: int = 5) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, 4))


def rand_series(rng, lo=-3, hi=3, ell=0, order=ORDER, density=0.7) -> LaurentSeries:
    terms = {}
    for k in range(lo, hi + 1):
        if rng.random() < density:
            terms[k] = tuple(rand_q(rng) for _ in range(ell + 1))
    return LaurentSeries(terms, order)


def rand_character(rng, H, order=ORDER, max_degree=None, holomorphic=False, ell=0) -> Character:
    """Values with pole order at most the loop number."""
    values = {}
    for n in H.generators(max_degree):
        lo = 0 if holomorphic else -H.degree_of(n)
        values[n] = rand_series(rng, lo, 3, ell, order)
    return Character(H, values, order)


def rand_infinitesimal(rng, H, order=ORDER, max_degree=None) -> InfinitesimalCharacter:
    return InfinitesimalCharacter(
        H, {n: rand_series(rng, -H.degree_of(n), 3, 0, order) for n in H.generators(max_degree)}, order
    )


def rand_beta(rng, H) -> dict[str, Fraction]:
    return {n: rand_q(rng) for n in H.generators()}


def rand_toy(rng, H, order=ORDER) -> Character:
    return dimreg_toy(H, rand_beta(rng, H), order)


def rand_element(rng, H, terms=4, max_len=3) -> HopfElement:
    gens = H.generators()
    out = HopfElement()
    for _ in range(terms):
        m = tuple(rng.choice(gens) for _ in range(rng.randint(0, max_len)))
        out = out + HopfElement({m: rand_q(rng)})
    return out


def te_oracle(alpha: InfinitesimalCharacter) -> dict:
    """Solve gamma o Y = gamma * alpha degree by degree, straight from the coproduct.

    gamma(x) = (1/n) [alpha(x) + sum' gamma(left) alpha(right)], with only
    single-generator right factors contributing.
    """
    H = alpha.H
    gamma: dict[str, LaurentSeries] = {}

    def mono(m):
        out = LaurentSeries.constant(1, alpha.order, alpha.pole_cap)
        for g in m:
            out = out * gamma[g]
        return out

    for n in H.generators(alpha.degree):
        acc = alpha(n)
        for left, right, c in H.reduced_coproduct_terms(n):
            if len(right) == 1:
                acc = acc + mono(left) * alpha(right[0]) * c
        gamma[n] = acc * Fraction(1, H.degree_of(n))
    return gamma


# brute-force admissible-subgraph oracle: every vertex subset, checked with networkx

def _nx(g):
    m = nx.MultiGraph()
    m.add_nodes_from(g.vertices)
    m.add_edges_from(g.internal_edges)
    return m


def oracle_components(g):
    m = _nx(g)
    out = set()
    verts = list(g.vertices)
    for r in range(1, len(verts)):
        for sub in itertools.combinations(verts, r):
            h = nx.MultiGraph(m.subgraph(sub))
            if not nx.is_connected(h):
                continue
            e = h.number_of_edges()
            legs = 3 * r - 2 * e
            if e - r + 1 < 1 or legs not in (2, 3):
                continue
            one_pi = True
            for edge in list(h.edges(keys=True)):
                k = h.copy()
                k.remove_edge(*edge)
                if not nx.is_connected(k):
                    one_pi = False
                    break
            if one_pi:
                out.add(frozenset(sub))
    return out


def oracle_families(g):
    comps = sorted(oracle_components(g), key=sorted)
    fams = set()
    for r in range(1, len(comps) + 1):
        for combo in itertools.combinations(comps, r):
            if all(not (a & b) for a, b in itertools.combinations(combo, 2)):
                fams.add(frozenset(combo))
    return fams
