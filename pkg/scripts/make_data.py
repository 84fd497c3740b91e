"""Regenerate the bundled one-loop catalog and the scheme files."""

import json
from fractions import Fraction as F

from hopfrenorm.graphs import GraphCatalog
from hopfrenorm.hopf import HopfAlgebra
from hopfrenorm.io import character_document, data_path, load_catalog
from hopfrenorm.rgflow import is_equisingular
from hopfrenorm.series import LaurentSeries
from hopfrenorm.toys import dimreg_toy, holomorphic_character, twisted

ORDER = 4


def dump(name, doc):
    data_path(name).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


two = load_catalog([data_path("phi3_two_loop")])
one = GraphCatalog([two.graph("se1"), two.graph("tri")], degree_bound=1)
dump("phi3_one_loop", one.to_document())

H1 = HopfAlgebra(one)
prim = dimreg_toy(H1, {}, ORDER).map_values(lambda n, v: LaurentSeries.monomial(-1, 1, ORDER))
dump("primitive_one_loop", character_document(prim, "primitive_one_loop"))

H = HopfAlgebra(two)
beta = {"se1": 1, "tri": F(-1, 2), "se2": F(1, 3), "se2_overlap": F(1, 4),
        "tri_se": 0, "tri_vertex": F(1, 2), "vertex2": F(-1, 6)}
toy = dimreg_toy(H, beta, ORDER)
psi = holomorphic_character(H, {
    "se1": {0: 2, 1: 1}, "tri": {0: -1, 1: F(1, 3)}, "se2": {0: F(1, 2), 2: 1},
    "se2_overlap": {1: -1}, "tri_se": {0: 3}, "tri_vertex": {0: F(-1, 4), 1: 2}, "vertex2": {0: 1},
}, ORDER)
tw = twisted(toy, psi)
bad = toy.map_values(lambda n, v: LaurentSeries.monomial(-1, (1, 1), ORDER) if n == "se1" else v)
assert is_equisingular(toy) and is_equisingular(tw) and not is_equisingular(bad)

dump("dimreg_toy", character_document(toy, "dimreg_toy"))
dump("dimreg_toy_twisted", character_document(tw, "dimreg_toy_twisted"))
dump("holomorphic", character_document(psi, "holomorphic"))
dump("nonlocal_counterexample", character_document(bad, "nonlocal_counterexample"))
