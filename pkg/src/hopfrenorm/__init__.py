"""BPHZ renormalization as Birkhoff decomposition on the Hopf
algebra of phi^3 graphs, with connection pullbacks and beta-function extraction."""

from .characters import (
    Character,
    InfinitesimalCharacter,
    LinearMap,
    birkhoff,
    bogoliubov_prepare,
    convolution,
    counit_character,
    delta,
    evaluate,
    inverse,
    is_holomorphic,
    lie_bracket,
)
from .gauge import GaugeVerdict, compare_schemes, counterterms_equal, gauge_transform, pullback_gauge_action
from .graphs import (
    FeynmanGraph,
    GraphCatalog,
    SubgraphEmbedding,
    admissible_subgraphs,
    canonical_form,
    contract,
    is_divergent,
    is_one_particle_irreducible,
    loop_number,
    parse_graph,
)
from .hopf import UNIT, HopfAlgebra, HopfElement, TensorElement
from .rgflow import (
    BetaValue,
    ConnectionPullback,
    ScaleMode,
    beta_limit,
    beta_residue,
    beta_total,
    connection_pullback,
    flatness_residual,
    is_equisingular,
    r_tilde,
    scale_action,
    time_ordered_expansional,
)
from .series import INTEGRATION, MS, LaurentSeries, RotaBaxterStructure, integration_operator, rb_identity_residual

__version__ = "0.1.0"
