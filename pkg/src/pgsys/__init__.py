"""Projective systems over finite fields: verification, bounds, constructions,
search, and certified datasets for additive codes.
"""

from .field import FieldCtx, make_field, factor_prime_power
from .geometry import MatrixQ, Subspace, subspace_from_rows
from .projsys import (
    MultispreadReport,
    PointMultiset,
    ProjSystem,
    SystemReport,
    WeightReport,
    additive_construct,
    additive_generator,
    code_params,
    expand_points,
    multispread_check,
    subfield_construct,
    verify,
    weight_distribution,
)
from .bounds import (
    BoundResult,
    additive_griesmer_min_n,
    arc_projection_bound,
    arc_projection_bound_refined,
    coding_bound,
    coprime_factor_bound,
    gauss_count,
    griesmer,
    griesmer_max_n,
    min_upper_bound,
)
from .groups import (
    GroupCtx,
    OrbitListing,
    SemilinearMap,
    closure,
    expand_listing,
    orbit,
    trivial_group,
)
from .constructions import (
    ConstructionError,
    OvalSpec,
    construct_projected_oval,
    construct_projected_rs,
    construct_unipotent_pair,
    line_spread,
    make_conic,
    make_hyperoval,
    unipotent_pair_invariant_lines,
)
from .search import SearchOutcome, SearchProblem, complete_multispread, extendability_check, search_max
from .dataio import Certificate, Dataset, certify, certify_all, load, parse, serialize

__version__ = "0.1.0"
