"""Spectral Turan workbench for fan-free graphs."""
from __future__ import annotations

from .analyze import LemmaAudit, ShapeClass, audit, classify_component, decompose, gamma, neighborhood_shapes
from .enumerate import (
    EnumSpec,
    VerificationRecord,
    enumerate_connected,
    max_lambda_over_class,
    records_to_csv,
    verify_table,
)
from .errors import (
    BudgetError,
    CapacityError,
    FanFreeError,
    FeasibilityError,
    FormatError,
    InvariantError,
    MoveError,
    ParameterError,
    StructureError,
)
from .graph import (
    Graph,
    GraphFamily,
    canonical_form,
    canonical_labeling,
    construct,
    disjoint_union,
    extremal_graph,
    from_graph6,
    is_isomorphic,
    join,
    to_graph6,
)
from .optimize import RotationMove, SearchReport, check_rotation_lemma, local_search, rotate
from .patterns import FanWitness, contains_fan, is_fan_free, is_triangle_free, neighborhood_subgraph
from .spectral import SpectralCertificate, closed_form_join_lambda, conjecture_bound, perron_vector, spectral_radius

__version__ = "0.1.0"
