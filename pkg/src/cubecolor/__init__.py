"""Exact tools for colorings of the cubical grid: monochromatic
components, rectilinear chain filling, and end-to-end certification of
the component-size volume bookkeeping."""

from .bounds import BoundsTable, bound_table, g_constant
from .chains import (
    INTEGER,
    MOD2,
    BoxCell,
    RectChain,
    boundary,
    cell,
    cone_project,
    fill,
    fundamental_chain,
    is_relative_cycle,
    modulo_boundary,
    random_relative_cycle,
    section_and_split,
    sweep_slabs,
    volume,
)
from .gridcolor import (
    ComponentReport,
    GridColoring,
    components,
    parse_coloring,
    spanning_report,
)
from .nervecontract import (
    AuditReport,
    Nerve,
    Part,
    ShiftedPartition,
    assemble_and_audit,
    build_shifted_partition,
    certify_coloring,
    contraction,
    face_chain,
    mono_parts,
    nerve,
    skeleton_volume,
)
from .search import (
    SearchConfig,
    anneal,
    exhaustive_min,
    random_coloring,
    stripe_construction,
)

__all__ = [
    "AuditReport",
    "BoundsTable",
    "BoxCell",
    "ComponentReport",
    "GridColoring",
    "INTEGER",
    "MOD2",
    "Nerve",
    "Part",
    "RectChain",
    "SearchConfig",
    "ShiftedPartition",
    "anneal",
    "assemble_and_audit",
    "bound_table",
    "boundary",
    "build_shifted_partition",
    "cell",
    "certify_coloring",
    "components",
    "cone_project",
    "contraction",
    "exhaustive_min",
    "face_chain",
    "fill",
    "fundamental_chain",
    "g_constant",
    "is_relative_cycle",
    "modulo_boundary",
    "mono_parts",
    "nerve",
    "parse_coloring",
    "random_coloring",
    "random_relative_cycle",
    "section_and_split",
    "skeleton_volume",
    "spanning_report",
    "stripe_construction",
    "sweep_slabs",
    "volume",
]
