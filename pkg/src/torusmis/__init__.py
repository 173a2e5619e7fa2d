"""Lower bounds on the density of unit-distance-avoiding planar sets.

The pipeline: build a distance graph on a discretized flat torus, find a
large independent set, and certify |M|/(n*m) as a plane-density lower bound;
parameter sweeps search torus families for the best certificate.
"""

from .croft import croft_density, croft_optimum, disc_packing_density
from .grid_graph import (
    GridSpec,
    TorusGraph,
    build_graph,
    circumradius,
    export_dimacs,
    export_edge_list,
    naive_build_graph,
    neighbors,
    vertex_ij,
    vertex_index,
)
from .mis import (
    DENSITY_CEILING,
    IndependentSet,
    SolverConfig,
    density_bound,
    exact_mis,
    greedy,
    load_solution,
    local_search,
    packed_greedy,
    save_solution,
    solve_instance,
    validate,
)
from .render import RenderStyle, hexagon_cell, render_solution
from .sweep import (
    DATASETS,
    DatasetSpec,
    RefinementStep,
    SweepRecord,
    SweepSummary,
    generate_dataset,
    refine,
    run_sweep,
)
from .torus import (
    FlatTorus,
    TorusPoint,
    displacement_norms,
    is_perfectly_periodic,
    metric,
    metric_oracle,
)

__all__ = [
    "FlatTorus",
    "TorusPoint",
    "displacement_norms",
    "is_perfectly_periodic",
    "metric",
    "metric_oracle",
    "GridSpec",
    "TorusGraph",
    "build_graph",
    "naive_build_graph",
    "circumradius",
    "neighbors",
    "vertex_index",
    "vertex_ij",
    "export_dimacs",
    "export_edge_list",
    "IndependentSet",
    "SolverConfig",
    "DENSITY_CEILING",
    "validate",
    "greedy",
    "packed_greedy",
    "local_search",
    "exact_mis",
    "solve_instance",
    "density_bound",
    "save_solution",
    "load_solution",
    "croft_density",
    "croft_optimum",
    "disc_packing_density",
    "DatasetSpec",
    "DATASETS",
    "SweepRecord",
    "SweepSummary",
    "RefinementStep",
    "generate_dataset",
    "refine",
    "run_sweep",
    "RenderStyle",
    "hexagon_cell",
    "render_solution",
]
