"""Ramsey-Turan constructions on products of spheres, with exact checkers.

The pipeline: pick sphere parameters, partition the sphere into small cells,
build the blown-up hypercube and its bipartite family, form the base
hypergraph of near-antipodal tuples, blow it up randomly while removing
short Berge cycles, and join two copies into the graph G.
"""
from .configs import Configuration, classify_configuration, derive_implications, theta_upper, total_weight_bound
from .errors import DomainError, PreconditionError, ResourceLimitError, StageError
from .graph import ConstructionParams, Graph, assemble_construction, density_report
from .harness import RunConfig, run_pipeline, sweep
from .hypercube import build_bipartite_family, build_blown_hypercube, compute_ell
from .sphere import build_partition, cap_measure, select_sphere_params
from .verification import alpha_r_bounds, max_clique, verify_freeness

__version__ = "0.1.0"
