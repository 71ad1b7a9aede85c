"""Random-walk and chemical Laplacians on hypergraphs.

The walk Laplacians ``I - D^{-1} A`` all reduce to normalized Laplacians of a
weighted graph; the chemical Laplacian of an oriented hypergraph does not.
The subpackages expose both families, their spectra, harmonic functions,
Monte-Carlo walks and coupled hypergraph map dynamics.
"""

from .chemical import ChemicalLaplacian, Kind, adjoint_apply, boundary_apply, chemical
from .chm import (
    ScalarMap,
    chm_step,
    commutativity_check,
    coupling,
    ensemble_run,
    invariance_report,
    scalar_apply,
)
from .errors import ComputationError, HyperlapError, ParseError, ValidationError
from .harmonic import DirichletProblem, GeneralLaplacian, check_maximum_principle, solve_dirichlet
from .hypergraph import (
    Hypergraph,
    OrientedHypergraph,
    WeightedGraph,
    degree_t,
    is_bipartite_graph,
    is_connected,
    max_cardinality,
    parse_hypergraph,
    read_hypergraph,
    serialize,
)
from .rw import (
    RWLaplacian,
    Variant,
    WalkFactorization,
    assemble,
    effective_graph,
    factorize,
    graph_rw_laplacian,
    identity_factorization,
    transpose_laplacian,
)
from .spectral import Spectrum, certify, eigen_decompose, rayleigh_quotient, verify_minmax
from .stochastic import absorbing_walk, empirical_kernel, evolve_distribution, simulate_walk

__version__ = "0.1.0"
