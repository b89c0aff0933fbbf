"""Ising spin-glass minimization on Chimera graphs.

Exact strip dynamic programming, a (1 - eps) approximation scheme built
on it, constructive bound certificates, an exhaustive oracle for small
systems, and reproducible instance files.
"""

from .graph import (ChimeraCoord, ChimeraTopology, EdgeClass, build_chimera,
                    coord_to_id, id_to_coord, transpose, transpose_perm,
                    vertex_layer)
from .hamiltonian import (ChimeraInstance, EnergyBreakdown, MagnitudeSums,
                          check_spins, evaluate, flip_all, flip_layer,
                          magnitude_sums, transpose_instance, transpose_spins)
from .oracle import ORACLE_MAX_VERTICES, SmallProblem, brute_force
from .strip_dp import (REFERENCE_WIDTH_BUDGET, WIDTH_BUDGET, StripGraph,
                       StripSolution, WidthBudgetError, extract_strips,
                       make_strip, scatter_spins, solve_strip,
                       solve_strip_reference, strip_energy)
from .bounds import (C_LOWER, CERT_FACTOR, K_UPPER, KRIVINE, BoundReport,
                     GrothendieckConstants, certificate, field_witness,
                     half_sum_unit_vectors, k44_exhaustive_min, k44_witness,
                     path_witness)
from .ptas import (Decomposition, PtasParams, PtasResult, RuntimeEstimate,
                   choose_cut, choose_kstar, class_edges, class_weights,
                   column_edge_group, decompose, predicted_runtime,
                   ptas_solve)
from .instance_io import (ASSIGNMENT_TAG, INSTANCE_TAG, Distribution,
                          GeneratorSpec, InstanceFormatError, generate,
                          load_assignment, load_instance, save_assignment,
                          save_instance)

__version__ = "0.1.0"
