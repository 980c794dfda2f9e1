"""Combinatorics of ordered bi-infinite Bratteli diagrams and the flat
surfaces they encode: path-space orders, singular sets, states and charts,
Rauzy-Veech induction and its inverse, surface-built diagrams, and K-zero
direct-limit bookkeeping."""

from .core_diagram import (Alphabet, DiagramWindow, Edge, FinitePath, Level,
                           compare_paths, edge_matrix, finite_paths, successor,
                           validate_window)
from .iet_zip import (PermutationPair, TripleData, genus, iet_apply, keane_check,
                      omega, zippered)
from .induction import (InductionStep, completeness_check, density_identity_check,
                        lambda_type, rauzy_graph, renorm_step, rh_step, rv_step,
                        tau_type)
from .ktheory import (Classification, InductiveSystem, ThetaData, k0_classify,
                      k0_stage, state_pairing_window, theta_sequence)
from .path_space import (PathDescriptor, TailSpec, boundary_index, delta,
                         extremal_paths, sigma_scan, standing_hypotheses_check,
                         tail_equivalent)
from .states_charts import (ChartDatum, CylinderSet, LeftRay, RightRay, State,
                            chart_transition, cylinder_measure, find_quads,
                            phi_minus, phi_plus, phi_shift_check, phi_tail,
                            psi_chart, validate_state)
from .surface_diagram import (SurfaceDiagram, build, horizontal_paths,
                              s_extreme_classes, shift, verify_flatness,
                              verify_standard)

__version__ = "0.1.0"
