"""PWP indirect-influence transform, vertex rankings and their stability."""

from .analytic import (CrossingPoint, circuit_indirect, circuit_scores, crossing_consecutive,
                       half_size, importance_coefficients, linear_importance, linear_influence)
from .errors import (BadWeight, BlockStructureError, Degenerate, DuplicateEdge,
                     IllConditionedBasis, NoBracket, NotRealDiagonalizable, ParseError,
                     PwpError, ShapeError, TruncationNotConverged)
from .graph import (WeightedDigraph, circuit_graph, from_edge_list, from_matrix,
                    from_matrix_csv, linear_graph, parse_edge_list, process_matter_chain,
                    process_matter_fold, render_edge_list, render_matrix_csv)
from .rankings import (KINDS, Ranking, ScoreVector, direct_scores, indirect_scores,
                       parse_ranking, ranking_equal, ranking_from_scores, refines)
from .series import InfluenceMatrix, PwpParams, PwpSeries, eplus, pwp_rescaled, pwp_transform
from .spectral import (ExpSum, RealSpectrum, RootIsolation, isolate_roots,
                       pwp_transform_auto, pwp_transform_spectral, real_eigendecomposition,
                       score_difference_expsum)
from .sweep import (Crossing, Segment, SweepReport, SweepSpec, epsilon_sweep, find_crossing,
                    lambda_sweep, verify_unique_crossings)

__version__ = "0.1.0"
