from .lpoly import (DimensionMismatch, LPoly, Monomial, NotDivisible, ParseError, add, all_coefficients_positive, as_fraction, div_exact, format_fraction, format_lpoly, from_compact, has_negative_y, make_monomial, max_y_degrees, monomial_to_compact, mul, parse_lpoly, product, set_x_one, set_y_one, substitute, to_compact, unit_monomial, x_denominator)
from .surface import (NOTCHED, PLAIN, Arc, AssumptionError, BoundarySegment, LoopSpec, TaggedArcSpec, Triangle, Triangulation, TriangulationError, arc_in_triangulation, end_count, exchange_matrix, is_arc, normalize_tags, puncture_fan, retag, to_ideal, validate)
from .matching import (StructureError, decompose_into_faces, enumerate_perfect_matchings, is_perfect_matching)
from .polygon import (Angle, ArcInTriangulation, CrossingError, PolygonError, PolygonTriangle, TPolygon, angle_sides, angle_weight, angles, build, build_annulus, build_arc_loop, build_band_strip, build_loop_polygon, build_notched, build_plain, loop_label, opposite_edge, resolve_crossings, resolve_loop)
from .angle_matchings import (angle_sum, expansion_terms, four_angle_diagonal, good_enumerate, is_bad, max_angle, min_angle, minimal_matching, y_support)
from .snake import (BandGraph, SnakeGraph, build_band, build_snake, compatible_pairs, compatible_terms, snake_sum, snake_terms, symmetric_pms, symmetric_terms)
from .bipartite import (BipartiteGraph, bipartite_sum, bipartite_terms, build_bipartite)
from .qp import (QuiverWithPotential, all_cuts, build_qp, cut_terms, cuts, minimal_cuts, qp_sum, rho, rho_inverse)
from .expand import (apply_phi, backends_agree, cluster_variable, compare_backends, end_monomial, f_vector, intersection_number, laurent_sum, loop_element, loop_terms, loop_variable, objects, phi, relabel, substitution_targets, two_notched_values)
from .oracle import (OracleMismatch, Seed, mutate, mutate_matrix, mutation_closure, random_mutation_check, resolve_two_notched_branch, seed_from_matrix, seed_from_triangulation, verify_against_formula)
from .config import (BACKENDS, BRANCHES, check_choice, configure_logging)
