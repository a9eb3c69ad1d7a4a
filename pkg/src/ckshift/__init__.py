"""Exact combinatorics of one-sided Markov shifts on countable graphs:
level spectra and their clopen algebra, Cuntz-Krieger relation checking,
the monomial inverse semigroup, and shift-equivalence invariants."""

from .errors import DomainError, UnsupportedPresentationError, ValidationError
from .graphs import (BandedTailGraph, BlockPatternGraph, ClassificationReport,
                     ConditionLVerdict, FiniteGraph, Loop, LoopRecord, Verdict,
                     classify, condition_l, enumerate_loops,
                     every_vertex_reaches_loop, finite_form, has_no_zero_rows,
                     is_irreducible)
from .pathspace import (BoundaryPattern, FreenessScanResult, MarkovModel,
                        PeriodicPointRecord, PeriodicScan, SpectrumPoint,
                        cluster_patterns, dense_model, essential_freeness_scan,
                        full_pattern, full_point, make_pattern,
                        periodic_points, project_point, shift_point,
                        spectrum_level, strict_period_counts, truncated_point,
                        validate_model)
from .clopen import (Ck4Result, ClopenSet, base_sets, ck4_identity, cylinder,
                     empty_clopen, follower_set, full_space, make_clopen,
                     raise_level, vertex_cylinder)
from .semigroup import (CkReport, Monomial, PartialInjection, adjoint, cocycle,
                        compose, decision_level, evaluate, generator, identity,
                        make_monomial, normalize, parse_monomial, product,
                        projection_p, projection_q, semantically_equal,
                        tail_partition, verify_ck_relations, zero)
from .intmat import (Matrix, as_matrix, charpoly, det, identity as identity_matrix,
                     mat_mul, mat_pow, smith_normal_form, trace)
from .sse import (BowenFranks, ConjugacyPair, DimensionGroup, DimGroupElement,
                  apply_phi, apply_psi, bowen_franks, build_conjugacy,
                  charpoly_nonzero_part, compare_invariants, edge_paths,
                  edge_set, search_elementary, trace_powers, verify_elementary,
                  verify_shift_equivalence, verify_strong_chain)

__version__ = "0.1.0"
