"""Exact combinatorics of W-equivariant perverse sheaves on finite Coxeter arrangements."""
from .bisheaf import (AxiomFailure, ChamberBisheaf, CheckReport, FullBisheaf, NotARepresentation, PervModule,
                      ShapeMismatch, ValidationRequired, chamber_to_module, extend_to_full_bisheaf,
                      module_to_chamber_bisheaf, module_to_full_bisheaf, restrict_full_bisheaf,
                      validate_full_bisheaf, validate_module)
from .coxeter import (CoxeterMatrix, CoxeterSystem, NonFiniteGroup, RankTooLarge, UnsupportedCoxeterEntry,
                      build_system, conjugate_generator_set, length, longest_element, multiply,
                      parabolic_subgroup, preset)
from .facets import (FacetId, OppositionDatum, UnsupportedScalarField, act, collinear_triple, enumerate_facets,
                     enumerate_oppositions, facet_leq, geometric_oppositions, realize_geometric, star)
from .perversity import (EnumerationCapExceeded, MonodromyReport, Relation5Datum, check_invertible,
                         check_perverse, check_transitive, counterexample_search, enumerate_relation5_data,
                         invertibility_oracle_geometric, make_local_system_module, make_rank_one_Z2,
                         make_skyscraper, monodromy, transitivity_oracle_geometric)

__all__ = [name for name in dir() if not name.startswith("_")]
