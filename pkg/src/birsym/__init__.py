"""Exact calculator for symbol groups of finite abelian group actions.

Presents the four flavors of symbol groups by sparse integer matrices,
computes their dimensions over Q and finite fields, applies the
structure maps (comparison, multiplication, comultiplication, Hecke
operators), evaluates the fixed-locus class and certifies its blowup
invariance, and matches the antisymmetric rank-2 space with classical
weight-2 Manin symbols.
"""

from .groups import (AbelianGroup, Symbol, SymbolIndex, canonicalize,
                     enumerate_symbols, spans)
from .linalg import (IntegerLattice, ModpRowSpan, PrimeSource, RankReport,
                     SparseMatrix, SnfBudgetError, charpoly_mod_p,
                     element_order, in_rowspan_Q, in_rowspan_Z,
                     integer_row_span, is_prime, rank_Q, rank_mod_p, snf)
from .relations import (RelationSystem, SymbolVector, build_relations,
                        combination)
from .sms import read_sms, write_sms
from .structure import (LinearMap, ProductIndex, SubquotientDatum,
                        coprimitive_dim, delta_map, mu_cokernel, mu_map,
                        nabla_map, primitive_dim, verify_mu)
from .hecke import (HeckeMatrix, Lattice, SimplicialCone,
                    enumerate_overlattices, enumerate_sublattices,
                    gaussian_binomial, hecke_matrix, induced_on_quotient,
                    multiplicity, standard_octant, subdivide_to_basic,
                    symbol_of_cone)
from .modsym import (build_manin_minus_system, build_manin_system,
                     compare_with_symbol_group, cusp_counts, modsym_dims)
from .birational import (BlowupSpec, FixedLocusData, beta_class,
                         beta_class_by_label, blowup_delta,
                         certify_invariance, random_blowup_spec)

__version__ = "0.1.0"
