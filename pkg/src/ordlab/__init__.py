"""Countable linear orders given by terms: classification, Cantor normal
forms, Hausdorff rank, explicit embeddings and their refutation, and the
encoding of bounded Sigma^0_2 truth into embeddability of well orders."""
from .cnf import (CnfSeq, RawSeq, cnf_add, lex_compare, normalize, omega_power_times,
                  segment_of, structural_cnf)
from .embeddings import (EmbeddingWitness, Verification, compose, dense_embed,
                         extract_descending, finite_map, identity, interval_lift,
                         search_embedding, self_embed_ill_founded, self_embed_non_scattered,
                         verify_embedding, wwo_witness)
from .errors import (BudgetError, DomainError, IncompleteWitness, InternalConsistencyError,
                     OrdlabError, OutOfRangeError, TermSyntaxError, UnsupportedPresentation,
                     ViolationError, WitnessInvalid)
from .hausdorff import cnf_via_hausdorff, derivative_step, limit_stage, rank
from .presentation import Presentation, compare_points, denote, prefix
from .refutation import (SumSegment, check_no_segment_self_embedding, fraisse_extract,
                         refute_exponent_drop)
from .sigma2 import (Sigma2Instance, brute_force_psi, build_family, build_family_primed,
                     build_k_table, construct_embedding, descending_chain_check, extract_x,
                     positional_invariant_check)
from .terms import (Empty, Fin, Omega, OmegaExp, OrderClass, Rationals, Rev, Sum, classify,
                    parse, show)

__version__ = "0.1.0"
