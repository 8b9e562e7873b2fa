"""Supervector bundles on super projective space P^{n|m}.

Exact cohomology (closed forms and Cech complexes), Horrocks-type
splitting checks and explicit splitting isomorphisms.
"""
from .superring import SuperPoly, SuperSpaceSig
from .supermodule import (FreeSupermodule, NotInvertibleError, ShapeError, SuperDim, SuperMatrix, compose,
                          direct_sum, dual, invert, is_invertible, parity_shift, supertranspose, tensor, twist)
from .sheaf import (SplitBundle, TransitionBundle, builtin_bundle, classical_tangent, cocycle_check, dress,
                    dual_bundle, euler_cotangent, euler_tangent, gr_pushforward, hom_bundle, make_split,
                    random_dressed_split, sum_bundle, tensor_bundle, twist_bundle)
from .cohomology import (NotStabilized, RaoTable, bott_line, cech_cohomology, cohomology, global_sections,
                         hom_superdim, les_solve, rao_table, split_cohomology, super_line_cohomology)
from .splitting import (INCONCLUSIVE, NOT_SPLIT, SPLITS, NegativeResidual, SplitCertificate, horrocks_check,
                        lift_isomorphism, peel_splitting_type, split_certify)

__version__ = "0.1.0"
