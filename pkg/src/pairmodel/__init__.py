"""Commuting contraction pairs: defect calculus, Andô tuples, characteristic
triples, truncated lifts and functional models on matrices."""
from .matcore import DEFAULT_TOL, Subspace, Tolerances
from .contraction import classify, defect, strong_limit_Q
from .ando import (AndoTuple, CommutingPair, build_ando_tuple, build_ando_tuple_adjoint,
                   hardy_section_regularity, regularity)
from .charfn import AnalyticFn, CircleGrid, SampledFn, theta_eval, z_operator
from .fundamental import CharTriple, GridUnitaries, char_triple, gs_from_tuple, solve_fundamental
from .lift import (bcl_pair, douglas_ando_lift, douglas_lift, schaffer_ando_lift, schaffer_lift,
                   verify_lift)
from .admiss import (check_admissible, coincidence_search, coincidence_verify, graph_subspace,
                     model_pair, scalar_criterion, word_moments)
from .invsub import inner_subspace, solve_Gprime, verify_extracond_general, verify_joint_invariance
from .fixtures import PairFixture, gen_commuting_pair

__version__ = "0.1.0"
