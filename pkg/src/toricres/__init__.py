"""Combinatorial resolution of binomial ideals in regular toric embeddings."""
__version__ = "0.1.0"

from .binomial_charts import (Chart, ChartBinomial, ChartIdeal, EmbeddingState, Monomial,
                              TorusRelation, check_gluing, make_state, normalize)
from .blowup_transform import blow_up_global, strict_transform, total_transform
from .errors import *  # noqa: F401,F403
from .hasse_hypersurface import global_invariant, resolve_hypersurface
from .lattice_fan import RegularCone, RegularFan, cone, standard_fan, star_subdivision
from .marked_monomial_general import MarkedMonomialIdeal, order_reduce, resolve_general
from .standard_basis_hs import hs_at_distinguished, is_smooth_chart, standard_basis

