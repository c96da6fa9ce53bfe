"""cusplab: exact-arithmetic verification lab for twisted rings, Lang-isogeny
hypersurfaces, unipotent-group representations and truncated local-field
character identities at small parameters.

Everything computes in exact cyclotomic arithmetic; the `verify` CLI runs the
whole battery of checks over a parameter grid and emits machine-readable
reports.
"""

from .cyclo import CycloScalar, cyclo_normalize, zeta
from .fields import (AdditiveChar, ExtField, FieldTower, FqnElem,
                     SizeBoundError, make_tower)
from .geometry import (BudgetExceeded, SumReport, compute_alpha,
                       compute_alpha_j, dl_trace, enumerate_X, exp_sum,
                       fixed_census, purity_consistency, verify_step)
from .polys import SparsePoly
from .report import CheckRow, emit
from .reps import (CentralIrrep, ExtendedRep, central_irrep, extend_to_Rx,
                   mackey_intertwining, normalizer_of_char, polarization)
from .twisted import (RingParams, TwistedElem, enumerate_group, lang,
                      semidirect_act, tinv, tmul)

__version__ = "0.1.0"

__all__ = [
    "CycloScalar", "cyclo_normalize", "zeta",
    "AdditiveChar", "ExtField", "FieldTower", "FqnElem", "SizeBoundError", "make_tower",
    "BudgetExceeded", "SumReport", "compute_alpha", "compute_alpha_j", "dl_trace",
    "enumerate_X", "exp_sum", "fixed_census", "purity_consistency", "verify_step",
    "SparsePoly",
    "CheckRow", "emit",
    "CentralIrrep", "ExtendedRep", "central_irrep", "extend_to_Rx",
    "mackey_intertwining", "normalizer_of_char", "polarization",
    "RingParams", "TwistedElem", "enumerate_group", "lang", "semidirect_act",
    "tinv", "tmul",
    "__version__",
]
