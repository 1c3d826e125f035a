"""Point counts, motivic classes and weight tables for spaces of polynomial tuples
with bounded common-root multiplicity, rational maps and pointed rational curves."""

from ratmaps.gf import FieldCtx, FieldElem, make_field, parse_field
from ratmaps.motive import MotiveClass, specialize
from ratmaps.polyring import Poly
from ratmaps.strata import BudgetExceeded, PolyTuple, StratumParams

__all__ = [
    "BudgetExceeded",
    "FieldCtx",
    "FieldElem",
    "MotiveClass",
    "Poly",
    "PolyTuple",
    "StratumParams",
    "make_field",
    "parse_field",
    "specialize",
]
