"""Exact geometry of rank-n lattices given by rational Gram forms.

Systoles and minimal vectors, the strata X_k / X / Y, Ash's retraction flow
onto the well-rounded retract, and checks of the X != Y counterexample.
"""

from .enumeration import MinimalVectorData, ShortVectorQuery, enumerate_short, minimal_vectors
from .exact import HNF, Matrix, NotPositiveDefinite, Singular, SymmetricForm, det, hnf, invert, ldlt
from .retraction import (
    AlreadyWellRounded,
    FlowEvent,
    OutOfRange,
    RetractionTrace,
    decompose,
    event,
    flow_at,
    flow_step,
    retract_to_X,
)
from .strata import StratumReport, classify, exhaustion_value

__version__ = "0.1.0"
