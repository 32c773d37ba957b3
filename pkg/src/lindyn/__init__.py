"""lindyn: a computational laboratory for linear dynamics.

Weighted backward shifts on l^p and c_0 (minimum-norm preimages, the smallest
norm missed by the image of the unit ball, strong-dynamics classification and
witnesses), greedy extraction of orbit exponents whose span misses the start
vector, and disk automorphism / weighted composition operator machinery with
computable obstruction witnesses.
"""

from .seqspace import Space, SeqVector, Subspace, SpaceMismatchError, dist_to_span
from .shiftops import (
    BackwardShift,
    ConstantTail,
    ExhaustedTail,
    GeometricTail,
    RationalTail,
    WeightIndexError,
    WeightSeq,
)
from .epsilon import EpsilonReport, epsilon_closed_form, epsilon_estimate, in_image_of_unit_ball
from .strongdyn import HCWitness, StrongClassification, WitnessSearch, classify, strong_hc_witness
from .extract import (
    ExtractionTrace,
    MatrixOp,
    SearchCapExceededError,
    StartPreconditionError,
    extract_subsequence,
    normalize_start,
    select_next,
    verify_trace,
)
from .diskdyn import (
    AnalyticFn,
    Composition,
    DiskAutomorphism,
    FixedPointInfo,
    MoebiusFn,
    MoebiusMap,
    ObstructionReport,
    PointProduct,
    Polynomial,
    Product,
    Reciprocal,
    VanishingWeightError,
    WeightedCompOp,
    certified_reciprocal,
    denjoy_wolff_by_iteration,
    obstruction_report,
    unit_disk_grid,
)

__version__ = "0.1.0"
