"""Exact pointwise curvature theory of indefinite Kaehler metrics.

Everything lives on a single tangent space with exact rational arithmetic:
Kaehler curvature tensors, sectional and holomorphic sectional curvature,
and executable rigidity checks showing that the relevant vanishing or
boundedness hypotheses force constant holomorphic sectional curvature.
"""

from .curvature import (
    CurvatureTensor,
    evaluate,
    holomorphic_sectional,
    is_constant_hsc,
    model_tensor,
    pi1,
    pi2,
    sectional,
    validate_symmetries,
)
from .errors import (
    DegeneratePlane,
    DimensionMismatch,
    InvalidTensor,
    KahlerError,
    NullVector,
    ParseError,
    PreconditionError,
    RankNotStabilized,
    UnrealizableSignature,
)
from .linalg import (
    SignatureClass,
    Space,
    Vector,
    apply_J,
    classify_pair,
    classify_triple,
    inner,
    is_antiholomorphic_pair,
    sample_pair,
    sample_triple,
)
from .rigidity import Hypothesis, rigidity_verdict, theorem1_witness
from .tensor_space import coordinates, kaehler_basis, nullspace

__version__ = "0.1.0"
