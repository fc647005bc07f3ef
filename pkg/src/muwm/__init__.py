"""Mutually unbiased and quasi-unbiased weighing matrices.

Constructions from binary and Z4 codes and from root-lattice 2-frames,
conversion to antipodal spherical codes, and exact-rational bound
certificates.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import MuwmError  # noqa: E402
from .matrixcore import (  # noqa: E402
    FamilyParams,
    MatrixFamily,
    WeighingMatrix,
    derive_muwm,
    make_family,
    screen_parameters,
    verify_family,
    verify_weighing,
)

__all__ = [
    "__version__",
    "MuwmError",
    "FamilyParams",
    "MatrixFamily",
    "WeighingMatrix",
    "derive_muwm",
    "make_family",
    "screen_parameters",
    "verify_family",
    "verify_weighing",
]
