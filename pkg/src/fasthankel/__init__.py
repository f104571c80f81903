"""fasthankel: fast Schlomilch and Fourier-Bessel expansion evaluation and
the order-0 discrete Hankel transform, in O(N (log N)^2 / log log N)
operations with all algorithmic parameters derived from a working accuracy.
"""

from .bessel import (
    BesselRootsTable,
    asy_coeff,
    asy_coeffs,
    asy_cutoff,
    asy_error_bound,
    bessel_j,
    bessel_roots_j0,
    hankel_asy_eval,
    neumann_radius,
    taylor_cutoff,
    taylor_eval,
)
from .dht import DhtPlan, dht, dht_direct, dht_plan, dht_self_inverse_residual
from .fourier_bessel import (
    NeumannParams,
    fourier_bessel_direct,
    fourier_bessel_eval,
    neumann_column_cutoff,
    neumann_matvec,
    select_neumann_params,
    taylor_column_cutoff,
)
from .schlomilch import (
    PartitionScheme,
    SchlomilchParams,
    asy_block_apply,
    build_partition,
    schlomilch_direct,
    schlomilch_fast,
    schlomilch_single_partition,
    select_params,
)
from .trig import DCT1, DST1, TransformPlan, apply, make_plan
from .vecio import VectorFileError, read_vector, write_vector

__version__ = "0.1.0"

__all__ = [
    "BesselRootsTable",
    "asy_coeff",
    "asy_coeffs",
    "asy_cutoff",
    "asy_error_bound",
    "bessel_j",
    "bessel_roots_j0",
    "hankel_asy_eval",
    "neumann_radius",
    "taylor_cutoff",
    "taylor_eval",
    "DCT1",
    "DST1",
    "TransformPlan",
    "apply",
    "make_plan",
    "SchlomilchParams",
    "PartitionScheme",
    "select_params",
    "build_partition",
    "schlomilch_direct",
    "asy_block_apply",
    "schlomilch_single_partition",
    "schlomilch_fast",
    "NeumannParams",
    "neumann_column_cutoff",
    "taylor_column_cutoff",
    "select_neumann_params",
    "neumann_matvec",
    "fourier_bessel_eval",
    "fourier_bessel_direct",
    "DhtPlan",
    "dht_plan",
    "dht",
    "dht_direct",
    "dht_self_inverse_residual",
    "VectorFileError",
    "read_vector",
    "write_vector",
    "__version__",
]
