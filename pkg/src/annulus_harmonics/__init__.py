"""Harmonic functions on annular cylinders: Bessel cross products, certified
zero tables, Dini series and the double-series Green function."""

__version__ = "0.1.0"

from .cross_product import AnnulusGeometry, u_big, u_small  # noqa: E402
from .errors import (  # noqa: E402
    AnnulusError,
    DomainError,
    IterationLimitError,
    PolePlaneError,
    PreconditionError,
    QuadratureError,
    RegionError,
    TruncationError,
)
from .expansions import norm_integral, series_kernel  # noqa: E402
from .green import (  # noqa: E402
    Pole,
    ReducedPoint,
    TruncationSpec,
    extend_green,
    green_annulus,
    green_cylinder,
)
from .special_functions import Accuracy, Order, bessel_j, bessel_y  # noqa: E402
from .zeros import CertifiedZero, ZeroTable, rho_zeros  # noqa: E402

__all__ = [
    "__version__",
    "Accuracy",
    "AnnulusError",
    "AnnulusGeometry",
    "CertifiedZero",
    "DomainError",
    "IterationLimitError",
    "Order",
    "Pole",
    "PolePlaneError",
    "PreconditionError",
    "QuadratureError",
    "ReducedPoint",
    "RegionError",
    "TruncationError",
    "TruncationSpec",
    "ZeroTable",
    "bessel_j",
    "bessel_y",
    "extend_green",
    "green_annulus",
    "green_cylinder",
    "norm_integral",
    "rho_zeros",
    "series_kernel",
    "u_big",
    "u_small",
]
