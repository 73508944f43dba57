from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("jack-measures")
except PackageNotFoundError:  # pragma: no cover
    __version__ = "0.0.0"

from .partitions import (
    AnisotropyParams,
    Partition,
    params_from_alpha,
    params_from_ebar_hbar,
    params_from_eps,
    partitions_of_size,
)
from .scalars import ScalarField
from .specializations import Specialization

__all__ = [
    "AnisotropyParams",
    "Partition",
    "ScalarField",
    "Specialization",
    "params_from_alpha",
    "params_from_ebar_hbar",
    "params_from_eps",
    "partitions_of_size",
]
