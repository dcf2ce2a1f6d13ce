# This file is part of mlexp
# See file LICENSE.txt for license information.

from importlib.metadata import PackageNotFoundError, version

from .representation import ReprParams, h_exp, h_exp_lambda
from .series import (
    RationalOrder,
    SeriesValue,
    TruncationPolicy,
    h_series,
    h_via_decomposition,
    j_series,
)

try:
    __version__ = version("mlexp")
except PackageNotFoundError:
    __version__ = "unknown"

__all__ = [
    "RationalOrder",
    "ReprParams",
    "SeriesValue",
    "TruncationPolicy",
    "h_exp",
    "h_exp_lambda",
    "h_series",
    "h_via_decomposition",
    "j_series",
]
