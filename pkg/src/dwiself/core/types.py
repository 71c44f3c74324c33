from __future__ import annotations

from typing import Literal, TypeAlias, TypeVar

import numpy as np
import numpy.typing as npt


# Generic Type
T = TypeVar("T")

FloatArray: TypeAlias = "npt.NDArray[np.floating]"
BoolArray: TypeAlias = "npt.NDArray[np.bool_]"
IndexArray: TypeAlias = "npt.NDArray[np.intp]"

Dims3: TypeAlias = "tuple[int, int, int]"
Dims4: TypeAlias = "tuple[int, int, int, int]"
Spacing: TypeAlias = "tuple[float, float, float]"

PassthroughPolicy: TypeAlias = Literal["copy", "zero"]
RegularizationKind: TypeAlias = Literal["ols", "ridge"]
