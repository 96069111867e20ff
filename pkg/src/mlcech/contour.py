"""Numerical principal parts and Laurent coefficients from circle samples."""

from logging import getLogger
from typing import Callable, Dict, Iterable, NamedTuple, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from mlcech.exact import INF, PrincipalPart

logger = getLogger(__name__)

MIN_SAMPLES = 64


class NumericPart(NamedTuple):
    """Σ_j coeffs[j−1]·(z − pole)^{−j} with a complex pole.

    Attributes:
        pole (complex): The pole a.
        coeffs (Tuple[complex, ...]): A_1..A_m.
    """

    pole: complex
    coeffs: Tuple[complex, ...]

    @classmethod
    def create(cls, pole: complex, coeffs: Iterable[complex]) -> "NumericPart":
        """Raises `ValueError` for an empty or all-zero part."""
        cs = [complex(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            raise ValueError(f"Principal part at {pole} has no nonzero coefficient")
        return cls(complex(pole), tuple(cs))

    @classmethod
    def from_principal_part(cls, part: PrincipalPart) -> "NumericPart":
        """Converts an exact part at a finite pole."""
        if part.pole is INF:
            raise ValueError("A numeric principal part needs a finite pole")
        cs = [complex(part.coefficient(j)) for j in range(1, part.order + 1)]
        return cls.create(complex(part.pole), cs)  # type: ignore[arg-type]

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def __call__(self, z: np.ndarray) -> np.ndarray:
        u = 1.0 / (np.asarray(z, dtype=complex) - self.pole)
        return P.polyval(u, (0.0,) + self.coeffs)


def circle_points(center: complex, radius: float, samples: int) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(samples) / samples
    return center + radius * np.exp(1j * theta)


def laurent_coefficients(
    f: Callable[[np.ndarray], np.ndarray],
    center: complex,
    radius: float,
    samples: int,
    exponents: Iterable[int],
) -> Dict[int, complex]:
    """Trapezoid-rule Laurent coefficients on the circle |z − center| = radius.

    c_n ≈ (1/Q) Σ_k f(z_k)·(z_k − center)^{−n}.

    Args:
        f (Callable): A vectorized function, holomorphic on an annulus around
            the circle.
        center (complex): The expansion point.
        radius (float): The circle radius.
        samples (int): The number Q of equispaced nodes, at least 64.
        exponents (Iterable[int]): The n to extract.

    Raises:
        ValueError: If `samples` < 64 or `radius` <= 0.

    Returns:
        A[n] `Dict[int, complex]` mapping n to ĉ_n.
    """
    if samples < MIN_SAMPLES:
        raise ValueError(f"{samples} samples is below the minimum {MIN_SAMPLES}")
    if not radius > 0:
        raise ValueError(f"Radius {radius} must be positive")
    z = circle_points(center, radius, samples)
    values = np.asarray(f(z), dtype=complex)
    w = z - center
    out = {n: complex(np.mean(values * w ** (-n))) for n in exponents}
    logger.debug(f"extracted {len(out)} coefficients at {center} with radius {radius}")
    return out


def principal_part_error(
    f: Callable[[np.ndarray], np.ndarray],
    part: NumericPart,
    radius: float,
    samples: int,
) -> float:
    """max_j |ĉ_{−j} − A_j| / max(1, |A_j|) over j = 1..order."""
    exps = [-j for j in range(1, part.order + 1)]
    c = laurent_coefficients(f, part.pole, radius, samples, exps)
    return max(
        abs(c[-j] - a) / max(1.0, abs(a)) for j, a in enumerate(part.coeffs, start=1)
    )
