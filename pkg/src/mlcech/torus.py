"""Mittag-Leffler on a complex torus ℂ/Λ through Weierstrass ζ and ℘.

Lattice sums are split at r_inner: lattice points inside are summed directly,
the shell r_inner < |ω| ≤ r_cut enters through its power sums P_k = Σ ω^{−k}
and a Taylor expansion in z.
"""

import math
from logging import getLogger
from typing import Dict, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P

from mlcech.contour import NumericPart, principal_part_error
from mlcech.errors import GeometryError, UnsolvableError
from mlcech.exact import ZERO, GaussianRational, PrincipalPart
from mlcech.settings import DEFAULT_SETTINGS, Settings

logger = getLogger(__name__)

DEGENERACY_TOL = 1e-12
MAX_POLE_ORDER = 8


class Lattice(NamedTuple):
    """Λ = ℤω₁ + ℤω₂ with Im(ω₂/ω₁) > 0 and |ω₁| ≤ |ω₂|."""

    omega1: complex
    omega2: complex

    @classmethod
    def create(cls, omega1: complex, omega2: complex) -> "Lattice":
        """Canonicalizes the basis.

        Raises:
            ValueError: If the periods are zero or ℝ-linearly dependent.
        """
        w1, w2 = complex(omega1), complex(omega2)
        if w1 == 0 or w2 == 0:
            raise ValueError("Periods must be nonzero")
        im = (w2 / w1).imag
        if abs(im) <= DEGENERACY_TOL:
            raise ValueError(f"Periods {w1} and {w2} are linearly dependent over ℝ")
        if im < 0:
            w2 = -w2
        if abs(w1) > abs(w2):
            w1, w2 = w2, -w1
        return cls(w1, w2)

    @property
    def area(self) -> float:
        return abs((self.omega1.conjugate() * self.omega2).imag)

    def coordinates(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(x, y) with z = x·ω₁ + y·ω₂."""
        z = np.asarray(z, dtype=complex)
        a = (self.omega1.conjugate() * self.omega2).imag
        return (np.conj(z) * self.omega2).imag / a, (self.omega1.conjugate() * z).imag / a

    def reduce(self, z: np.ndarray) -> np.ndarray:
        """The representative of z in the fundamental parallelogram."""
        x, y = self.coordinates(z)
        return (x - np.floor(x)) * self.omega1 + (y - np.floor(y)) * self.omega2

    def distance_mod(self, z: complex, w: complex) -> float:
        """min over λ ∈ Λ of |z − w − λ|."""
        d = complex(self.reduce(z - w))
        return min(
            abs(d + m * self.omega1 + n * self.omega2)
            for m in (-1, 0, 1)
            for n in (-1, 0, 1)
        )

    def points(self, radius: float) -> np.ndarray:
        """The nonzero lattice points with |ω| ≤ radius."""
        a = self.area
        m_max = int(math.ceil(radius * abs(self.omega2) / a)) + 1
        n_max = int(math.ceil(radius * abs(self.omega1) / a)) + 1
        m, n = np.meshgrid(np.arange(-m_max, m_max + 1), np.arange(-n_max, n_max + 1))
        pts = (m * self.omega1 + n * self.omega2).ravel()
        keep = (np.abs(pts) <= radius) & ((m != 0) | (n != 0)).ravel()
        return pts[keep]


def _tail_bound(lattice: Lattice, radius: float, power: int) -> float:
    """A bound on Σ_{|ω| > radius} |ω|^{−power}, from comparing each lattice point
    with the integral over its cell."""
    h = (abs(lattice.omega1) + abs(lattice.omega2)) / 2.0
    rho = radius - 2.0 * h
    if rho <= 0:
        return math.inf
    return (2.0 * math.pi / lattice.area) * (
        rho ** (2 - power) / (power - 2) + h * rho ** (1 - power) / (power - 1)
    )


class WeierstrassContext:
    """Precomputed lattice data for ζ, ℘ and the derivatives of ℘.

    Attributes:
        lattice (Lattice): The lattice.
        inner (np.ndarray): The lattice points summed directly.
        moments (Dict[int, complex]): P_k = Σ ω^{−k} over the outer shell.
        g2 (complex): 60·Σ ω^{−4}.
        g3 (complex): 140·Σ ω^{−6}.
        tail_estimate (float): A bound on the part of g2 and g3 beyond r_cut.
        radius_limit (float): The largest |z| accepted by the lattice sums.
    """

    def __init__(
        self,
        lattice: Lattice,
        r_cut: float = DEFAULT_SETTINGS.r_cut,
        r_inner: float = DEFAULT_SETTINGS.r_inner,
        moment_order: int = DEFAULT_SETTINGS.moment_order,
    ) -> None:
        if not 0 < r_inner < r_cut:
            raise ValueError(f"Need 0 < r_inner < r_cut, got {r_inner}, {r_cut}")
        self.lattice = lattice
        self.moment_order = moment_order
        scale = abs(lattice.omega2)
        self.scale = scale
        pts = lattice.points(r_cut * scale)
        inner_mask = np.abs(pts) <= r_inner * scale
        self.inner = pts[inner_mask]
        outer = pts[~inner_mask]
        inv = 1.0 / outer
        power = inv * inv
        self.moments: Dict[int, complex] = {}
        for k in range(3, moment_order + MAX_POLE_ORDER + 1):
            power = power * inv
            self.moments[k] = complex(np.sum(power))
        self.g2 = 60.0 * (complex(np.sum(self.inner**-4.0)) + self.moments[4])
        self.g3 = 140.0 * (complex(np.sum(self.inner**-6.0)) + self.moments[6])
        self.tail_estimate = 60.0 * _tail_bound(lattice, r_cut * scale, 4) + 140.0 * (
            _tail_bound(lattice, r_cut * scale, 6)
        )
        self.radius_limit = r_inner * scale / 3.0
        logger.info(
            f"lattice context: {self.inner.size} inner and {outer.size} outer points, "
            f"tail estimate {self.tail_estimate:.3e}"
        )

    @classmethod
    def from_settings(cls, lattice: Lattice, settings: Settings) -> "WeierstrassContext":
        return cls(lattice, settings.r_cut, settings.r_inner, settings.moment_order)

    def lattice_sum(self, z: np.ndarray, m: int) -> np.ndarray:
        """S_m(z): Σ (z − ω)^{−m} over Λ, regularized for m = 1, 2 so that
        S_1 = ζ and S_2 = ℘.

        Raises:
            ValueError: If m is out of range or |z| exceeds `radius_limit`.
            GeometryError: If z is a lattice point.
        """
        if not 1 <= m <= MAX_POLE_ORDER:
            raise ValueError(f"Lattice sum order {m} is not in [1, {MAX_POLE_ORDER}]")
        z = np.asarray(z, dtype=complex)
        flat = z.reshape(-1)
        if flat.size and np.max(np.abs(flat)) > self.radius_limit:
            raise ValueError(
                f"|z| exceeds the expansion radius {self.radius_limit}; raise r_inner"
            )
        diff = flat[:, None] - self.inner[None, :]
        nearest = min(
            np.min(np.abs(flat), initial=math.inf), np.min(np.abs(diff), initial=math.inf)
        )
        if nearest < DEGENERACY_TOL * self.scale:
            raise GeometryError("Lattice sums are singular on the lattice")
        w = self.inner
        if m == 1:
            direct = 1.0 / flat + np.sum(1.0 / diff + 1.0 / w + flat[:, None] / w**2, axis=1)
            k0 = 2
        elif m == 2:
            direct = flat**-2.0 + np.sum(diff**-2.0 - w**-2.0, axis=1)
            k0 = 1
        else:
            direct = flat ** float(-m) + np.sum(diff ** float(-m), axis=1)
            k0 = 0
        coeffs = np.zeros(self.moment_order + 1, dtype=complex)
        for k in range(k0, self.moment_order + 1):
            coeffs[k] = (-1) ** m * math.comb(m + k - 1, k) * self.moments[m + k]
        out = direct + P.polyval(flat, coeffs)
        return out.reshape(z.shape)


def wz(ctx: WeierstrassContext, z: np.ndarray) -> np.ndarray:
    """Weierstrass ζ."""
    return ctx.lattice_sum(z, 1)


def wp(ctx: WeierstrassContext, z: np.ndarray) -> np.ndarray:
    """Weierstrass ℘."""
    return ctx.lattice_sum(z, 2)


def wp_derivative(ctx: WeierstrassContext, z: np.ndarray, order: int) -> np.ndarray:
    """℘^{(r)} = (−1)^r·(r+1)!·S_{r+2}."""
    if order < 0:
        raise ValueError(f"Derivative order {order} is negative")
    if order == 0:
        return wp(ctx, z)
    return (-1) ** order * math.factorial(order + 1) * ctx.lattice_sum(z, order + 2)


def quasi_periods(ctx: WeierstrassContext) -> Tuple[complex, complex]:
    """(η₁, η₂) with η_i = 2ζ(ω_i/2), so that ζ(z + ω_i) = ζ(z) + η_i."""
    half = np.array([ctx.lattice.omega1, ctx.lattice.omega2]) / 2.0
    eta = 2.0 * wz(ctx, half)
    return complex(eta[0]), complex(eta[1])


class TorusDistribution(NamedTuple):
    """Principal parts at points pairwise distinct mod Λ, reduced to the
    fundamental parallelogram.

    Attributes:
        exact_residues (Optional[Tuple[GaussianRational, ...]]): A_1 of every
            part when all parts were given exactly.
    """

    lattice: Lattice
    parts: Tuple[NumericPart, ...]
    exact_residues: Optional[Tuple[GaussianRational, ...]] = None

    @classmethod
    def create(
        cls, lattice: Lattice, parts: Sequence[Union[PrincipalPart, NumericPart]]
    ) -> "TorusDistribution":
        """Raises `ValueError` for an empty distribution or an order above
        `MAX_POLE_ORDER`, and `GeometryError` for poles that coincide mod Λ."""
        if not parts:
            raise ValueError("A distribution needs at least one principal part")
        numeric = []
        exact = []
        for part in parts:
            if isinstance(part, PrincipalPart):
                exact.append(part.coefficient(1))
                part = NumericPart.from_principal_part(part)
            if part.order > MAX_POLE_ORDER:
                raise ValueError(f"Pole order {part.order} exceeds {MAX_POLE_ORDER}")
            numeric.append(part._replace(pole=complex(lattice.reduce(part.pole))))
        for i, p in enumerate(numeric):
            for q in numeric[:i]:
                if lattice.distance_mod(p.pole, q.pole) <= 1e-9 * abs(lattice.omega1):
                    raise GeometryError(f"Poles {q.pole} and {p.pole} coincide mod Λ")
        residues = tuple(exact) if len(exact) == len(parts) else None
        return cls(lattice, tuple(numeric), residues)

    def min_separation(self, pole: complex) -> float:
        """The distance from `pole` to the other poles and its own translates."""
        return min(
            [abs(self.lattice.omega1)]
            + [self.lattice.distance_mod(pole, p.pole) for p in self.parts if p.pole != pole]
        )


def residue_test(
    distribution: TorusDistribution, tol: float = DEFAULT_SETTINGS.residue_tol
) -> Tuple[complex, bool]:
    """The residue sum Σ_k A_{1,k} and whether it vanishes.

    The comparison is exact when every residue is a Gaussian rational, otherwise
    |sum| ≤ tol.
    """
    if distribution.exact_residues is not None:
        total = sum(distribution.exact_residues, ZERO)
        return complex(total), not total
    s = sum((complex(p.coeffs[0]) for p in distribution.parts), 0j)
    return s, abs(s) <= tol


class EllipticFunction:
    """f = Σ_k [A_{1,k}·ζ(z − z_k)
    + Σ_{j≥2} A_{j,k}·(−1)^j/(j−1)!·℘^{(j−2)}(z − z_k)].

    Attributes:
        ctx (WeierstrassContext): The lattice data.
        distribution (TorusDistribution): The realized principal parts.
        forced (bool): True if the residue criterion failed, so f is only
            quasi-periodic.
    """

    def __init__(
        self, ctx: WeierstrassContext, distribution: TorusDistribution, forced: bool
    ) -> None:
        self.ctx = ctx
        self.distribution = distribution
        self.forced = forced

    @property
    def poles(self) -> Tuple[complex, ...]:
        return tuple(p.pole for p in self.distribution.parts)

    def __call__(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for part in self.distribution.parts:
            w = z - part.pole
            for j, a in enumerate(part.coeffs, start=1):
                if a == 0:
                    continue
                if j == 1:
                    out = out + a * wz(self.ctx, w)
                else:
                    c = a * (-1) ** j / math.factorial(j - 1)
                    out = out + c * wp_derivative(self.ctx, w, j - 2)
        return out


def torus_solve(
    distribution: TorusDistribution, ctx: WeierstrassContext, force: bool = False
) -> EllipticFunction:
    """Realizes the distribution by Weierstrass functions.

    Raises:
        ValueError: If `ctx` belongs to another lattice.
        UnsolvableError: If the residue sum is nonzero and `force` is False.
    """
    if ctx.lattice != distribution.lattice:
        raise ValueError("The context and the distribution use different lattices")
    total, solvable = residue_test(distribution)
    if not solvable and not force:
        raise UnsolvableError(f"Residue sum {total} is not zero")
    if not solvable:
        logger.warning(f"forcing a solution with residue sum {total}")
    return EllipticFunction(ctx, distribution, forced=not solvable)


def _sample_points(
    f: EllipticFunction, samples: int, rng: np.random.Generator
) -> np.ndarray:
    lattice = f.ctx.lattice
    margin = 0.05 * abs(lattice.omega1)
    out = []
    for _ in range(100 * samples):
        x, y = rng.random(2)
        z = x * lattice.omega1 + y * lattice.omega2
        if all(lattice.distance_mod(z, p) > margin for p in f.poles):
            out.append(z)
            if len(out) == samples:
                return np.array(out)
    raise GeometryError(f"Could not place {samples} samples away from the poles")


def check_periodicity(
    f: EllipticFunction,
    samples: int = DEFAULT_SETTINGS.periodicity_samples,
    tol: float = DEFAULT_SETTINGS.periodicity_tol,
    seed: int = DEFAULT_SETTINGS.seed,
) -> float:
    """max over seeded samples z of |f(z + ω₁) − f(z)| and |f(z + ω₂) − f(z)|.

    Raises:
        ValueError: If `samples` < 10.
    """
    if samples < 10:
        raise ValueError(f"{samples} samples is below the minimum 10")
    z = _sample_points(f, samples, np.random.default_rng(seed))
    base = f(z)
    lattice = f.ctx.lattice
    dev = max(
        float(np.max(np.abs(f(z + lattice.omega1) - base))),
        float(np.max(np.abs(f(z + lattice.omega2) - base))),
    )
    if dev > tol:
        logger.warning(f"periodicity deviation {dev:.3e} exceeds {tol:.1e}")
    return dev


def local_coefficient_error(
    f: EllipticFunction, samples: int = DEFAULT_SETTINGS.contour_samples
) -> float:
    """The largest relative error of the principal parts of `f`, extracted on
    circles of a quarter of each pole's separation."""
    errors = [
        principal_part_error(f, part, 0.25 * f.distribution.min_separation(part.pole), samples)
        for part in f.distribution.parts
    ]
    return max(errors)


def weierstrass_identity_error(ctx: WeierstrassContext, z: np.ndarray) -> float:
    """max |(℘′)² − (4℘³ − g2·℘ − g3)| / max(1, |℘′|²) at the given points."""
    p = wp(ctx, z)
    dp = wp_derivative(ctx, z, 1)
    err = np.abs(dp**2 - (4 * p**3 - ctx.g2 * p - ctx.g3)) / np.maximum(1.0, np.abs(dp) ** 2)
    return float(np.max(err))


def legendre_error(ctx: WeierstrassContext) -> float:
    """|η₁ω₂ − η₂ω₁ − 2πi|."""
    eta1, eta2 = quasi_periods(ctx)
    return abs(eta1 * ctx.lattice.omega2 - eta2 * ctx.lattice.omega1 - 2j * math.pi)
