"""Constructive Mittag-Leffler on open subsets G of the plane.

The poles are grouped by a compact exhaustion K_1 ⊂ K_2 ⊂ ... of G. The
principal parts of stage n are corrected by rational functions R_n with poles
only in E (∞, and the hole center for an annulus) such that
|f_n − R_n| ≤ 2⁻ⁿ on K_{n−1}. R_n is built by pushing each pole along a path to
E, re-expanding the Laurent series at every step.

All numerics are complex128. Every expansion is stored in a scaled variable
(ρ/(z − b), or (z − c)/ρ at ∞) whose modulus is at most 1 on the compact.
"""

import cmath
import math
from functools import lru_cache
from logging import getLogger
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P

from mlcech.contour import NumericPart, principal_part_error
from mlcech.errors import BudgetUnreachableError, GeometryError
from mlcech.exact import INF, _Infinity
from mlcech.settings import DEFAULT_SETTINGS, Settings

logger = getLogger(__name__)

Target = Union[complex, _Infinity]

MEMBERSHIP_TOL = 1e-12
BOUNDARY_SAMPLES = 64
KINDS = ("plane", "disc", "annulus", "halfplane")
LOG_MAX = 700.0


class Constraint(NamedTuple):
    """One closed condition cutting out a compact.

    Attributes:
        kind (str): "inside" (|z − c| ≤ r), "outside" (|z − c| ≥ r) or "below"
            (Re(conj(u)·z) ≤ offset).
        center (complex): c.
        radius (float): r.
        normal (complex): The unit normal u.
        offset (float): The offset of the line.
    """

    kind: str
    center: complex = 0j
    radius: float = 0.0
    normal: complex = 1 + 0j
    offset: float = 0.0

    def slack(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.kind == "inside":
            return self.radius - np.abs(z - self.center)
        if self.kind == "outside":
            return np.abs(z - self.center) - self.radius
        return self.offset - np.real(np.conj(self.normal) * z)

    def distance(self, z: np.ndarray) -> np.ndarray:
        """The distance from `z` to the set, 0 inside it."""
        return np.maximum(0.0, -self.slack(z))

    def escape(self, z: complex) -> complex:
        """The unit direction in which `distance` grows at unit rate."""
        if self.kind == "below":
            return self.normal
        d = z - self.center if self.kind == "inside" else self.center - z
        return d / abs(d)

    def boundary(self, count: int, bound: float) -> np.ndarray:
        if self.kind == "below":
            tau = np.linspace(-bound, bound, count)
            return self.offset * self.normal + 1j * self.normal * tau
        theta = 2.0 * np.pi * np.arange(count) / count
        return self.center + self.radius * np.exp(1j * theta)


class DomainSpec(NamedTuple):
    """An open set G ⊆ ℂ.

    Attributes:
        kind (str): "plane", "disc" (|z − c| < radius), "annulus"
            (inner_radius < |z − c| < radius) or "halfplane"
            (Re(conj(normal)·z) < offset).
    """

    kind: str
    center: complex = 0j
    radius: float = math.inf
    inner_radius: float = 0.0
    normal: complex = 1 + 0j
    offset: float = 0.0

    @classmethod
    def plane(cls) -> "DomainSpec":
        return cls("plane")

    @classmethod
    def disc(cls, center: complex, radius: float) -> "DomainSpec":
        return cls("disc", complex(center), float(radius)).checked()

    @classmethod
    def annulus(cls, center: complex, inner: float, outer: float) -> "DomainSpec":
        return cls("annulus", complex(center), float(outer), float(inner)).checked()

    @classmethod
    def halfplane(cls, normal: complex, offset: float) -> "DomainSpec":
        u = complex(normal)
        if u == 0:
            raise ValueError("A half-plane needs a nonzero normal")
        return cls("halfplane", normal=u / abs(u), offset=float(offset)).checked()

    def checked(self) -> "DomainSpec":
        """Returns self after validating the parameters.

        Raises:
            ValueError: If the kind is unknown or the radii are invalid.
        """
        if self.kind not in KINDS:
            raise ValueError(f"Unknown domain kind '{self.kind}', expected one of {KINDS}")
        if self.kind == "disc" and not 0 < self.radius < math.inf:
            raise ValueError(f"Disc radius {self.radius} must be positive and finite")
        if self.kind == "annulus" and not 0 < self.inner_radius < self.radius < math.inf:
            raise ValueError(
                f"Annulus radii {self.inner_radius}, {self.radius} need 0 < r < R"
            )
        if self.kind == "halfplane" and not math.isclose(abs(self.normal), 1.0):
            raise ValueError(f"Half-plane normal {self.normal} is not a unit vector")
        return self

    @property
    def targets(self) -> Tuple[Target, ...]:
        """E, one point in every component of the complement of K_n."""
        if self.kind == "annulus":
            return (self.center, INF)
        return (INF,)

    def distance_to_complement(self, z: np.ndarray) -> np.ndarray:
        """The distance from `z` to ℂ∖G, negative outside G."""
        z = np.asarray(z, dtype=complex)
        if self.kind == "plane":
            return np.full(z.shape, math.inf)
        if self.kind == "halfplane":
            return self.offset - np.real(np.conj(self.normal) * z)
        r = np.abs(z - self.center)
        if self.kind == "disc":
            return self.radius - r
        return np.minimum(r - self.inner_radius, self.radius - r)

    def contains(self, z: np.ndarray) -> np.ndarray:
        return self.distance_to_complement(z) > MEMBERSHIP_TOL


class Exhaustion(NamedTuple):
    """K_n = {|z| ≤ n} ∩ {d(z, ℂ∖G) ≥ 1/n} as an intersection of constraints."""

    n: int
    domain: DomainSpec
    constraints: Tuple[Constraint, ...]

    def slack(self, z: np.ndarray) -> np.ndarray:
        return np.min(np.stack([c.slack(z) for c in self.constraints]), axis=0)

    def contains(self, z: np.ndarray) -> np.ndarray:
        return self.slack(z) >= -MEMBERSHIP_TOL

    def distance_lower_bound(self, z: np.ndarray) -> np.ndarray:
        """max over constraints of the distance to that constraint's set."""
        return np.max(np.stack([c.distance(z) for c in self.constraints]), axis=0)

    @property
    def radius(self) -> float:
        """A bound on max |z| over K_n."""
        g = self.domain
        if g.kind in ("disc", "annulus"):
            return max(0.0, min(float(self.n), abs(g.center) + g.radius - 1.0 / self.n))
        return float(self.n)

    @property
    def is_empty(self) -> bool:
        g, n = self.domain, self.n
        if g.kind == "plane":
            return False
        if g.kind == "halfplane":
            return max(0.0, 1.0 / n - g.offset) > n
        outer = g.radius - 1.0 / n
        inner = g.inner_radius + 1.0 / n if g.kind == "annulus" else 0.0
        if outer < inner:
            return True
        c = abs(g.center)
        return max(0.0, inner - c, c - outer) > n

    def boundary_samples(self, count: int = BOUNDARY_SAMPLES) -> np.ndarray:
        """Points on the boundary curves of the constraints that lie in K_n."""
        if self.is_empty:
            return np.zeros(0, dtype=complex)
        pts = np.concatenate([c.boundary(count, float(self.n)) for c in self.constraints])
        return pts[self.contains(pts)]


def _constraints(domain: DomainSpec, n: int) -> Tuple[Constraint, ...]:
    out = [Constraint("inside", 0j, float(n))]
    if domain.kind in ("disc", "annulus"):
        out.append(Constraint("inside", domain.center, domain.radius - 1.0 / n))
    if domain.kind == "annulus":
        out.append(Constraint("outside", domain.center, domain.inner_radius + 1.0 / n))
    if domain.kind == "halfplane":
        out.append(Constraint("below", normal=domain.normal, offset=domain.offset - 1.0 / n))
    return tuple(out)


@lru_cache(maxsize=512)
def exhaust(domain: DomainSpec, n: int) -> Exhaustion:
    """The n-th compact of the exhaustion of `domain`.

    Args:
        domain (DomainSpec): The open set G.
        n (int): The index, at least 1.

    Raises:
        ValueError: If `n` < 1 or the domain is invalid.
        GeometryError: If a boundary sample of K_n is not interior to K_{n+1}.

    Returns:
        A[n] `Exhaustion`, possibly empty.
    """
    if n < 1:
        raise ValueError(f"Exhaustion index {n} must be at least 1")
    domain.checked()
    k = Exhaustion(n, domain, _constraints(domain, n))
    samples = k.boundary_samples()
    if samples.size:
        nxt = Exhaustion(n + 1, domain, _constraints(domain, n + 1))
        if np.min(nxt.slack(samples)) <= 0:
            raise GeometryError(f"K_{n} is not interior to K_{n + 1}")
    return k


class PoleGrouping(NamedTuple):
    """The parts indexed by the stage n whose compact first contains them.

    Attributes:
        parts (Tuple[NumericPart, ...]): All parts.
        stages (Tuple[Tuple[int, ...], ...]): `stages[n − 1]` is I_n, indices
            into `parts`.
    """

    parts: Tuple[NumericPart, ...]
    stages: Tuple[Tuple[int, ...], ...]

    @property
    def n_max(self) -> int:
        return len(self.stages)

    @property
    def max_stage(self) -> int:
        """The last stage with poles, 0 if there are none."""
        return max((n for n in range(1, self.n_max + 1) if self.stages[n - 1]), default=0)

    def stage_parts(self, n: int) -> Tuple[NumericPart, ...]:
        if n > self.n_max:
            return ()
        return tuple(self.parts[k] for k in self.stages[n - 1])


def group_poles(
    parts: Sequence[NumericPart], domain: DomainSpec, n_max: int
) -> PoleGrouping:
    """I_n = {k : a_k ∈ K_n ∖ K_{n−1}} for n = 1..n_max.

    Raises:
        GeometryError: If a pole lies outside G or on its boundary, two poles
            coincide, or a pole is not in K_{n_max}.
    """
    if n_max < 1:
        raise ValueError(f"n_max {n_max} must be at least 1")
    seen = set()
    stages: List[List[int]] = [[] for _ in range(n_max)]
    for k, part in enumerate(parts):
        a = part.pole
        if domain.distance_to_complement(a) <= MEMBERSHIP_TOL:
            raise GeometryError(f"Pole {a} lies outside G or on its boundary")
        if a in seen:
            raise GeometryError(f"Pole {a} appears twice")
        seen.add(a)
        n = next((n for n in range(1, n_max + 1) if exhaust(domain, n).contains(a)), None)
        if n is None:
            raise GeometryError(f"Pole {a} is not in K_{n_max}")
        stages[n - 1].append(k)
    logger.debug(f"stage sizes {[len(s) for s in stages]}")
    return PoleGrouping(tuple(parts), tuple(tuple(s) for s in stages))


class PoleExpansion(NamedTuple):
    """Σ coeffs[k]·(scale/(z − center))^{k+1}.

    At ∞ the expansion is the polynomial Σ coeffs[k]·((z − origin)/scale)^k.
    """

    center: Target
    scale: float
    coeffs: Tuple[complex, ...]
    origin: complex = 0j

    def __call__(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.center is INF:
            return P.polyval((z - self.origin) / self.scale, self.coeffs)
        u = self.scale / (z - self.center)
        return P.polyval(u, (0j,) + tuple(self.coeffs))


class PushStep(NamedTuple):
    center: Target
    order: int
    bound: float


class PushedApprox(NamedTuple):
    """R, a rational function with poles in E, and the certified sup |F − R| on K."""

    R: Tuple[PoleExpansion, ...]
    certified_bound: float
    path_log: Tuple[PushStep, ...]

    def __call__(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for r in self.R:
            out = out + r(z)
        return out


def _log_tail(k: int, start: int, q: float) -> float:
    """log Σ_{i ≥ start} C(k+i−1, i)·q^i for k ≥ 1 and 0 ≤ q < 1.

    Once the term ratio is below 1 the first term bounds a geometric tail;
    before that the full sum (1 − q)^{−k} is used.
    """
    full = -k * math.log1p(-q)
    if start <= 0:
        return full
    if q == 0.0:
        return -math.inf
    r = q * (k + start) / (start + 1)
    if r >= 1.0:
        return full
    first = math.lgamma(k + start) - math.lgamma(start + 1) - math.lgamma(k) + start * math.log(q)
    return min(first - math.log1p(-r), full)


def _truncation_bound(
    coeffs: Sequence[complex], sigma: float, q: float, order: int, shift: int
) -> float:
    """Σ_k |β_k|·σ^k·tail(k, order − shift·k + 1, q) over k = 1..len(coeffs)."""
    total = 0.0
    log_sigma = math.log(sigma)
    for k, b in enumerate(coeffs, start=1):
        if b == 0:
            continue
        log_term = math.log(abs(b)) + k * log_sigma + _log_tail(k, order - shift * k + 1, q)
        if log_term > LOG_MAX:
            return math.inf
        total += math.exp(log_term)
    return total


def _choose_order(
    coeffs: Sequence[complex],
    sigma: float,
    q: float,
    shift: int,
    budget: float,
    settings: Settings,
) -> Tuple[int, float]:
    order = max(len(coeffs), 8)
    while True:
        bound = _truncation_bound(coeffs, sigma, q, order, shift)
        if bound <= budget:
            return order, bound
        if order >= settings.max_push_order:
            raise BudgetUnreachableError(
                f"Truncation order would exceed {settings.max_push_order} "
                f"(bound {bound:.3e} > budget {budget:.3e})"
            )
        order = min(settings.max_push_order, int(order * 1.5) + 1)


def _reexpand(
    coeffs: Sequence[complex], sigma: complex, q: complex, order: int, shift: int
) -> np.ndarray:
    """The coefficients of w⁰..w^order in Σ_k β_k·u^k, u = σ·w^shift/(1 − q·w).

    u^k = σ^k·w^{shift·k}·Σ_i C(k+i−1, i)·(q·w)^i, with moduli summed in logs.
    """
    out = np.zeros(order + 1, dtype=complex)
    for k, b in enumerate(coeffs, start=1):
        lo = shift * k
        if b == 0 or lo > order:
            continue
        if q == 0:
            out[lo] += b * sigma**k
            continue
        i = np.arange(order - lo + 1)
        log_binom = np.concatenate([[0.0], np.cumsum(np.log((k - 1 + i[1:]) / i[1:]))])
        log_mag = math.log(abs(b)) + k * math.log(abs(sigma)) + log_binom + i * math.log(abs(q))
        phase = cmath.phase(b) + k * cmath.phase(sigma) + i * cmath.phase(q)
        out[lo:] += np.exp(log_mag + 1j * phase)
    return out


def _trim(coeffs: np.ndarray, budget: float) -> Tuple[np.ndarray, float]:
    """Drops trailing coefficients whose moduli sum to at most `budget`; keeps one.

    Returns:
        A[n] `Tuple[np.ndarray, float]`, the kept coefficients and the dropped mass.
    """
    tails = np.cumsum(np.abs(coeffs[::-1]))[::-1]
    small = np.nonzero(tails <= budget)[0]
    keep = max(1, int(small[0])) if small.size else len(coeffs)
    dropped = float(tails[keep]) if keep < len(coeffs) else 0.0
    return coeffs[:keep], dropped


def _guide(k: Exhaustion, b: complex, target: Target) -> Constraint:
    """The constraint whose distance grows along the path from `b` to `target`.

    Toward ∞ this is the farthest of the inner constraints at `b`, so that the
    scale d(b, K) grows by exactly one step length per step.
    """
    if target is INF:
        options = [c for c in k.constraints if c.kind != "outside"]
    else:
        options = [
            c for c in k.constraints if c.kind == "outside" and c.center == target
        ]
    best = max(options, key=lambda c: float(c.distance(b)), default=None)
    if best is None or float(best.distance(b)) <= MEMBERSHIP_TOL:
        raise GeometryError(f"No path from {b} to {target} avoiding K_{k.n}")
    return best


def _taylor_disc(
    k: Exhaustion, guide: Constraint, center: complex, scale: float, length: int
) -> Optional[Tuple[complex, float]]:
    """The disc of the final Taylor section at `center`, if it is far enough.

    The section is taken about the guide disc once |b − origin| ≥ 2·radius.
    Without a guide disc it is taken about 0 on a disc containing K, and only
    once the coefficient majorant grows by at most 2 over `length` terms.
    """
    if guide.kind == "inside":
        origin, radius = guide.center, guide.radius
    else:
        origin, radius = 0j, k.radius or 1.0
    gap = abs(center - origin) - radius
    if abs(center - origin) < 2 * radius:
        return None
    if length * math.log(max(scale / gap, 1.0)) > math.log(2.0):
        return None
    return origin, radius


def push_pole(
    part: NumericPart,
    k: Exhaustion,
    target: Target,
    eps: float,
    settings: Settings = DEFAULT_SETTINGS,
) -> PushedApprox:
    """Pushes the pole of `part` to `target` while staying eps-close on K.

    Each step moves the expansion center b by θ·d(b, K) and re-expands the
    series by the negative-binomial series, truncated so that the safety
    factor times the geometric tail bound is at most eps·2^{−(m+1)} at step m.
    Trailing coefficients are dropped while their moduli sum stays within the
    same budget. Toward ∞ a final Taylor section about the guide disc
    produces a polynomial once b is twice its radius away from its center.

    Args:
        part (NumericPart): The principal part F.
        k (Exhaustion): The compact K.
        target (Target): A point of E, ∞ or a hole center.
        eps (float): The error budget.
        settings (Settings): theta, safety_factor and the caps.

    Raises:
        GeometryError: If the pole lies in K or the path is blocked.
        BudgetUnreachableError: If a step count or truncation cap is hit.

    Returns:
        A[n] `PushedApprox` with sup_K |F − R| ≤ certified_bound ≤ eps.
    """
    if not eps > 0:
        raise ValueError(f"Budget {eps} must be positive")
    a = part.pole
    if target is not INF and abs(a - target) <= MEMBERSHIP_TOL:
        return PushedApprox((PoleExpansion(a, 1.0, part.coeffs),), 0.0, ())
    if k.is_empty:
        return PushedApprox((), 0.0, ())
    if k.contains(a):
        raise GeometryError(f"Pole {a} lies in K_{k.n}")
    guide = _guide(k, a, target)
    center: complex = a
    scale = float(k.distance_lower_bound(a))
    coeffs = [c / scale**j for j, c in enumerate(part.coeffs, start=1)]
    steps: List[PushStep] = []
    raw = 0.0
    m = 0
    while True:
        budget = eps * 2.0 ** -(m + 1) / settings.safety_factor
        if target is INF:
            guide = _guide(k, center, target)
            disc = _taylor_disc(k, guide, center, scale, len(coeffs))
            if disc is not None:
                origin, radius = disc
                sigma, q = -scale / (center - origin), radius / (center - origin)
                order, bound = _choose_order(coeffs, abs(sigma), abs(q), 0, budget / 2, settings)
                poly, trimmed = _trim(_reexpand(coeffs, sigma, q, order, 0), budget / 2)
                steps.append(PushStep(INF, len(poly), bound + trimmed))
                result = PoleExpansion(INF, radius, tuple(poly), origin)
                raw += bound + trimmed
                break
        elif center == target:
            result = PoleExpansion(center, scale, tuple(coeffs))
            break
        if m >= settings.max_push_steps:
            raise BudgetUnreachableError(f"Pole {a} not pushed within {m} steps")
        d = float(guide.distance(center))
        if d <= MEMBERSHIP_TOL:
            raise GeometryError(f"Path from {a} blocked at {center}")
        step = settings.theta * d
        if target is not INF and abs(target - center) <= step:
            nxt = complex(target)
        else:
            nxt = center + step * guide.escape(center)
        new_scale = float(k.distance_lower_bound(nxt))
        sigma, q = scale / new_scale, (center - nxt) / new_scale
        order, bound = _choose_order(coeffs, sigma, abs(q), 1, budget / 2, settings)
        kept, trimmed = _trim(_reexpand(coeffs, sigma, q, order, 1)[1:], budget / 2)
        coeffs = list(kept)
        steps.append(PushStep(nxt, len(coeffs), bound + trimmed))
        raw += bound + trimmed
        logger.debug(f"pushed {a} to {nxt} (order {len(coeffs)}, bound {bound + trimmed:.3e})")
        center, scale = nxt, new_scale
        m += 1
    return PushedApprox((result,), settings.safety_factor * raw, tuple(steps))


def _target_for(a: complex, k: Exhaustion) -> Target:
    for c in k.constraints:
        if c.kind == "outside" and float(c.distance(a)) > MEMBERSHIP_TOL:
            return c.center
    return INF


class MLStage(NamedTuple):
    """f_n − R_n: the parts of stage n and their corrections."""

    n: int
    parts: Tuple[NumericPart, ...]
    corrections: Tuple[PushedApprox, ...]
    certified_bound: float

    def __call__(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for part in self.parts:
            out = out + part(z)
        for r in self.corrections:
            out = out - r(z)
        return out


class MLSeries(NamedTuple):
    """Σ_{n ≤ N} (f_n − R_n), a meromorphic function on G with the given parts.

    Attributes:
        tail_bound (float): 2^{−N}, the budget left for stages beyond N.
    """

    domain: DomainSpec
    stages: Tuple[MLStage, ...]
    N: int
    tail_bound: float

    @property
    def parts(self) -> Tuple[NumericPart, ...]:
        return tuple(p for s in self.stages for p in s.parts)

    def value(self, z: np.ndarray, depth: Optional[int] = None) -> np.ndarray:
        """The partial sum through `depth`, without any checks."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for stage in self.stages[: depth or self.N]:
            out = out + stage(z)
        return out


def assemble(
    grouping: PoleGrouping,
    domain: DomainSpec,
    n_stages: int,
    settings: Settings = DEFAULT_SETTINGS,
) -> MLSeries:
    """Builds the corrected partial sums through stage `n_stages`.

    R_n pushes every part of stage n ≥ 2 against K_{n−1} with budget
    2⁻ⁿ/|I_n|; stage 1 and empty K_{n−1} need no correction.

    Raises:
        ValueError: If `n_stages` < 1.
        GeometryError: If `n_stages` is below the last stage with poles.
    """
    if n_stages < 1:
        raise ValueError(f"Stage count {n_stages} must be at least 1")
    if n_stages < grouping.max_stage:
        raise GeometryError(f"{n_stages} stages do not reach stage {grouping.max_stage}")
    stages = []
    for n in range(1, n_stages + 1):
        parts = grouping.stage_parts(n)
        corrections: Tuple[PushedApprox, ...] = ()
        if parts and n >= 2:
            k = exhaust(domain, n - 1)
            eps = 2.0**-n / len(parts)
            corrections = tuple(
                push_pole(p, k, _target_for(p.pole, k), eps, settings)
                for p in parts
            )
        bound = sum(c.certified_bound for c in corrections)
        stages.append(MLStage(n, parts, corrections, bound))
        if parts:
            logger.info(f"stage {n}: {len(parts)} poles, certified bound {bound:.3e}")
    return MLSeries(domain, tuple(stages), n_stages, 2.0**-n_stages)


def _omitted_bound(series: MLSeries, depth: int) -> float:
    return sum(2.0**-s.n for s in series.stages[depth:] if s.parts)


def _check_depth(series: MLSeries, depth: Optional[int]) -> int:
    depth = series.N if depth is None else depth
    if not 1 <= depth <= series.N:
        raise ValueError(f"Depth {depth} is not in [1, {series.N}]")
    return depth


def evaluate(
    series: MLSeries,
    z: complex,
    depth: Optional[int] = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> Tuple[complex, float]:
    """The partial sum through `depth` at `z` and its distance bound to the full
    constructed sum.

    Raises:
        GeometryError: If `z` is outside G or K_depth, or within the exclusion
            radius of a pole.

    Returns:
        A[n] `Tuple[complex, float]`, the bound being Σ 2⁻ⁿ over the omitted
        stages that have poles.
    """
    depth = _check_depth(series, depth)
    z = complex(z)
    for part in series.parts:
        if abs(z - part.pole) < settings.exclusion_radius:
            raise GeometryError(f"{z} is within the exclusion radius of pole {part.pole}")
    if not series.domain.contains(z):
        raise GeometryError(f"{z} is not in the domain")
    if not exhaust(series.domain, depth).contains(z):
        raise GeometryError(f"{z} is not in K_{depth}; the bound is not certified there")
    return complex(series.value(z, depth)), _omitted_bound(series, depth)


def evaluate_grid(
    series: MLSeries,
    points: np.ndarray,
    depth: Optional[int] = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized `evaluate`.

    Points that `evaluate` refuses (outside K_depth, which lies inside G, or
    within the exclusion radius of a pole) get NaN for both value and bound.

    Returns:
        A[n] `Tuple[np.ndarray, np.ndarray]` of values and bounds.
    """
    depth = _check_depth(series, depth)
    points = np.asarray(points, dtype=complex)
    refused = ~exhaust(series.domain, depth).contains(points)
    for part in series.parts:
        refused |= np.abs(points - part.pole) < settings.exclusion_radius
    safe = np.where(refused, 0j, points)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        values = series.value(safe, depth)
    values = np.where(refused, complex(np.nan, np.nan), values)
    bounds = np.where(refused, np.nan, _omitted_bound(series, depth))
    if refused.any():
        logger.warning(
            f"{int(refused.sum())} grid points are outside K_{depth} or on poles; "
            "their values are left empty"
        )
    return values, bounds


def verify_principal_part(
    series: MLSeries,
    part: NumericPart,
    rho: float,
    samples: int = DEFAULT_SETTINGS.contour_samples,
) -> float:
    """Extracts the principal part of the series at `part.pole` by the trapezoid
    rule on |z − a| = ρ.

    Raises:
        ValueError: If `samples` < 64.
        GeometryError: If 2ρ exceeds the distance to another pole or to ℂ∖G.

    Returns:
        A[n] `float`, max_j |ĉ_{−j} − A_j| / max(1, |A_j|).
    """
    if samples < 64:
        raise ValueError(f"{samples} samples is below the minimum 64")
    a = part.pole
    others = [abs(p.pole - a) for p in series.parts if p.pole != a]
    limit = min(others + [float(series.domain.distance_to_complement(a))])
    if not 0 < 2 * rho <= limit:
        raise GeometryError(f"Radius {rho} violates the separation {limit / 2} at {a}")
    return principal_part_error(series.value, part, rho, samples)
