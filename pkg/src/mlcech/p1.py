"""Line bundles, 1-forms and Mittag-Leffler problems on the projective line.

Every cohomology here comes from an exact Čech computation on a cover of ℙ¹ by
charts, with sections truncated to polynomials of degree at most M in each
chart coordinate.
"""

from functools import lru_cache
from logging import getLogger
from math import comb
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from mlcech import linalg
from mlcech.cech import (
    CohomologyReport,
    Nerve,
    SheafDatum,
    build_complex,
    cohomology,
)
from mlcech.errors import (
    GeometryError,
    InconsistentDatumError,
    StabilizationError,
    ZeroFunctionError,
)
from mlcech.exact import (
    INF,
    ONE,
    ZERO,
    FnDivisor,
    GaussianRational,
    LaurentWindow,
    Point,
    Poly,
    PrincipalPart,
    RationalFunction,
    Scalar,
    divisor_of,
    order_at,
    point_sort_key,
    residue_at,
)

logger = getLogger(__name__)

MIN_MARGIN = 3
DEFAULT_OMEGA_WINDOW = 6


class DivisorP1(FnDivisor):
    """A divisor on ℙ¹."""

    def is_effective(self) -> bool:
        return all(n > 0 for _, n in self.items())

    def finite_part(self) -> Dict[GaussianRational, int]:
        return {p: n for p, n in self.items() if p is not INF}  # type: ignore[misc]

    @classmethod
    def point(cls, x: Union[Point, Scalar], n: int = 1) -> "DivisorP1":
        return cls({x: n})


def invert_divisor(divisor: FnDivisor) -> DivisorP1:
    """The image of `divisor` under t ↦ 1/t, which swaps 0 and ∞."""
    out: Dict[Point, int] = {}
    for p, n in divisor.items():
        if p is INF:
            out[ZERO] = n
        elif not p:
            out[INF] = n
        else:
            out[ONE / p] = n  # type: ignore[operator]
    return DivisorP1(out)


class TruncationPolicy(NamedTuple):
    """The truncation window M of chart sections and the stabilization step."""

    window: int
    stabilization_step: int = 1

    @classmethod
    def for_divisor(
        cls, divisor: FnDivisor, margin: int = MIN_MARGIN, stabilization_step: int = 1
    ) -> "TruncationPolicy":
        """M = Σ|n_x| + margin.

        Raises:
            ValueError: If `margin` is below 3.
        """
        if margin < MIN_MARGIN:
            raise ValueError(f"Window margin {margin} is below {MIN_MARGIN}")
        return cls(divisor.weight + margin, stabilization_step)

    def check(self, divisor: FnDivisor) -> None:
        """Raises `ValueError` unless M ≥ Σ|n_x| + 3."""
        if self.window < divisor.weight + MIN_MARGIN:
            raise ValueError(
                f"Window {self.window} is below {divisor.weight + MIN_MARGIN} "
                f"for {divisor}"
            )
        if self.stabilization_step < 1:
            raise ValueError(f"Stabilization step {self.stabilization_step} < 1")

    def bumped(self) -> "TruncationPolicy":
        return self._replace(window=self.window + self.stabilization_step)


def _window_matrix(images: Sequence[LaurentWindow]) -> np.ndarray:
    """Columns are the coefficient vectors of `images`."""
    m = linalg.zeros(len(images[0]) if images else 0, len(images))
    for j, w in enumerate(images):
        for n, c in w.items():
            m[n - w.lo, j] = c
    return m


def _two_chart_datum(
    images1: Sequence[LaurentWindow], images2: Sequence[LaurentWindow]
) -> Tuple[Nerve, SheafDatum]:
    nerve = Nerve.from_faces(2, [(0, 1)])
    overlap = len(images1[0])
    datum = SheafDatum(
        space={(0,): len(images1), (1,): len(images2), (0, 1): overlap},
        restriction={
            ((0,), (0, 1)): _window_matrix(images1),
            ((1,), (0, 1)): _window_matrix(images2),
        },
    )
    return nerve, datum


def _trivialization(divisor: FnDivisor) -> RationalFunction:
    """P(t) = Π_{x finite} (t − x)^{n_x}."""
    out = RationalFunction.constant(1)
    for p, n in divisor.items():
        if p is not INF:
            out = out * RationalFunction(Poly.linear(p)) ** n  # type: ignore[arg-type]
    return out


def _transition(divisor: FnDivisor) -> RationalFunction:
    """P(t)/P₂(1/t) with P₂(s) = s^{n_∞} Π_{x ≠ 0, ∞} (s − 1/x)^{n_x}."""
    s = RationalFunction(ONE, Poly.monomial(1))
    p2 = s ** divisor[INF]
    for p, n in divisor.items():
        if p is not INF and p:
            p2 = p2 * (s - (ONE / p)) ** n  # type: ignore[operator]
    return _trivialization(divisor) / p2


def _od_datum(divisor: FnDivisor, window: int) -> Tuple[Nerve, SheafDatum]:
    d = divisor.degree
    lo, hi = d - window, window
    transition = _transition(divisor)
    # s^j/P₂(s) in the t-trivialization is c·t^{d−j}
    base = LaurentWindow.from_laurent_polynomial(transition, lo - window, hi + window)
    if [n for n, _ in base.items()] != [d]:
        raise InconsistentDatumError(f"Transition {transition} is not c·t^{d}")
    c = base.coefficient(d)
    images1 = [LaurentWindow.from_mapping(lo, hi, {k: ONE}) for k in range(window + 1)]
    images2 = [
        LaurentWindow.from_mapping(lo, hi, {d - j: c}) for j in range(window + 1)
    ]
    return _two_chart_datum(images1, images2)


@lru_cache(maxsize=256)
def _od_ranks(divisor: FnDivisor, window: int) -> Tuple[int, ...]:
    return cohomology(build_complex(*_od_datum(divisor, window))).ranks


def od_cech_datum(
    divisor: FnDivisor, policy: Optional[TruncationPolicy] = None
) -> Tuple[Nerve, SheafDatum]:
    """The Čech datum of O(D) on the cover {ℙ¹∖{∞}, ℙ¹∖{0}}.

    Sections over the first chart are h/P with h a polynomial of degree at most
    M, over the second g(s)/P₂(s) likewise in s = 1/t. On the overlap they are
    read in the trivialization h = f·P as a Laurent window [d − M, M] in t.

    Args:
        divisor (FnDivisor): The divisor D.
        policy (Optional[TruncationPolicy]): The truncation, by default
            `TruncationPolicy.for_divisor(divisor)`.

    Raises:
        ValueError: If the window is too small for `divisor`.
        StabilizationError: If the ranks at M and M + step differ.

    Returns:
        A[n] `Tuple[Nerve, SheafDatum]`.
    """
    policy = policy or TruncationPolicy.for_divisor(divisor)
    policy.check(divisor)
    ranks = _od_ranks(divisor, policy.window)
    bumped = _od_ranks(divisor, policy.bumped().window)
    if ranks != bumped:
        raise StabilizationError(
            f"Ranks {ranks} at M={policy.window} and {bumped} at "
            f"M={policy.bumped().window} differ; window too small"
        )
    logger.debug(f"O({divisor}) stabilized at M={policy.window} with ranks {ranks}")
    return _od_datum(divisor, policy.window)


def _omega1_datum(window: int, c: GaussianRational, e: int) -> Tuple[Nerve, SheafDatum]:
    lo, hi = min(0, e - window), max(window, e)
    images1 = [LaurentWindow.from_mapping(lo, hi, {k: ONE}) for k in range(window + 1)]
    images2 = [LaurentWindow.from_mapping(lo, hi, {e - k: c}) for k in range(window + 1)]
    return _two_chart_datum(images1, images2)


def omega1_cech(
    policy: Optional[TruncationPolicy] = None,
    transition: Tuple[Scalar, int] = (-1, -2),
) -> CohomologyReport:
    """The Čech cohomology of the holomorphic 1-forms Ω¹ on ℙ¹.

    Sections are f(t)dt and g(s)ds of degree at most M; on the overlap ds is
    rewritten as c·t^e dt.

    Args:
        policy (Optional[TruncationPolicy]): The truncation window.
        transition (Tuple[Scalar, int]): (c, e), (−1, −2) for ds = −t⁻²dt.

    Raises:
        StabilizationError: If the ranks at M and M + step differ.

    Returns:
        A[n] `CohomologyReport`, ranks (0, 1) for the true transition.
    """
    policy = policy or TruncationPolicy(DEFAULT_OMEGA_WINDOW)
    c, e = GaussianRational.coerce(transition[0]), int(transition[1])
    if not c:
        raise ValueError("The transition coefficient must be nonzero")
    report = cohomology(build_complex(*_omega1_datum(policy.window, c, e)))
    bumped = cohomology(build_complex(*_omega1_datum(policy.bumped().window, c, e)))
    if report.ranks != bumped.ranks:
        raise StabilizationError(
            f"Ω¹ ranks {report.ranks} and {bumped.ranks} differ; window too small"
        )
    return report


class RiemannRochReport(NamedTuple):
    degree: int
    h0: int
    h1: int
    lhs: int
    rhs: int
    holds: bool
    closed_h0: int
    closed_h1: int
    genus: int = 0


def riemann_roch_check(
    divisor: FnDivisor, policy: Optional[TruncationPolicy] = None
) -> RiemannRochReport:
    """Checks h⁰ − h¹ = 1 − g + deg D from the Čech datum of O(D).

    Examples:
        The zero divisor has h⁰ = 1, h¹ = 0; 5[1] − 2[i] has h⁰ = 4.
    """
    policy = policy or TruncationPolicy.for_divisor(divisor)
    od_cech_datum(divisor, policy)
    h0, h1 = _od_ranks(divisor, policy.window)
    d = divisor.degree
    lhs, rhs = h0 - h1, 1 + d
    report = RiemannRochReport(
        degree=d,
        h0=h0,
        h1=h1,
        lhs=lhs,
        rhs=rhs,
        holds=lhs == rhs,
        closed_h0=max(0, d + 1),
        closed_h1=max(0, -d - 1),
    )
    logger.info(f"Riemann-Roch for {divisor}: h0={h0}, h1={h1}, holds={report.holds}")
    return report


def linear_equivalence(
    divisor: FnDivisor, other: FnDivisor
) -> Tuple[bool, Optional[RationalFunction]]:
    """Whether D ~ D', with a witness f such that (f) = D − D'."""
    diff = divisor - other
    if diff.degree != 0:
        return False, None
    return True, _trivialization(diff)


def skyscraper_step(
    divisor: FnDivisor, point: Union[Point, Scalar], policy: Optional[TruncationPolicy] = None
) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """(h⁰, h¹) of O(D) and O(D + [x]); the two changes add up to 1."""
    bigger = divisor + FnDivisor({point: 1})
    before = riemann_roch_check(divisor, policy)
    after = riemann_roch_check(bigger, policy and policy._replace(window=policy.window + 1))
    return (before.h0, before.h1), (after.h0, after.h1)


class MeromorphicOneForm(NamedTuple):
    """ω = f(t)·dt; in the chart s = 1/t, ω = −f(1/s)·s⁻²·ds."""

    coefficient: RationalFunction

    def order_at(self, point: Point) -> int:
        if point is INF:
            return order_at(self.coefficient, INF) - 2
        return order_at(self.coefficient, point)


def canonical_divisor(
    form: MeromorphicOneForm, roots: Sequence[Union[Point, Scalar]] = ()
) -> FnDivisor:
    """The divisor of a nonzero meromorphic 1-form, of degree −2."""
    entries = divisor_of(form.coefficient, roots).entries
    entries[INF] = entries.get(INF, 0) - 2
    return FnDivisor(entries)


class MLDistribution(NamedTuple):
    """Principal parts at pairwise distinct points of ℙ¹, sorted by pole."""

    parts: Tuple[PrincipalPart, ...]

    @classmethod
    def create(cls, parts: Sequence[PrincipalPart]) -> "MLDistribution":
        """Raises `ValueError` when there are no parts and `GeometryError` when two
        share a pole."""
        if not parts:
            raise ValueError("A distribution needs at least one principal part")
        poles = [p.pole for p in parts]
        if len(set(poles)) != len(poles):
            raise GeometryError("Principal parts must have distinct poles")
        return cls(tuple(sorted(parts, key=lambda p: point_sort_key(p.pole))))

    @property
    def poles(self) -> Tuple[Point, ...]:
        return tuple(p.pole for p in self.parts)

    @property
    def max_order(self) -> int:
        return max((p.order for p in self.parts), default=0)

    def cover(self) -> Nerve:
        """Chart 0 is ℙ¹ minus the poles, chart k a disc around pole k."""
        n = len(self.parts)
        return Nerve.from_faces(n + 1, [(0, k) for k in range(1, n + 1)])


class _Basis(NamedTuple):
    """A chart-0 section: 1, (t − pole)^{−j}, or t^j when the pole is ∞."""

    pole: Optional[Point]
    j: int

    def function(self) -> RationalFunction:
        if self.pole is None:
            return RationalFunction.constant(1)
        if self.pole is INF:
            return RationalFunction(Poly.monomial(self.j))
        return RationalFunction(ONE, Poly.linear(self.pole) ** self.j)  # type: ignore


def _expand_basis(b: _Basis, at: Point, window: int) -> LaurentWindow:
    """Closed-form binomial expansion of a chart-0 section on [−M, M] at `at`."""
    lo, hi = -window, window
    if b.pole is None:
        return LaurentWindow.from_mapping(lo, hi, {0: ONE})
    if b.pole == at or (b.pole is INF and at is INF):
        return LaurentWindow.from_mapping(lo, hi, {-b.j: ONE})
    terms: Dict[int, GaussianRational] = {}
    if b.pole is INF:
        # t^j = (u + a)^j
        for k in range(b.j + 1):
            terms[k] = comb(b.j, k) * at ** (b.j - k)  # type: ignore[operator]
    elif at is INF:
        # (1/s − p)^{−j} = s^j Σ_k C(j+k−1, k) p^k s^k
        p = b.pole
        for k in range(hi - b.j + 1):
            terms[b.j + k] = comb(b.j + k - 1, k) * p**k  # type: ignore[operator]
    else:
        # (u + δ)^{−j} = Σ_k C(−j, k) δ^{−j−k} u^k, δ = at − pole
        delta = at - b.pole  # type: ignore[operator]
        for k in range(hi + 1):
            terms[k] = (-1) ** k * comb(b.j + k - 1, k) * delta ** (-b.j - k)
    return LaurentWindow.from_mapping(lo, hi, terms)


class MLObstruction(NamedTuple):
    """The Čech class of a Mittag-Leffler distribution on ℙ¹.

    Attributes:
        report (CohomologyReport): The cohomology of O on the distribution's cover.
        cocycle (np.ndarray): δμ, the differences of the local solutions.
        witness (Optional[np.ndarray]): g with δ₀g = δμ, `None` if the class is
            nonzero.
        class_is_zero (bool): Whether δμ is a coboundary.
        basis (Tuple[RationalFunction, ...]): The chart-0 sections, in the order
            of the first entries of `witness`.
    """

    report: CohomologyReport
    cocycle: np.ndarray
    witness: Optional[np.ndarray]
    class_is_zero: bool
    basis: Tuple[RationalFunction, ...]

    def solution(self) -> RationalFunction:
        """f = −g₀, a global solution of the distribution.

        Raises:
            ZeroFunctionError: If the class is nonzero.
        """
        if self.witness is None:
            raise ZeroFunctionError("A nonzero class has no solution")
        out = RationalFunction.constant(0)
        for c, f in zip(self.witness, self.basis):
            if c:
                out = out - f * c
        return out


def ml_obstruction(
    distribution: MLDistribution, policy: Optional[TruncationPolicy] = None
) -> MLObstruction:
    """Computes the obstruction class of `distribution` in Ȟ¹(ℙ¹, O).

    Chart 0 carries span{1} and the pole sections of order at most M, chart k
    the Taylor window [0, M] at pole k; overlap (0, k) is the Laurent window
    [−M, M] at pole k in its local coordinate.

    Args:
        distribution (MLDistribution): The principal parts.
        policy (Optional[TruncationPolicy]): The window, by default the maximal
            order plus 3.

    Raises:
        ValueError: If the window is below the maximal order.
        InconsistentDatumError: If δμ is not a cocycle.

    Returns:
        A[n] `MLObstruction`.
    """
    policy = policy or TruncationPolicy(distribution.max_order + MIN_MARGIN)
    window = policy.window
    if window < distribution.max_order:
        raise ValueError(f"Window {window} is below the order {distribution.max_order}")
    poles = distribution.poles
    n = len(poles)
    basis = [_Basis(None, 0)] + [_Basis(p, j) for p in poles for j in range(1, window + 1)]
    space = {(0,): len(basis)}
    restriction = {}
    for k, pole in enumerate(poles, start=1):
        space[(k,)] = window + 1
        space[(0, k)] = 2 * window + 1
        restriction[((0,), (0, k))] = _window_matrix(
            [_expand_basis(b, pole, window) for b in basis]
        )
        restriction[((k,), (0, k))] = _window_matrix(
            [LaurentWindow.from_mapping(-window, window, {j: ONE}) for j in range(window + 1)]
        )
    nerve = distribution.cover()
    cx = build_complex(nerve, SheafDatum(space, restriction))
    report = cohomology(cx)

    cocycle = np.full(n * (2 * window + 1), ZERO, dtype=object)
    for k, part in enumerate(distribution.parts):
        # δμ on overlap (0, k) is S_k − 0
        for m, c in part.to_chart(-window).items():
            cocycle[k * (2 * window + 1) + m + window] = c
    if not linalg.is_zero(linalg.matmul(cx.deltas[1], cocycle)):
        raise InconsistentDatumError("δμ is not a cocycle")
    witness = linalg.solve(cx.deltas[0], cocycle)
    logger.info(f"ML obstruction: ranks {report.ranks}, class zero: {witness is not None}")
    return MLObstruction(
        report=report,
        cocycle=cocycle,
        witness=witness,
        class_is_zero=witness is not None,
        basis=tuple(b.function() for b in basis),
    )


def ml_solve(distribution: MLDistribution) -> RationalFunction:
    """Σ of the finite principal parts plus the polynomial ∞-part."""
    out = RationalFunction.constant(0)
    for part in distribution.parts:
        out = out + part.as_rational_function()
    return out


def distribution_residue(
    form: MeromorphicOneForm, distribution: MLDistribution
) -> GaussianRational:
    """Σ_a Res_a(ω·S_a) over the poles a of the distribution.

    Raises:
        GeometryError: If ω has a pole at a pole of the distribution.
    """
    total = ZERO
    if form.coefficient.is_zero():
        return total
    for part in distribution.parts:
        if form.order_at(part.pole) < 0:
            raise GeometryError(f"The form has a pole at the pole {part.pole}")
        local = form.coefficient * part.as_rational_function()
        total = total + residue_at(local, part.pole)
    return total


def betti_numbers(n: int) -> List[int]:
    """b_k(ℙⁿ) for k = 0..2n."""
    _check_dimension(n)
    return [1 if k % 2 == 0 else 0 for k in range(2 * n + 1)]


def hodge_diamond(n: int) -> List[List[int]]:
    """h^{p,q}(ℙⁿ) as rows p, columns q."""
    _check_dimension(n)
    return [[1 if p == q else 0 for q in range(n + 1)] for p in range(n + 1)]


def pn_tables(n: int, p: int, q: int) -> Tuple[int, int]:
    """(b_p, h^{p,q}) of ℙⁿ.

    Raises:
        ValueError: If n < 1 or p, q < 0.
    """
    _check_dimension(n)
    if p < 0 or q < 0:
        raise ValueError(f"Indices ({p}, {q}) must be non-negative")
    betti = 1 if p % 2 == 0 and p <= 2 * n else 0
    hodge = 1 if p == q and p <= n else 0
    return betti, hodge


def od_table(n: int, d: int, q: int) -> int:
    """dim H^q(ℙⁿ, O(d))."""
    _check_dimension(n)
    if q == 0 and d >= 0:
        return comb(n + d, n)
    if q == n and d <= -n - 1:
        return comb(-d - 1, n)
    return 0


def _check_dimension(n: int) -> None:
    if n < 1:
        raise ValueError(f"Dimension {n} must be at least 1")
