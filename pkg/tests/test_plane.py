import random
from contextlib import nullcontext as does_not_raise
from typing import Any, List, NamedTuple

import numpy as np
import pytest

import mlcech.plane as plane
from mlcech.contour import NumericPart
from mlcech.errors import BudgetUnreachableError, GeometryError
from mlcech.exact import INF
from mlcech.settings import DEFAULT_SETTINGS

DISC = plane.DomainSpec.disc(0.3 + 0.2j, 3.0)
ANNULUS = plane.DomainSpec.annulus(0, 1.5, 4.0)
HALFPLANE = plane.DomainSpec.halfplane(1, 0.0)
DOMAINS = [plane.DomainSpec.plane(), DISC, ANNULUS, HALFPLANE]


def _points_in(k: plane.Exhaustion, count: int = 41) -> np.ndarray:
    """A grid of K plus samples of its boundary."""
    xs = np.linspace(-k.radius, k.radius, count)
    grid = (xs[None, :] + 1j * xs[:, None]).ravel()
    return np.concatenate([grid[k.contains(grid)], k.boundary_samples()])


def _random_part(rng: random.Random, pole: complex) -> NumericPart:
    coeffs = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(rng.randint(1, 3))]
    return NumericPart.create(pole, coeffs)


def _box(domain: plane.DomainSpec, n_max: int) -> List[float]:
    if domain.kind in ("disc", "annulus"):
        c, r = domain.center, domain.radius
        return [c.real - r, c.real + r, c.imag - r, c.imag + r]
    if domain.kind == "halfplane":
        return [-n_max, 0.0, -n_max, n_max]
    return [-n_max, n_max, -n_max, n_max]


def _random_poles(
    rng: random.Random, domain: plane.DomainSpec, n_max: int, count: int
) -> List[NumericPart]:
    """Poles 0.2 apart, well inside their compact and clear of the previous one.

    A pole pushed to ∞ keeps 0.5 from K_{n−1}; polynomial corrections then stay
    moderate on K_{n_max}. Poles on the hole side of an annulus keep 0.05.
    """
    x0, x1, y0, y1 = _box(domain, n_max)
    poles: List[complex] = []
    for _ in range(20000):
        if len(poles) == count:
            break
        a = complex(rng.uniform(x0, x1), rng.uniform(y0, y1))
        if domain.distance_to_complement(a) < 0.05:
            continue
        slacks = [float(plane.exhaust(domain, m).slack(a)) for m in range(1, n_max + 1)]
        n = next((m for m, s in enumerate(slacks, start=1) if s >= 0), None)
        if n is None or slacks[n - 1] < 0.05:
            continue
        if n >= 2:
            hole = domain.kind == "annulus" and abs(a - domain.center) < (
                domain.inner_radius + 1.0 / (n - 1)
            )
            if -slacks[n - 2] < (0.05 if hole else 0.5):
                continue
        if any(abs(a - b) < 0.2 for b in poles):
            continue
        poles.append(a)
    return [_random_part(rng, a) for a in poles]


class DomainErrorSpecs(NamedTuple):
    make: Any
    args: tuple
    expectation: Any


DOMAIN_ERRORS = [
    DomainErrorSpecs(plane.DomainSpec.disc, (0, 1.0), does_not_raise()),
    DomainErrorSpecs(plane.DomainSpec.disc, (0, 0.0), pytest.raises(ValueError)),
    DomainErrorSpecs(plane.DomainSpec.disc, (0, float("inf")), pytest.raises(ValueError)),
    DomainErrorSpecs(plane.DomainSpec.annulus, (0, 1.0, 2.0), does_not_raise()),
    DomainErrorSpecs(plane.DomainSpec.annulus, (0, 2.0, 2.0), pytest.raises(ValueError)),
    DomainErrorSpecs(plane.DomainSpec.annulus, (0, 0.0, 2.0), pytest.raises(ValueError)),
    DomainErrorSpecs(plane.DomainSpec.halfplane, (0, 1.0), pytest.raises(ValueError)),
    DomainErrorSpecs(plane.DomainSpec.halfplane, (3j, 1.0), does_not_raise()),
]


@pytest.mark.parametrize("spec", DOMAIN_ERRORS)
def test_domain_spec(spec: DomainErrorSpecs) -> None:
    with spec.expectation:
        spec.make(*spec.args)


def test_domain_spec_unknown_kind() -> None:
    with pytest.raises(ValueError):
        plane.DomainSpec("square").checked()


def test_domain_targets() -> None:
    assert ANNULUS.targets == (0j, INF)
    for domain in (plane.DomainSpec.plane(), DISC, HALFPLANE):
        assert domain.targets == (INF,), f"{domain.kind} targets"


def test_halfplane_normal_is_normalized() -> None:
    domain = plane.DomainSpec.halfplane(3j, 1.0)
    assert domain.normal == pytest.approx(1j)
    assert domain.contains(0.5j) and not domain.contains(2j)


@pytest.mark.parametrize("domain", DOMAINS)
def test_exhaust_nesting(domain: plane.DomainSpec) -> None:
    for n in range(1, 7):
        k, nxt = plane.exhaust(domain, n), plane.exhaust(domain, n + 1)
        pts = _points_in(k)
        assert np.all(nxt.slack(pts) > 0), f"K_{n} is not interior to K_{n + 1}"
        assert np.all(domain.distance_to_complement(pts) >= 1.0 / n - 1e-9)
        assert np.all(np.abs(pts) <= n + 1e-9)


def test_exhaust_errors() -> None:
    with pytest.raises(ValueError):
        plane.exhaust(plane.DomainSpec.plane(), 0)
    with pytest.raises(ValueError):
        plane.exhaust(plane.DomainSpec("disc", 0j, -1.0), 1)


def test_exhaust_empty() -> None:
    assert plane.exhaust(ANNULUS, 1).is_empty
    assert not plane.exhaust(ANNULUS, 3).is_empty
    assert plane.exhaust(ANNULUS, 1).boundary_samples().size == 0


class GroupErrorSpecs(NamedTuple):
    domain: plane.DomainSpec
    poles: List[complex]
    n_max: int


GROUP_ERRORS = [
    GroupErrorSpecs(plane.DomainSpec.disc(0, 1.0), [2.0], 3),
    GroupErrorSpecs(plane.DomainSpec.disc(0, 1.0), [1.0], 3),
    GroupErrorSpecs(plane.DomainSpec.plane(), [0.5, 0.5], 3),
    GroupErrorSpecs(plane.DomainSpec.plane(), [5.0], 1),
    GroupErrorSpecs(ANNULUS, [0.5], 5),
]


@pytest.mark.parametrize("spec", GROUP_ERRORS)
def test_group_poles_errors(spec: GroupErrorSpecs) -> None:
    parts = [NumericPart.create(a, [1]) for a in spec.poles]
    with pytest.raises(GeometryError):
        plane.group_poles(parts, spec.domain, spec.n_max)


def test_group_poles() -> None:
    parts = [NumericPart.create(a, [1]) for a in (0.5, 2.5, 1.5j, -2.9)]
    grouping = plane.group_poles(parts, plane.DomainSpec.plane(), 4)
    assert grouping.stages == ((0,), (2,), (1, 3), ())
    assert grouping.max_stage == 3
    assert grouping.stage_parts(5) == ()
    with pytest.raises(ValueError):
        plane.group_poles(parts, plane.DomainSpec.plane(), 0)


class PushSpecs(NamedTuple):
    domain: plane.DomainSpec
    n: int
    part: NumericPart
    target: Any


PUSHES = [
    PushSpecs(plane.DomainSpec.plane(), 2, NumericPart.create(3, [1]), INF),
    PushSpecs(plane.DomainSpec.plane(), 2, NumericPart.create(2.2j, [1j, -0.5, 0.25]), INF),
    PushSpecs(DISC, 2, NumericPart.create(-2.1, [1, 1]), INF),
    PushSpecs(plane.DomainSpec.annulus(0, 1.0, 5.0), 3, NumericPart.create(1.1, [1, 2]), 0j),
    PushSpecs(HALFPLANE, 2, NumericPart.create(-0.3 + 2.5j, [0.5 - 1j]), INF),
    PushSpecs(ANNULUS, 2, NumericPart.create(-1.9j, [1, 0.5j]), 0j),
]


@pytest.mark.parametrize("spec", PUSHES)
def test_push_pole(spec: PushSpecs) -> None:
    k = plane.exhaust(spec.domain, spec.n)
    eps = 1e-6
    approx = plane.push_pole(spec.part, k, spec.target, eps)
    assert approx.certified_bound <= eps
    assert approx.path_log, "the pole did not move"
    assert approx.R[0].center is spec.target or approx.R[0].center == spec.target
    pts = _points_in(k)
    error = np.max(np.abs(spec.part(pts) - approx(pts)))
    assert error <= approx.certified_bound, f"error {error} above {approx.certified_bound}"


def test_push_pole_taylor_section() -> None:
    # 1/(z − 5) = −Σ z^j/5^{j+1} on |z| ≤ 1
    k = plane.exhaust(plane.DomainSpec.plane(), 1)
    approx = plane.push_pole(NumericPart.create(5, [1]), k, INF, 1e-6)
    assert len(approx.path_log) == 1, "the pole is already far enough"
    poly = approx.R[0]
    assert poly.center is INF and poly.scale == 1.0
    for j in range(5):
        assert poly.coeffs[j] == pytest.approx(-(5.0 ** -(j + 1)), rel=1e-9), f"coefficient {j}"
    pts = k.boundary_samples(720)
    assert np.max(np.abs(1 / (pts - 5) - approx(pts))) <= approx.certified_bound <= 1e-6


@pytest.mark.parametrize("spec", PUSHES)
def test_push_pole_coefficients_stay_bounded(spec: PushSpecs) -> None:
    k = plane.exhaust(spec.domain, spec.n)
    d = float(k.distance_lower_bound(spec.part.pole))
    majorant = sum(abs(c) / d**j for j, c in enumerate(spec.part.coeffs, start=1))
    approx = plane.push_pole(spec.part, k, spec.target, 1e-6)
    total = sum(abs(c) for c in approx.R[0].coeffs)
    assert total <= 2 * majorant * (1 + 1e-9), f"{total} above twice {majorant}"


def test_push_pole_guide_disc_center() -> None:
    # K_3 of the disc is cut by |z − c| ≤ 8/3; the section is taken about c
    k = plane.exhaust(DISC, 3)
    part = NumericPart.create(DISC.center + 2.9j, [1])
    approx = plane.push_pole(part, k, INF, 1e-6)
    assert approx.R[0].origin == DISC.center
    pts = _points_in(k)
    assert np.max(np.abs(part(pts) - approx(pts))) <= approx.certified_bound


def test_push_pole_halfplane_edge() -> None:
    # a pole just across the line inside |z| ≤ 2 needs an unbounded polynomial degree
    k = plane.exhaust(HALFPLANE, 2)
    with pytest.raises(BudgetUnreachableError):
        plane.push_pole(NumericPart.create(-0.3 + 0.5j, [1]), k, INF, 1e-6)


def test_push_pole_at_target() -> None:
    k = plane.exhaust(ANNULUS, 3)
    part = NumericPart.create(0, [1, 2])
    approx = plane.push_pole(part, k, 0j, 1e-6)
    assert approx.certified_bound == 0.0
    assert approx.R[0].coeffs == (1, 2)


def test_push_pole_errors() -> None:
    k = plane.exhaust(plane.DomainSpec.plane(), 2)
    with pytest.raises(GeometryError):
        plane.push_pole(NumericPart.create(1, [1]), k, INF, 1e-6)
    with pytest.raises(ValueError):
        plane.push_pole(NumericPart.create(3, [1]), k, INF, 0.0)
    capped = DEFAULT_SETTINGS._replace(max_push_steps=1)
    with pytest.raises(BudgetUnreachableError):
        plane.push_pole(NumericPart.create(2.1, [1]), k, INF, 1e-6, capped)


def test_push_pole_empty_compact() -> None:
    k = plane.exhaust(ANNULUS, 1)
    approx = plane.push_pole(NumericPart.create(2.2, [1]), k, INF, 1e-6)
    assert approx.R == () and approx.certified_bound == 0.0


@pytest.mark.parametrize("seed,domain", list(enumerate([plane.DomainSpec.plane(), DISC, ANNULUS])))
def test_random_configurations(seed: int, domain: plane.DomainSpec) -> None:
    rng = random.Random(seed)
    n_stages = 4
    for _ in range(7):
        parts = _random_poles(rng, domain, n_stages, rng.randint(3, 12))
        grouping = plane.group_poles(parts, domain, n_stages)
        series = plane.assemble(grouping, domain, n_stages)
        assert series.tail_bound == 2.0**-n_stages
        for stage in series.stages:
            for correction in stage.corrections:
                for r in correction.R:
                    assert r.center is INF or r.center in domain.targets, f"pole at {r.center}"
            if stage.n == 1 or not stage.parts:
                assert stage.corrections == ()
                continue
            assert stage.certified_bound <= 2.0**-stage.n
            pts = _points_in(plane.exhaust(domain, stage.n - 1))
            if pts.size:
                error = np.max(np.abs(stage(pts)))
                assert error <= stage.certified_bound + 1e-9, f"stage {stage.n}: {error}"
        for part in parts:
            others = [abs(p.pole - part.pole) for p in parts if p is not part]
            dist = float(domain.distance_to_complement(part.pole))
            rho = min(others + [dist, 4.0]) / 4
            error = plane.verify_principal_part(series, part, rho, 256)
            assert error <= 1e-6, f"principal part at {part.pole}: {error}"


class TailSpecs(NamedTuple):
    domain: plane.DomainSpec
    poles: List[complex]
    n_stages: int


TAILS = [
    TailSpecs(plane.DomainSpec.plane(), [0.5, 1.5j, -2.5, 4.5 + 0.5j, 6.5j, -8.5], 4),
    # both later poles lie in K_3 = {|z| ≤ 3} ∩ {|z − c| ≤ 8/3}
    TailSpecs(
        DISC, [0.5, -1.5j, DISC.center * (1 + 2.6 / abs(DISC.center)), DISC.center - 2.62], 2
    ),
]


@pytest.mark.parametrize("spec", TAILS)
def test_later_stages_stay_small(spec: TailSpecs) -> None:
    rng = random.Random(7)
    parts = [_random_part(rng, a) for a in spec.poles]
    n = spec.n_stages
    grouping = plane.group_poles(parts, spec.domain, n + 5)
    assert grouping.max_stage > n, "no pole beyond the last checked stage"
    series = plane.assemble(grouping, spec.domain, n + 5)
    pts = _points_in(plane.exhaust(spec.domain, n))
    tail = sum(stage(pts) for stage in series.stages[n:])
    assert np.max(np.abs(tail)) <= 2.0 ** -(n - 1)


def _two_pole_series() -> plane.MLSeries:
    parts = [NumericPart.create(0.5, [1]), NumericPart.create(1.5, [1, 1])]
    domain = plane.DomainSpec.plane()
    return plane.assemble(plane.group_poles(parts, domain, 2), domain, 2)


def test_assemble_errors() -> None:
    parts = [NumericPart.create(2.5, [1])]
    domain = plane.DomainSpec.plane()
    grouping = plane.group_poles(parts, domain, 3)
    with pytest.raises(GeometryError):
        plane.assemble(grouping, domain, 2)
    with pytest.raises(ValueError):
        plane.assemble(grouping, domain, 0)


def test_evaluate() -> None:
    series = _two_pole_series()
    value, bound = plane.evaluate(series, 0.2, depth=1)
    assert bound == 0.25, "stage 2 is omitted"
    assert value == pytest.approx(1 / (0.2 - 0.5))
    value, bound = plane.evaluate(series, 1.8)
    assert bound == 0.0
    assert value == pytest.approx(complex(series.value(1.8)))


@pytest.mark.parametrize(
    "z,depth,expectation",
    [
        (0.5 + 1e-8, None, pytest.raises(GeometryError)),
        (10, 1, pytest.raises(GeometryError)),
        # outside K_N even when no stage is omitted
        (10, 2, pytest.raises(GeometryError)),
        (10, None, pytest.raises(GeometryError)),
        (2, 2, does_not_raise()),
        (1.5 + 1j, 1, pytest.raises(GeometryError)),
        (0.2, 0, pytest.raises(ValueError)),
        (0.2, 3, pytest.raises(ValueError)),
    ],
)
def test_evaluate_errors(z: complex, depth: Any, expectation: Any) -> None:
    series = _two_pole_series()
    with expectation:
        plane.evaluate(series, z, depth)


def test_evaluate_grid() -> None:
    series = _two_pole_series()
    values, bounds = plane.evaluate_grid(series, np.array([0.5, 0.2, 10]), depth=1)
    assert np.isnan(values[0]) and not np.isnan(values[1]) and np.isnan(values[2])
    assert np.isnan(bounds[0]) and bounds[1] == 0.25 and np.isnan(bounds[2])
    single, _ = plane.evaluate(series, 0.2, depth=1)
    assert values[1] == pytest.approx(single)


def _unit_disc_series() -> plane.MLSeries:
    """Poles at 0 (stage 1) and 0.8 (stage 5, where d(0.8, ∂G) = 1/5)."""
    parts = [NumericPart.create(0, [1]), NumericPart.create(0.8, [1, 0.5])]
    domain = plane.DomainSpec.disc(0, 1.0)
    grouping = plane.group_poles(parts, domain, 5)
    assert grouping.max_stage == 5
    return plane.assemble(grouping, domain, 5)


@pytest.mark.parametrize(
    "z,depth,expectation",
    [
        # outside G
        (5.0, None, pytest.raises(GeometryError)),
        (-1.2j, None, pytest.raises(GeometryError)),
        # on ∂G
        (1.0, None, pytest.raises(GeometryError)),
        (-0.6 + 0.8j, None, pytest.raises(GeometryError)),
        # in G but outside K_5 = {|z| ≤ 0.8}
        (0.9, None, pytest.raises(GeometryError)),
        (0.85j, 5, pytest.raises(GeometryError)),
        # in K_5 but outside K_4 = {|z| ≤ 0.75}
        (0.78j, 4, pytest.raises(GeometryError)),
        (0.78j, None, does_not_raise()),
        (0.5, None, does_not_raise()),
        (0.5, 4, does_not_raise()),
    ],
)
def test_evaluate_near_boundary(z: complex, depth: Any, expectation: Any) -> None:
    series = _unit_disc_series()
    with expectation:
        value, bound = plane.evaluate(series, z, depth)
        assert np.isfinite(value), f"{z} gave {value}"
        assert bound == (0.0 if depth is None else 2.0**-5)


def test_evaluate_grid_refuses_points_outside_k() -> None:
    series = _unit_disc_series()
    points = np.array([5.0, 1.0, 0.9, 0.8, 0.5, 0.3j])
    values, bounds = plane.evaluate_grid(series, points)
    refused = np.isnan(values)
    assert refused.tolist() == [True, True, True, True, False, False]
    assert np.array_equal(np.isnan(bounds), refused), "refused points carry no bound"
    assert bounds[~refused].tolist() == [0.0, 0.0]
    for z, value in zip(points[~refused], values[~refused]):
        assert value == pytest.approx(plane.evaluate(series, z)[0])


def test_verify_principal_part_errors() -> None:
    series = _two_pole_series()
    part = series.parts[0]
    with pytest.raises(ValueError):
        plane.verify_principal_part(series, part, 0.1, 32)
    with pytest.raises(GeometryError):
        plane.verify_principal_part(series, part, 1.0)
    assert plane.verify_principal_part(series, part, 0.2) < 1e-8
