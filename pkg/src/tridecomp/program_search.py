"""Samplers, grid searches, randomized clamp tests and the closed-form
threshold certificate of the program chain."""

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
import logging
import math

import numpy as np

from tridecomp.constants import CLAMP_TOLERANCE, MAX_REJECTIONS, SAMPLE_BATCH
from tridecomp.exceptions import DomainError, SamplerStarved
from tridecomp.interfaces import Certificate, ClampTestResult, SearchResult, Verdict
from tridecomp.programs import (
    LEVEL_VARIABLES,
    ProgramPoint,
    clamp_step,
    eval_objective,
    lemma_fn,
    point_to_dict,
    take,
)
from tridecomp.scalar import QuadraticSurd
from tridecomp.util import timeit

logger = logging.getLogger(__name__)

SAMPLED_LEVELS = range(3, 11)


def threshold_exact() -> QuadraticSurd:
    """``(7 - sqrt(21)) / 14`` as an exact element of Q(sqrt(21))."""
    return QuadraticSurd(Fraction(1, 2), Fraction(-1, 14), 21)


def solve_threshold() -> float:
    """Root of ``7d^2 - 7d + 1`` in ``[0, 1/4)``."""
    return (7 - math.sqrt(21)) / 14


def _draw(level: int, d: float, rng: np.random.Generator, size: int) -> ProgramPoint:
    """Draw a point per row, each variable uniform in its interval given the
    variables drawn before it."""

    def uniform(low, high):
        return rng.uniform(low, high, size)

    if level in (9, 10):
        a = uniform(0.0, d) if level == 9 else None
        return ProgramPoint(level, d, a=a, b=uniform(0.0, d))
    x = uniform(1 - d, 1.0)
    if level in (7, 8):
        y = uniform(1 - d, 1.0) if level == 7 else None
        return ProgramPoint(level, d, x=x, y=y, a=uniform(0.0, d), b=uniform(0.0, d))
    y = uniform(1 - d, 1.0)
    e0 = uniform(x - d, x)
    e = uniform(x + y - 1, 1.0)
    f = uniform(y - d, y)
    if level == 6:
        return ProgramPoint(6, d, x=x, y=y, e0=e0, e=e, f=f)
    q0 = uniform(e + e0 - x, 1.0)
    if level == 5:
        return ProgramPoint(5, d, x=x, y=y, e0=e0, e=e, f=f, q0=q0)
    q = uniform(e + f - y, 1.0)
    p = uniform(q0 + f - y, 1.0)
    r0 = uniform(0.0, e0)
    r = uniform(0.0, q0)
    return ProgramPoint(level, d, x, y, e0, e, f, q0, q, p, r0, r)


def _denominators(pt: ProgramPoint) -> list:
    level, d = pt.level, pt.d
    if level in (3, 4):
        return [pt.e, pt.e0, pt.f, pt.q0, pt.q, pt.p]
    if level in (5, 6):
        q0 = pt.q0 if level == 5 else pt.e + pt.e0 - pt.x
        return [pt.e, pt.f, q0, q0 + pt.f - pt.y, pt.e + pt.f - pt.y]
    x = pt.x if level in (7, 8) else 1 - d
    y = pt.y if level == 7 else 1 - d
    a = pt.a if level <= 9 else 0.0
    s = x + y - 1
    return [s, s - a, s - pt.b, s - a - pt.b, y - pt.b]


def _concatenate(points: list[ProgramPoint]) -> ProgramPoint:
    first = points[0]
    names = LEVEL_VARIABLES[first.level]
    merged = {name: np.concatenate([getattr(pt, name) for pt in points]) for name in names}
    return first._replace(**merged)


def sample_feasible(level: int, d: float, rng: np.random.Generator, size: int = 1) -> ProgramPoint:
    """Sample ``size`` feasible points of a level as one array-valued point.

    Candidates with a non-positive denominator are redrawn.
    """
    if level not in SAMPLED_LEVELS:
        msg = f"sampling supports levels 3..10, got {level}"
        raise ValueError(msg)
    if not 0 < d < 0.25:
        raise DomainError("0 < d < 1/4")
    parts = []
    missing = size
    rejections = 0
    while missing > 0:
        candidate = _draw(level, d, rng, missing)
        good = np.ones(missing, dtype=bool)
        for denominator in _denominators(candidate):
            good &= np.asarray(denominator) > 0
        rejections += int((~good).sum())
        if rejections > MAX_REJECTIONS:
            raise SamplerStarved(rejections)
        if good.any():
            parts.append(take(candidate, good))
            missing -= int(good.sum())
    return _concatenate(parts)


@timeit
def random_clamp_test(
    level: int,
    d: float,
    trials: int,
    seed: int,
    tolerance: float = CLAMP_TOLERANCE,
) -> ClampTestResult:
    """Check on random feasible points that clamping never lowers the objective.

    At level 3 the clamp is the passage to ramps, and the check also asks
    for a non-negative clamped value.
    """
    if trials < 1:
        msg = f"trials must be at least 1, got {trials}"
        raise ValueError(msg)
    rng = np.random.default_rng(seed)
    worst_gap, worst_point, lowest = -math.inf, None, math.inf
    done = 0
    while done < trials:
        size = min(SAMPLE_BATCH, trials - done)
        pt = sample_feasible(level, d, rng, size)
        before = np.broadcast_to(eval_objective(pt), (size,))
        after = np.broadcast_to(eval_objective(clamp_step(pt)), (size,))
        gap = before - after
        if level == 3:
            gap = np.maximum(gap, -after)
        index = int(np.argmax(gap))
        if gap[index] > worst_gap:
            worst_gap, worst_point = float(gap[index]), point_to_dict(pt, index)
        lowest = min(lowest, float(after.min()))
        done += size
    passed = worst_gap <= tolerance
    if not passed:
        logger.warning("Clamp at level %d lowered the objective by %g at %s",
                       level, worst_gap, worst_point)
    return ClampTestResult(
        level=level,
        d=d,
        trials=trials,
        seed=seed,
        tolerance=tolerance,
        passed=passed,
        worst_gap=worst_gap,
        worst_point=worst_point,
        min_clamped_value=lowest,
    )


def _grid_rows(axis: np.ndarray, d: float, rows: range) -> tuple[int, int, float]:
    a, b = np.meshgrid(axis[rows.start:rows.stop], axis, indexing="ij")
    values = eval_objective(ProgramPoint(9, d, a=a, b=b))
    flat = int(np.argmax(values))
    i, j = np.unravel_index(flat, values.shape)
    return rows.start + int(i), int(j), float(values[i, j])


@timeit
def grid_search(level: int, d: float, resolution: int, threads: int = 1) -> SearchResult:
    """Maximize the level 9 or level 10 objective on a uniform grid of ``[0, d]``.

    Ties go to the first grid point in row-major order.
    """
    if level not in (9, 10):
        msg = f"grid search supports levels 9 and 10, got {level}"
        raise ValueError(msg)
    if resolution < 2:
        msg = f"resolution must be at least 2, got {resolution}"
        raise ValueError(msg)
    d = float(d)
    axis = np.linspace(0.0, d, resolution)
    if level == 10:
        values = eval_objective(ProgramPoint(10, d, b=axis))
        index = int(np.argmax(values))
        return SearchResult(
            level=10,
            d=d,
            resolution=resolution,
            best_point={"d": d, "b": float(axis[index])},
            best_value=float(values[index]),
            evaluations=resolution,
        )

    step = max(1, math.ceil(resolution / (threads * 4)))
    chunks = [range(start, min(start + step, resolution)) for start in range(0, resolution, step)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partial = list(pool.map(lambda rows: _grid_rows(axis, d, rows), chunks))
    else:
        partial = [_grid_rows(axis, d, rows) for rows in chunks]
    best_i, best_j, best_value = partial[0]
    for i, j, value in partial[1:]:
        if value > best_value:
            best_i, best_j, best_value = i, j, value
    return SearchResult(
        level=9,
        d=d,
        resolution=resolution,
        best_point={"d": d, "a": float(axis[best_i]), "b": float(axis[best_j])},
        best_value=best_value,
        evaluations=resolution * resolution,
    )


def _exact(d):
    if isinstance(d, (Fraction, QuadraticSurd)):
        return d
    if isinstance(d, int):
        return Fraction(d)
    return Fraction(float(d))


def certify(d) -> Certificate:
    """Decide whether ``W10(0) = 3d(1-d)/(1-2d)^2`` is at most one.

    Everything is computed exactly; floats are taken at their exact binary
    value. ``chain_valid`` also requires ``Q(0) <= 0`` and ``Q(d) <= 0``
    (``Q`` is convex in ``b``) and ``26d^2 - 15d + 2 >= 0``, the conditions
    the last two reductions rest on, and ``d <= 1/5``.
    """
    exact = _exact(d)
    if not (exact > 0 and exact < Fraction(1, 4)):
        raise DomainError("0 < d < 1/4")
    value = 3 * exact * (1 - exact) / (1 - 2 * exact) ** 2
    verdict = Verdict.CERTIFIED_LE_1 if value <= 1 else Verdict.EXCEEDS_1
    at_zero = lemma_fn("Q", 0, d=exact)
    at_d = lemma_fn("Q", exact, d=exact)
    quadratic = lemma_fn("quadratic", d=exact)
    chain_valid = exact <= Fraction(1, 5) and at_zero <= 0 and at_d <= 0 and quadratic >= 0
    logger.info("certify d=%s: W10(0)=%.15g %s", float(exact), float(value), verdict.value)
    return Certificate(
        d=exact,
        value=value,
        value_float=float(value),
        verdict=verdict,
        chain_valid=chain_valid,
        q_at_zero=at_zero,
        q_at_d=at_d,
        quadratic=quadratic,
    )
