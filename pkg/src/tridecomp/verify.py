"""Invariant suite run by the ``verify`` command."""

from fractions import Fraction
import logging
from typing import Optional

import numpy as np

from tridecomp.cliques import Triangle, orderings
from tridecomp.constants import (
    BRIDGE_TOLERANCE,
    DEFAULT_BRIDGE_SAMPLES,
    DEFAULT_TOLERANCE,
    ORACLE_MAX_N,
)
from tridecomp.decompose import (
    TriangleWeigher,
    above_threshold,
    decompose,
    degree_gap,
    stack_program_points,
    verify_edge_sums,
    w1_hat_density,
)
from tridecomp.gadgets import w_oracle
from tridecomp.graph import Graph
from tridecomp.interfaces import CheckResult, TriangleWeightReport, VerificationSummary
from tridecomp.programs import check_domain, eval_objective, final_objective
from tridecomp.scalar import NumericMode
from tridecomp.util import timeit

logger = logging.getLogger(__name__)


def check_edge_sums(report: TriangleWeightReport, tolerance: float) -> CheckResult:
    verdict = verify_edge_sums(report, tolerance)
    detail = f"{len(report.edge_sums)} edges"
    if verdict.worst_edge is not None:
        detail += f", worst {verdict.worst_edge} off by {verdict.worst_error:.3g}"
    return CheckResult(name="edge sums", passed=verdict.passed, detail=detail)


def check_non_negativity(report: TriangleWeightReport, tolerance: float) -> CheckResult:
    side = "above" if report.summary.above_threshold else "below"
    if report.min_weight is None:
        return CheckResult(name="non-negativity", passed=True, detail="no triangles")
    passed = report.min_weight >= -tolerance
    detail = (
        f"min weight {float(report.min_weight):.6g} at {report.min_witness}, "
        f"degree {side} threshold"
    )
    return CheckResult(name="non-negativity", passed=passed, detail=detail)


def check_oracle(g: Graph, report: TriangleWeightReport, tolerance: float) -> CheckResult:
    """Compare every reported weight with the literal 5-clique sum."""
    name = "oracle == fast"
    if g.n > ORACLE_MAX_N:
        return CheckResult(name=name, passed=True, skipped=True, detail=f"n > {ORACLE_MAX_N}")
    worst, worst_error = None, 0.0
    for record in report.triangles:
        expected = w_oracle(g, Triangle(*record.vertices), report.mode)
        error = abs(expected - record.weight)
        if error > worst_error:
            worst, worst_error = record.vertices, float(error)
    passed = worst_error <= tolerance
    detail = f"{len(report.triangles)} triangles"
    if worst is not None:
        detail += f", worst {worst} off by {worst_error:.3g}"
    return CheckResult(name=name, passed=passed, detail=detail)


def _sample_triangles(report: TriangleWeightReport, samples: int, seed: int) -> list[Triangle]:
    triangles = [Triangle(*record.vertices) for record in report.triangles]
    if len(triangles) <= samples:
        return triangles
    rng = np.random.default_rng(seed)
    chosen = np.sort(rng.choice(len(triangles), size=samples, replace=False))
    return [triangles[i] for i in chosen]


def check_bridge(
    g: Graph,
    report: TriangleWeightReport,
    samples: int = DEFAULT_BRIDGE_SAMPLES,
    seed: int = 0,
) -> CheckResult:
    """Tie sampled ordered triangles to the program chain.

    For every ordering of every sampled triangle, the count form of the
    normalized weight must match its density form, every density point must
    lie in the level 3 domain at ``d = 1 - delta/n``, and when the degree is
    above the threshold the normalized weight and every point's objective
    must stay below the closed-form optimum.
    """
    name = "bridge"
    mode = report.mode
    d_exact = degree_gap(g, NumericMode.EXACT)
    if d_exact >= Fraction(1, 4):
        return CheckResult(name=name, passed=True, skipped=True, detail="d >= 1/4")
    if not report.triangles:
        return CheckResult(name=name, passed=True, skipped=True, detail="no triangles")

    d = float(d_exact)
    bounded = above_threshold(g)
    optimum = final_objective(0.0, d)
    weigher = TriangleWeigher(g, mode)
    checked_points = 0
    triangles = _sample_triangles(report, samples, seed)
    for t in triangles:
        for o in orderings(t):
            shared = (g.rows[o.x1] & g.rows[o.x2]).bit_count()
            count_form = 1 - 6 * shared * weigher.ordered_weight(o)
            density_form = w1_hat_density(g, o, mode)
            error = abs(count_form - density_form)
            limit = 0 if mode == NumericMode.EXACT else BRIDGE_TOLERANCE * max(
                1.0, abs(float(count_form))
            )
            if error > limit:
                detail = f"{o}: count form {float(count_form)!r} vs {float(density_form)!r}"
                return CheckResult(name=name, passed=False, detail=detail)

            pt = stack_program_points(g, o)
            if pt is not None:
                pt = pt._replace(d=d)
                domain = check_domain(pt)
                if not domain.passed:
                    return CheckResult(name=name, passed=False, detail=f"{o}: {domain.detail}")
                checked_points += len(pt.f)
                if bounded and float(np.max(eval_objective(pt))) > optimum + DEFAULT_TOLERANCE:
                    detail = f"{o}: level 3 objective exceeds {optimum:.12g}"
                    return CheckResult(name=name, passed=False, detail=detail)
            if bounded and float(count_form) > optimum + DEFAULT_TOLERANCE:
                detail = f"{o}: normalized weight {float(count_form):.12g} > {optimum:.12g}"
                return CheckResult(name=name, passed=False, detail=detail)
    detail = f"{len(triangles)} triangles, {checked_points} program points"
    if not bounded:
        detail += ", degree below threshold so no bound checked"
    return CheckResult(name=name, passed=True, detail=detail)


@timeit
def verify_graph(
    g: Graph,
    mode: NumericMode = NumericMode.FLOAT,
    tolerance: Optional[float] = None,
    bridge_samples: int = DEFAULT_BRIDGE_SAMPLES,
    seed: int = 0,
    threads: int = 1,
) -> tuple[TriangleWeightReport, VerificationSummary]:
    """Decompose ``g`` and run every check applicable at its size.

    ``DelegationUndefined`` and ``UncoverableEdge`` propagate to the caller.
    """
    mode = NumericMode(mode)
    if mode == NumericMode.EXACT:
        tolerance = 0.0
    elif tolerance is None:
        tolerance = DEFAULT_TOLERANCE
    report = decompose(g, mode, threads)
    checks = [
        check_edge_sums(report, tolerance),
        check_non_negativity(report, tolerance),
        check_oracle(g, report, tolerance),
        check_bridge(g, report, bridge_samples, seed),
    ]
    for check in checks:
        status = "skipped" if check.skipped else ("ok" if check.passed else "FAILED")
        logger.info("%s: %s (%s)", check.name, status, check.detail)
    summary = VerificationSummary(
        n=g.n,
        mode=mode,
        checks=checks,
        min_weight=report.min_weight,
        min_witness=report.min_witness,
    )
    return report, summary
