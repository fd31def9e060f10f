"""Objectives, domains and clamping maps of the program chain.

A level ``L`` point holds the variables of program ``L``. Scalars may be
floats, ``Fraction`` or ``QuadraticSurd`` values, or numpy arrays holding
one coordinate of many points at once; every evaluator below works on all
of them. Levels 1 and 2 carry per-index vectors instead and are evaluated
by :func:`eval_vector_objective`.
"""

from fractions import Fraction
import logging
from typing import Any, NamedTuple, Optional

import numpy as np

from tridecomp.constants import DOMAIN_SLACK, VECTOR_MAX_LEVEL_SIZE
from tridecomp.exceptions import DomainError
from tridecomp.interfaces import CheckResult
from tridecomp.scalar import QuadraticSurd, format_scalar

logger = logging.getLogger(__name__)

FINAL_LEVEL = 10

LEVEL_VARIABLES = {
    1: ("x", "e0"),
    2: ("x", "e0"),
    3: ("x", "y", "e0", "e", "f", "q0", "q", "p", "r0", "r"),
    4: ("x", "y", "e0", "e", "f", "q0", "q", "p", "r0", "r"),
    5: ("x", "y", "e0", "e", "f", "q0"),
    6: ("x", "y", "e0", "e", "f"),
    7: ("x", "y", "a", "b"),
    8: ("x", "a", "b"),
    9: ("a", "b"),
    10: ("b",),
}


class ProgramPoint(NamedTuple):
    """Variables of one level of the program chain.

    Levels 3 to 10 use the scalar fields listed in ``LEVEL_VARIABLES``.
    Levels 1 and 2 use ``x`` and ``e0`` plus per-index vectors: ``y_vec``,
    ``e_vec`` and ``q0_vec`` indexed by ``i < r0_count``, and ``f_vec``,
    ``q_vec``, ``p_vec`` indexed by ``(i, j)`` with ``j < r_counts[i]`` at
    level 1 or by ``i`` at level 2, where ``r_vec`` holds ``R_i / v(G)``.
    """

    level: int
    d: Any
    x: Any = None
    y: Any = None
    e0: Any = None
    e: Any = None
    f: Any = None
    q0: Any = None
    q: Any = None
    p: Any = None
    r0: Any = None
    r: Any = None
    a: Any = None
    b: Any = None
    v_count: Optional[int] = None
    r0_count: Optional[int] = None
    r_counts: Optional[tuple[int, ...]] = None
    y_vec: Optional[tuple] = None
    e_vec: Optional[tuple] = None
    q0_vec: Optional[tuple] = None
    f_vec: Optional[tuple] = None
    q_vec: Optional[tuple] = None
    p_vec: Optional[tuple] = None
    r_vec: Optional[tuple] = None

    def variables(self) -> dict[str, Any]:
        """Scalar variables of the point's level, including ``d``."""
        names = LEVEL_VARIABLES[self.level]
        return {"d": self.d, **{name: getattr(self, name) for name in names}}


def point_to_dict(pt: ProgramPoint, index: Optional[int] = None) -> dict[str, float]:
    """Float view of a point's scalar variables, optionally of one array row."""
    values = {}
    for name, value in pt.variables().items():
        if isinstance(value, np.ndarray):
            value = value[index] if index is not None else value
        values[name] = float(value)
    return values


def take(pt: ProgramPoint, index: int) -> ProgramPoint:
    """Select one point from an array-valued point."""
    updates = {
        name: value[index]
        for name, value in pt.variables().items()
        if isinstance(value, np.ndarray)
    }
    return pt._replace(**updates)


def ramp(value):
    """``max(value, 0)`` for scalars and numpy arrays."""
    if isinstance(value, np.ndarray):
        return np.maximum(value, 0.0)
    return value if value > 0 else value - value


def _share(count: int, total: int, like):
    if isinstance(like, (Fraction, QuadraticSurd, int)):
        return Fraction(count, total)
    return count / total


def _slack(*values) -> float:
    if all(isinstance(value, (int, Fraction, QuadraticSurd)) for value in values):
        return 0
    return DOMAIN_SLACK


def _holds(condition) -> bool:
    if isinstance(condition, np.ndarray):
        return bool(condition.all())
    return bool(condition)


def _interval_constraints(pt: ProgramPoint) -> list[tuple[str, str, Any, str, Any]]:
    """``(variable, lower text, lower, upper text, upper)`` per constraint."""
    d = pt.d
    x, y, e0, e, f, q0 = pt.x, pt.y, pt.e0, pt.e, pt.f, pt.q0
    level = pt.level
    if level in (3, 4, 5, 6):
        rows = [
            ("x", "1-d", 1 - d, "1", 1),
            ("y", "1-d", 1 - d, "1", 1),
            ("e0", "x-d", x - d, "x", x),
            ("e", "x+y-1", x + y - 1, "1", 1),
            ("f", "y-d", y - d, "y", y),
        ]
        if level <= 5:
            rows.append(("q0", "e+e0-x", e + e0 - x, "1", 1))
        if level <= 4:
            rows += [
                ("q", "e+f-y", e + f - y, "1", 1),
                ("p", "q0+f-y", q0 + f - y, "1", 1),
                ("r0", "0", 0, "e0", e0),
                ("r", "0", 0, "q0", q0),
            ]
        return rows
    rows = []
    if level in (7, 8):
        rows.append(("x", "1-d", 1 - d, "1", 1))
    if level == 7:
        rows.append(("y", "1-d", 1 - d, "1", 1))
    if level in (7, 8, 9):
        rows.append(("a", "0", 0, "d", d))
    rows.append(("b", "0", 0, "d", d))
    return rows


def _vector_constraints(pt: ProgramPoint) -> list[tuple[str, str, Any, str, Any]]:
    d, x, e0 = pt.d, pt.x, pt.e0
    rows = [
        ("x", "1-d", 1 - d, "1", 1),
        ("e0", "x-d", x - d, "x", x),
        ("r0", "0", 0, "e0", e0),
    ]
    for i in range(pt.r0_count):
        y_i, e_i, q0_i = pt.y_vec[i], pt.e_vec[i], pt.q0_vec[i]
        rows += [
            (f"y[{i}]", "1-d", 1 - d, "1", 1),
            (f"e[{i}]", "x+y-1", x + y_i - 1, "1", 1),
            (f"q0[{i}]", "e+e0-x", e_i + e0 - x, "1", 1),
        ]
        if pt.level == 1:
            cells = [(f"[{i}][{j}]", pt.f_vec[i][j], pt.q_vec[i][j], pt.p_vec[i][j])
                     for j in range(pt.r_counts[i])]
        else:
            cells = [(f"[{i}]", pt.f_vec[i], pt.q_vec[i], pt.p_vec[i])]
        rows.append((f"r[{i}]", "0", 0, "q0", q0_i))
        for tag, f_ij, q_ij, p_ij in cells:
            rows += [
                (f"f{tag}", "y-d", y_i - d, "y", y_i),
                (f"q{tag}", "e+f-y", e_i + f_ij - y_i, "1", 1),
                (f"p{tag}", "q0+f-y", q0_i + f_ij - y_i, "1", 1),
            ]
    return rows


def _r_value(pt: ProgramPoint, i: int):
    if pt.level == 1:
        return _share(pt.r_counts[i], pt.v_count, pt.e0)
    return pt.r_vec[i]


def _shape_violation(pt: ProgramPoint) -> Optional[str]:
    if pt.level not in LEVEL_VARIABLES:
        return "level in 1..10"
    missing = [name for name in LEVEL_VARIABLES[pt.level] if getattr(pt, name) is None]
    if missing:
        return f"{missing[0]} present"
    if pt.level > 2:
        return None
    if pt.v_count is None or pt.v_count < 1 or pt.r0_count is None:
        return "v_count and r0_count present"
    if pt.r0_count > VECTOR_MAX_LEVEL_SIZE:
        return f"r0_count <= {VECTOR_MAX_LEVEL_SIZE}"
    for name in ("y_vec", "e_vec", "q0_vec", "f_vec", "q_vec", "p_vec"):
        vector = getattr(pt, name)
        if vector is None or len(vector) != pt.r0_count:
            return f"len({name}) == r0_count"
    if pt.level == 2:
        if pt.r_vec is None or len(pt.r_vec) != pt.r0_count:
            return "len(r_vec) == r0_count"
        return None
    if pt.r_counts is None or len(pt.r_counts) != pt.r0_count:
        return "len(r_counts) == r0_count"
    for i, count in enumerate(pt.r_counts):
        if count > VECTOR_MAX_LEVEL_SIZE:
            return f"r_counts[{i}] <= {VECTOR_MAX_LEVEL_SIZE}"
        for name in ("f_vec", "q_vec", "p_vec"):
            if len(getattr(pt, name)[i]) != count:
                return f"len({name}[{i}]) == r_counts[{i}]"
    return None


def check_domain(pt: ProgramPoint) -> CheckResult:
    """Check every interval constraint of the point's level.

    The first violated constraint is named in ``detail``, e.g. ``"a <= d"``.
    Float points get a slack of ``DOMAIN_SLACK`` so that clamped points
    sitting on a boundary still pass; exact points get none.
    """
    name = f"level {pt.level} domain"
    shape = _shape_violation(pt)
    if shape is not None:
        return CheckResult(name=name, passed=False, detail=shape)
    slack = _slack(pt.d)
    if not _holds(pt.d > 0):
        return CheckResult(name=name, passed=False, detail="d > 0")
    if not _holds(pt.d < Fraction(1, 4) if slack == 0 else pt.d < 0.25):
        return CheckResult(name=name, passed=False, detail="d < 1/4")

    rows = _vector_constraints(pt) if pt.level <= 2 else _interval_constraints(pt)
    for variable, low_text, low, high_text, high in rows:
        value = getattr(pt, variable, None) if pt.level > 2 else None
        if value is None:
            value = _vector_value(pt, variable)
        slack = _slack(value, low, high)
        if not _holds(value >= low - slack):
            return CheckResult(name=name, passed=False, detail=f"{variable} >= {low_text}")
        if not _holds(value <= high + slack):
            return CheckResult(name=name, passed=False, detail=f"{variable} <= {high_text}")
    return CheckResult(name=name, passed=True)


def _vector_value(pt: ProgramPoint, label: str):
    if label == "x":
        return pt.x
    if label == "e0":
        return pt.e0
    if label == "r0":
        return _share(pt.r0_count, pt.v_count, pt.e0)
    head, _, rest = label.partition("[")
    indices = [int(part) for part in rest.replace("]", " ").replace("[", " ").split()]
    i = indices[0]
    if head == "r":
        return _r_value(pt, i)
    vector = getattr(pt, f"{head}_vec")
    value = vector[i]
    if len(indices) == 2:
        value = value[indices[1]]
    return value


def require_domain(pt: ProgramPoint) -> None:
    """Raise ``DomainError`` naming the first violated constraint."""
    result = check_domain(pt)
    if not result.passed:
        raise DomainError(result.detail)


def _outer_term(e, e0, q0):
    return 1 / q0 * (1 / e - 1 / e0)


def _inner_term(e, e0, f, q0, q, p):
    return 1 / p * (1 / q * (1 / e - 1 / f) + 1 / q0 * (1 / e - 1 / e0))


def _w3(pt: ProgramPoint):
    outer = _outer_term(pt.e, pt.e0, pt.q0)
    inner = _inner_term(pt.e, pt.e0, pt.f, pt.q0, pt.q, pt.p)
    return pt.e0 * pt.r0 * (outer + pt.r * inner)


def _w4(pt: ProgramPoint):
    e0, e, f, q0, q, p, r0, r = pt.e0, pt.e, pt.f, pt.q0, pt.q, pt.p, pt.r0, pt.r
    return (
        r0 * ramp(e0 - e) / (q0 * e)
        + e0 * r0 * r * ramp(f - e) / (p * q * e * f)
        + e0 * r0 * r * ramp(e0 - e) / (p * q0 * e * e0)
    )


def _w5(y, e0, e, f, q0):
    return (
        e0 * ramp(e0 - e) / (q0 * e)
        + e0 * e0 * q0 * ramp(f - e) / ((q0 + f - y) * (e + f - y) * e * f)
        + e0 * ramp(e0 - e) / ((q0 + f - y) * e)
    )


def _w7(x, y, a, b, ramped: bool = True):
    cut = ramp if ramped else (lambda value: value)
    s = x + y - 1
    return (
        (x - a) * cut(1 - y - a) / ((s - a) * s)
        + (x - a) * (x - a) * (s - a) * cut(1 - x - b) / ((s - a - b) * (s - b) * s * (y - b))
        + (x - a) * cut(1 - y - a) / ((s - a - b) * s)
    )


def final_objective(b, d):
    """Level 10 objective as a function of ``b``."""
    return _w7(1 - d, 1 - d, b - b, b, ramped=False)


def eval_objective(pt: ProgramPoint):
    """Objective of the point's level.

    Levels 4 to 8 replace each cancellation by its ramp; levels 9 and 10
    drop the ramps since their arguments are non-negative on the domain.
    """
    require_domain(pt)
    level = pt.level
    if level <= 2:
        return _vector_objective(pt)
    if level == 3:
        return _w3(pt)
    if level == 4:
        return _w4(pt)
    if level == 5:
        return _w5(pt.y, pt.e0, pt.e, pt.f, pt.q0)
    if level == 6:
        return _w5(pt.y, pt.e0, pt.e, pt.f, pt.e + pt.e0 - pt.x)
    if level == 7:
        return _w7(pt.x, pt.y, pt.a, pt.b)
    if level == 8:
        return _w7(pt.x, 1 - pt.d, pt.a, pt.b)
    if level == 9:
        return _w7(1 - pt.d, 1 - pt.d, pt.a, pt.b, ramped=False)
    return final_objective(pt.b, pt.d)


def _index_terms(pt: ProgramPoint, i: int):
    e_i, q0_i = pt.e_vec[i], pt.q0_vec[i]
    outer = _outer_term(e_i, pt.e0, q0_i)
    if pt.level == 1:
        inner = [
            _inner_term(e_i, pt.e0, pt.f_vec[i][j], q0_i, pt.q_vec[i][j], pt.p_vec[i][j])
            for j in range(pt.r_counts[i])
        ]
    else:
        inner = [_inner_term(e_i, pt.e0, pt.f_vec[i], q0_i, pt.q_vec[i], pt.p_vec[i])]
    return outer, inner


def _vector_objective(pt: ProgramPoint):
    n = pt.v_count
    total = pt.e0 - pt.e0
    for i in range(pt.r0_count):
        outer, inner = _index_terms(pt, i)
        if pt.level == 1:
            total += outer + sum(inner, pt.e0 - pt.e0) / n
        else:
            total += outer + pt.r_vec[i] * inner[0]
    return pt.e0 / n * total


def eval_vector_objective(pt: ProgramPoint):
    """Objective of a level 1 or level 2 point.

    ``1/v(G)`` sums over ``j`` become ``r_i`` weights at level 2, matching
    the graph form exactly when every index is realised by a graph.
    """
    if pt.level not in (1, 2):
        msg = f"vector objective needs a level 1 or 2 point, got level {pt.level}"
        raise ValueError(msg)
    require_domain(pt)
    return _vector_objective(pt)


def _first_argmax(values) -> int:
    best = 0
    for index, value in enumerate(values):
        if value > values[best]:
            best = index
    return best


def clamp_step(pt: ProgramPoint) -> ProgramPoint:
    """Apply the substitution that takes a point to the next level.

    Levels 1 and 2 copy the best index to every index. Level 10 sets
    ``b = 0`` and stays at level 10.
    """
    require_domain(pt)
    level, d = pt.level, pt.d
    if level == 1:
        f_vec, q_vec, p_vec, r_vec = [], [], [], []
        for i in range(pt.r0_count):
            _, inner = _index_terms(pt, i)
            r_vec.append(_share(pt.r_counts[i], pt.v_count, pt.e0))
            if not inner:
                f_vec.append(pt.y_vec[i])
                q_vec.append(pt.e0 - pt.e0 + 1)
                p_vec.append(pt.e0 - pt.e0 + 1)
                continue
            j = _first_argmax(inner)
            f_vec.append(pt.f_vec[i][j])
            q_vec.append(pt.q_vec[i][j])
            p_vec.append(pt.p_vec[i][j])
        return pt._replace(
            level=2,
            r_counts=None,
            f_vec=tuple(f_vec),
            q_vec=tuple(q_vec),
            p_vec=tuple(p_vec),
            r_vec=tuple(r_vec),
        )
    if level == 2:
        r0 = _share(pt.r0_count, pt.v_count, pt.e0)
        if pt.r0_count == 0:
            one = pt.e0 - pt.e0 + 1
            return ProgramPoint(
                3, d, x=pt.x, y=one, e0=pt.e0, e=pt.x, f=one, q0=pt.e0, q=one, p=one,
                r0=r0, r=one - one,
            )
        scores = []
        for i in range(pt.r0_count):
            outer, inner = _index_terms(pt, i)
            scores.append(outer + pt.r_vec[i] * inner[0])
        i = _first_argmax(scores)
        return ProgramPoint(
            3, d, x=pt.x, y=pt.y_vec[i], e0=pt.e0, e=pt.e_vec[i], f=pt.f_vec[i],
            q0=pt.q0_vec[i], q=pt.q_vec[i], p=pt.p_vec[i], r0=r0, r=pt.r_vec[i],
        )
    if level == 3:
        return pt._replace(level=4)
    if level == 4:
        return ProgramPoint(5, d, x=pt.x, y=pt.y, e0=pt.e0, e=pt.e, f=pt.f, q0=pt.q0)
    if level == 5:
        return ProgramPoint(6, d, x=pt.x, y=pt.y, e0=pt.e0, e=pt.e, f=pt.f)
    if level == 6:
        return ProgramPoint(7, d, x=pt.x, y=pt.y, a=pt.x - pt.e0, b=pt.y - pt.f)
    if level == 7:
        return ProgramPoint(8, d, x=pt.x, a=pt.a, b=pt.b)
    if level == 8:
        return ProgramPoint(9, d, a=pt.a, b=pt.b)
    if level == 9:
        return ProgramPoint(10, d, b=pt.b)
    return pt._replace(b=pt.b - pt.b)


def expand_point(pt: ProgramPoint) -> ProgramPoint:
    """Write a clamped point back in level 3 variables.

    Useful to see which density vector a reduced point stands for.
    """
    d = pt.d
    if pt.level <= 4:
        return pt
    if pt.level == 5:
        return pt._replace(
            level=3, r0=pt.e0, r=pt.q0, p=pt.q0 + pt.f - pt.y, q=pt.e + pt.f - pt.y
        )
    if pt.level == 6:
        return expand_point(ProgramPoint(5, d, pt.x, pt.y, pt.e0, pt.e, pt.f,
                                         pt.e + pt.e0 - pt.x))
    if pt.level == 7:
        x, y = pt.x, pt.y
        return expand_point(ProgramPoint(6, d, x, y, x - pt.a, x + y - 1, y - pt.b))
    if pt.level == 8:
        return expand_point(ProgramPoint(7, d, x=pt.x, y=1 - d, a=pt.a, b=pt.b))
    if pt.level == 9:
        return expand_point(ProgramPoint(8, d, x=1 - d, a=pt.a, b=pt.b))
    return expand_point(ProgramPoint(9, d, a=pt.b - pt.b, b=pt.b))


def clamp_chain(pt: ProgramPoint) -> list[ProgramPoint]:
    """Every point from ``pt`` down to the fully clamped level 10 point."""
    chain = [pt]
    while True:
        current = chain[-1]
        nxt = clamp_step(current)
        chain.append(nxt)
        if current.level == FINAL_LEVEL:
            return chain


def _quadratic_ratio(d):
    return 26 * d * d - 15 * d + 2


def lemma_fn(name: str, *args, d):
    """Evaluate a helper function of the reduction proofs.

    ``F(b)`` is the defining expression and ``Q(b)`` the exact quotient
    ``F(b) / b``. ``E(b)`` is an older closed form of that quotient whose
    coefficients differ from it, kept for comparison. ``G(b)`` satisfies
    ``W10(b) = (1-d)d/(1-2d)^2 + (1-d)/(1-2d) * G(b)``. ``H(s, t)`` and
    ``H1(s, t)`` bound the ``a = 0`` reduction. ``quadratic`` is
    ``26d^2 - 15d + 2``.
    """
    if name == "E":
        (b,) = args
        return (-1 + 5 * d - 13 * d**2 - 12 * d**3) + b * (-5 * d + 10 * d**2) + b * b * (2 * d)
    if name == "F":
        (b,) = args
        u = 1 - 2 * d
        return u * (2 * d * (1 - d) * u + b * (-1 + d + d * d) + b * b * d) - 2 * d * (
            u - b
        ) ** 2 * (1 - d - b)
    if name == "Q":
        (b,) = args
        return (1 - 2 * d) * (-1 + 7 * d - 7 * d * d) + b * d * (8 * d - 5) + 2 * d * b * b
    if name == "G":
        (b,) = args
        numerator = 2 * d * (1 - d) * (1 - 2 * d) + b * (-1 + d + d * d) + b * b * d
        return numerator / ((1 - 2 * d - b) ** 2 * (1 - d - b))
    if name == "H":
        s, t = args
        return (1 - d - s) ** 2 * (1 - 2 * d - s) / (1 - 2 * d - s - t)
    if name == "H1":
        s, t = args
        return t * (1 - d - s) / ((1 - 2 * d - s) * (1 - 2 * d - s - t))
    if name == "quadratic":
        return _quadratic_ratio(d)
    msg = f"unknown helper function {name!r}"
    raise ValueError(msg)


def describe(pt: ProgramPoint) -> str:
    """One line text form of a scalar point."""
    values = ", ".join(f"{key}={format_scalar(value)}" for key, value in pt.variables().items())
    return f"level {pt.level}: {values}"
