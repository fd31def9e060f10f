"""Test module for objectives, domains and clamping maps of the program chain."""

from fractions import Fraction
import math

import numpy as np
import pytest

from tridecomp.exceptions import DomainError
from tridecomp.program_search import threshold_exact
from tridecomp.programs import (
    ProgramPoint,
    check_domain,
    clamp_chain,
    clamp_step,
    describe,
    eval_objective,
    eval_vector_objective,
    expand_point,
    final_objective,
    lemma_fn,
    ramp,
)

D = 0.17


def level4_point():
    return ProgramPoint(
        4, D, x=0.9, y=0.9, e0=0.8, e=0.85, f=0.8, q0=0.8, q=0.9, p=0.9, r0=0.5, r=0.3
    )


def level2_point(copies: int = 2, v_count: int = 10):
    return ProgramPoint(
        2,
        D,
        x=0.9,
        e0=0.8,
        v_count=v_count,
        r0_count=copies,
        y_vec=(0.9,) * copies,
        e_vec=(0.85,) * copies,
        q0_vec=(0.8,) * copies,
        f_vec=(0.8,) * copies,
        q_vec=(0.9,) * copies,
        p_vec=(0.9,) * copies,
        r_vec=(0.3,) * copies,
    )


def level1_point():
    return ProgramPoint(
        1,
        D,
        x=0.9,
        e0=0.8,
        v_count=10,
        r0_count=2,
        r_counts=(2, 1),
        y_vec=(0.9, 0.85),
        e_vec=(0.85, 0.8),
        q0_vec=(0.8, 0.72),
        f_vec=((0.8, 0.75), (0.8,)),
        q_vec=((0.9, 0.8), (0.9,)),
        p_vec=((0.9, 0.7), (0.8,)),
    )


def test_level9_domain():
    """Test the level 9 box and the name of a violated bound."""
    assert check_domain(ProgramPoint(9, D, a=0.0, b=0.0)).passed
    result = check_domain(ProgramPoint(9, D, a=0.18, b=0.0))
    assert not result.passed
    assert result.detail == "a <= d"
    assert check_domain(ProgramPoint(9, D, a=-0.01, b=0.0)).detail == "a >= 0"


def test_domain_checks_d_and_shape():
    """Test d must lie in (0, 1/4) and every level variable must be present."""
    assert check_domain(ProgramPoint(10, 0.25, b=0.0)).detail == "d < 1/4"
    assert check_domain(ProgramPoint(10, 0.0, b=0.0)).detail == "d > 0"
    assert check_domain(ProgramPoint(9, D, b=0.0)).detail == "a present"
    assert not check_domain(ProgramPoint(11, D)).passed


def test_level3_constraint_names():
    """Test the first violated level 3 constraint is reported."""
    pt = level4_point()._replace(level=3, q0=0.7)
    assert check_domain(pt).detail == "q0 >= e+e0-x"
    assert check_domain(level4_point()._replace(r=0.85)).detail == "r <= q0"


def test_domain_works_on_arrays():
    """Test array-valued points pass only when every row does."""
    pt = ProgramPoint(9, D, a=np.array([0.0, 0.1]), b=np.array([0.0, 0.17]))
    assert check_domain(pt).passed
    assert not check_domain(pt._replace(b=np.array([0.0, 0.2]))).passed


def test_final_objective_values():
    """Test the closed form 3d(1-d)/(1-2d)^2 at b = 0."""
    value = eval_objective(ProgramPoint(10, D, b=0.0))
    assert value == pytest.approx(3 * 0.17 * 0.83 / 0.66**2)
    assert value == pytest.approx(0.9717631, abs=1e-6)
    assert eval_objective(ProgramPoint(9, D, a=0.0, b=0.0)) == pytest.approx(value)
    assert final_objective(0.0, 0.18) == pytest.approx(1.0810547, abs=1e-6)


def test_final_objective_exact_at_threshold():
    """Test the final objective is exactly one at the threshold."""
    assert eval_objective(ProgramPoint(10, threshold_exact(), b=0)) == 1
    value = eval_objective(ProgramPoint(10, float(threshold_exact()), b=0.0))
    assert abs(value - 1) <= 1e-12


def test_exact_rational_evaluation():
    """Test Fraction points evaluate exactly."""
    d = Fraction(1, 6)
    assert eval_objective(ProgramPoint(10, d, b=0)) == 3 * d * (1 - d) / (1 - 2 * d) ** 2


def test_off_domain_evaluation():
    """Test evaluating an off-domain point raises DomainError."""
    with pytest.raises(DomainError) as info:
        eval_objective(ProgramPoint(9, D, a=0.18, b=0.0))
    assert info.value.constraint == "a <= d"


def test_ramp():
    """Test ramp on scalars, fractions and arrays."""
    assert ramp(-0.5) == 0
    assert ramp(0.25) == 0.25
    assert ramp(Fraction(-1, 3)) == 0
    assert list(ramp(np.array([-1.0, 2.0]))) == [0.0, 2.0]


def test_level4_dominates_level3():
    """Test replacing cancellations by ramps never lowers the objective."""
    pt3 = level4_point()._replace(level=3)
    pt4 = clamp_step(pt3)
    assert pt4.level == 4
    assert eval_objective(pt4) >= max(0.0, eval_objective(pt3)) - 1e-12


def test_level4_clamp():
    """Test the level 4 to 5 substitution."""
    pt5 = clamp_step(level4_point())
    assert pt5.level == 5
    assert pt5.r0 is None and pt5.q is None
    expanded = expand_point(pt5)
    assert expanded.r0 == pt5.e0
    assert expanded.r == pt5.q0
    assert expanded.p == pytest.approx(pt5.q0 + pt5.f - pt5.y)
    assert expanded.q == pytest.approx(pt5.e + pt5.f - pt5.y)
    assert eval_objective(pt5) >= eval_objective(level4_point()) - 1e-12


def test_level5_prefers_small_q0():
    """Test the level 5 objective at q0 = e + e0 - x is at least its value at q0 = 0.8."""
    high = ProgramPoint(5, D, x=0.83, y=0.83, e0=0.70, e=0.70, f=0.70, q0=0.80)
    low = high._replace(q0=0.57)
    assert eval_objective(low) >= eval_objective(high)
    assert eval_objective(clamp_step(high)) >= eval_objective(high) - 1e-12


def test_level9_and_level10_clamps():
    """Test a is dropped at level 9 and b zeroed at level 10, then nothing changes."""
    pt10 = clamp_step(ProgramPoint(9, D, a=0.1, b=0.05))
    assert pt10.level == 10
    assert pt10.b == 0.05
    final = clamp_step(pt10)
    assert final.level == 10
    assert final.b == 0
    assert clamp_step(final) == final


def test_chain_reaches_level10():
    """Test the clamp chain from level 4 ends at b = 0 and never decreases."""
    chain = clamp_chain(level4_point())
    assert [pt.level for pt in chain] == [4, 5, 6, 7, 8, 9, 10, 10]
    values = [eval_objective(pt) for pt in chain]
    for before, after in zip(values, values[1:]):
        assert after >= before - 1e-12
    assert values[-1] == pytest.approx(final_objective(0.0, D))


def test_level6_reparameterization():
    """Test the level 6 to 7 step stores a = x - e0 and b = y - f."""
    pt7 = clamp_step(ProgramPoint(6, D, x=0.9, y=0.88, e0=0.8, e=0.85, f=0.75))
    assert pt7.level == 7
    assert pt7.a == pytest.approx(0.1)
    assert pt7.b == pytest.approx(0.13)


def test_symmetric_vector_point_matches_level3():
    """Test identical indices evaluate like the corresponding level 3 point."""
    pt2 = level2_point()
    pt3 = clamp_step(pt2)
    assert pt3.level == 3
    assert pt3.r0 == pytest.approx(0.2)
    assert eval_vector_objective(pt2) == pytest.approx(eval_objective(pt3))


def test_empty_vector_point():
    """Test a level 1 point without indices evaluates to zero."""
    pt = ProgramPoint(
        1, D, x=0.9, e0=0.8, v_count=10, r0_count=0, r_counts=(),
        y_vec=(), e_vec=(), q0_vec=(), f_vec=(), q_vec=(), p_vec=(),
    )
    assert eval_vector_objective(pt) == 0
    assert clamp_step(clamp_step(pt)).level == 3


def test_symmetrization_never_lowers():
    """Test copying the best index does not lower the level 1 and 2 objectives."""
    pt1 = level1_point()
    pt2 = clamp_step(pt1)
    assert pt2.level == 2
    assert pt2.r_vec == pytest.approx((0.2, 0.1))
    assert eval_vector_objective(pt2) >= eval_vector_objective(pt1) - 1e-12
    pt3 = clamp_step(pt2)
    assert eval_objective(pt3) >= eval_vector_objective(pt2) - 1e-12


def test_vector_objective_levels():
    """Test vector evaluation is refused for scalar levels and oversize vectors."""
    with pytest.raises(ValueError):
        eval_vector_objective(level4_point())
    with pytest.raises(DomainError):
        eval_vector_objective(level2_point(copies=17, v_count=40))


def test_helper_e_at_zero():
    """Test the closed-form polynomial E at b = 0, d = 0.17."""
    assert lemma_fn("E", 0.0, d=D) == pytest.approx(-0.584656, abs=1e-6)


def test_helper_f_factors_through_q():
    """Test F(b) = b Q(b) exactly."""
    d = Fraction(17, 100)
    for b in (Fraction(0), Fraction(1, 50), Fraction(1, 10), d):
        assert lemma_fn("F", b, d=d) == b * lemma_fn("Q", b, d=d)


def test_helper_q_sign_follows_threshold():
    """Test Q(0) is non-positive exactly up to the threshold."""
    assert lemma_fn("Q", 0, d=threshold_exact()) == 0
    assert lemma_fn("Q", 0, d=Fraction(17, 100)) < 0
    assert lemma_fn("Q", 0, d=Fraction(18, 100)) > 0


def test_helper_g_at_zero():
    """Test G(0) = 2d / (1 - 2d)."""
    assert lemma_fn("G", 0.0, d=D) == pytest.approx(2 * D / (1 - 2 * D))
    d = Fraction(1, 6)
    assert lemma_fn("G", 0, d=d) == 2 * d / (1 - 2 * d)


def test_helper_bounds_on_dense_grid():
    """Test E(b) <= 0 and H1(s, t) <= 2 on [0, d] for d just below 1/5."""
    d = 0.2 - 1e-9
    grid = np.linspace(0.0, d, 401)
    assert np.all(lemma_fn("E", grid, d=d) <= 0)
    s, t = np.meshgrid(grid, grid, indexing="ij")
    assert np.all(lemma_fn("H1", s, t, d=d) <= 2)
    assert lemma_fn("H1", d, d, d=d) == pytest.approx(1.5, abs=1e-6)


def test_helper_quadratic_roots():
    """Test 26d^2 - 15d + 2 vanishes at (15 -+ sqrt(17)) / 52 and is positive at 1/5."""
    low = (15 - math.sqrt(17)) / 52
    high = (15 + math.sqrt(17)) / 52
    assert low == pytest.approx(0.20917, abs=1e-5)
    assert high == pytest.approx(0.36775, abs=1e-5)
    for root in (low, high):
        assert lemma_fn("quadratic", d=root) == pytest.approx(0.0, abs=1e-12)
    assert lemma_fn("quadratic", d=Fraction(1, 5)) > 0
    with pytest.raises(ValueError):
        lemma_fn("Z", 0.0, d=D)


def test_describe():
    """Test the text form of a point."""
    assert describe(ProgramPoint(10, Fraction(1, 6), b=0)) == "level 10: d=1/6, b=0.0"
