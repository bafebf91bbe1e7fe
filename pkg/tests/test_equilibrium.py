from __future__ import annotations

import numpy as np
import pytest

from graspstab import (Contact, GraspModel, assemble_state_system, build_maps,
                       check_solution, linear_feasibility, solve_state,
                       world_force)
from graspstab.arrangement import DETACHED
from graspstab.equilibrium import EquilibriumSolution, StateSystem

from conftest import four_contact, three_contact


# ---------------------------------------------------------------------------
# system assembly
# ---------------------------------------------------------------------------

def test_all_slip_system_is_square(m3):
    sys = assemble_state_system(m3, (0, 0, 0), (-1, 1, -1))
    assert sys.a_eq.shape == (9, 9)


def test_detached_state_row_count(m4):
    sys = assemble_state_system(m4, (0, 0, 0), (-1, DETACHED, 0, DETACHED))
    # 3 equilibrium + 2 constitutive + 1 slip + 1 stick + 4 detached
    assert sys.a_eq.shape == (11, 11)


def test_origin_state_rows(m3):
    sys = assemble_state_system(m3, (0, 0, 0), (0, 0, 0))
    assert sys.a_eq.shape == (9, 9)
    assert sys.slip_count == 0


def test_square_system_any_labels(m4, rng):
    # with detachment off the equality block is always 3 + 2m square
    for _ in range(30):
        labels = tuple(rng.choice([-1, 0, 1]) for _ in range(4))
        sys = assemble_state_system(m4, (1, 2, 3), labels)
        assert sys.a_eq.shape == (11, 11)


# ---------------------------------------------------------------------------
# solve_state on the worked rows
# ---------------------------------------------------------------------------

def test_downward_force_zero_preload(m3):
    sol = solve_state(m3, (0, -1, 0), (-1, 0, 1))
    assert sol is not None
    assert np.allclose(sol.d, [0, -1, 0], atol=1e-9)
    assert np.allclose(sol.forces, [[0, 0], [1, 0], [0, 0]], atol=1e-9)


def test_upward_force_with_preload(m3p):
    sol = solve_state(m3p, (0, 1, 0), (1, 0, -1))
    assert np.allclose(sol.d, [0, 1, 0], atol=1e-9)
    assert np.allclose(sol.forces, [[1, -0.5], [0, 0], [1, 0.5]], atol=1e-9)


def test_preloaded_twist(m4p):
    sol = solve_state(m4p, (0, 0, 3), (-1, -1, 0, 0))
    assert np.allclose(sol.d, [0, -0.25, 0.25], atol=1e-9)
    assert np.allclose(sol.forces,
                       [[1.25, 0.625], [0.75, 0.375], [1.25, 0.625], [0.75, 0.375]],
                       atol=1e-9)


def test_infeasible_state_returns_none(m3p):
    assert solve_state(m3p, (0, 1.1, 0), (1, 0, -1)) is None


# ---------------------------------------------------------------------------
# linear feasibility
# ---------------------------------------------------------------------------

def _toy_system(a_in, b_in, n=1):
    return StateSystem(labels=(), a_eq=np.zeros((0, n)), b_eq=np.zeros(0),
                       a_in=np.array(a_in, float), b_in=np.array(b_in, float),
                       ineq_kind=["?"] * len(b_in), m=0)


def test_feasibility_trivial():
    x = linear_feasibility(_toy_system([[1.0], [-1.0]], [1.0, -3.0]))
    assert x is not None and 1.0 - 1e-8 <= x[0] <= 3.0 + 1e-8


def test_feasibility_infeasible():
    assert linear_feasibility(_toy_system([[1.0], [-1.0]], [1.0, 0.0])) is None


def test_feasibility_all_stick_underdetermined(m4p):
    # all-stick at a horizontal pull: equalities are rank-deficient but a
    # cone-feasible force family exists
    sys = assemble_state_system(m4p, (0, 2, 0), (0, 0, 0, 0))
    x = linear_feasibility(sys)
    assert x is not None
    sol = EquilibriumSolution(d=x[:3], forces=x[3:].reshape(-1, 2),
                              labels=(0, 0, 0, 0), state_index=-1,
                              max_eq_residual=0, min_ineq_slack=0)
    report = check_solution(m4p, (0, 2, 0), sol)
    assert report["max_violation"] < 1e-9


# ---------------------------------------------------------------------------
# verifier
# ---------------------------------------------------------------------------

def test_verifier_accepts_solver_output(m3):
    sol = solve_state(m3, (0, -2, 0), (-1, 0, 1))
    assert check_solution(m3, (0, -2, 0), sol)["max_violation"] < 1e-9


def test_verifier_accepts_hand_built_row(m3p):
    sol = EquilibriumSolution(
        d=np.array([0.0, 1.0, 0.0]),
        forces=np.array([[1, -0.5], [0, 0], [1, 0.5]]),
        labels=(1, 0, -1), state_index=-1,
        max_eq_residual=0.0, min_ineq_slack=0.0)
    assert check_solution(m3p, (0, 1, 0), sol)["max_violation"] < 1e-12


def test_verifier_flags_corruption(m3p):
    sol = solve_state(m3p, (0, 1, 0), (1, 0, -1))
    sol.forces[0, 1] *= -1  # flip one friction sign
    report = check_solution(m3p, (0, 1, 0), sol)
    assert report["max_violation"] > 0.1
    assert report["slip_edge"] > 0.1


def test_verifier_independent_of_assembly(m4):
    # detached bookkeeping recomputed from geometry alone
    sol = solve_state(m4, (0, 0, 3), (-1, DETACHED, 0, DETACHED))
    report = check_solution(m4, (0, 0, 3), sol)
    assert report["max_violation"] < 1e-9
    assert report["detached"] < 1e-12


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------

def test_scaling_homogeneity(m3p):
    lam = 3.7
    scaled = three_contact(True)
    scaled.preload = scaled.preload * lam
    base = solve_state(m3p, (0, 1, 0), (1, 0, -1))
    big = solve_state(scaled, (0, lam, 0), (1, 0, -1))
    assert np.allclose(big.d, lam * base.d, atol=1e-8)
    assert np.allclose(big.forces, lam * base.forces, atol=1e-8)


def test_frame_independence_under_mirroring():
    # mirror the grasp about the y-axis: world forces must mirror with it
    w = np.array([0.3, -1.0, 0.4])
    model = three_contact()
    mirrored = GraspModel(
        [Contact([-c.position[0], c.position[1]],
                 [-c.normal[0], c.normal[1]], c.mu) for c in model.contacts])
    from graspstab import check_stability

    v1 = check_stability(model, w)
    v2 = check_stability(mirrored, [-w[0], w[1], -w[2]])
    assert v1.stable == v2.stable
    f1 = [world_force(c, f) for c, f in zip(model.contacts, v1.witness.forces)]
    f2 = [world_force(c, f) for c, f in zip(mirrored.contacts, v2.witness.forces)]
    total1 = sorted(tuple(np.round([f[0], f[1], t], 8)) for (f, t) in f1)
    total2 = sorted(tuple(np.round([-f[0], f[1], -t], 8)) for (f, t) in f2)
    assert total1 == total2
