from __future__ import annotations

import numpy as np
import pytest

from graspstab import Contact, GraspModel, build_maps, contact_motion, validate_model, world_force

from conftest import THREE_PRELOAD, three_contact, four_contact


def test_single_contact_columns():
    model = GraspModel([Contact([0, 0], [0, -1], 0.5)])
    maps = build_maps(model)
    assert np.allclose(maps.motion[:, 0], [0, -1, 0])
    assert np.allclose(maps.motion[:, 1], [-1, 0, 0])


def test_three_contact_columns():
    maps = build_maps(three_contact())
    assert np.allclose(maps.motion[:, 0], [-1, 0, 0])
    assert np.allclose(maps.motion[:, 1], [0, 1, -1])


def test_four_contact_columns():
    maps = build_maps(four_contact())
    assert np.allclose(maps.motion[:, 0], [-1, 0, 1])
    assert np.allclose(maps.motion[:, 1], [0, 1, -1])


def test_validate_ok_zero_preload(m3):
    assert validate_model(m3) == []


def test_validate_preload_on_cone_edges():
    assert validate_model(three_contact(True)) == []


def test_validate_cone_violation():
    model = three_contact()
    model.preload = np.array([[1, -0.6], [1, 0.1], [1, 0.5]])
    errors = validate_model(model)
    assert any("contact 0" in e and "cone" in e for e in errors)


def test_validate_unbalanced_preload():
    model = three_contact()
    model.preload = np.array([[1, 0], [0, 0], [0, 0]])
    assert any("self-balancing" in e for e in validate_model(model))


def test_validate_bad_normal_and_mu():
    model = GraspModel([Contact([0, 0], [0, -0.9], 0.5),
                        Contact([1, 0], [1, 0], -0.1)])
    errors = validate_model(model)
    assert any("contact 0" in e and "unit" in e for e in errors)
    assert any("contact 1" in e and "friction" in e for e in errors)


def test_contact_motion_zero(m3):
    maps = build_maps(m3)
    assert np.allclose(contact_motion(maps, [0, 0, 0]), 0.0)


def test_contact_motion_downward(m3):
    deltas = contact_motion(build_maps(m3), [0, -1, 0])
    assert deltas[1, 0] == pytest.approx(1.0)
    assert deltas[0, 0] == pytest.approx(0.0)
    assert deltas[2, 0] == pytest.approx(0.0)


def test_contact_motion_four_contact_twist():
    deltas = contact_motion(build_maps(four_contact()), [0, -1, 1])
    assert np.allclose(deltas[0], [1, -2])  # top-left
    assert np.allclose(deltas[2], [1, 0])   # bottom-right


def test_world_force_bottom_contact():
    force, torque = world_force(Contact([0, -1], [0, -1], 0.5), (1, 0))
    assert np.allclose(force, [0, 1]) and torque == pytest.approx(0.0)


def test_world_force_left_contact_with_friction():
    force, torque = world_force(Contact([-1, 0], [-1, 0], 0.5), (1, -0.5))
    assert np.allclose(force, [1, -0.5]) and torque == pytest.approx(0.5)


def test_world_force_zero():
    force, torque = world_force(Contact([3, 2], [0, -1], 0.5), (0, 0))
    assert np.allclose(force, 0) and torque == 0


def test_kinematic_consistency_random(rng):
    # projection through the motion map equals the direct surface velocity
    for _ in range(1000):
        p = rng.normal(size=2) * 2
        n = rng.normal(size=2)
        n /= np.linalg.norm(n)
        contact = Contact(p, n, 0.5)
        maps = build_maps(GraspModel([contact]))
        d = rng.normal(size=3)
        v = d[:2] + d[2] * np.array([-p[1], p[0]])
        expect = [v @ contact.normal, v @ contact.tangent]
        assert np.allclose(contact_motion(maps, d)[0], expect, atol=1e-12)


def test_preload_self_balance_sums_to_zero():
    model = three_contact(True)
    total = np.zeros(3)
    for contact, f in zip(model.contacts, model.preload):
        force, torque = world_force(contact, f)
        total += [force[0], force[1], torque]
    assert np.max(np.abs(total)) < 1e-9


def test_preload_values_match_fixture():
    assert np.allclose(three_contact(True).preload, THREE_PRELOAD)
