"""Random grasp instances for benchmarks and property tests.

Contacts sit on a star-shaped boundary around the origin with radial
outward normals; angles are resampled until the tangent constraint
planes are in general position (pairwise distinct, no three through a
common line), which the quadratic state-count law assumes.
"""

from __future__ import annotations

import numpy as np

from . import lp
from .model import Contact, GraspModel, Options, build_maps, cross2

__all__ = ["random_grasp", "balanced_preload"]


def random_grasp(m: int, rng=None, *, mu: float = 0.5, preload: str = "none",
                 detachment: bool = False, max_tries: int = 200) -> GraspModel:
    """Random m-contact grasp with general-position tangent planes.

    preload: "none" or "auto" (a self-balancing, cone-interior preload
    computed by the feasibility program; falls back to none when the
    geometry admits no strictly positive preload, e.g. m = 2).
    """
    if m < 1:
        raise ValueError("need at least one contact")
    rng = np.random.default_rng(rng)
    for _ in range(max_tries):
        theta = np.sort(rng.uniform(0.0, 2.0 * np.pi, m))
        rho = rng.uniform(0.6, 1.6, m)
        normals = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        contacts = [Contact(rho[i] * normals[i], normals[i], mu)
                    for i in range(m)]
        planes = np.stack([
            np.concatenate([c.tangent, [cross2(c.position, c.tangent)]])
            for c in contacts
        ])
        planes /= np.linalg.norm(planes, axis=1, keepdims=True)
        if _general_position(planes):
            model = GraspModel(contacts, options=Options(detachment=detachment))
            if preload == "auto":
                model.preload = balanced_preload(model)
            elif preload != "none":
                raise ValueError(f"unknown preload mode {preload!r}")
            return model
    raise RuntimeError("failed to sample a general-position grasp")


def _general_position(planes: np.ndarray) -> bool:
    n = len(planes)
    for i in range(n):
        for j in range(i + 1, n):
            if abs(planes[i] @ planes[j]) > 1.0 - 1e-6:
                return False
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if abs(np.linalg.det(planes[[i, j, k]])) < 1e-4:
                    return False
    return True


def balanced_preload(model: GraspModel, total_normal: float | None = None
                     ) -> np.ndarray:
    """Self-balancing, cone-interior preload maximizing the cone margin.

    Normal components sum to total_normal (default: one per contact).
    Returns zeros when no strictly positive balanced preload exists.
    """
    m = model.m
    target = float(total_normal) if total_normal is not None else float(m)
    maps = build_maps(model)
    n = 2 * m
    a_eq = np.vstack([maps.wrench, np.zeros((1, n))])
    a_eq[3, 0::2] = 1.0
    b_eq = np.array([0.0, 0.0, 0.0, target])
    rows, rhs = [], []
    for i in range(m):
        mu = model.contacts[i].mu
        row = np.zeros(n)
        row[2 * i] = 1.0
        rows.append(row)
        rhs.append(0.0)
        for sgn in (1.0, -1.0):
            row = np.zeros(n)
            row[2 * i] = mu
            row[2 * i + 1] = -sgn
            rows.append(row)
            rhs.append(0.0)
    x, s = lp.max_min_slack(a_eq, b_eq, rows, rhs, -10.0 * target,
                            10.0 * target, s_cap=target)
    if x is None or s <= 1e-9:
        return np.zeros((m, 2))
    residual = a_eq @ x - b_eq
    corr, *_ = np.linalg.lstsq(a_eq, residual, rcond=None)
    return (x - corr).reshape(m, 2)
