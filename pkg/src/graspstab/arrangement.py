"""Slip-state enumeration via the central plane arrangement in motion space.

Each contact's zero-tangential-motion constraint is a plane through the
origin of object-motion space (x, y, r); zero-preload contacts optionally
contribute a second (separation) plane. The arrangement's cells classify
every rigid motion by the slip behaviour it induces:

  regions (3d)  -> every constraint strictly signed,
  facets  (2d)  -> on exactly one plane,
  lines   (1d)  -> rays of plane-intersection lines,
  origin  (0d)  -> the all-stick rest state.

Regions are enumerated by incremental plane insertion, facets as the
edges of the dual region-adjacency graph (a partial cube), and rays from
the minimum cycle basis of that graph: each face of the dual polyhedron
encircles one ray. The whole state count is quadratic in the number of
contacts.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import lp
from .model import GraspMaps, GraspModel, build_maps
from .params import DEFAULT_TOLS, Tolerances

__all__ = [
    "DETACHED",
    "LABEL_NAMES",
    "OrientedPlane",
    "PlaneArrangement",
    "CellState",
    "DualGraph",
    "SlipState",
    "SlipStateSet",
    "tangent_planes",
    "separation_planes",
    "enumerate_regions",
    "region_feasible",
    "build_dual_graph",
    "minimum_cycle_basis",
    "line_states",
    "enumerate_slip_states",
    "zaslavsky_bound",
]

# per-contact labels: -1 slip-, 0 stick, +1 slip+, 2 detached
DETACHED = 2
LABEL_NAMES = {-1: "slip-", 0: "stick", 1: "slip+", DETACHED: "detached"}

# dimension rank used for canonical ordering (origin first)
_DIM_RANK = {"origin": 0, "line": 1, "facet": 2, "region": 3}


class ArrangementError(RuntimeError):
    """Internal invariant of the enumeration violated."""


@dataclass(eq=False)
class OrientedPlane:
    """A distinct plane through the origin with its contact memberships.

    members: (contact index, role, orientation); orientation is +1 when
    the contact's raw constraint normal equals the stored normal, -1 when
    it is the negation.
    """

    normal: np.ndarray
    members: list[tuple[int, str, int]] = field(default_factory=list)


@dataclass(eq=False)
class PlaneArrangement:
    planes: list[OrientedPlane] = field(default_factory=list)
    # per contact: (plane index, orientation)
    tangent_ref: dict[int, tuple[int, int]] = field(default_factory=dict)
    separation_ref: dict[int, tuple[int, int]] = field(default_factory=dict)

    @property
    def n_planes(self) -> int:
        return len(self.planes)

    def normals(self) -> np.ndarray:
        return np.array([p.normal for p in self.planes]).reshape(-1, 3)

    def _add(self, raw: np.ndarray, contact: int, role: str,
             coincident: float) -> None:
        p = raw / np.linalg.norm(raw)
        for idx, plane in enumerate(self.planes):
            dot = float(plane.normal @ p)
            if abs(dot) > coincident:
                orient = 1 if dot > 0 else -1
                plane.members.append((contact, role, orient))
                self._ref(role)[contact] = (idx, orient)
                return
        self.planes.append(OrientedPlane(normal=p, members=[(contact, role, 1)]))
        self._ref(role)[contact] = (len(self.planes) - 1, 1)

    def _ref(self, role):
        return self.tangent_ref if role == "tangent" else self.separation_ref


def tangent_planes(maps: GraspMaps, tols: Tolerances = DEFAULT_TOLS) -> PlaneArrangement:
    """One oriented plane per distinct zero-tangential-motion constraint."""
    arr = PlaneArrangement()
    m = maps.motion.shape[1] // 2
    for i in range(m):
        arr._add(maps.motion[:, 2 * i + 1].copy(), i, "tangent", tols.plane_coincident)
    return arr


def separation_planes(model: GraspModel, maps: GraspMaps, arr: PlaneArrangement,
                      tols: Tolerances = DEFAULT_TOLS) -> PlaneArrangement:
    """Extend the arrangement with separation planes of zero-preload contacts."""
    for i in range(model.m):
        if model.preload[i, 0] <= 1e-12:
            arr._add(maps.motion[:, 2 * i].copy(), i, "separation",
                     tols.plane_coincident)
    return arr


def region_feasible(signs, arr: PlaneArrangement, *, tols: Tolerances = DEFAULT_TOLS,
                    return_witness: bool = False):
    """Is the sign vector realizable by some motion in the unit box?

    Nonzero entries demand a strict margin on their side of the plane,
    zeros pin the motion onto the plane. Solved as a max-margin program.
    """
    normals = arr.normals()
    signs = np.asarray(signs)
    strict = [s * normals[j] for j, s in enumerate(signs) if s != 0]
    pinned = [normals[j] for j, s in enumerate(signs) if s == 0]
    d, margin = lp.max_min_slack(
        pinned or None, None, strict or None, np.zeros(len(strict)),
        -1.0, 1.0, n=3, s_cap=1.0)
    ok = d is not None and margin > tols.geom_margin
    if return_witness:
        return (ok, d if ok else None)
    return ok


def enumerate_regions(arr: PlaneArrangement, tols: Tolerances = DEFAULT_TOLS
                      ) -> list["CellState"]:
    """All full-dimensional sign vectors, by incremental plane insertion.

    Each kept region carries an interior witness motion; the witness
    answers one side of the next split for free, the other side costs a
    feasibility program.
    """
    normals = arr.normals()
    wit_margin = 100 * tols.geom_margin
    regions: list[tuple[tuple[int, ...], np.ndarray]] = [((), None)]
    for i in range(arr.n_planes):
        p = normals[i]
        nxt = []
        for signs, w in regions:
            side = 0.0 if w is None else float(p @ w)
            for sign in (1, -1):
                if w is not None and sign * side > wit_margin:
                    nxt.append((signs + (sign,), w))
                    continue
                ok, w2 = _margin_lp(signs + (sign,), normals[:i + 1], tols)
                if ok:
                    nxt.append((signs + (sign,), w2))
        regions = nxt
    return [CellState(signs=s, dim="region", witness=w) for s, w in regions]


def _margin_lp(signs, normals, tols):
    strict = [s * normals[j] for j, s in enumerate(signs) if s != 0]
    pinned = [normals[j] for j, s in enumerate(signs) if s == 0]
    d, margin = lp.max_min_slack(
        pinned or None, None, strict or None, np.zeros(len(strict)),
        -1.0, 1.0, n=3, s_cap=1.0)
    return (d is not None and margin > tols.geom_margin), d


@dataclass(eq=False)
class CellState:
    """A cell of the arrangement: sign per distinct plane plus a witness."""

    signs: tuple[int, ...]
    dim: str  # region | facet | line | origin
    witness: np.ndarray


@dataclass(eq=False)
class DualGraph:
    """Region-adjacency graph: vertices are regions, edges cross one plane."""

    n_vertices: int
    edges: list[tuple[int, int, int]]  # (region a, region b, plane crossed)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        # Euler-Poincare on the spherical embedding
        return self.n_edges - self.n_vertices + 2

    def adjacency(self) -> list[list[tuple[int, int]]]:
        adj = [[] for _ in range(self.n_vertices)]
        for eidx, (a, b, _plane) in enumerate(self.edges):
            adj[a].append((b, eidx))
            adj[b].append((a, eidx))
        return adj


def build_dual_graph(regions: list[CellState], arr: PlaneArrangement,
                     tols: Tolerances = DEFAULT_TOLS
                     ) -> tuple[DualGraph, list[CellState]]:
    """Edges between regions at Hamming distance one, plus facet cells.

    The candidate facet is validated (and given a witness) either by the
    sign-crossing point of the two region witnesses or by a feasibility
    program.
    """
    normals = arr.normals()
    n = arr.n_planes
    S = np.array([r.signs for r in regions], dtype=float)
    gram = S @ S.T
    pairs = np.argwhere(np.triu(gram == n - 2, k=1))

    wit_margin = 100 * tols.geom_margin
    edges: list[tuple[int, int, int]] = []
    facets: list[CellState] = []
    for a, b in pairs:
        a, b = int(a), int(b)
        diff = np.nonzero(np.array(regions[a].signs) != np.array(regions[b].signs))[0]
        plane = int(diff[0])
        signs = list(regions[a].signs)
        signs[plane] = 0
        signs = tuple(signs)
        witness = _crossing_witness(regions[a].witness, regions[b].witness,
                                    signs, normals, plane, wit_margin)
        if witness is None:
            ok, witness = _margin_lp(signs, normals, tols)
            if not ok:
                continue
        edges.append((a, b, plane))
        facets.append(CellState(signs=signs, dim="facet", witness=witness))
    return DualGraph(n_vertices=len(regions), edges=edges), facets


def _crossing_witness(wa, wb, signs, normals, plane, margin):
    pa, pb = float(normals[plane] @ wa), float(normals[plane] @ wb)
    if pa * pb >= 0:
        return None
    z = wa + (pa / (pa - pb)) * (wb - wa)
    vals = normals @ z
    for j, s in enumerate(signs):
        if s == 0:
            if abs(vals[j]) > 1e-12 and j != plane:
                return None
        elif s * vals[j] < margin:
            return None
    return z


def minimum_cycle_basis(graph: DualGraph) -> list[frozenset[int]]:
    """Minimum cycle basis by Horton's candidate set + greedy GF(2) pick.

    Cycles are edge-index sets. Deterministic: BFS trees use ascending
    neighbour order and candidates are ranked by (length, edge indices).
    """
    V, E = graph.n_vertices, graph.n_edges
    if E == 0:
        return []
    adj = graph.adjacency()
    for lst in adj:
        lst.sort()
    target = E - V + 1
    if target <= 0:
        return []

    # BFS trees from every vertex; per-vertex path edge/vertex bitmasks
    candidates = {}
    for root in range(V):
        edge_mask = [0] * V
        node_mask = [0] * V
        node_mask[root] = 1 << root
        seen = [False] * V
        seen[root] = True
        q = deque([root])
        order = 1
        while q:
            u = q.popleft()
            for v, eidx in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    order += 1
                    edge_mask[v] = edge_mask[u] | (1 << eidx)
                    node_mask[v] = node_mask[u] | (1 << v)
                    q.append(v)
        if order != V:
            raise ArrangementError("dual graph is disconnected")
        root_bit = 1 << root
        for eidx, (x, y, _plane) in enumerate(graph.edges):
            # Horton validity: the two tree paths meet only at the root
            if node_mask[x] & node_mask[y] != root_bit:
                continue
            mask = edge_mask[x] ^ edge_mask[y] ^ (1 << eidx)
            if mask and mask not in candidates:
                candidates[mask] = bin(mask).count("1")

    ranked = sorted(candidates, key=lambda m: (candidates[m], m))
    basis: list[int] = []
    echelon: list[int] = []  # reduced masks, each with a unique pivot bit
    for mask in ranked:
        red = mask
        for b in echelon:
            if red & b & -b:
                red ^= b
        if red:
            echelon.append(red)
            echelon.sort(key=lambda x: x & -x)
            basis.append(mask)
            if len(basis) == target:
                break
    if len(basis) != target:
        raise ArrangementError(
            f"cycle basis incomplete: found {len(basis)} of {target}")
    return [_mask_to_edges(m) for m in basis]


def _mask_to_edges(mask: int) -> frozenset[int]:
    out = set()
    i = 0
    while mask:
        if mask & 1:
            out.add(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def line_states(graph: DualGraph, mcb: list[frozenset[int]],
                regions: list[CellState], arr: PlaneArrangement,
                tols: Tolerances = DEFAULT_TOLS) -> list[CellState]:
    """Ray cells from the dual faces: the MCB cycles plus their symmetric sum.

    A face's cycle crosses exactly the planes containing the ray; zeroing
    them and keeping the shared remaining signs identifies the ray. When
    every plane is crossed the two opposite rays share the all-zero sign
    vector and are kept apart by their witness directions.
    """
    cycles = list(mcb)
    if mcb:
        acc = 0
        for cyc in mcb:
            acc ^= sum(1 << e for e in cyc)
        extra = _mask_to_edges(acc)
        if extra:
            cycles.extend(_split_cycles(extra, graph))

    normals = arr.normals()
    out: list[CellState] = []
    seen: set[tuple] = set()
    for cyc in cycles:
        planes_crossed = {graph.edges[e][2] for e in cyc}
        verts = set()
        for e in cyc:
            a, b, _ = graph.edges[e]
            verts.update((a, b))
        base = None
        for v in sorted(verts):
            signs = list(regions[v].signs)
            for j in planes_crossed:
                signs[j] = 0
            signs = tuple(signs)
            if base is None:
                base = signs
            elif signs != base:
                raise ArrangementError(
                    "cycle vertices disagree off the crossed planes")
        for witness in _ray_witnesses(base, planes_crossed, normals, tols):
            key = (base, tuple(np.round(witness, 9)))
            if key not in seen:
                seen.add(key)
                out.append(CellState(signs=base, dim="line", witness=witness))
    return out


def _split_cycles(edge_set: frozenset[int], graph: DualGraph):
    """Decompose an even-degree edge set into edge-disjoint cycles."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in edge_set:
        a, b, _ = graph.edges[e]
        adj.setdefault(a, []).append((b, e))
        adj.setdefault(b, []).append((a, e))
    unused = set(edge_set)
    cycles = []
    while unused:
        e0 = min(unused)
        a0, b0, _ = graph.edges[e0]
        cyc = {e0}
        unused.discard(e0)
        cur, start = b0, a0
        while cur != start:
            nxt = next((v, e) for v, e in sorted(adj[cur]) if e in unused)
            cyc.add(nxt[1])
            unused.discard(nxt[1])
            cur = nxt[0]
        cycles.append(frozenset(cyc))
    return cycles


def _ray_witnesses(signs, planes_crossed, normals, tols):
    """Direction(s) of the ray with the given zero set and signs."""
    zero_rows = normals[sorted(planes_crossed)]
    _u, s, vt = np.linalg.svd(zero_rows)
    if zero_rows.shape[0] >= 3 and s[2] > 1e-7 * s[0]:
        raise ArrangementError("crossed planes do not share a line")
    u = vt[-1]
    vals = normals @ u
    nonzero = [j for j, sg in enumerate(signs) if sg != 0]
    if not nonzero:
        return [u, -u]  # antipodal rays, identical (all-zero) sign vector
    agree_pos = all(signs[j] * vals[j] > 0 for j in nonzero)
    agree_neg = all(signs[j] * -vals[j] > 0 for j in nonzero)
    if agree_pos:
        return [u]
    if agree_neg:
        return [-u]
    # numerically marginal: fall back to the feasibility program
    ok, w = _margin_lp(signs, normals, tols)
    if not ok:
        raise ArrangementError("face cycle produced an unrealizable ray")
    return [w]


@dataclass(eq=False)
class SlipState:
    """Per-contact slip labels together with the cell that produced them."""

    labels: tuple[int, ...]
    dim: str
    signs: tuple[int, ...] | None
    witness: np.ndarray | None
    index: int = -1

    @property
    def label_names(self) -> tuple[str, ...]:
        return tuple(LABEL_NAMES[l] for l in self.labels)

    def sort_key(self):
        w = tuple(np.round(self.witness, 9)) if self.witness is not None else ()
        return (_DIM_RANK[self.dim], self.labels, self.signs or (), w)


@dataclass(eq=False)
class SlipStateSet:
    """Canonically ordered slip states of a grasp (origin state first)."""

    states: list[SlipState]
    arrangement: PlaneArrangement
    graph: DualGraph
    cell_counts: dict[str, int]
    detachment: bool
    cells: dict[str, list[CellState]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    @property
    def count_excluding_origin(self) -> int:
        return self.cell_counts["regions"] + self.cell_counts["facets"] \
            + self.cell_counts["lines"]


def cell_labels(cell: CellState, arr: PlaneArrangement, m: int,
                detachment: bool) -> tuple[int, ...]:
    """Map a cell's plane signs to per-contact slip labels."""
    labels = []
    for i in range(m):
        if detachment and i in arr.separation_ref:
            jidx, orient = arr.separation_ref[i]
            if orient * cell.signs[jidx] < 0:
                labels.append(DETACHED)
                continue
        jidx, orient = arr.tangent_ref[i]
        labels.append(orient * cell.signs[jidx])
    return tuple(labels)


def enumerate_slip_states(model: GraspModel, *, detachment: bool | None = None,
                          maps: GraspMaps | None = None,
                          tols: Tolerances = DEFAULT_TOLS) -> SlipStateSet:
    """Every slip state consistent with some rigid object motion.

    With detachment enabled, cells on the separating side of a
    zero-preload contact's plane are relabelled 'detached' (tangent sign
    erased) and duplicate label vectors collapse; without it the states
    are exactly the arrangement's cells. The all-stick origin state is
    always present and always first.
    """
    if maps is None:
        maps = build_maps(model)
    if detachment is None:
        detachment = model.options.detachment
    arr = tangent_planes(maps, tols)
    if detachment:
        separation_planes(model, maps, arr, tols)

    regions = enumerate_regions(arr, tols)
    graph, facets = build_dual_graph(regions, arr, tols)
    mcb = minimum_cycle_basis(graph) if graph.n_edges else []
    lines = line_states(graph, mcb, regions, arr, tols)

    m = model.m
    states = [SlipState(labels=(0,) * m, dim="origin", signs=None,
                        witness=np.zeros(3))]
    seen_labels = {states[0].labels} if detachment else set()
    for cell in itertools.chain(lines, facets, regions):
        labels = cell_labels(cell, arr, m, detachment)
        if detachment:
            if labels in seen_labels:
                continue
            seen_labels.add(labels)
        states.append(SlipState(labels=labels, dim=cell.dim, signs=cell.signs,
                                witness=cell.witness))
    states[1:] = sorted(states[1:], key=SlipState.sort_key)
    for i, st in enumerate(states):
        st.index = i

    return SlipStateSet(
        states=states,
        arrangement=arr,
        graph=graph,
        cell_counts={"regions": len(regions), "facets": len(facets),
                     "lines": len(lines)},
        detachment=detachment,
        cells={"regions": regions, "facets": facets, "lines": lines},
    )


def zaslavsky_bound(n: int, d: int, k: int) -> int:
    """Upper bound on the number of k-faces of n hyperplanes in d-space."""
    import math

    if n < 0 or d < 0 or not 0 <= k <= d:
        raise ValueError(f"require n, d >= 0 and 0 <= k <= d, got n={n}, d={d}, k={k}")
    return math.comb(n, d - k) * sum(math.comb(max(n - d + k, 0), i) for i in range(k + 1))
