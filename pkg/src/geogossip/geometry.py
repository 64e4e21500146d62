"""Random geometric graphs on the unit square with exact Voronoi cell areas."""

import json
import math
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

Seed = Union[int, np.random.SeedSequence]

UNIT_SQUARE = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))


class Point(NamedTuple):
    x: float
    y: float


@dataclass
class Network:
    """A fixed deployment: node positions, radius-r adjacency and Voronoi areas.

    Immutable after construction (by convention); safe to share across threads
    and trials.  ``areas`` may be empty when construction skipped the Voronoi
    computation.
    """

    n: int
    radius: float
    positions: np.ndarray          # shape (n, 2)
    adjacency: list                # per-node sorted int arrays
    areas: np.ndarray              # shape (n,), fractions of the unit square

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "radius": self.radius,
            "positions": [[float(x), float(y)] for x, y in self.positions],
            "adjacency": [[int(j) for j in nbrs] for nbrs in self.adjacency],
            "areas": [float(a) for a in self.areas],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def network_from_json(text: str) -> Network:
    doc = json.loads(text)
    positions = np.asarray(doc["positions"], dtype=float)
    adjacency = [np.asarray(nbrs, dtype=np.int64) for nbrs in doc["adjacency"]]
    return Network(
        n=int(doc["n"]),
        radius=float(doc["radius"]),
        positions=positions,
        adjacency=adjacency,
        areas=np.asarray(doc["areas"], dtype=float),
    )


def transmission_radius(n: int) -> float:
    """Connectivity radius sqrt(10 * ln(n) / n) for an n-node deployment."""
    if n < 2:
        raise ValueError(f"need at least 2 nodes, got {n}")
    return math.sqrt(10.0 * math.log(n) / n)


def occupancy_cell_side(n: int) -> float:
    """Side length sqrt(2 * ln(n) / n) of the occupancy partition."""
    if n < 2:
        raise ValueError(f"need at least 2 nodes, got {n}")
    return math.sqrt(2.0 * math.log(n) / n)


def _clip_halfplane(poly, a, b, c):
    """Clip a convex polygon to the half-plane a*x + b*y <= c."""
    out = []
    m = len(poly)
    for k in range(m):
        px, py = poly[k]
        qx, qy = poly[(k + 1) % m]
        pin = a * px + b * py <= c
        qin = a * qx + b * qy <= c
        if pin:
            out.append((px, py))
        if pin != qin:
            gp = a * px + b * py - c
            gq = a * qx + b * qy - c
            t = gp / (gp - gq)
            out.append((px + t * (qx - px), py + t * (qy - py)))
    return out


def _polygon_area(poly) -> float:
    s = 0.0
    m = len(poly)
    for k in range(m):
        x0, y0 = poly[k]
        x1, y1 = poly[(k + 1) % m]
        s += x0 * y1 - x1 * y0
    return abs(s) * 0.5


def voronoi_areas(positions) -> np.ndarray:
    """Exact Voronoi cell areas of sites in the unit square.

    Each cell is cut from the unit square by the perpendicular-bisector
    half-planes against the other sites, nearest sites first; a site farther
    than twice the current cell's covering radius cannot cut the cell, which
    keeps the clipping loop short.
    """
    pos = np.asarray(positions, dtype=float)
    if pos.ndim != 2 or pos.shape[1] != 2 or len(pos) == 0:
        raise ValueError("positions must be a non-empty (n, 2) array")
    if np.any(pos < 0.0) or np.any(pos > 1.0):
        raise ValueError("positions must lie inside the unit square")
    n = len(pos)
    if len(np.unique(pos, axis=0)) != n:
        raise ValueError("duplicate points are not allowed")
    if n == 1:
        return np.ones(1)

    areas = np.empty(n)
    for i in range(n):
        sx, sy = pos[i]
        dx = pos[:, 0] - sx
        dy = pos[:, 1] - sy
        d2 = dx * dx + dy * dy
        d2[i] = np.inf
        order = np.argsort(d2)

        poly = list(UNIT_SQUARE)
        r2max = max((x - sx) ** 2 + (y - sy) ** 2 for x, y in poly)
        for j in order:
            if d2[j] >= 4.0 * r2max:
                break
            ox, oy = pos[j]
            # keep the side of site i: (p - mid) . (other - site) <= 0
            a = ox - sx
            b = oy - sy
            c = a * (sx + ox) * 0.5 + b * (sy + oy) * 0.5
            poly = _clip_halfplane(poly, a, b, c)
            r2max = max((x - sx) ** 2 + (y - sy) ** 2 for x, y in poly)
        areas[i] = _polygon_area(poly)
    return areas


def _build_adjacency(pos: np.ndarray, radius: float) -> list:
    n = len(pos)
    d2 = (
        (pos[:, 0, None] - pos[None, :, 0]) ** 2
        + (pos[:, 1, None] - pos[None, :, 1]) ** 2
    )
    np.fill_diagonal(d2, np.inf)
    within = d2 <= radius * radius  # boundary inclusive
    return [np.flatnonzero(within[i]).astype(np.int64) for i in range(n)]


def network_from_positions(
    positions, radius: float, compute_areas: bool = True
) -> Network:
    """Build a Network for given sites: radius-r adjacency plus cell areas."""
    pos = np.asarray(positions, dtype=float)
    if pos.ndim != 2 or pos.shape[1] != 2 or len(pos) == 0:
        raise ValueError("positions must be a non-empty (n, 2) array")
    if not 0.0 < radius <= math.sqrt(2.0) + 1e-12:
        raise ValueError(f"radius must be in (0, sqrt(2)], got {radius}")
    areas = voronoi_areas(pos) if compute_areas else np.empty(0)
    return Network(
        n=len(pos),
        radius=float(radius),
        positions=pos,
        adjacency=_build_adjacency(pos, radius),
        areas=areas,
    )


def generate_network(
    n: int, radius: float, rng_seed: Seed, compute_areas: bool = True
) -> Network:
    """Sample n i.i.d. uniform sites in the unit square and build the Network.

    Deterministic for a given ``rng_seed``.  Connectivity is not enforced
    here; use :func:`generate_connected_network` for the resample-until-
    connected behaviour.
    """
    if n < 2:
        raise ValueError(f"need at least 2 nodes, got {n}")
    rng = np.random.default_rng(rng_seed)
    pos = rng.random((n, 2))
    return network_from_positions(pos, radius, compute_areas=compute_areas)


def generate_connected_network(
    n: int,
    radius: float,
    rng_seed: Seed,
    max_resamples: int = 100,
    compute_areas: bool = True,
):
    """Resample deployments until connected; returns (network, resamples).

    Raises RuntimeError after ``max_resamples`` failed attempts.
    """
    base = (
        rng_seed
        if isinstance(rng_seed, np.random.SeedSequence)
        else np.random.SeedSequence(rng_seed)
    )
    for attempt in range(max_resamples + 1):
        seed = np.random.SeedSequence(
            entropy=base.entropy, spawn_key=base.spawn_key + (attempt,)
        )
        net = generate_network(n, radius, seed, compute_areas=compute_areas)
        if is_connected(net):
            return net, attempt
    raise RuntimeError(
        f"no connected deployment in {max_resamples} resamples "
        f"(n={n}, radius={radius:.4f})"
    )


def is_connected(net: Network) -> bool:
    """True iff every node is breadth-first reachable from node 0."""
    seen = np.zeros(net.n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        v = queue.popleft()
        for u in net.adjacency[v]:
            if not seen[u]:
                seen[u] = True
                count += 1
                queue.append(int(u))
    return count == net.n


def occupancy_check(net: Network, cell_side: Optional[float] = None) -> bool:
    """True iff every cell of the square partition holds at least one node.

    The partition has ceil(1/cell_side)^2 cells; cells in the last row and
    column are clipped to the square.  Defaults to the sqrt(2 ln n / n) side.
    """
    side = occupancy_cell_side(net.n) if cell_side is None else float(cell_side)
    if side <= 0.0:
        raise ValueError(f"cell_side must be positive, got {side}")
    m = math.ceil(1.0 / side)
    idx = np.minimum((net.positions / side).astype(np.int64), m - 1)
    occupied = np.unique(idx[:, 0] * m + idx[:, 1])
    return len(occupied) == m * m
