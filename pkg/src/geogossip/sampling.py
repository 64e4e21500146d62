"""Area-threshold rejection sampling over Voronoi cells.

Querying the node nearest a uniform point selects node v with probability
equal to its cell area a_v.  Capping acceptance at a threshold tau flattens
that distribution toward uniform: v accepts with min(tau / a_v, 1), and the
induced selection probability becomes min(tau, a_v) / sum_t min(tau, a_t).
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .geometry import Network, Point
from .routing import greedy_route


class RoundFailure(RuntimeError):
    """A routing dead end aborted the round; hops already spent are carried."""

    def __init__(self, hops_spent: int, queries: int):
        super().__init__(
            f"routing dead end after {queries} queries, {hops_spent} hops spent"
        )
        self.hops_spent = hops_spent
        self.queries = queries


@dataclass
class SamplingPolicy:
    """Threshold tau plus the per-node acceptance and selection vectors."""

    tau: float
    nu: float
    mu: float
    accept_prob: np.ndarray    # r_v = min(tau / a_v, 1)
    q: np.ndarray              # induced selection probabilities, sums to 1
    p_accept: float            # overall chance a single query is accepted


def choose_threshold(areas, nu: float, mu: float) -> float:
    """Empirical area quantile at level min(nu, mu / (1 + mu)).

    Returns the largest area value tau such that the fraction of areas <= tau
    stays within the level; falls back to min(areas) / 2 when the level
    admits no entry, so tau is always positive.
    """
    a = np.sort(np.asarray(areas, dtype=float))
    if a.size == 0 or a[0] <= 0.0:
        raise ValueError("areas must be positive")
    if abs(a.sum() - 1.0) > 1e-9:
        raise ValueError(f"areas must sum to 1, got {a.sum()!r}")
    if not 0.0 < nu < 1.0:
        raise ValueError(f"nu must be in (0, 1), got {nu}")
    if mu <= 0.0:
        raise ValueError(f"mu must be positive, got {mu}")

    level = min(nu, mu / (1.0 + mu))
    allowed = int(math.floor(level * a.size + 1e-12))
    values, counts = np.unique(a, return_counts=True)
    cumulative = np.cumsum(counts)
    idx = int(np.searchsorted(cumulative, allowed, side="right")) - 1
    if idx < 0:
        return float(a[0]) / 2.0
    return float(values[idx])


def build_policy(
    areas, nu: float = 0.1, mu: float = 0.1, tau: Optional[float] = None
) -> SamplingPolicy:
    """Derive the full sampling policy for one set of cell areas."""
    a = np.asarray(areas, dtype=float)
    if tau is None:
        tau = choose_threshold(a, nu, mu)
    if tau <= 0.0:
        raise ValueError(f"tau must be positive, got {tau}")
    clipped = np.minimum(tau, a)
    total = float(clipped.sum())
    return SamplingPolicy(
        tau=float(tau),
        nu=float(nu),
        mu=float(mu),
        accept_prob=np.minimum(tau / a, 1.0),
        q=clipped / total,
        p_accept=total,
    )


def uniform_policy(areas, nu: float = 0.1, mu: float = 0.1) -> SamplingPolicy:
    """Policy with tau = min(areas): the induced q is exactly uniform."""
    a = np.asarray(areas, dtype=float)
    return build_policy(a, nu=nu, mu=mu, tau=float(a.min()))


def acceptance_lower_bound(c: float) -> float:
    """Lower bound 1 - 4c on the fraction of cells larger than c / n."""
    if not 0.0 < c < 0.25:
        raise ValueError(f"c must be in (0, 1/4), got {c}")
    return 1.0 - 4.0 * c


def sample_with_rejection(
    policy: SamplingPolicy, net: Network, origin: int, rng: np.random.Generator
) -> Tuple[int, int, int]:
    """Query until some node accepts; returns (node, queries, total hops).

    Each query draws a uniform target, greedy-routes from the current holder
    (the origin first, then whichever node rejected last), and lets the
    terminal accept with probability r_terminal.  Every leg's hops are
    charged.  A dead-ended leg raises :class:`RoundFailure` carrying the hops
    already spent.
    """
    if not 0 <= origin < net.n:
        raise ValueError(f"origin {origin} out of range for n={net.n}")
    holder = origin
    hops = 0
    queries = 0
    while True:
        queries += 1
        t = rng.random(2)
        route = greedy_route(net, holder, Point(float(t[0]), float(t[1])))
        hops += route.hop_count
        if route.dead_end:
            raise RoundFailure(hops_spent=hops, queries=queries)
        v = route.terminal
        if rng.random() < policy.accept_prob[v]:
            return v, queries, hops
        holder = v


def expected_queries(policy: SamplingPolicy) -> float:
    """Mean of the geometric query count: 1 / P_a."""
    if policy.p_accept <= 0.0:
        raise ValueError("policy has zero acceptance probability")
    return 1.0 / policy.p_accept


def max_queries_bound(K: int, epsilon: float, p_accept: float) -> int:
    """Query cap m with P(max over K rounds <= m) >= 1 - epsilon / 2.

    m = ceil(-rho * log K / log(1 - P_a)) with rho = log(2/eps) / log K + 1.
    """
    if p_accept == 1.0:
        return 1
    if K < 2:
        raise ValueError(f"K must be at least 2, got {K}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    if not 0.0 < p_accept < 1.0:
        raise ValueError(f"p_accept must be in (0, 1], got {p_accept}")
    rho = math.log(2.0 / epsilon) / math.log(K) + 1.0
    raw = -rho * math.log(K) / math.log(1.0 - p_accept)
    return math.ceil(raw - 1e-9)  # absorb fp noise at integer boundaries


def q_distance_to_uniform(policy: SamplingPolicy) -> Tuple[float, float]:
    """Exact l1 and l2 distances of q from the uniform distribution."""
    n = len(policy.q)
    dev = policy.q - 1.0 / n
    return float(np.abs(dev).sum()), float(math.sqrt(float((dev * dev).sum())))


def policy_report(policy: SamplingPolicy, bins: int = 20) -> dict:
    """Diagnostics dump: threshold, acceptance, and a histogram of n * q."""
    n = len(policy.q)
    counts, edges = np.histogram(policy.q * n, bins=bins)
    return {
        "n": n,
        "tau": policy.tau,
        "nu": policy.nu,
        "mu": policy.mu,
        "p_accept": policy.p_accept,
        "expected_queries": expected_queries(policy),
        "q_times_n_histogram": {
            "edges": [float(e) for e in edges],
            "counts": [int(c) for c in counts],
        },
    }
