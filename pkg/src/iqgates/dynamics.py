"""
Heisenberg-picture string-support dynamics under gate-averaged circuits.

Averaging a 2-site gate over the unitary group collapses string evolution to
a Markov chain on local support classes: a pair of identity sites stays
identity, any other pair resamples uniformly over the d^4 - 1 nontrivial
two-site classes.  For qubits this is the 15-state model with weight-1 stay
probability 6/15 per touched gate.

The mean-field closure of that chain for the site density rho is

    rho' = (4/5) rho (2 - rho),        eps = 1 - (4/3) rho,
    eps' = (2/5) eps + (3/5) eps^2,

with fixed point rho = 3/4 and exponential tail eps ~ (2/5)^l.  The module
also provides Monte Carlo stay-probability scans, operator-front profiles on
brickwork circuits (random symplectic vs the deterministic inflationary
front), and the continuum layer count obtained by integrating the logistic
flow of the density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.integrate import quad

from .clifford import _symplectic_matrices, construct_inflationary
from .parallel import map_shards, shard_counts, shard_rng

__all__ = [
    "SupportState",
    "haar_markov_step",
    "two_site_transition_matrix",
    "mean_field_rho_step",
    "epsilon_step",
    "ScanRow",
    "stay_probability_scan",
    "sigma_z_expectation_average",
    "FrontProfile",
    "front_profile",
    "ContinuumBound",
    "continuum_layer_count",
]


class SupportState:
    """Per-site support classes: 0 = identity, 1..d^2-1 = nontrivial locals."""

    __slots__ = ("n", "d", "support")

    def __init__(self, support, d: int = 2):
        self.d = int(d)
        arr = np.asarray(support, dtype=np.int16)
        if arr.ndim != 1:
            raise ValueError("support must be a 1-d vector of site classes")
        if (arr < 0).any() or (arr >= self.d**2).any():
            raise ValueError(f"site classes must lie in [0, {self.d**2})")
        arr.setflags(write=False)
        self.support = arr
        self.n = int(arr.shape[0])

    @classmethod
    def single_site(cls, n: int, site: int, d: int = 2, cls_value: int = 1) -> "SupportState":
        arr = np.zeros(n, dtype=np.int16)
        arr[site] = cls_value
        return cls(arr, d)

    def weight(self) -> int:
        return int((self.support != 0).sum())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SupportState)
            and self.d == other.d
            and np.array_equal(self.support, other.support)
        )


def haar_markov_step(state: SupportState, gate_support: Tuple[int, int],
                     rng: np.random.Generator) -> SupportState:
    """
    One averaged-gate update on sites (i, j): identity pairs are inert, any
    other pair resamples uniformly over the d^4 - 1 nontrivial classes.
    """
    i, j = gate_support
    if i == j or not (0 <= i < state.n and 0 <= j < state.n):
        raise ValueError(f"invalid gate support {gate_support} for n={state.n}")
    a, b = int(state.support[i]), int(state.support[j])
    if a == 0 and b == 0:
        return state
    d2 = state.d**2
    r = int(rng.integers(1, d2 * d2))
    new = np.array(state.support)
    new[i] = r % d2
    new[j] = r // d2
    return SupportState(new, state.d)


def two_site_transition_matrix(d: int = 2) -> np.ndarray:
    """Row-stochastic (d^4, d^4) matrix of the averaged pair update."""
    d2 = d * d
    size = d2 * d2
    mat = np.zeros((size, size))
    mat[0, 0] = 1.0
    mat[1:, 1:] = 1.0 / (size - 1)
    return mat


# ---------------------------------------------------------------------------
# Mean-field recursions


def mean_field_rho_step(rho: float) -> float:
    """One layer of the averaged 2-qubit dynamics on the site density."""
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"density rho={rho} out of [0, 1]")
    return 0.8 * rho * (2.0 - rho)


def epsilon_step(eps: float) -> float:
    """The same layer in the variable eps = 1 - (4/3) rho."""
    if not -1.0 / 3.0 - 1e-12 <= eps <= 1.0 + 1e-12:
        raise ValueError(f"eps={eps} out of [-1/3, 1]")
    return 0.4 * eps + 0.6 * eps * eps


def sigma_z_expectation_average(n: int, depth: Optional[int] = None) -> float:
    """
    Circuit-averaged single-site z expectation of the Markov model at the
    given depth (default log2 n): the uniform average over initial z-strings
    of eps(depth), weighted by the binomial weight distribution.
    """
    if depth is None:
        depth = round(math.log2(n))
    mean = n / 2.0
    sigma = math.sqrt(n) / 2.0
    lo = max(1, int(mean - 8 * sigma))
    hi = min(n, int(mean + 8 * sigma))
    ws = np.arange(lo, hi + 1)
    from scipy.stats import binom

    pmf = binom.pmf(ws, n, 0.5)
    rho = ws / n
    for _ in range(depth):
        rho = 0.8 * rho * (2.0 - rho)
    eps = 1.0 - (4.0 / 3.0) * rho
    return float((pmf * eps).sum())


# ---------------------------------------------------------------------------
# Monte Carlo stay-probability scans


@dataclass(frozen=True)
class ScanRow:
    layer: int
    weight1_fraction: float
    weight1_stderr: float
    origin_fraction: float
    origin_stderr: float
    samples: int


def _simulate_support(rng, batch: int, n: int, depth: int, wiring: str, d: int,
                      start: int) -> np.ndarray:
    """Counts[l, 0] = trajectories at weight 1, [l, 1] = weight 1 on the start site."""
    d2 = d * d
    state = np.zeros((batch, n), dtype=np.int16)
    state[:, start] = 1
    if wiring == "tree":
        q = round(math.log2(n))
        if 2**q != n:
            raise ValueError(f"tree wiring needs n a power of 2, got {n}")
        layers = [
            np.array([(b + j * 2**l_) for b in range(n) if (b >> l_) % 2 == 0 for j in (0,)], )
            for l_ in range(q)
        ]
    elif wiring != "complete":
        raise ValueError(f"unknown wiring {wiring!r}")
    counts = np.zeros((depth + 1, 2), dtype=np.int64)

    def record(l):
        w = (state != 0).sum(axis=1)
        counts[l, 0] += int((w == 1).sum())
        counts[l, 1] += int(((w == 1) & (state[:, start] != 0)).sum())

    record(0)
    m = (n // 2) * 2
    for l in range(1, depth + 1):
        if wiring == "complete":
            order = np.argsort(rng.random((batch, n)), axis=1)
            pa, pb = order[:, 0:m:2], order[:, 1:m:2]
        else:
            q = round(math.log2(n))
            step = 2 ** ((l - 1) % q)
            base = np.array([b for b in range(n) if (b // step) % 2 == 0])
            pa = np.broadcast_to(base, (batch, base.size))
            pb = pa + step
        rows = np.arange(batch)[:, None]
        si = state[rows, pa]
        sj = state[rows, pb]
        act = (si != 0) | (sj != 0)
        r = rng.integers(1, d2 * d2, size=pa.shape)
        state[rows, pa] = np.where(act, (r % d2).astype(np.int16), si)
        state[rows, pb] = np.where(act, (r // d2).astype(np.int16), sj)
        record(l)
    return counts


def _stay_shard(seed, shard, batch, n, depth, wiring, d, start):
    return _simulate_support(shard_rng(seed, shard), batch, n, depth, wiring, d, start)


def stay_probability_scan(n: int, depth: int, wiring: str, samples: int, seed,
                          d: int = 2, start: int = 0, workers: int = 1) -> List[ScanRow]:
    """
    Fraction of weight-1 survivors after each layer, from a weight-1 start.
    Emits both the total-weight count (primary) and the on-origin count,
    with binomial standard errors.
    """
    batches = shard_counts(samples)
    args = [(seed, i, b, n, depth, wiring, d, start) for i, b in enumerate(batches)]
    counts = sum(map_shards(_stay_shard, args, workers))
    rows = []
    for l in range(depth + 1):
        p1 = counts[l, 0] / samples
        p0 = counts[l, 1] / samples
        rows.append(
            ScanRow(
                layer=l,
                weight1_fraction=float(p1),
                weight1_stderr=float(math.sqrt(max(p1 * (1 - p1), 0.0) / samples)),
                origin_fraction=float(p0),
                origin_stderr=float(math.sqrt(max(p0 * (1 - p0), 0.0) / samples)),
                samples=samples,
            )
        )
    return rows


# ---------------------------------------------------------------------------
# Operator fronts on brickwork circuits


@dataclass
class FrontProfile:
    """Right-endpoint statistics of a spreading string on a brickwork circuit."""

    kind: str
    n: int
    start: int
    t: np.ndarray                      # layer indices 1..t_max
    endpoint_mean: np.ndarray
    endpoint_std: np.ndarray
    rho_r: np.ndarray                  # (t_max, n) endpoint distribution per layer
    samples: int
    velocity: float = field(init=False)
    width_exponent: Optional[float] = field(init=False)

    def __post_init__(self):
        lo = max(1, len(self.t) // 5)
        disp = self.endpoint_mean - self.start
        self.velocity = float(np.polyfit(self.t[lo:], disp[lo:], 1)[0])
        window = (self.t >= 20) & (self.t <= 100)
        if window.sum() >= 2 and (self.endpoint_std[window] > 0).all():
            self.width_exponent = float(
                np.polyfit(np.log(self.t[window]), np.log(self.endpoint_std[window]), 1)[0]
            )
        else:
            self.width_exponent = None


def _front_shard(seed, shard, batch, kind, n, t_max, start):
    rng = shard_rng(seed, shard)
    if kind == "random_clifford":
        d = 2
        reservoir = _symplectic_matrices(2)
    elif kind == "iq_qudit":
        d = 3
        gate = construct_inflationary(3).matrix
    else:
        raise ValueError(f"unknown front kind {kind!r}")
    u = np.zeros((batch, n), dtype=np.int64)
    v = np.zeros((batch, n), dtype=np.int64)
    u[:, start] = 1
    endpoints = np.zeros((t_max, batch), dtype=np.int64)
    for t in range(t_max):
        off = t % 2
        pa = np.arange(off, n - 1, 2)
        vec = np.stack([u[:, pa], u[:, pa + 1], v[:, pa], v[:, pa + 1]], axis=2)
        if kind == "iq_qudit":
            out = np.einsum("spk,kl->spl", vec, gate)
        else:
            idx = rng.integers(0, len(reservoir), size=(batch, pa.size))
            out = np.einsum("spk,spkl->spl", vec, reservoir[idx])
        out %= d
        u[:, pa], u[:, pa + 1] = out[:, :, 0], out[:, :, 1]
        v[:, pa], v[:, pa + 1] = out[:, :, 2], out[:, :, 3]
        nz = (u != 0) | (v != 0)
        endpoints[t] = n - 1 - np.argmax(nz[:, ::-1], axis=1)
    hist = np.zeros((t_max, n), dtype=np.int64)
    for t in range(t_max):
        hist[t] = np.bincount(endpoints[t], minlength=n)
    return endpoints.sum(axis=1), (endpoints.astype(np.float64) ** 2).sum(axis=1), hist


def front_profile(kind: str, n: int, t_max: int, samples: int, seed,
                  start: Optional[int] = None, workers: int = 1) -> FrontProfile:
    """
    Right-endpoint front of a string seeded at `start` under t_max brickwork
    layers.  kind 'random_clifford' draws uniform 2-qubit symplectic gates;
    'iq_qudit' applies the constructed d=3 inflationary gate at every slot.
    """
    if start is None:
        start = (n // 4) & ~1  # even start aligns the first layer's gate with the front
    if start + t_max >= n - 1:
        raise ValueError(f"n={n} too small for t_max={t_max} from start={start}")
    batches = shard_counts(samples)
    args = [(seed, i, b, kind, n, t_max, start) for i, b in enumerate(batches)]
    parts = map_shards(_front_shard, args, workers)
    s1 = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    hist = sum(p[2] for p in parts)
    mean = s1 / samples
    var = np.maximum(s2 / samples - mean**2, 0.0)
    return FrontProfile(
        kind=kind,
        n=n,
        start=start,
        t=np.arange(1, t_max + 1),
        endpoint_mean=mean,
        endpoint_std=np.sqrt(var),
        rho_r=hist / samples,
        samples=samples,
    )


# ---------------------------------------------------------------------------
# Continuum circuit-size bound


class ContinuumBound(NamedTuple):
    layers: float
    gates: float


def continuum_layer_count(n: int, eps_target: float, rho0: Optional[float] = None) -> ContinuumBound:
    """
    Layers needed by the continuum limit of the density recursion,
    d(rho)/dl = (3/5) rho (1 - (4/3) rho), to flow from rho(0) = 1/n up to
    (3/4)(1 - eps_target); the matching gate count is layers * n / 2.
    """
    if not 0.0 < eps_target < 1.0:
        raise ValueError("eps_target must lie in (0, 1)")
    if rho0 is None:
        rho0 = 1.0 / n
    rho1 = 0.75 * (1.0 - eps_target)
    if rho0 >= rho1:
        return ContinuumBound(layers=0.0, gates=0.0)
    val, _ = quad(lambda r: 1.0 / (0.6 * r * (1.0 - 4.0 * r / 3.0)), rho0, rho1)
    return ContinuumBound(layers=float(val), gates=float(val) * n / 2.0)
