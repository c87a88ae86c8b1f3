"""Sampling: last passage percolation on the cylinder, the auxiliary laws
chi and c, and empirical-distribution statistics.

Geometry: slice i >= 1 of the tie holds min(i, N) cells at circle positions
{-(i-1), -(i-1)+2, ..., i-1} mod 2N (parity alternating with the slice); a
cell at position p looks down at positions (p +- 1) mod 2N in slice i+1.
Cell values are independent Geom(a q^i) on slice i, truncated at the first
row i_max whose remaining expected mass is below tail_tol.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .combinatorics import Pmf, chi_pmf, shift_pmf
from .errors import DomainError, EmptySample
from .kernels import ModelParams

__all__ = [
    "RngStream",
    "TieGrid",
    "Ecdf",
    "sample_geometric",
    "build_tie_grid",
    "lpp_longest_path",
    "sample_chi",
    "sample_shift",
    "sample_peak",
    "sample_peaks",
    "ecdf",
    "ks_distance",
]


@dataclass(frozen=True)
class RngStream:
    """Reproducible stream: same (seed, stream_id) -> same samples."""

    seed: int = 0
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed % 2**64, self.stream_id % 2**64], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


@dataclass
class TieGrid:
    """Sampled geometric values on the truncated tie."""

    n: int
    rows: list[np.ndarray]  # rows[i-1] has min(i, N) entries, slices 1..i_max
    i_max: int
    tail_mass_bound: float

    def positions(self, i: int) -> np.ndarray:
        return _slice_positions(i, self.n)


def _slice_positions(i: int, n: int) -> np.ndarray:
    raw = (-(i - 1) + 2 * np.arange(i)) % (2 * n)
    return np.unique(raw)


def sample_geometric(t: float, rng: np.random.Generator, size=None):
    """Geom(t) with P(X = k) = (1-t) t^k via the inverse CDF."""
    if not (0 <= t < 1):
        raise DomainError("t must lie in [0, 1)")
    if t == 0.0:
        return 0 if size is None else np.zeros(size, dtype=np.int64)
    u = rng.random(size=size)
    out = np.floor(np.log(u) / np.log(t)).astype(np.int64)
    return int(out) if size is None else out


def _row_truncation(params: ModelParams, tail_tol: float) -> tuple[int, float]:
    a, q, n = params.a, params.q, params.n
    # expected mass of rows beyond i: sum min(j, N) a q^j / (1 - a q^j)
    def tail(i):
        s = 0.0
        j = i + 1
        while True:
            m = min(j, n) * a * q**j / (1 - a * q**j)
            s += m
            if m < 1e-18 and j > i + 4:
                return s
            j += 1

    i = 1
    while tail(i) >= tail_tol:
        i += 1
        if i > 10**6:
            raise DomainError("tail_tol unreachable")
    return i, tail(i)


def build_tie_grid(params: ModelParams, tail_tol: float, rng: np.random.Generator) -> TieGrid:
    """Fill slices 1..i_max with iid Geom(a q^i) values."""
    i_max, bound = _row_truncation(params, tail_tol)
    rows = []
    for i in range(1, i_max + 1):
        width = min(i, params.n)
        rows.append(sample_geometric(params.a * params.q**i, rng, size=width))
    return TieGrid(n=params.n, rows=rows, i_max=i_max, tail_mass_bound=bound)


def lpp_longest_path(grid: TieGrid) -> int:
    """Longest down-left/down-right path sum from the top cell.

    Dynamic program from the bottom slice upward; positions wrap mod 2N.
    """
    n2 = 2 * grid.n
    best = np.zeros(n2, dtype=np.int64)
    for i in range(grid.i_max, 0, -1):
        pos = grid.positions(i)
        vals = grid.rows[i - 1]
        nxt = np.maximum(best[(pos + 1) % n2], best[(pos - 1) % n2])
        newbest = np.zeros(n2, dtype=np.int64)
        newbest[pos] = vals + nxt
        best = newbest
    return int(best[0])


def _sample_l_batch(params: ModelParams, tail_tol: float, rng, nsamples: int) -> np.ndarray:
    """Vectorized longest-path values for a batch of independent grids.

    Draws rows top-down in the same order as build_tie_grid, so a batch of
    one reproduces the scalar path on the same stream.
    """
    i_max, _ = _row_truncation(params, tail_tol)
    n2 = 2 * params.n
    draws = [
        sample_geometric(params.a * params.q**i, rng, size=(nsamples, min(i, params.n)))
        for i in range(1, i_max + 1)
    ]
    best = np.zeros((nsamples, n2), dtype=np.int64)
    for i in range(i_max, 0, -1):
        pos = _slice_positions(i, params.n)
        nxt = np.maximum(best[:, (pos + 1) % n2], best[:, (pos - 1) % n2])
        newbest = np.zeros_like(best)
        newbest[:, pos] = draws[i - 1] + nxt
        best = newbest
    return best[:, 0]


def _inverse_cdf_sampler(pmf: Pmf):
    values = np.array([v for v, _ in pmf.support], dtype=np.int64)
    cdf = np.cumsum([p for _, p in pmf.support])
    cdf[-1] = max(cdf[-1], 1.0)

    def draw(rng, size=None):
        u = rng.random(size=size)
        idx = np.searchsorted(cdf, u, side="right")
        idx = np.minimum(idx, len(values) - 1)
        out = values[idx]
        return int(out) if size is None else out

    return draw


def sample_chi(params: ModelParams, rng: np.random.Generator, size=None):
    """Inverse-CDF sample(s) of chi."""
    return _inverse_cdf_sampler(chi_pmf(params))(rng, size)


def sample_shift(params: ModelParams, rng: np.random.Generator, size=None):
    """Inverse-CDF sample(s) of the theta-distributed shift c."""
    return _inverse_cdf_sampler(shift_pmf(params))(rng, size)


def sample_peak(params: ModelParams, tail_tol: float, rng: np.random.Generator) -> int:
    """One sample of L + chi (equal in law to the peak)."""
    grid = build_tie_grid(params, tail_tol, rng)
    return lpp_longest_path(grid) + sample_chi(params, rng)


def sample_peaks(
    params: ModelParams,
    tail_tol: float,
    rng: np.random.Generator,
    nsamples: int,
    batch: int = 20000,
    with_parts: bool = False,
):
    """Vectorized samples of (L, chi); returns peaks or (L, chi, peaks)."""
    chi_draw = _inverse_cdf_sampler(chi_pmf(params))
    ls = np.empty(nsamples, dtype=np.int64)
    cs = np.empty(nsamples, dtype=np.int64)
    done = 0
    while done < nsamples:
        b = min(batch, nsamples - done)
        ls[done : done + b] = _sample_l_batch(params, tail_tol, rng, b)
        cs[done : done + b] = chi_draw(rng, size=b)
        done += b
    peaks = ls + cs
    return (ls, cs, peaks) if with_parts else peaks


@dataclass
class Ecdf:
    """Empirical CDF of an integer sample."""

    samples: np.ndarray
    count: int

    def __call__(self, x: float) -> float:
        return float(np.searchsorted(self.samples, x, side="right")) / self.count


def ecdf(samples) -> Ecdf:
    arr = np.sort(np.asarray(samples))
    if arr.size == 0:
        raise EmptySample("ecdf of an empty sample")
    return Ecdf(samples=arr, count=arr.size)


def ks_distance(e: Ecdf, cdf) -> float:
    """sup_x |F_hat(x) - F(x)| including both one-sided gaps at each jump."""
    xs = np.unique(e.samples)
    worst = 0.0
    for x in xs:
        fx = cdf(x)
        worst = max(worst, abs(e(x) - fx), abs(e(x - 1) - cdf(x - 1)))
    return worst
